#pragma once

// Umbrella header: Clifford algebra core, SO+(p,q) matrices, the two-sheeted
// covering in both directions, and the n = 3 quaternion forms.

#include "signature.hpp"
#include "multivector.hpp"
#include "matrix.hpp"
#include "covering.hpp"
#include "division_algebras.hpp"
#include "oracle.hpp"
