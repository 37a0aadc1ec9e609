#pragma once

#include <cstdint>
#include <vector>

#include "covering.hpp"
#include "matrix.hpp"
#include "multivector.hpp"

namespace spincover::oracle {

// SplitMix64 (Steele, Lea, Flood 2014). The stream for seed s is
//   x_i = mix(s + (i + 1) * 0x9E3779B97F4A7C15),  i = 0, 1, ...
//   mix(z): z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27; z *= 0x94D049BB133111EB; z ^= z >> 31
// and uniform doubles are (x >> 11) * 2^-53. Any language reproduces the same vectors.
class SplitMix64 {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  // Counter-based access to element `index` of the stream for `seed`.
  static constexpr std::uint64_t at(std::uint64_t seed, std::uint64_t index) { return mix(seed + (index + 1) * kGamma); }

  std::uint64_t next() {
    state_ += kGamma;
    return mix(state_);
  }
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Independent child stream.
  SplitMix64 split() { return SplitMix64(next()); }

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

// Every coefficient uniform in [-1, 1], ascending mask order.
inline Multivector random_multivector(const Signature& sig, SplitMix64& rng) {
  Multivector m(sig);
  for (double& c : m.coeffs()) c = rng.uniform(-1.0, 1.0);
  return m;
}

// Grade-2 coefficients uniform in [-1, 1], ascending mask order.
inline Multivector random_bivector(const Signature& sig, SplitMix64& rng) {
  Multivector m(sig);
  auto c = m.coeffs();
  for (std::uint32_t a = 0; a < c.size(); ++a)
    if (Blade{a}.grade() == 2) c[a] = rng.uniform(-1.0, 1.0);
  return m;
}

inline Rotor sample_rotor(const Signature& sig, std::uint64_t seed) {
  SplitMix64 rng(seed);
  return Rotor::from_multivector(exp_bivector(random_bivector(sig, rng)));
}

inline OrthoMatrix sample_matrix(const Signature& sig, std::uint64_t seed) { return forward_map(sample_rotor(sig, seed)); }

struct CoveringReport {
  std::vector<double> per_generator;  // max-coefficient residual of S e_a S^-1 - p_a^b e_b
  double max_residual = 0.0;
};

// Checks S e_a S^{-1} = sum_b P(b, a) e_b with S^{-1} = reverse(S) / <reverse(S) S>_0.
inline CoveringReport verify_covering(const Multivector& s, const Matrix& p) {
  const Signature& sig = s.sig();
  if (p.size() != sig.n()) throw InvalidArgument("verify_covering: matrix size does not match the signature");
  const Multivector s_inv = reverse(s) / reverse_norm_sq(s);
  CoveringReport report;
  for (int a = 1; a <= sig.n(); ++a) {
    Multivector diff = s * Multivector::generator(sig, a) * s_inv;
    for (int b = 1; b <= sig.n(); ++b) diff[Blade::generator(b)] -= p(b - 1, a - 1);
    report.per_generator.push_back(diff.max_abs());
    report.max_residual = std::max(report.max_residual, report.per_generator.back());
  }
  return report;
}

inline CoveringReport verify_covering(const Rotor& s, const OrthoMatrix& p) {
  if (!(s.sig() == p.sig())) throw InvalidArgument("verify_covering: signature mismatch");
  return verify_covering(s.value(), p.matrix());
}

inline Frame frame_of(const Rotor& s) {
  std::vector<Multivector> beta;
  for (int a = 1; a <= s.sig().n(); ++a) beta.push_back(grade_project(s.conjugate(Multivector::generator(s.sig(), a)), 1));
  return Frame::from_vectors(s.sig(), std::move(beta));
}

// sum over all multi-indices A of beta_{a1} ... beta_{ak} e_F e^A, built directly from
// products of the frame vectors rather than from minors.
inline Multivector corollary_expansion(const Frame& f, Blade F) {
  const Signature& sig = f.sig();
  const std::size_t count = sig.blade_count();
  std::vector<Multivector> beta_products(count, Multivector(sig));
  beta_products[0] = Multivector::scalar(sig, 1.0);
  for (std::uint32_t m = 1; m < count; ++m) {
    const int top = 31 - std::countl_zero(m);
    beta_products[m] = beta_products[m & ~(std::uint32_t{1} << top)] * f.vectors()[top];
  }
  Multivector out(sig);
  for (std::uint32_t m = 0; m < count; ++m) {
    const Multivector term = right_blade_multiply(beta_products[m], SignedBlade{1, F});
    out += right_blade_multiply(term, blade_inverse(Blade{m}, sig));
  }
  return out;
}

}  // namespace spincover::oracle
