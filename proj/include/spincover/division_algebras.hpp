#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <string>

#include "covering.hpp"
#include "matrix.hpp"
#include "multivector.hpp"

namespace spincover {

// Product of two basis units (1, i, j, k) = sign * unit[index].
struct UnitProduct {
  int sign;
  int index;
};
using UnitTable = std::array<std::array<UnitProduct, 4>, 4>;

// i^2 = j^2 = k^2 = ijk = -1
struct QuaternionTraits {
  static constexpr UnitTable table{{
      {{{1, 0}, {1, 1}, {1, 2}, {1, 3}}},
      {{{1, 1}, {-1, 0}, {1, 3}, {-1, 2}}},
      {{{1, 2}, {-1, 3}, {-1, 0}, {1, 1}}},
      {{{1, 3}, {1, 2}, {-1, 1}, {-1, 0}}},
  }};
  static constexpr std::array<int, 4> norm_signs{1, 1, 1, 1};
  static constexpr int p = 3;
  static constexpr int q = 0;
  static constexpr const char* name = "quaternion";
};

// i^2 = -1, j^2 = k^2 = +1, ijk = +1
struct SplitQuaternionTraits {
  static constexpr UnitTable table{{
      {{{1, 0}, {1, 1}, {1, 2}, {1, 3}}},
      {{{1, 1}, {-1, 0}, {1, 3}, {-1, 2}}},
      {{{1, 2}, {-1, 3}, {1, 0}, {-1, 1}}},
      {{{1, 3}, {1, 2}, {1, 1}, {1, 0}}},
  }};
  static constexpr std::array<int, 4> norm_signs{1, 1, -1, -1};
  static constexpr int p = 2;
  static constexpr int q = 1;
  static constexpr const char* name = "split-quaternion";
};

// a + b i + c j + d k over the algebra described by Traits.
template <class Traits>
struct BasicQuaternion {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;

  using traits = Traits;

  std::array<double, 4> components() const { return {a, b, c, d}; }
  static BasicQuaternion from_components(const std::array<double, 4>& x) { return {x[0], x[1], x[2], x[3]}; }

  BasicQuaternion conj() const { return {a, -b, -c, -d}; }
  // Scalar value of conj(q) q.
  double norm_sq() const {
    const auto& s = Traits::norm_signs;
    return s[0] * a * a + s[1] * b * b + s[2] * c * c + s[3] * d * d;
  }
  double max_abs() const { return std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)}); }

  friend BasicQuaternion operator*(const BasicQuaternion& x, const BasicQuaternion& y) {
    const auto xs = x.components();
    const auto ys = y.components();
    std::array<double, 4> out{};
    for (int r = 0; r < 4; ++r)
      for (int s = 0; s < 4; ++s) {
        const UnitProduct u = Traits::table[r][s];
        out[u.index] += u.sign * xs[r] * ys[s];
      }
    return from_components(out);
  }
  friend BasicQuaternion operator+(const BasicQuaternion& x, const BasicQuaternion& y) {
    return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d};
  }
  friend BasicQuaternion operator-(const BasicQuaternion& x, const BasicQuaternion& y) {
    return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d};
  }
  friend BasicQuaternion operator*(double s, const BasicQuaternion& x) { return {s * x.a, s * x.b, s * x.c, s * x.d}; }
  friend BasicQuaternion operator/(const BasicQuaternion& x, double s) { return {x.a / s, x.b / s, x.c / s, x.d / s}; }
  friend BasicQuaternion operator-(const BasicQuaternion& x) { return {-x.a, -x.b, -x.c, -x.d}; }
  friend bool operator==(const BasicQuaternion&, const BasicQuaternion&) = default;
};

using Quaternion = BasicQuaternion<QuaternionTraits>;
using SplitQuaternion = BasicQuaternion<SplitQuaternionTraits>;

inline Quaternion qmul(const Quaternion& x, const Quaternion& y) { return x * y; }
inline SplitQuaternion sqmul(const SplitQuaternion& x, const SplitQuaternion& y) { return x * y; }

// ---- 2x2 complex matrices --------------------------------------------------

struct Mat2C {
  using C = std::complex<double>;
  std::array<C, 4> m{};  // row-major

  C operator()(int r, int c) const { return m[2 * r + c]; }
  C& operator()(int r, int c) { return m[2 * r + c]; }

  static Mat2C identity() { return {{C{1}, C{0}, C{0}, C{1}}}; }

  Mat2C hermitian() const { return {{std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])}}; }
  C det() const { return m[0] * m[3] - m[1] * m[2]; }

  double max_abs() const {
    double r = 0.0;
    for (const C& z : m) r = std::max(r, std::abs(z));
    return r;
  }

  friend Mat2C operator*(const Mat2C& x, const Mat2C& y) {
    Mat2C out;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) out(r, c) = x(r, 0) * y(0, c) + x(r, 1) * y(1, c);
    return out;
  }
  friend Mat2C operator+(Mat2C x, const Mat2C& y) {
    for (int i = 0; i < 4; ++i) x.m[i] += y.m[i];
    return x;
  }
  friend Mat2C operator-(Mat2C x, const Mat2C& y) {
    for (int i = 0; i < 4; ++i) x.m[i] -= y.m[i];
    return x;
  }
  friend Mat2C operator*(C s, Mat2C x) {
    for (auto& z : x.m) z *= s;
    return x;
  }
};

namespace pauli {
inline const Mat2C sigma0{{Mat2C::C{1}, Mat2C::C{0}, Mat2C::C{0}, Mat2C::C{1}}};
inline const Mat2C sigma1{{Mat2C::C{0}, Mat2C::C{1}, Mat2C::C{1}, Mat2C::C{0}}};
inline const Mat2C sigma2{{Mat2C::C{0}, Mat2C::C{0, -1}, Mat2C::C{0, 1}, Mat2C::C{0}}};
inline const Mat2C sigma3{{Mat2C::C{1}, Mat2C::C{0}, Mat2C::C{0}, Mat2C::C{-1}}};
}  // namespace pauli

// a sigma0 + b i sigma3 + c i sigma2 + d i sigma1, an element of SU(2) when q is a unit.
inline Mat2C quaternion_to_su2(const Quaternion& q) {
  using C = Mat2C::C;
  const C i{0, 1};
  return C{q.a} * pauli::sigma0 + (i * q.b) * pauli::sigma3 + (i * q.c) * pauli::sigma2 + (i * q.d) * pauli::sigma1;
}

// a sigma0 + b i sigma3 + c sigma1 - d sigma2, an element of SU(1,1) when q is a unit.
inline Mat2C split_to_su11(const SplitQuaternion& q) {
  using C = Mat2C::C;
  const C i{0, 1};
  return C{q.a} * pauli::sigma0 + (i * q.b) * pauli::sigma3 + C{q.c} * pauli::sigma1 - C{q.d} * pauli::sigma2;
}

// ---- bridge to the even subalgebra: e -> 1, e12 -> i, e13 -> j, e23 -> -k ----

template <class Traits>
Signature bridge_signature() {
  return Signature(Traits::p, Traits::q);
}

template <class Traits>
Multivector to_even(const BasicQuaternion<Traits>& x) {
  Multivector m(bridge_signature<Traits>());
  m[Blade::scalar()] = x.a;
  m[Blade::from_indices({1, 2})] = x.b;
  m[Blade::from_indices({1, 3})] = x.c;
  m[Blade::from_indices({2, 3})] = -x.d;
  return m;
}

template <class Traits>
BasicQuaternion<Traits> from_even(const Multivector& m) {
  if (!(m.sig() == bridge_signature<Traits>()))
    throw InvalidArgument(std::string(Traits::name) + " bridge expects Cl" + to_string(bridge_signature<Traits>()) +
                          ", got Cl" + to_string(m.sig()));
  for (std::uint32_t a = 0; a < m.size(); ++a)
    if (!Blade{a}.is_even() && m.coeffs()[a] != 0.0)
      throw InvalidArgument(std::string(Traits::name) + " bridge: multivector has an odd-grade part");
  return {m[Blade::scalar()], m[Blade::from_indices({1, 2})], m[Blade::from_indices({1, 3})],
          -m[Blade::from_indices({2, 3})]};
}

inline Rotor quaternion_to_rotor(const Quaternion& q) { return Rotor::from_multivector(to_even(q)); }
inline Rotor split_to_rotor(const SplitQuaternion& q) { return Rotor::from_multivector(to_even(q)); }
inline Quaternion rotor_to_quaternion(const Rotor& s) { return from_even<QuaternionTraits>(s.value()); }
inline SplitQuaternion rotor_to_split(const Rotor& s) { return from_even<SplitQuaternionTraits>(s.value()); }

// ---- inverse covering in the division-algebra form -------------------------

template <class Traits>
struct QuaternionCandidate {
  Blade F;
  BasicQuaternion<Traits> value;
  double normsq;
};

namespace detail {

// p^a_b with 1-based indices: row a, column b.
struct Entries {
  const Matrix& m;
  double operator()(int a, int b) const { return m(a - 1, b - 1); }
};

inline const std::array<Blade, 4>& n3_even_blades() {
  static const std::array<Blade, 4> blades{Blade::scalar(), Blade::from_indices({1, 2}), Blade::from_indices({1, 3}),
                                           Blade::from_indices({2, 3})};
  return blades;
}

template <class Traits>
void require_signature(const OrthoMatrix& p) {
  if (!(p.sig() == bridge_signature<Traits>()))
    throw InvalidArgument(std::string(Traits::name) + " formulas require signature " +
                          to_string(bridge_signature<Traits>()) + ", got " + to_string(p.sig()));
}

template <class Traits>
QuaternionCandidate<Traits> select_candidate(const std::array<BasicQuaternion<Traits>, 4>& cands) {
  const double threshold = 1e-18 * 16.0;
  std::optional<QuaternionCandidate<Traits>> best;
  for (int i = 0; i < 4; ++i) {
    const double ns = cands[i].norm_sq();
    if (!best || ns > best->normsq) best = QuaternionCandidate<Traits>{n3_even_blades()[i], cands[i], ns};
  }
  if (!(best->normsq > threshold))
    throw NumericalError(std::string("no ") + Traits::name + " candidate has a positive norm-square");
  return *best;
}

}  // namespace detail

// X = Q_F / sqrt(conj(Q_F) Q_F), with the sign rule used for rotors.
template <class Traits>
BasicQuaternion<Traits> unit_from_candidate(const QuaternionCandidate<Traits>& c) {
  BasicQuaternion<Traits> x = c.value / std::sqrt(c.normsq);
  const double top = x.max_abs();
  for (double v : x.components()) {
    if (std::abs(v) >= top - kZeroThreshold) {
      if (v < 0.0) x = -x;
      break;
    }
  }
  return x;
}

// Q_F for F = {}, 12, 13, 23 (in that order) for P in SO(3).
inline std::array<Quaternion, 4> so3_to_quaternion_candidates(const OrthoMatrix& P) {
  detail::require_signature<QuaternionTraits>(P);
  const detail::Entries p{P.matrix()};
  return {{
      {1 + p(1, 1) + p(2, 2) + p(3, 3), p(1, 2) - p(2, 1), p(1, 3) - p(3, 1), -p(2, 3) + p(3, 2)},
      {p(1, 2) - p(2, 1), 1 - p(1, 1) - p(2, 2) + p(3, 3), -p(2, 3) - p(3, 2), -p(1, 3) - p(3, 1)},
      {p(1, 3) - p(3, 1), -p(2, 3) - p(3, 2), 1 - p(1, 1) + p(2, 2) - p(3, 3), p(1, 2) + p(2, 1)},
      {p(2, 3) - p(3, 2), p(1, 3) + p(3, 1), -p(1, 2) - p(2, 1), -1 - p(1, 1) + p(2, 2) + p(3, 3)},
  }};
}

// Q_F for F = {}, 12, 13, 23 (in that order) for P in SO+(2,1).
inline std::array<SplitQuaternion, 4> so21_to_split_quaternion_candidates(const OrthoMatrix& P) {
  detail::require_signature<SplitQuaternionTraits>(P);
  const detail::Entries p{P.matrix()};
  return {{
      {1 + p(1, 1) + p(2, 2) + p(3, 3), p(1, 2) - p(2, 1), -p(1, 3) - p(3, 1), p(2, 3) + p(3, 2)},
      {p(1, 2) - p(2, 1), 1 - p(1, 1) - p(2, 2) + p(3, 3), p(2, 3) - p(3, 2), p(1, 3) - p(3, 1)},
      {p(1, 3) + p(3, 1), -p(2, 3) + p(3, 2), 1 - p(1, 1) + p(2, 2) - p(3, 3), p(1, 2) + p(2, 1)},
      {p(2, 3) + p(3, 2), p(1, 3) - p(3, 1), -p(1, 2) - p(2, 1), -1 - p(1, 1) + p(2, 2) + p(3, 3)},
  }};
}

inline QuaternionCandidate<QuaternionTraits> select_quaternion(const OrthoMatrix& P) {
  return detail::select_candidate(so3_to_quaternion_candidates(P));
}

// Only candidates with conj(Q) Q > 0 qualify; the maximum is always one of them if any exists.
inline QuaternionCandidate<SplitQuaternionTraits> select_split_quaternion(const OrthoMatrix& P) {
  return detail::select_candidate(so21_to_split_quaternion_candidates(P));
}

inline Quaternion so3_to_unit_quaternion(const OrthoMatrix& P) { return unit_from_candidate(select_quaternion(P)); }

inline SplitQuaternion so21_to_unit_split_quaternion(const OrthoMatrix& P) {
  return unit_from_candidate(select_split_quaternion(P));
}

}  // namespace spincover
