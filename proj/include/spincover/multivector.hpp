#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "signature.hpp"

namespace spincover {

// Dense element of Cl(p,q): one real coefficient per blade, indexed by blade mask.
class Multivector {
 public:
  explicit Multivector(Signature sig) : sig_(sig), coeffs_(sig.blade_count(), 0.0) {}

  static Multivector scalar(Signature sig, double value) {
    Multivector m(sig);
    m.coeffs_[0] = value;
    return m;
  }
  static Multivector basis(Signature sig, Blade b, double coeff = 1.0) {
    if (!b.fits(sig)) throw InvalidArgument("blade does not belong to Cl" + to_string(sig));
    Multivector m(sig);
    m.coeffs_[b.mask()] = coeff;
    return m;
  }
  // 1-based generator e_index.
  static Multivector generator(Signature sig, int index) { return basis(sig, Blade::generator(index)); }

  const Signature& sig() const { return sig_; }
  std::size_t size() const { return coeffs_.size(); }
  std::span<const double> coeffs() const { return coeffs_; }
  std::span<double> coeffs() { return coeffs_; }

  double operator[](Blade b) const { return coeffs_.at(b.mask()); }
  double& operator[](Blade b) { return coeffs_.at(b.mask()); }
  double scalar_part() const { return coeffs_[0]; }

  double max_abs() const {
    double m = 0.0;
    for (double c : coeffs_) m = std::max(m, std::abs(c));
    return m;
  }
  double l1_norm() const {
    double s = 0.0;
    for (double c : coeffs_) s += std::abs(c);
    return s;
  }
  bool is_zero(double threshold = 0.0) const { return max_abs() <= threshold; }

  Multivector& operator+=(const Multivector& o) {
    check_same(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  Multivector& operator-=(const Multivector& o) {
    check_same(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  Multivector& operator*=(double s) {
    for (double& c : coeffs_) c *= s;
    return *this;
  }
  Multivector& operator/=(double s) {
    for (double& c : coeffs_) c /= s;
    return *this;
  }

  friend Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
  friend Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
  friend Multivector operator-(Multivector a) { return a *= -1.0; }
  friend Multivector operator*(Multivector a, double s) { return a *= s; }
  friend Multivector operator*(double s, Multivector a) { return a *= s; }
  friend Multivector operator/(Multivector a, double s) { return a /= s; }

  friend bool operator==(const Multivector&, const Multivector&) = default;

  void check_same(const Multivector& o) const {
    if (!(sig_ == o.sig_))
      throw InvalidArgument("multivector signature mismatch: Cl" + to_string(sig_) + " vs Cl" + to_string(o.sig_));
  }

 private:
  Signature sig_;
  std::vector<double> coeffs_;
};

inline Multivector geometric_product(const Multivector& u, const Multivector& v) {
  u.check_same(v);
  const Signature& sig = u.sig();
  Multivector out(sig);
  const auto uc = u.coeffs();
  const auto vc = v.coeffs();
  auto oc = out.coeffs();
  for (std::uint32_t a = 0; a < uc.size(); ++a) {
    if (uc[a] == 0.0) continue;
    for (std::uint32_t b = 0; b < vc.size(); ++b) {
      if (vc[b] == 0.0) continue;
      const auto sb = blade_product(Blade{a}, Blade{b}, sig);
      oc[sb.blade.mask()] += sb.sign * uc[a] * vc[b];
    }
  }
  return out;
}

inline Multivector operator*(const Multivector& u, const Multivector& v) { return geometric_product(u, v); }

// (sign * e_B) * u, O(2^n).
inline Multivector left_blade_multiply(SignedBlade sb, const Multivector& u) {
  Multivector out(u.sig());
  const auto uc = u.coeffs();
  auto oc = out.coeffs();
  for (std::uint32_t a = 0; a < uc.size(); ++a) {
    if (uc[a] == 0.0) continue;
    const auto p = blade_product(sb.blade, Blade{a}, u.sig());
    oc[p.blade.mask()] += sb.sign * p.sign * uc[a];
  }
  return out;
}

// u * (sign * e_B), O(2^n).
inline Multivector right_blade_multiply(const Multivector& u, SignedBlade sb) {
  Multivector out(u.sig());
  const auto uc = u.coeffs();
  auto oc = out.coeffs();
  for (std::uint32_t a = 0; a < uc.size(); ++a) {
    if (uc[a] == 0.0) continue;
    const auto p = blade_product(Blade{a}, sb.blade, u.sig());
    oc[p.blade.mask()] += sb.sign * p.sign * uc[a];
  }
  return out;
}

inline Multivector reverse(const Multivector& u) {
  Multivector out = u;
  auto oc = out.coeffs();
  for (std::uint32_t a = 0; a < oc.size(); ++a) oc[a] *= reversion_sign(Blade{a}.grade());
  return out;
}

inline Multivector grade_project(const Multivector& u, int k) {
  if (k < 0 || k > u.sig().n())
    throw InvalidArgument("grade_project: grade " + std::to_string(k) + " out of range 0.." +
                          std::to_string(u.sig().n()));
  Multivector out(u.sig());
  const auto uc = u.coeffs();
  auto oc = out.coeffs();
  for (std::uint32_t a = 0; a < uc.size(); ++a)
    if (Blade{a}.grade() == k) oc[a] = uc[a];
  return out;
}

// Largest |coefficient| outside grade k.
inline double off_grade_residual(const Multivector& u, int k) {
  double r = 0.0;
  const auto uc = u.coeffs();
  for (std::uint32_t a = 0; a < uc.size(); ++a)
    if (Blade{a}.grade() != k) r = std::max(r, std::abs(uc[a]));
  return r;
}

// Projection onto the center: grade 0 for even n, grades 0 and n for odd n.
inline Multivector center_project(const Multivector& u) {
  const int n = u.sig().n();
  Multivector out = grade_project(u, 0);
  if (n % 2 == 1) out += grade_project(u, n);
  return out;
}

// Scalar part of reverse(u) * u, computed without the full product.
inline double reverse_norm_sq(const Multivector& u) {
  double s = 0.0;
  const auto uc = u.coeffs();
  for (std::uint32_t a = 0; a < uc.size(); ++a) {
    if (uc[a] == 0.0) continue;
    const Blade b{a};
    // reverse(e_A) e_A = reversion_sign * e_A e_A, and e_A e_A = blade_product sign
    s += reversion_sign(b.grade()) * blade_product(b, b, u.sig()).sign * uc[a] * uc[a];
  }
  return s;
}

// exp of a pure bivector: 20-term Taylor series after halving the argument until its
// coefficient 1-norm is at most 1 (the 1-norm is submultiplicative on the blade basis),
// followed by repeated squaring.
inline Multivector exp_bivector(const Multivector& b) {
  if (off_grade_residual(b, 2) != 0.0) throw InvalidArgument("exp_bivector: argument is not a pure bivector");
  int halvings = 0;
  double norm = b.l1_norm();
  while (norm > 1.0) {
    norm /= 2.0;
    ++halvings;
  }
  const Multivector x = b * std::ldexp(1.0, -halvings);

  Multivector term = Multivector::scalar(b.sig(), 1.0);
  Multivector sum = term;
  for (int k = 1; k < 20; ++k) {
    term = term * x;
    term /= static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < halvings; ++i) sum = sum * sum;
  return sum;
}

}  // namespace spincover
