#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "matrix.hpp"
#include "multivector.hpp"
#include "signature.hpp"

namespace spincover {

inline constexpr double kRotorTol = 1e-9;

class RotorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// No candidate M_F was usable; the input cannot be in SO+(p,q).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Residuals of the Spin+ conditions for a candidate rotor. Bounds scale with the
// squared coefficient magnitude, since S~S and S e_a S~ are quadratic in S.
struct RotorCheck {
  double odd_max = 0.0;          // largest odd-grade coefficient; must be exactly 0
  double unit_residual = 0.0;    // max |reverse(S) S - e|
  double grade1_residual = 0.0;  // max non-grade-1 coefficient of S e_a S~ over all a
  double bound = 0.0;

  bool even_ok() const { return odd_max == 0.0; }
  bool unit_ok() const { return unit_residual <= bound; }
  bool grade1_ok() const { return grade1_residual <= bound; }
  bool ok() const { return even_ok() && unit_ok() && grade1_ok(); }

  std::string describe() const {
    std::ostringstream os;
    os.precision(6);
    if (!even_ok()) os << "odd-grade part present (max " << odd_max << "); ";
    if (!unit_ok()) os << "reverse(S) S != e (residual " << unit_residual << " > " << bound << "); ";
    if (!grade1_ok()) os << "conjugation leaves grade 1 (residual " << grade1_residual << " > " << bound << "); ";
    std::string s = os.str();
    if (s.empty()) return "ok";
    s.resize(s.size() - 2);
    return s;
  }
};

inline RotorCheck check_rotor(const Multivector& s, double tol = kRotorTol) {
  RotorCheck r;
  const auto c = s.coeffs();
  for (std::uint32_t a = 0; a < c.size(); ++a)
    if (!Blade{a}.is_even()) r.odd_max = std::max(r.odd_max, std::abs(c[a]));
  const double mag = std::max(1.0, s.max_abs());
  r.bound = tol * mag * mag;

  const Multivector rev = reverse(s);
  Multivector unit = rev * s;
  unit[Blade::scalar()] -= 1.0;
  r.unit_residual = unit.max_abs();

  for (int a = 1; a <= s.sig().n(); ++a) {
    const Multivector img = s * Multivector::generator(s.sig(), a) * rev;
    r.grade1_residual = std::max(r.grade1_residual, off_grade_residual(img, 1));
  }
  return r;
}

// Flips the sign so the largest-magnitude coefficient is positive. Magnitudes within
// kZeroThreshold of the maximum count as ties, resolved by the lowest blade mask.
inline Multivector canonicalize_sign(Multivector s) {
  const double top = s.max_abs();
  if (top == 0.0) return s;
  for (double c : s.coeffs()) {
    if (std::abs(c) >= top - kZeroThreshold) {
      if (c < 0.0) s *= -1.0;
      break;
    }
  }
  return s;
}

// Element of Spin+(p,q): even, reverse(S) S = e, and conjugation preserves grade 1.
// Stored with the canonical sign; the covering only determines +-S.
class Rotor {
 public:
  static Rotor from_multivector(const Multivector& value, double tol = kRotorTol) {
    const RotorCheck check = check_rotor(value, tol);
    if (!check.ok()) throw RotorError("not a Spin+" + to_string(value.sig()) + " element: " + check.describe());
    return Rotor(canonicalize_sign(value));
  }

  const Multivector& value() const { return value_; }
  const Signature& sig() const { return value_.sig(); }
  Multivector negated() const { return -value_; }
  Multivector inverse() const { return reverse(value_); }
  Multivector conjugate(const Multivector& x) const { return value_ * x * reverse(value_); }

 private:
  explicit Rotor(Multivector v) : value_(std::move(v)) {}
  Multivector value_;
};

// Forward covering: column a of the result holds the coefficients of S e_a S^{-1}.
inline OrthoMatrix forward_map(const Rotor& s, double tol = kDefaultMembershipTol) {
  const Signature& sig = s.sig();
  const int n = sig.n();
  Matrix p(n);
  const double mag = std::max(1.0, s.value().max_abs());
  for (int a = 1; a <= n; ++a) {
    const Multivector img = s.conjugate(Multivector::generator(sig, a));
    const double leak = off_grade_residual(img, 1);
    if (leak > kRotorTol * mag * mag)
      throw RotorError("forward_map: conjugation of e" + std::to_string(a) + " leaves grade 1 (residual " +
                       std::to_string(leak) + ")");
    for (int b = 1; b <= n; ++b) p(b - 1, a - 1) = img[Blade::generator(b)];
  }
  return check_membership(p, sig, tol);
}

// All minors p^B_A of a matrix, grouped by grade, in ascending mask order. Each entry
// also carries the reduced product e_B e^A = sign * e_{B xor A}, folded into weight.
class MinorTable {
 public:
  struct Entry {
    Blade rows;
    Blade cols;
    double value;
    std::uint32_t product;  // rows xor cols
    double weight;          // value * sign(e_B e^A)
  };

  // Direct determinants of every square submatrix.
  MinorTable(const Matrix& p, const Signature& sig) { build(p, sig, false); }

  // For P in SO+(p,q) the minors above grade n/2 follow from the complementary ones,
  //   p^B_A = eta(A) eta(B) (-1)^(sum A + sum B) p^{B'}_{A'}   (' = complement),
  // since P^{-1} = eta P^T eta and det P = 1. Large minors of boosts lose most of their
  // digits to cancellation; the complementary form does not.
  explicit MinorTable(const OrthoMatrix& p) { build(p.matrix(), p.sig(), true); }

  const std::vector<Entry>& entries() const { return entries_; }

 private:
  void build(const Matrix& p, const Signature& sig, bool complementary) {
    const int n = p.size();
    if (n != sig.n()) throw InvalidArgument("minor table: matrix size does not match the signature");
    const std::uint32_t count = std::uint32_t{1} << n;
    const std::uint32_t full = count - 1;
    std::vector<std::vector<Blade>> by_grade(n + 1);
    std::vector<std::uint32_t> rank(count);
    for (std::uint32_t m = 0; m < count; ++m) {
      auto& level = by_grade[Blade{m}.grade()];
      rank[m] = static_cast<std::uint32_t>(level.size());
      level.push_back(Blade{m});
    }
    auto parity = [&](std::uint32_t m) {
      int s = std::popcount(m & sig.negative_mask());
      for (std::uint32_t r = m; r != 0; r &= r - 1) s += std::countr_zero(r);
      return s;
    };

    std::vector<std::vector<double>> values(n + 1);
    for (int k = 0; k <= n; ++k) {
      const auto& level = by_grade[k];
      const std::size_t width = level.size();
      values[k].resize(width * width);
      const bool derived = complementary && 2 * k > n;
      for (std::size_t i = 0; i < width; ++i)
        for (std::size_t j = 0; j < width; ++j) {
          const Blade rows = level[i];
          const Blade cols = level[j];
          double v;
          if (derived) {
            const std::uint32_t rc = full ^ rows.mask();
            const std::uint32_t cc = full ^ cols.mask();
            const auto& low = values[n - k];
            v = low[rank[rc] * by_grade[n - k].size() + rank[cc]];
            if ((parity(rows.mask()) + parity(cols.mask())) % 2 != 0) v = -v;
          } else {
            v = minor(p, rows, cols);
          }
          values[k][i * width + j] = v;
          const SignedBlade inv = blade_inverse(cols, sig);
          const SignedBlade prod = blade_product(rows, inv.blade, sig);
          entries_.push_back({rows, cols, v, prod.blade.mask(), v * inv.sign * prod.sign});
        }
    }
  }

  std::vector<Entry> entries_;
};

// Unnormalized covering candidate (M_F or L_F) and the scalar part of reverse(M) M.
struct CandidateElement {
  Blade F;
  Multivector M;
  double normsq;

  // Largest non-scalar coefficient of reverse(M) M relative to max|M|^2, plus the
  // scalar part; both describe whether the normalizer is a real positive scalar.
  std::pair<double, double> normalizer_residual() const {
    const Multivector r = reverse(M) * M;
    const double mag = M.max_abs();
    const double off = off_grade_residual(r, 0);
    return {mag == 0.0 ? off : off / (mag * mag), r.scalar_part()};
  }
};

enum class Method { general, n3 };

inline std::string to_string(Method m) { return m == Method::general ? "general" : "n3"; }

namespace detail {

inline void require_even(Blade f, const Signature& sig) {
  if (!f.fits(sig)) throw InvalidArgument("candidate: F = " + blade_name(f) + " is not a blade of Cl" + to_string(sig));
  if (!f.is_even()) throw InvalidArgument("candidate: F = " + blade_name(f) + " must have even grade");
}

// Uses e_F e^A = (-1)^|F & A| e^A e_F for even F, so each term is
// +-weight(B, A) e_{B xor A} e_F.
inline CandidateElement candidate_from_table(const MinorTable& table, const Signature& sig, Blade f) {
  std::vector<int> right(sig.blade_count());
  for (std::uint32_t x = 0; x < right.size(); ++x) right[x] = blade_product(Blade{x}, f, sig).sign;
  Multivector m(sig);
  auto mc = m.coeffs();
  for (const auto& e : table.entries()) {
    if (e.weight == 0.0) continue;
    const int sign = (std::popcount(f.mask() & e.cols.mask()) % 2 == 0) ? right[e.product] : -right[e.product];
    mc[e.product ^ f.mask()] += sign * e.weight;
  }
  const double normsq = reverse_norm_sq(m);
  return {f, std::move(m), normsq};
}

inline CandidateElement candidate_n3_raw(const Matrix& p, const Signature& sig, Blade f) {
  Multivector l = Multivector::basis(sig, f);
  auto lc = l.coeffs();
  for (int a = 1; a <= 3; ++a) {
    const SignedBlade inv = blade_inverse(Blade::generator(a), sig);
    for (int b = 1; b <= 3; ++b) {
      const double coeff = p(b - 1, a - 1);
      if (coeff == 0.0) continue;
      const SignedBlade bf = blade_product(Blade::generator(b), f, sig);
      const SignedBlade term = blade_product(bf.blade, inv.blade, sig);
      lc[term.blade.mask()] += bf.sign * inv.sign * term.sign * coeff;
    }
  }
  const double normsq = reverse_norm_sq(l);
  return {f, std::move(l), normsq};
}

inline std::string matrix_text(const Matrix& p) {
  std::ostringstream os;
  os.precision(17);
  os << "[";
  for (int r = 0; r < p.size(); ++r) {
    os << (r ? ", [" : "[");
    for (int c = 0; c < p.size(); ++c) os << (c ? ", " : "") << p(r, c);
    os << "]";
  }
  os << "]";
  return os.str();
}

}  // namespace detail

// M_F = sum over |A| = |B| of p^B_A e_B e_F e^A, for an arbitrary square matrix.
inline CandidateElement candidate_general(const Matrix& p, const Signature& sig, Blade f) {
  if (p.size() != sig.n()) throw InvalidArgument("candidate_general: matrix size does not match the signature");
  detail::require_even(f, sig);
  return detail::candidate_from_table(MinorTable(p, sig), sig, f);
}

inline CandidateElement candidate_general(const OrthoMatrix& p, Blade f) {
  detail::require_even(f, p.sig());
  return detail::candidate_from_table(MinorTable(p), p.sig(), f);
}

// L_F = e_F + p_a^b e_b e_F e^a, the n = 3 form; equals M_F / 2 on SO+(p,q).
inline CandidateElement candidate_n3(const Matrix& p, const Signature& sig, Blade f) {
  if (sig.n() != 3 || p.size() != 3) throw InvalidArgument("candidate_n3: requires n = 3, got n = " + std::to_string(sig.n()));
  detail::require_even(f, sig);
  return detail::candidate_n3_raw(p, sig, f);
}

inline CandidateElement candidate_n3(const OrthoMatrix& p, Blade f) { return candidate_n3(p.matrix(), p.sig(), f); }

// Even blades in ascending (grade, mask) order.
inline std::vector<Blade> even_blades(const Signature& sig) {
  std::vector<Blade> out;
  for (int k = 0; k <= sig.n(); k += 2)
    for (std::uint32_t m = 0; m < sig.blade_count(); ++m)
      if (Blade{m}.grade() == k) out.push_back(Blade{m});
  return out;
}

struct SelectOptions {
  // Stop at the first candidate with normsq >= scale^2 / 2. For Euclidean signatures
  // that candidate is necessarily the maximum.
  bool early_exit = false;
};

// Candidate magnitude scale: M_F ~ 2^n, L_F ~ 2^(n-1).
inline double candidate_scale(const Signature& sig, Method method) {
  return std::ldexp(1.0, method == Method::general ? sig.n() : sig.n() - 1);
}

// Picks the even F whose candidate has the largest normsq; ties keep the earlier F.
inline CandidateElement select_F(const OrthoMatrix& p, Method method = Method::general, SelectOptions opts = {}) {
  const Signature& sig = p.sig();
  if (method == Method::n3 && sig.n() != 3)
    throw InvalidArgument("method n3 requires n = 3, got n = " + std::to_string(sig.n()));
  const double scale = candidate_scale(sig, method);
  const double threshold = 1e-18 * scale * scale;

  std::optional<MinorTable> table;
  if (method == Method::general) table.emplace(p);

  std::optional<CandidateElement> best;
  for (Blade f : even_blades(sig)) {
    CandidateElement c = method == Method::general ? detail::candidate_from_table(*table, sig, f)
                                                   : detail::candidate_n3_raw(p.matrix(), sig, f);
    if (!best || c.normsq > best->normsq) best = std::move(c);
    if (opts.early_exit && best->normsq >= scale * scale / 2) break;
  }
  if (!best || !(best->normsq > threshold))
    throw NumericalError("select_F: no even F gives a nonzero candidate for P = " + detail::matrix_text(p.matrix()) +
                         " in SO+" + to_string(sig));
  return std::move(*best);
}

struct RotorRecovery {
  Rotor rotor;
  CandidateElement candidate;
};

// max over a of |S e_a reverse(S) - sum_b P(b, a) e_b| for a unit S.
inline double covering_residual(const Multivector& s, const Matrix& p) {
  const Signature& sig = s.sig();
  const Multivector rev = reverse(s);
  double worst = 0.0;
  for (int a = 1; a <= sig.n(); ++a) {
    Multivector diff = s * Multivector::generator(sig, a) * rev;
    for (int b = 1; b <= sig.n(); ++b) diff[Blade::generator(b)] -= p(b - 1, a - 1);
    worst = std::max(worst, diff.max_abs());
  }
  return worst;
}

// Covering residual allowed for a recovered rotor: the membership tolerance, clamped
// to [kRotorTol, 1e-3].
inline double covering_tolerance(double membership_tol) { return std::clamp(membership_tol, kRotorTol, 1e-3); }

// S = +-M_F / sqrt(reverse(M_F) M_F), with the best-conditioned F.
inline RotorRecovery recover_rotor(const OrthoMatrix& p, Method method = Method::general, SelectOptions opts = {}) {
  CandidateElement c = select_F(p, method, opts);
  Multivector s = c.M / std::sqrt(c.normsq);
  std::optional<Rotor> r;
  try {
    r.emplace(Rotor::from_multivector(s));
  } catch (const RotorError& e) {
    throw NumericalError(std::string("normalized candidate is not a rotor: ") + e.what());
  }
  const double mag = std::max(1.0, s.max_abs());
  const double residual = covering_residual(r->value(), p.matrix());
  if (!(residual <= covering_tolerance(p.tol()) * mag * mag))
    throw NumericalError("recovered rotor does not reproduce P = " + detail::matrix_text(p.matrix()) + " (residual " +
                         std::to_string(residual) + ")");
  return {std::move(*r), std::move(c)};
}

inline Rotor matrix_to_rotor(const OrthoMatrix& p, Method method = Method::general, SelectOptions opts = {}) {
  return recover_rotor(p, method, opts).rotor;
}

// Rotated frame beta_a = S e_a S~: n grade-1 elements whose metric Gram matrix is eta.
class Frame {
 public:
  static Frame from_vectors(const Signature& sig, std::vector<Multivector> beta, double tol = kDefaultMembershipTol) {
    if (static_cast<int>(beta.size()) != sig.n())
      throw InvalidArgument("frame: expected " + std::to_string(sig.n()) + " vectors, got " +
                            std::to_string(beta.size()));
    double mag = 1.0;
    for (const auto& b : beta) {
      if (!(b.sig() == sig)) throw InvalidArgument("frame: vector signature mismatch");
      mag = std::max(mag, b.max_abs());
    }
    for (const auto& b : beta)
      if (off_grade_residual(b, 1) > tol * mag * mag) throw InvalidArgument("frame: vectors must be pure grade 1");
    Frame f(sig, std::move(beta));
    const Matrix c = f.coordinates();
    const Matrix eta = Matrix::metric(sig);
    const Matrix gram = c.transpose() * eta * c;
    const double dev = (gram - eta).max_abs();
    if (dev > tol * mag * mag)
      throw InvalidArgument("frame: Gram matrix differs from eta by " + std::to_string(dev));
    return f;
  }

  const Signature& sig() const { return sig_; }
  const std::vector<Multivector>& vectors() const { return beta_; }

  // Column a holds the coordinates of beta_a over e_1..e_n.
  Matrix coordinates() const {
    Matrix m(sig_.n());
    for (int a = 0; a < sig_.n(); ++a)
      for (int b = 0; b < sig_.n(); ++b) m(b, a) = beta_[a][Blade::generator(b + 1)];
    return m;
  }

 private:
  Frame(Signature sig, std::vector<Multivector> beta) : sig_(sig), beta_(std::move(beta)) {}
  Signature sig_;
  std::vector<Multivector> beta_;
};

inline Rotor rotor_from_frames(const Frame& f, Method method = Method::general, double tol = kDefaultMembershipTol) {
  return matrix_to_rotor(check_membership(f.coordinates(), f.sig(), tol), method);
}

}  // namespace spincover
