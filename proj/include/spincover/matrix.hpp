#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "signature.hpp"

namespace spincover {

// Dense square real matrix, row-major, 0-based access.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(int n) : n_(n), data_(static_cast<std::size_t>(n) * n, 0.0) {
    if (n < 0) throw InvalidArgument("matrix: negative size");
  }
  Matrix(std::initializer_list<std::initializer_list<double>> rows) : Matrix(static_cast<int>(rows.size())) {
    int r = 0;
    for (const auto& row : rows) {
      if (static_cast<int>(row.size()) != n_) throw InvalidArgument("matrix: rows must form a square matrix");
      int c = 0;
      for (double v : row) (*this)(r, c++) = v;
      ++r;
    }
  }

  static Matrix identity(int n) {
    Matrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }
  static Matrix metric(const Signature& sig) {
    Matrix m(sig.n());
    for (int i = 0; i < sig.n(); ++i) m(i, i) = sig.metric(i);
    return m;
  }

  int size() const { return n_; }
  double operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * n_ + c]; }
  double& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * n_ + c]; }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  Matrix transpose() const {
    Matrix t(n_);
    for (int r = 0; r < n_; ++r)
      for (int c = 0; c < n_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.n_ != b.n_) throw InvalidArgument("matrix product: size mismatch");
    Matrix out(a.n_);
    for (int r = 0; r < a.n_; ++r)
      for (int k = 0; k < a.n_; ++k) {
        const double v = a(r, k);
        for (int c = 0; c < a.n_; ++c) out(r, c) += v * b(k, c);
      }
    return out;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) {
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
    return a;
  }
  friend Matrix operator-(Matrix a, const Matrix& b) {
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
    return a;
  }
  friend Matrix operator*(double s, Matrix a) {
    for (double& v : a.data_) v *= s;
    return a;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  int n_ = 0;
  std::vector<double> data_;
};

namespace detail {

// In-place LU with partial pivoting on a k x k row-major buffer. Returns the
// determinant; `perm` receives the row permutation when non-null.
inline double lu_decompose(std::span<double> a, int k, std::vector<int>* perm = nullptr) {
  double det = 1.0;
  if (perm) {
    perm->resize(k);
    for (int i = 0; i < k; ++i) (*perm)[i] = i;
  }
  for (int col = 0; col < k; ++col) {
    int pivot = col;
    for (int r = col + 1; r < k; ++r)
      if (std::abs(a[r * k + col]) > std::abs(a[pivot * k + col])) pivot = r;
    if (a[pivot * k + col] == 0.0) return 0.0;
    if (pivot != col) {
      for (int c = 0; c < k; ++c) std::swap(a[col * k + c], a[pivot * k + c]);
      if (perm) std::swap((*perm)[col], (*perm)[pivot]);
      det = -det;
    }
    const double d = a[col * k + col];
    det *= d;
    for (int r = col + 1; r < k; ++r) {
      const double f = a[r * k + col] / d;
      a[r * k + col] = f;
      for (int c = col + 1; c < k; ++c) a[r * k + c] -= f * a[col * k + c];
    }
  }
  return det;
}

// Determinant of a k x k row-major buffer; closed form up to 3x3.
inline double small_determinant(std::span<double> a, int k) {
  switch (k) {
    case 0:
      return 1.0;
    case 1:
      return a[0];
    case 2:
      return a[0] * a[3] - a[1] * a[2];
    case 3:
      return a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
             a[2] * (a[3] * a[7] - a[4] * a[6]);
    default:
      return lu_decompose(a, k);
  }
}

}  // namespace detail

inline double determinant(const Matrix& m) {
  std::vector<double> buf(static_cast<std::size_t>(m.size()) * m.size());
  for (int r = 0; r < m.size(); ++r)
    for (int c = 0; c < m.size(); ++c) buf[r * m.size() + c] = m(r, c);
  return detail::small_determinant(buf, m.size());
}

inline Matrix inverse(const Matrix& m) {
  const int k = m.size();
  std::vector<double> lu(static_cast<std::size_t>(k) * k);
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c) lu[r * k + c] = m(r, c);
  std::vector<int> perm;
  if (detail::lu_decompose(lu, k, &perm) == 0.0) throw InvalidArgument("matrix inverse: singular matrix");
  Matrix inv(k);
  std::vector<double> x(k);
  for (int col = 0; col < k; ++col) {
    for (int r = 0; r < k; ++r) x[r] = (perm[r] == col) ? 1.0 : 0.0;
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < r; ++c) x[r] -= lu[r * k + c] * x[c];
    for (int r = k - 1; r >= 0; --r) {
      for (int c = r + 1; c < k; ++c) x[r] -= lu[r * k + c] * x[c];
      x[r] /= lu[r * k + r];
    }
    for (int r = 0; r < k; ++r) inv(r, col) = x[r];
  }
  return inv;
}

// Minor p^A_B: determinant of the submatrix on rows A and columns B, with the
// multi-indices given as blade masks over 0-based rows/columns. p^{}_{} = 1.
inline double minor(const Matrix& m, Blade rows, Blade cols) {
  const int k = rows.grade();
  if (cols.grade() != k) throw InvalidArgument("minor: row and column multi-indices differ in length");
  if ((rows.mask() | cols.mask()) >> m.size()) throw InvalidArgument("minor: index out of range");
  if (k == 0) return 1.0;
  int r_idx[32];
  int c_idx[32];
  int i = 0;
  for (std::uint32_t r = rows.mask(); r != 0; r &= r - 1) r_idx[i++] = std::countr_zero(r);
  i = 0;
  for (std::uint32_t c = cols.mask(); c != 0; c &= c - 1) c_idx[i++] = std::countr_zero(c);
  std::vector<double> buf(static_cast<std::size_t>(k) * k);
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c) buf[r * k + c] = m(r_idx[r], c_idx[c]);
  return detail::small_determinant(buf, k);
}

// 1-based ascending multi-indices, as written p^{a1...ak}_{b1...bk}.
inline double minor(const Matrix& m, std::span<const int> rows, std::span<const int> cols) {
  if (rows.size() != cols.size()) throw InvalidArgument("minor: row and column multi-indices differ in length");
  auto to_blade = [&](std::span<const int> idx) {
    std::uint32_t mask = 0;
    int last = 0;
    for (int i : idx) {
      if (i < 1 || i > m.size()) throw InvalidArgument("minor: index " + std::to_string(i) + " out of range");
      if (i <= last) throw InvalidArgument("minor: multi-index must be strictly ascending");
      mask |= std::uint32_t{1} << (i - 1);
      last = i;
    }
    return Blade{mask};
  };
  return minor(m, to_blade(rows), to_blade(cols));
}

inline double minor(const Matrix& m, std::initializer_list<int> rows, std::initializer_list<int> cols) {
  return minor(m, std::span<const int>(rows.begin(), rows.size()), std::span<const int>(cols.begin(), cols.size()));
}

inline constexpr double kDefaultMembershipTol = 1e-9;

// Outcome of testing a matrix against the three SO+(p,q) conditions. Violations are
// compared against tol scaled by the matrix magnitude, so large boosts whose entries
// carry proportionally large rounding are not rejected for honest drift.
struct MembershipReport {
  Signature sig;
  double tol;
  double orthogonality_violation;  // max |P^T eta P - eta|
  double orthogonality_bound;
  double det;
  double det_bound;
  double leading_minor;  // p^{1..p}_{1..p}
  double leading_minor_bound;

  bool orthogonality_ok() const { return orthogonality_violation <= orthogonality_bound; }
  bool det_ok() const { return std::abs(det - 1.0) <= det_bound; }
  bool orthochronous_ok() const { return leading_minor >= 1.0 - leading_minor_bound; }
  bool accepted() const { return orthogonality_ok() && det_ok() && orthochronous_ok(); }

  std::string describe() const {
    std::ostringstream os;
    os.precision(6);
    bool first = true;
    auto sep = [&] {
      if (!first) os << "; ";
      first = false;
    };
    if (!orthogonality_ok()) {
      sep();
      os << "orthogonality condition violated: max |P^T eta P - eta| = " << orthogonality_violation
         << " > " << orthogonality_bound;
    }
    if (!det_ok()) {
      sep();
      os << "determinant condition violated: det(P) = " << det << ", |det - 1| > " << det_bound;
    }
    if (!orthochronous_ok()) {
      sep();
      os << "orthochronous condition violated: leading " << sig.p() << "x" << sig.p() << " minor = " << leading_minor
         << " < 1";
    }
    if (first) os << "accepted";
    return os.str();
  }
};

class MembershipError : public std::runtime_error {
 public:
  explicit MembershipError(MembershipReport report)
      : std::runtime_error("matrix is not in SO+" + to_string(report.sig) + ": " + report.describe()),
        report_(std::move(report)) {}
  const MembershipReport& report() const { return report_; }

 private:
  MembershipReport report_;
};

inline MembershipReport membership_report(const Matrix& m, const Signature& sig, double tol = kDefaultMembershipTol) {
  if (m.size() != sig.n())
    throw InvalidArgument("membership: matrix is " + std::to_string(m.size()) + "x" + std::to_string(m.size()) +
                          " but the signature has n = " + std::to_string(sig.n()));
  if (!(tol >= 0.0)) throw InvalidArgument("membership: tolerance must be non-negative");
  const int n = sig.n();
  const Matrix eta = Matrix::metric(sig);
  const Matrix gram = m.transpose() * eta * m;
  double ortho = 0.0;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) ortho = std::max(ortho, std::abs(gram(r, c) - eta(r, c)));

  // Hadamard-style magnitude: products of row norms bound det and minors.
  const double scale = std::max(1.0, m.max_abs());
  double row_norm_product = 1.0;
  double leading_norm_product = 1.0;
  for (int r = 0; r < n; ++r) {
    double s = 0.0;
    double lead = 0.0;
    for (int c = 0; c < n; ++c) {
      s += m(r, c) * m(r, c);
      if (c < sig.p()) lead += m(r, c) * m(r, c);
    }
    row_norm_product *= std::max(1.0, std::sqrt(s));
    if (r < sig.p()) leading_norm_product *= std::max(1.0, std::sqrt(lead));
  }

  const Blade leading{(std::uint32_t{1} << sig.p()) - 1};
  return MembershipReport{sig,
                          tol,
                          ortho,
                          tol * scale * scale,
                          determinant(m),
                          tol * row_norm_product,
                          minor(m, leading, leading),
                          tol * leading_norm_product};
}

// A matrix validated to lie in SO+(p,q). Entry (b, a) is the coefficient of e_b in
// S e_a S^{-1}, so column a is the image of generator a; minors p^A_B take rows A.
class OrthoMatrix {
 public:
  const Signature& sig() const { return sig_; }
  const Matrix& matrix() const { return m_; }
  double tol() const { return tol_; }
  int size() const { return m_.size(); }
  double operator()(int r, int c) const { return m_(r, c); }

  friend OrthoMatrix check_membership(const Matrix& m, const Signature& sig, double tol);

 private:
  OrthoMatrix(Matrix m, Signature sig, double tol) : m_(std::move(m)), sig_(sig), tol_(tol) {}

  Matrix m_;
  Signature sig_;
  double tol_;
};

inline OrthoMatrix check_membership(const Matrix& m, const Signature& sig, double tol = kDefaultMembershipTol) {
  MembershipReport report = membership_report(m, sig, tol);
  if (!report.accepted()) throw MembershipError(std::move(report));
  return OrthoMatrix(m, sig, tol);
}

inline double minor(const OrthoMatrix& p, Blade rows, Blade cols) { return minor(p.matrix(), rows, cols); }
inline double minor(const OrthoMatrix& p, std::initializer_list<int> rows, std::initializer_list<int> cols) {
  return minor(p.matrix(), rows, cols);
}

// Projects a nearly pseudo-orthogonal matrix onto O(p,q) with the Newton iteration
// X <- (X + eta X^{-T} eta) / 2 for the generalized polar decomposition. It does not
// change the component, so det/orthochronous violations survive projection.
inline Matrix project_to_group(const Matrix& m, const Signature& sig, int max_iterations = 100) {
  if (m.size() != sig.n()) throw InvalidArgument("project: matrix size does not match the signature");
  const Matrix eta = Matrix::metric(sig);
  Matrix x = m;
  for (int it = 0; it < max_iterations; ++it) {
    const Matrix next = 0.5 * (x + eta * inverse(x).transpose() * eta);
    const double change = (next - x).max_abs();
    x = next;
    if (change <= 4e-16 * std::max(1.0, x.max_abs())) break;
  }
  return x;
}

}  // namespace spincover
