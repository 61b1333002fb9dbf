#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "hyperlab/error.hpp"

namespace hyperlab {

using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// Complex scalars. std::complex already carries the arithmetic; these helpers
// add the checked inverse and name the remaining operations.

inline double modulus(Complex c) noexcept { return std::hypot(c.real(), c.imag()); }

inline double distance(Complex a, Complex b) noexcept { return modulus(a - b); }

/// c⁻¹ = c* / |c|²
inline Complex inverse(Complex c) {
  const double norm2 = c.real() * c.real() + c.imag() * c.imag();
  if (norm2 == 0.0) fail(ErrorKind::domain, "inverse of zero complex number");
  return std::conj(c) / norm2;
}

// ---------------------------------------------------------------------------

/// Dense row-major complex matrix. Column matrices play the role of kets,
/// row matrices the role of bras. A 0x0 matrix is the neutral element of the
/// direct sum.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;

  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(rows * cols) {}

  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
      : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows * cols)
      fail(ErrorKind::shape, "entry count " + std::to_string(entries_.size()) +
                                 " does not match " + std::to_string(rows) + "x" +
                                 std::to_string(cols));
  }

  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    entries_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      if (row.size() != cols_) fail(ErrorKind::shape, "ragged matrix literal");
      entries_.insert(entries_.end(), row.begin(), row.end());
    }
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
  }

  static ComplexMatrix column(std::vector<Complex> values) {
    const auto n = values.size();
    return ComplexMatrix(n, 1, std::move(values));
  }

  static ComplexMatrix basis_ket(std::size_t dimension, std::size_t index) {
    ComplexMatrix k(dimension, 1);
    k(index, 0) = 1.0;
    return k;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool is_column() const noexcept { return cols_ == 1; }
  bool is_row() const noexcept { return rows_ == 1; }

  Complex& operator()(std::size_t i, std::size_t j) noexcept { return entries_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const noexcept {
    return entries_[i * cols_ + j];
  }

  /// Flat access, convenient for kets.
  Complex& operator[](std::size_t k) noexcept { return entries_[k]; }
  const Complex& operator[](std::size_t k) const noexcept { return entries_[k]; }

  std::span<Complex> entries() noexcept { return entries_; }
  std::span<const Complex> entries() const noexcept { return entries_; }

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> entries_;
};

using Ket = ComplexMatrix;
using Bra = ComplexMatrix;

namespace detail {
inline void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    fail(ErrorKind::shape, std::string(op) + ": " + std::to_string(a.rows()) + "x" +
                               std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                               "x" + std::to_string(b.cols()));
}
}  // namespace detail

inline ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  detail::require_same_shape(a, b, "matrix sum");
  ComplexMatrix c = a;
  for (std::size_t k = 0; k < c.size(); ++k) c[k] += b[k];
  return c;
}

inline ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  detail::require_same_shape(a, b, "matrix difference");
  ComplexMatrix c = a;
  for (std::size_t k = 0; k < c.size(); ++k) c[k] -= b[k];
  return c;
}

inline ComplexMatrix operator*(Complex s, const ComplexMatrix& a) {
  ComplexMatrix c = a;
  for (auto& x : c.entries()) x *= s;
  return c;
}

/// c_{i,j} = Σ_l a_{i,l} b_{l,j}
inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows())
    fail(ErrorKind::shape, "matrix product: inner dimensions " + std::to_string(a.cols()) +
                               " and " + std::to_string(b.rows()) + " differ");
  ComplexMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const Complex ail = a(i, l);
      if (ail == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += ail * b(l, j);
    }
  return c;
}

inline ComplexMatrix transpose(const ComplexMatrix& a) {
  ComplexMatrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

inline ComplexMatrix conjugate(const ComplexMatrix& a) {
  ComplexMatrix c = a;
  for (auto& x : c.entries()) x = std::conj(x);
  return c;
}

/// A† = (A*)ᵀ
inline ComplexMatrix dagger(const ComplexMatrix& a) {
  ComplexMatrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = std::conj(a(i, j));
  return t;
}

/// Block matrix [a_{i,j} B]; dimensions multiply.
inline ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          c(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return c;
}

/// Block diagonal [[A, 0], [0, B]].
inline ComplexMatrix direct_sum(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix c(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) c(a.rows() + i, a.cols() + j) = b(i, j);
  return c;
}

inline Complex trace(const ComplexMatrix& a) {
  if (!a.is_square()) fail(ErrorKind::shape, "trace of a non-square matrix");
  Complex t{};
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

inline double frobenius_norm(const ComplexMatrix& a) noexcept {
  double s = 0.0;
  for (const auto& x : a.entries()) s += std::norm(x);
  return std::sqrt(s);
}

inline bool is_hermitian(const ComplexMatrix& a, double tolerance = 1e-10) noexcept {
  if (!a.is_square()) return false;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i; j < a.cols(); ++j)
      if (std::abs(a(i, j) - std::conj(a(j, i))) > tolerance) return false;
  return true;
}

/// ⟨ψ| as the conjugate transpose of |ψ⟩.
inline Bra bra_of(const Ket& ket) {
  if (!ket.is_column()) fail(ErrorKind::shape, "bra_of expects a column matrix");
  return dagger(ket);
}

/// ⟨φ|ψ⟩ = Σ φ_i* ψ_i
inline Complex inner_product(const Ket& phi, const Ket& psi) {
  if (!phi.is_column() || !psi.is_column() || phi.rows() != psi.rows())
    fail(ErrorKind::shape, "inner product needs two column matrices of equal dimension");
  Complex s{};
  for (std::size_t i = 0; i < phi.rows(); ++i) s += std::conj(phi[i]) * psi[i];
  return s;
}

inline double norm(const Ket& psi) { return std::sqrt(std::max(0.0, inner_product(psi, psi).real())); }

inline Ket normalized(const Ket& psi) {
  const double n = norm(psi);
  if (n == 0.0) fail(ErrorKind::domain, "cannot normalize the zero vector");
  return Complex(1.0 / n) * psi;
}

// ---------------------------------------------------------------------------
// Hermitian eigensolver: cyclic complex Jacobi.

struct EigenSystem {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // column k pairs with eigenvalues[k]
  int sweeps = 0;

  Ket eigenvector(std::size_t k) const {
    Ket v(eigenvectors.rows(), 1);
    for (std::size_t i = 0; i < eigenvectors.rows(); ++i) v[i] = eigenvectors(i, k);
    return v;
  }
};

struct JacobiOptions {
  double hermitian_tolerance = 1e-10;
  double off_diagonal_tolerance = 1e-12;  // relative to ‖H‖_F
  int max_sweeps = 100;
};

namespace detail {
inline double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}
}  // namespace detail

inline EigenSystem hermitian_eigensystem(const ComplexMatrix& h, const JacobiOptions& opts = {}) {
  if (!h.is_square()) fail(ErrorKind::shape, "eigensystem of a non-square matrix");
  if (!is_hermitian(h, opts.hermitian_tolerance))
    fail(ErrorKind::domain, "eigensystem input is not Hermitian within tolerance");

  const std::size_t n = h.rows();
  // Work on the exactly Hermitian part so rounding in the input cannot bias
  // the rotations.
  ComplexMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = h(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      a(i, j) = 0.5 * (h(i, j) + std::conj(h(j, i)));
      a(j, i) = std::conj(a(i, j));
    }
  }
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double scale = std::max(frobenius_norm(a), std::numeric_limits<double>::min());
  const double target = opts.off_diagonal_tolerance * scale;

  int sweep = 0;
  double off = detail::off_diagonal_norm(a);
  while (off > target) {
    if (sweep == opts.max_sweeps)
      fail(ErrorKind::numeric, "Jacobi did not converge after " + std::to_string(sweep) +
                                   " sweeps; off-diagonal residual " + std::to_string(off));
    ++sweep;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag <= std::numeric_limits<double>::min()) continue;

        // Phase e^{-iφ} makes the (p,q) entry real; then a real rotation
        // [[c, s], [-s, c]] annihilates it.
        const Complex phase = std::conj(apq) / mag;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        // U restricted to (p,q): [[c, s], [-s·phase, c·phase]].
        const Complex upp = c, upq = s, uqp = -s * phase, uqq = c * phase;

        for (std::size_t k = 0; k < n; ++k) {  // A ← A U
          const Complex akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * upp + akq * uqp;
          a(k, q) = akp * upq + akq * uqq;
        }
        for (std::size_t k = 0; k < n; ++k) {  // A ← U† A
          const Complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(upp) * apk + std::conj(uqp) * aqk;
          a(q, k) = std::conj(upq) * apk + std::conj(uqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();

        for (std::size_t k = 0; k < n; ++k) {  // V ← V U
          const Complex vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * upp + vkq * uqp;
          v(k, q) = vkp * upq + vkq * uqq;
        }
      }
    off = detail::off_diagonal_norm(a);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

  EigenSystem es;
  es.sweeps = sweep;
  es.eigenvalues.reserve(n);
  es.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    es.eigenvalues.push_back(a(order[k], order[k]).real());
    for (std::size_t i = 0; i < n; ++i) es.eigenvectors(i, k) = v(i, order[k]);
  }
  return es;
}

// ---------------------------------------------------------------------------
// Report serialization: {"rows":n,"cols":m,"re":[...],"im":[...]}

inline void to_json(nlohmann::json& j, const ComplexMatrix& m) {
  std::vector<double> re, im;
  re.reserve(m.size());
  im.reserve(m.size());
  for (const auto& x : m.entries()) {
    re.push_back(x.real());
    im.push_back(x.imag());
  }
  j = nlohmann::json{{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
}

inline void from_json(const nlohmann::json& j, ComplexMatrix& m) {
  const auto rows = j.at("rows").get<std::size_t>();
  const auto cols = j.at("cols").get<std::size_t>();
  const auto re = j.at("re").get<std::vector<double>>();
  const auto im = j.at("im").get<std::vector<double>>();
  if (re.size() != rows * cols || im.size() != rows * cols)
    fail(ErrorKind::shape, "serialized matrix has wrong entry count");
  std::vector<Complex> entries(rows * cols);
  for (std::size_t k = 0; k < entries.size(); ++k) entries[k] = {re[k], im[k]};
  m = ComplexMatrix(rows, cols, std::move(entries));
}

}  // namespace hyperlab
