#include "qrb/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qrb {

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::diagonal(std::span<const cplx> d) {
  CMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

std::vector<cplx> CMatrix::column(std::size_t c) const {
  std::vector<cplx> v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

std::vector<cplx> CMatrix::row(std::size_t r) const {
  return {data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
          data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_)};
}

void CMatrix::set_column(std::size_t c, std::span<const cplx> v) {
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
}

CMatrix CMatrix::transpose() const {
  CMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

CMatrix& CMatrix::operator*=(cplx s) {
  for (cplx& x : data_) x *= s;
  return *this;
}

double CMatrix::max_abs() const { return qrb::max_abs(data_); }

double CMatrix::norm() const { return norm2(data_); }

CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
CMatrix operator*(cplx s, CMatrix a) { return a *= s; }

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  CMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{0.0}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

std::vector<cplx> operator*(const CMatrix& a, std::span<const cplx> x) {
  std::vector<cplx> y(a.rows(), cplx{0.0});
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  return y;
}

std::vector<cplx> row_times(std::span<const cplx> x, const CMatrix& a) {
  std::vector<cplx> y(a.cols(), cplx{0.0});
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[j] += x[i] * a(i, j);
  return y;
}

CMatrix qcommutator(const CMatrix& x, const CMatrix& y, cplx q) {
  return q * (x * y) - (1.0 / q) * (y * x);
}

double max_abs(std::span<const cplx> v) {
  double m = 0.0;
  for (cplx x : v) m = std::max(m, std::abs(x));
  return m;
}

double norm2(std::span<const cplx> v) {
  double s = 0.0;
  for (cplx x : v) s += std::norm(x);
  return std::sqrt(s);
}

LU::LU(const CMatrix& a, double floor)
    : lu_(a), perm_(a.rows()), min_pivot_(std::numeric_limits<double>::infinity()) {
  const std::size_t n = a.rows();
  for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(lu_(i, k)) > best) {
        best = std::abs(lu_(i, k));
        piv = i;
      }
    }
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(piv, j));
      std::swap(perm_[k], perm_[piv]);
      sign_ = -sign_;
    }
    min_pivot_ = std::min(min_pivot_, best);
    if (best < floor) lu_(k, k) = floor;
    const cplx d = lu_(k, k);
    if (d == cplx{0.0}) continue;
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx l = lu_(i, k) / d;
      lu_(i, k) = l;
      if (l == cplx{0.0}) continue;
      for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= l * lu_(k, j);
    }
  }
}

std::vector<cplx> LU::solve(std::span<const cplx> b) const {
  const std::size_t n = lu_.rows();
  std::vector<cplx> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
  for (std::size_t ii = n; ii-- > 0;) {
    for (std::size_t j = ii + 1; j < n; ++j) x[ii] -= lu_(ii, j) * x[j];
    if (lu_(ii, ii) == cplx{0.0}) throw NumericError("LU solve: singular matrix");
    x[ii] /= lu_(ii, ii);
  }
  return x;
}

cplx LU::determinant() const {
  cplx d = static_cast<double>(sign_);
  for (std::size_t i = 0; i < lu_.rows(); ++i) d *= lu_(i, i);
  return d;
}

CMatrix inverse(const CMatrix& a) {
  const std::size_t n = a.rows();
  const LU lu(a);
  if (lu.min_pivot() <= 1e-300) throw NumericError("inverse: singular matrix");
  CMatrix inv(n, n);
  std::vector<cplx> e(n, cplx{0.0});
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    inv.set_column(j, lu.solve(e));
    e[j] = 0.0;
  }
  return inv;
}

} // namespace qrb
