#pragma once

// Small dense complex matrices. Dimensions here stay below ~20, so everything
// is row-major std::vector storage and O(n^3) kernels.

#include <cstddef>
#include <span>
#include <vector>

#include "qrb/qnum.hpp"

namespace qrb {

class CMatrix {
public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0}) {}

  static CMatrix identity(std::size_t n);
  static CMatrix diagonal(std::span<const cplx> d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::vector<cplx> column(std::size_t c) const;
  std::vector<cplx> row(std::size_t r) const;
  void set_column(std::size_t c, std::span<const cplx> v);

  CMatrix transpose() const;

  CMatrix& operator+=(const CMatrix& o);
  CMatrix& operator-=(const CMatrix& o);
  CMatrix& operator*=(cplx s);

  /// max |a_ij|
  double max_abs() const;
  /// Frobenius norm.
  double norm() const;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator*(cplx s, CMatrix a);
CMatrix operator*(const CMatrix& a, const CMatrix& b);
std::vector<cplx> operator*(const CMatrix& a, std::span<const cplx> x);

/// x^T A (row vector times matrix).
std::vector<cplx> row_times(std::span<const cplx> x, const CMatrix& a);

/// q-commutator [X, Y]_q = q X Y - q^{-1} Y X.
CMatrix qcommutator(const CMatrix& x, const CMatrix& y, cplx q);

double max_abs(std::span<const cplx> v);
double norm2(std::span<const cplx> v);

/// Partial-pivoted LU of a square matrix. Pivots with modulus below
/// `floor` are replaced by `floor` (keeps solves finite on singular input,
/// which is what inverse iteration wants).
class LU {
public:
  explicit LU(const CMatrix& a, double floor = 0.0);

  std::vector<cplx> solve(std::span<const cplx> b) const;
  /// Smallest pivot modulus before flooring.
  double min_pivot() const { return min_pivot_; }
  cplx determinant() const;

private:
  CMatrix lu_;
  std::vector<std::size_t> perm_;
  int sign_ = 1;
  double min_pivot_ = 0.0;
};

/// Inverse of a square matrix; throws NumericError when singular.
CMatrix inverse(const CMatrix& a);

} // namespace qrb
