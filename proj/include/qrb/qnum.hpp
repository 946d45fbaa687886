#pragma once

// Complex q-arithmetic and terminating basic hypergeometric series.

#include <array>
#include <complex>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>

namespace qrb {

using cplx = std::complex<double>;

/// Base class for every numerical failure raised by the library.
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a formula (zero where a nonzero value is
/// required, a pole hit, a non-terminating series, ...).
class DomainError : public NumericError {
public:
  using NumericError::NumericError;
};

inline bool is_finite(cplx z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// Arguments with modulus below this are treated as zero by inverting helpers.
inline constexpr double kTinyModulus = 1e-280;

/// The deformation parameter q together with q^2.
class QBase {
public:
  /// Throws DomainError when q is zero, non-finite, or q = +-1.
  explicit QBase(cplx q);

  cplx q() const { return q_; }
  cplx q2() const { return q2_; }

  /// q^n for any integer n, by repeated squaring.
  cplx pow(int n) const;

  /// Smallest k in [1, kmax] with |q^{2k} - 1| <= tol, or 0 when none.
  int root_of_unity_order(int kmax, double tol) const;

private:
  cplx q_;
  cplx q2_;
};

/// z^n for integer n by repeated squaring.
cplx ipow(cplx z, int n);

/// b(x) = x - 1/x.
cplx bfun(cplx x);

/// [n]_q = (q^n - q^{-n}) / (q - q^{-1}).
cplx qnumber(int n, const QBase& base);

/// (a; qq)_n = prod_{k=0}^{n-1} (1 - a qq^k).
cplx qpoch(cplx a, cplx qq, int n);

/// (a_1, ..., a_m; qq)_n as the product of the single forms.
cplx qpoch(std::span<const cplx> a, cplx qq, int n);
cplx qpoch(std::initializer_list<cplx> a, cplx qq, int n);

/// Terminating 4phi3 series
///   sum_{k=0}^{n} (a1,a2,a3,a4;qq)_k / ((b1,b2,b3;qq)_k (qq;qq)_k) z^k
/// where n is the termination order: the smallest n >= 0 with some numerator
/// parameter equal to qq^{-n} (detected to relative tolerance 1e-12).
/// Terms are built by running products and accumulated in ascending k.
///
/// Throws DomainError if no numerator terminates within `terms` terms, or if
/// a denominator factor (including (qq;qq)_k) vanishes before termination.
cplx phi43(const std::array<cplx, 4>& numer, const std::array<cplx, 3>& denom,
           cplx qq, cplx z, int terms);

/// Termination order of phi43 for the given numerator parameters, or -1 when
/// none of them equals qq^{-n} with 0 <= n < terms.
int phi43_termination_order(const std::array<cplx, 4>& numer, cplx qq,
                            int terms);

} // namespace qrb
