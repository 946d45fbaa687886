#include "qrb/qnum.hpp"

#include <cmath>

namespace qrb {

namespace {

bool near(cplx a, cplx b, double rel) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

} // namespace

QBase::QBase(cplx q) : q_(q), q2_(q * q) {
  if (!is_finite(q) || std::abs(q) < kTinyModulus)
    throw DomainError("q must be finite and nonzero");
  if (std::abs(q - 1.0) < 1e-14 || std::abs(q + 1.0) < 1e-14)
    throw DomainError("q must differ from +1 and -1");
}

cplx QBase::pow(int n) const { return ipow(q_, n); }

int QBase::root_of_unity_order(int kmax, double tol) const {
  cplx p = 1.0;
  for (int k = 1; k <= kmax; ++k) {
    p *= q2_;
    if (std::abs(p - 1.0) <= tol) return k;
  }
  return 0;
}

cplx ipow(cplx z, int n) {
  if (n < 0) return 1.0 / ipow(z, -n);
  cplx result = 1.0;
  cplx base = z;
  unsigned e = static_cast<unsigned>(n);
  while (e != 0) {
    if (e & 1u) result *= base;
    base *= base;
    e >>= 1u;
  }
  return result;
}

cplx bfun(cplx x) {
  if (std::abs(x) < kTinyModulus) throw DomainError("b(x) requires x != 0");
  return x - 1.0 / x;
}

cplx qnumber(int n, const QBase& base) {
  const cplx q = base.q();
  return (ipow(q, n) - ipow(q, -n)) / (q - 1.0 / q);
}

cplx qpoch(cplx a, cplx qq, int n) {
  cplx prod = 1.0;
  cplx aq = a;
  for (int k = 0; k < n; ++k) {
    prod *= 1.0 - aq;
    aq *= qq;
  }
  return prod;
}

cplx qpoch(std::span<const cplx> a, cplx qq, int n) {
  cplx prod = 1.0;
  for (cplx ai : a) prod *= qpoch(ai, qq, n);
  return prod;
}

cplx qpoch(std::initializer_list<cplx> a, cplx qq, int n) {
  return qpoch(std::span<const cplx>(a.begin(), a.size()), qq, n);
}

int phi43_termination_order(const std::array<cplx, 4>& numer, cplx qq,
                            int terms) {
  int order = -1;
  cplx qneg = 1.0; // qq^{-n}
  for (int n = 0; n < terms; ++n) {
    for (cplx a : numer) {
      if (near(a, qneg, 1e-12)) {
        order = n;
        break;
      }
    }
    if (order >= 0) break;
    qneg /= qq;
  }
  return order;
}

cplx phi43(const std::array<cplx, 4>& numer, const std::array<cplx, 3>& denom,
           cplx qq, cplx z, int terms) {
  const int n = phi43_termination_order(numer, qq, terms);
  if (n < 0) throw DomainError("phi43: series does not terminate within the requested number of terms");

  cplx sum = 1.0;
  cplx term = 1.0;
  std::array<cplx, 4> a = numer;
  std::array<cplx, 3> b = denom;
  cplx qk = qq; // qq^{k+1}, for the (qq;qq)_k factor
  for (int k = 0; k < n; ++k) {
    cplx num = z;
    for (cplx& ai : a) {
      num *= 1.0 - ai;
      ai *= qq;
    }
    cplx den = 1.0 - qk;
    for (cplx& bi : b) {
      const cplx f = 1.0 - bi;
      if (std::abs(f) <= 1e-14 * std::max(1.0, std::abs(bi)))
        throw DomainError("phi43: vanishing denominator factor");
      den *= f;
      bi *= qq;
    }
    if (std::abs(1.0 - qk) <= 1e-14) throw DomainError("phi43: (qq;qq)_k vanishes");
    qk *= qq;
    term *= num / den;
    sum += term;
  }
  if (!is_finite(sum)) throw DomainError("phi43: non-finite result");
  return sum;
}

} // namespace qrb
