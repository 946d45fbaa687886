#pragma once

// Reference computations that share no code path with the library.

#include <array>
#include <complex>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qrb/bethe.hpp"

namespace qrb::testing {

using lcplx = std::complex<long double>;

inline lcplx lpoch(lcplx a, lcplx qq, int n) {
  lcplx r = 1.0L;
  lcplx qk = 1.0L;
  for (int k = 0; k < n; ++k) {
    r *= 1.0L - a * qk;
    qk *= qq;
  }
  return r;
}

/// Terminating 4phi3 summed in extended precision, each term rebuilt from
/// scratch as a ratio of Pochhammer products.
inline cplx phi43_reference(const std::array<cplx, 4>& a, const std::array<cplx, 3>& b, cplx qq,
                            cplx z, int n) {
  const lcplx Q(qq.real(), qq.imag());
  const lcplx Z(z.real(), z.imag());
  lcplx sum = 0.0L;
  lcplx zk = 1.0L;
  for (int k = 0; k <= n; ++k) {
    lcplx num = 1.0L, den = lpoch(Q, Q, k);
    for (cplx x : a) num *= lpoch(lcplx(x.real(), x.imag()), Q, k);
    for (cplx x : b) den *= lpoch(lcplx(x.real(), x.imag()), Q, k);
    sum += num / den * zk;
    zk *= Z;
  }
  return {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
}

/// Polynomial with coefficients in ascending powers.
using Poly = std::vector<cplx>;

inline Poly poly_mul(const Poly& a, const Poly& b) {
  Poly r(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

/// (c0 + c1 x)
inline Poly linear(cplx c0, cplx c1) { return {c0, c1}; }

/// Roots from the eigenvalues of the companion matrix.
inline std::vector<cplx> companion_roots(Poly p) {
  while (p.size() > 1 && std::abs(p.back()) == 0.0) p.pop_back();
  const int n = static_cast<int>(p.size()) - 1;
  if (n < 1) return {};
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) c(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) c(i, n - 1) = -p[static_cast<std::size_t>(i)] / p.back();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(c, false);
  std::vector<cplx> r;
  for (int i = 0; i < n; ++i) r.push_back(es.eigenvalues()[i]);
  return r;
}

/// For the single-root homogeneous equation with eps = -1 the residual is
///   b(x)/b(q x) q^{-2s-1} u^{-3} (p2(x) - p1(x)),   x = u^2,
/// with p1, p2 the quartics obtained by multiplying every linear factor of
/// Lambda_1, Lambda_2 by u. Returns the symmetrized roots of p2 - p1 with
/// trivial (x = +-1) and pole (q x = +-1) roots dropped.
inline std::vector<cplx> one_root_symmetrized(const ModelParams& p) {
  const int ts = p.two_s;
  const cplx z = p.zeta;
  const cplx q = p.q();
  const cplx q2 = q * q;
  auto qp = [&](int n) { return p.qpow(n); };

  Poly p1 = poly_mul(poly_mul(linear(-z, qp(ts + 1) / z), linear(-1.0 / z, qp(ts + 1) * z)),
                     poly_mul(linear(p.b * qp(ts), p.c_star * qp(-ts)), linear(1.0, p.c / p.c_star)));
  Poly p2 = poly_mul(poly_mul(linear(qp(ts - 1) * z, -1.0 / z), linear(qp(ts - 1) / z, -z)),
                     poly_mul(linear(p.c_star * qp(-ts), q2 * p.b * qp(ts)), linear(p.c / p.c_star, q2)));
  Poly d(5);
  for (std::size_t i = 0; i < 5; ++i) d[i] = p2[i] - p1[i];

  std::vector<cplx> out;
  for (cplx x : companion_roots(d)) {
    if (std::abs(x - 1.0) < 1e-8 || std::abs(x + 1.0) < 1e-8) continue;
    if (std::abs(q * x - 1.0) < 1e-8 || std::abs(q * x + 1.0) < 1e-8) continue;
    out.push_back((q * x + 1.0 / (q * x)) / (q + 1.0 / q));
  }
  return out;
}

} // namespace qrb::testing
