#include "qrb/transition.hpp"

#include <algorithm>
#include <cmath>

namespace qrb {

cplx racah(int M, int N, const ModelParams& p) {
  const int ts = p.two_s;
  if (M < 0 || N < 0 || M > ts || N > ts) throw DomainError("racah: index out of range");
  const cplx q2 = p.base.q2();
  const cplx z2 = p.zeta * p.zeta;
  const cplx qs1 = p.qpow(ts + 1);
  const std::array<cplx, 4> numer = {p.qpow(-2 * M), p.b / p.c * p.qpow(2 * M),
                                     p.qpow(-2 * N), p.b_star / p.c_star * p.qpow(2 * N)};
  const std::array<cplx, 3> denom = {-(p.b / p.c_star) * qs1 * z2,
                                     -(p.b_star / p.c) * qs1 / z2, p.qpow(-2 * ts)};
  return phi43(numer, denom, q2, q2, p.dim());
}

CMatrix racah_table(const ModelParams& p) {
  const int d = p.dim();
  CMatrix r(d, d);
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n) r(m, n) = racah(m, n, p);
  return r;
}

CMatrix racah_table_recurrence(const TridiagonalRealization& real) {
  const int d = real.params.dim();
  const Spectrum s = spectrum_unchecked(real.params);
  const TridiagCoeffs& as = real.astar;
  CMatrix r(d, d);
  for (int n = 0; n < d; ++n) {
    cplx prev = 0.0;
    cplx cur = 1.0;
    r(0, n) = cur;
    for (int m = 0; m + 1 < d; ++m) {
      const cplx up = as.at(m, m + 1);
      if (std::abs(up) < kTinyModulus) throw DomainError("recurrence: zero A*_{M,M+1}");
      const cplx next = ((s.theta_star[n] - as.at(m, m)) * cur - as.at(m, m - 1) * prev) / up;
      prev = cur;
      cur = next;
      r(m + 1, n) = cur;
    }
  }
  return r;
}

namespace {

cplx checked_ratio(cplx num, cplx den, const char* what) {
  if (std::abs(den) < kTinyModulus) throw DomainError(std::string(what) + ": vanishing denominator");
  return num / den;
}

struct NormalizerRoles {
  cplx b, c, bs, cs, zeta;
};

// k_N for the given roles; k*_M uses (b <-> b*, c <-> c*, zeta -> 1/zeta).
cplx k_coefficient(const NormalizerRoles& r, const ModelParams& p, int n) {
  const int ts = p.two_s;
  const cplx q2 = p.base.q2();
  const cplx z2 = r.zeta * r.zeta;
  const cplx num = qpoch({-(r.bs / r.c) * p.qpow(ts + 1) / z2, -(r.b / r.cs) * p.qpow(ts + 1) * z2,
                          r.bs / r.cs, p.qpow(-2 * ts)},
                         q2, n);
  const cplx den = qpoch({q2, -(r.bs / r.b) * p.qpow(1 - ts) / z2,
                          -(r.c / r.cs) * p.qpow(1 - ts) * z2, r.bs / r.cs * p.qpow(2 * ts + 2)},
                         q2, n);
  const cplx tail = (1.0 - r.bs / r.cs * p.qpow(4 * n)) / (ipow(r.b / r.c, n) * (1.0 - r.bs / r.cs));
  return checked_ratio(num, den, "k_N") * tail;
}

} // namespace

Normalizers normalizers(const ModelParams& p) {
  const int d = p.dim();
  const int ts = p.two_s;
  const NormalizerRoles direct{p.b, p.c, p.b_star, p.c_star, p.zeta};
  const NormalizerRoles swapped{p.b_star, p.c_star, p.b, p.c, 1.0 / p.zeta};
  Normalizers out;
  out.kN.resize(d);
  out.kM_star.resize(d);
  for (int k = 0; k < d; ++k) {
    out.kN[k] = k_coefficient(direct, p, k);
    out.kM_star[k] = k_coefficient(swapped, p, k);
  }
  const cplx q2 = p.base.q2();
  const cplx z2 = p.zeta * p.zeta;
  const cplx num = qpoch({p.b / p.c * q2, p.b_star / p.c_star * q2}, q2, ts);
  const cplx den = ipow(-(p.b_star / p.c) * p.qpow(ts + 1) / z2, ts) *
                   qpoch({-(p.b / p.b_star) * p.qpow(1 - ts) * z2,
                          -(p.c / p.c_star) * p.qpow(1 - ts) * z2},
                         q2, ts);
  out.nu0 = checked_ratio(num, den, "nu0");
  for (cplx k : out.kN)
    if (!is_finite(k)) throw DomainError("k_N: non-finite value");
  for (cplx k : out.kM_star)
    if (!is_finite(k)) throw DomainError("k*_M: non-finite value");
  return out;
}

TransitionData build_transition(const ModelParams& p) {
  const int d = p.dim();
  TransitionData td;
  td.R = racah_table(p);
  Normalizers nz = normalizers(p);
  td.kN = std::move(nz.kN);
  td.kM_star = std::move(nz.kM_star);
  td.nu0 = nz.nu0;
  td.P = CMatrix(d, d);
  td.Pinv = CMatrix(d, d);
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n) {
      td.P(m, n) = td.kN[n] * td.R(m, n);
      td.Pinv(n, m) = td.kM_star[m] * td.R(m, n) / td.nu0;
    }
  return td;
}

ResidualPair verify_recurrences(const TransitionData& td, const TridiagonalRealization& real) {
  const int d = real.params.dim();
  const Spectrum s = spectrum_unchecked(real.params);
  auto r = [&](int m, int n) -> cplx {
    if (m < 0 || n < 0 || m >= d || n >= d) return 0.0;
    return td.R(m, n);
  };
  double rec = 0.0, rec_scale = 0.0, qd = 0.0, qd_scale = 0.0;
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n) {
      const cplx lhs1 = s.theta_star[n] * r(m, n);
      const cplx rhs1 = real.astar.at(m, m + 1) * r(m + 1, n) + real.astar.at(m, m) * r(m, n) +
                        real.astar.at(m, m - 1) * r(m - 1, n);
      rec = std::max(rec, std::abs(lhs1 - rhs1));
      rec_scale = std::max(rec_scale, std::abs(lhs1));

      const cplx lhs2 = s.theta[m] * r(m, n);
      const cplx rhs2 = real.a.at(n, n + 1) * r(m, n + 1) + real.a.at(n, n) * r(m, n) +
                        real.a.at(n, n - 1) * r(m, n - 1);
      qd = std::max(qd, std::abs(lhs2 - rhs2));
      qd_scale = std::max(qd_scale, std::abs(lhs2));
    }
  return {rec / rec_scale, qd / qd_scale};
}

ResidualPair inverse_residuals(const TransitionData& td) {
  const CMatrix id = CMatrix::identity(td.P.rows());
  return {(td.Pinv * td.P - id).max_abs(), (td.P * td.Pinv - id).max_abs()};
}

ResidualPair orthogonality_residuals(const TransitionData& td) {
  const std::size_t d = td.R.rows();
  double r1 = 0.0, s1 = 0.0, r2 = 0.0, s2 = 0.0;
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) {
      cplx sum1 = 0.0, sum2 = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        sum1 += td.kN[k] * td.R(a, k) * td.R(b, k);
        sum2 += td.kM_star[k] * td.R(k, a) * td.R(k, b);
      }
      const cplx want1 = a == b ? td.nu0 / td.kM_star[a] : cplx{0.0};
      const cplx want2 = a == b ? td.nu0 / td.kN[a] : cplx{0.0};
      r1 = std::max(r1, std::abs(sum1 - want1));
      r2 = std::max(r2, std::abs(sum2 - want2));
      s1 = std::max(s1, std::abs(want1));
      s2 = std::max(s2, std::abs(want2));
    }
  return {r1 / s1, r2 / s2};
}

double pinv_eigen_residual(const TransitionData& td, const TridiagonalRealization& real) {
  const Spectrum s = spectrum_unchecked(real.params);
  const std::size_t d = td.Pinv.rows();
  const double anorm = real.A_mat.max_abs();
  double worst = 0.0;
  for (std::size_t m = 0; m < d; ++m) {
    const std::vector<cplx> v = td.Pinv.column(m);
    std::vector<cplx> av = real.A_mat * std::span<const cplx>(v);
    for (std::size_t i = 0; i < d; ++i) av[i] -= s.theta[m] * v[i];
    worst = std::max(worst, max_abs(av) / (anorm * max_abs(v)));
  }
  return worst;
}

cplx racah_from_scalar_products(const EigenFamily& fam_A, int M, int N, RacahSide side) {
  const auto m = static_cast<std::size_t>(M);
  const auto n = static_cast<std::size_t>(N);
  cplx num, den;
  if (side == RacahSide::left) {
    // <theta_M|theta*_N> = w_M[N]
    const CMatrix& w = fam_A.left_vectors;
    num = w(m, n) * w(0, 0);
    den = w(0, n) * w(m, 0);
  } else {
    // <theta*_N|theta_M> = v_M[N]
    const CMatrix& v = fam_A.right_vectors;
    num = v(n, m) * v(0, 0);
    den = v(0, m) * v(n, 0);
  }
  if (std::abs(den) < 1e-300) throw DomainError("double ratio: vanishing scalar product");
  return num / den;
}

CMatrix racah_table_double_ratio(const EigenFamily& fam_A, RacahSide side) {
  const std::size_t d = fam_A.values.size();
  CMatrix r(d, d);
  for (std::size_t m = 0; m < d; ++m)
    for (std::size_t n = 0; n < d; ++n)
      r(m, n) = racah_from_scalar_products(fam_A, static_cast<int>(m), static_cast<int>(n), side);
  return r;
}

namespace {

cplx hom_product(NormalizerKind kind, std::span<const cplx> roots,
                 const TridiagonalRealization& real) {
  const cplx q = real.params.q();
  cplx prod = 1.0;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const int k = static_cast<int>(i) + 1;
    const cplx u = roots[i];
    const cplx bu = bfun(u * u);
    cplx factor;
    switch (kind) {
    case NormalizerKind::N_hom: factor = q * u * bu * real.astar.at(k, k - 1); break;
    case NormalizerKind::Nstar_hom: factor = -bu * real.a.at(k, k - 1) / (q * u); break;
    case NormalizerKind::Ntilde_hom: factor = u * bu * real.astar_dual(k, k - 1) / q; break;
    case NormalizerKind::Ntildestar_hom: factor = -q * bu * real.a_dual(k, k - 1) / u; break;
    default: throw DomainError("bethe_normalizer: not a homogeneous kind");
    }
    if (std::abs(factor) < kTinyModulus || !is_finite(factor))
      throw DomainError("bethe_normalizer: zero factor (trivial root or vanishing coefficient)");
    prod *= factor;
  }
  return 1.0 / prod;
}

} // namespace

cplx bethe_normalizer(NormalizerKind kind, std::span<const cplx> roots,
                      const TransitionData& td, const TridiagonalRealization& real, int index) {
  const int ts = real.params.two_s;
  for (cplx u : roots)
    if (std::abs(u) < kTinyModulus) throw DomainError("bethe_normalizer: zero root");

  switch (kind) {
  case NormalizerKind::N_hom:
  case NormalizerKind::Nstar_hom:
  case NormalizerKind::Ntilde_hom:
  case NormalizerKind::Ntildestar_hom:
    if (static_cast<int>(roots.size()) > ts)
      throw DomainError("bethe_normalizer: more than 2s roots");
    return hom_product(kind, roots, real);
  default:
    break;
  }

  if (static_cast<int>(roots.size()) != ts)
    throw DomainError("bethe_normalizer: inhomogeneous kinds need exactly 2s roots");
  if (index < 0 || index > ts) throw DomainError("bethe_normalizer: index out of range");
  const auto top = static_cast<std::size_t>(ts);
  const auto idx = static_cast<std::size_t>(index);
  switch (kind) {
  case NormalizerKind::N_inhom:
    return hom_product(NormalizerKind::Nstar_hom, roots, real) * td.Pinv(top, idx);
  case NormalizerKind::Nstar_inhom:
    return hom_product(NormalizerKind::N_hom, roots, real) * td.P(top, idx);
  case NormalizerKind::Ntilde_inhom:
    return hom_product(NormalizerKind::Ntildestar_hom, roots, real) * td.P(idx, top) *
           real.xi[idx] / real.xi_star[top];
  case NormalizerKind::Ntildestar_inhom:
    return hom_product(NormalizerKind::Ntilde_hom, roots, real) * td.Pinv(idx, top) *
           real.xi_star[idx] / real.xi[top];
  default:
    throw DomainError("bethe_normalizer: unknown kind");
  }
}

} // namespace qrb
