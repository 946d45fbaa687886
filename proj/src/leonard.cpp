#include "qrb/leonard.hpp"

#include <cmath>

namespace qrb {

namespace {

struct Swapped {
  cplx b, c, bs, cs, zeta;
};

// (b, c, b*, c*, zeta) for A*, swapped for A.
Swapped roles(CoeffKind kind, const ModelParams& p) {
  if (kind == CoeffKind::Astar || kind == CoeffKind::Astar_dual)
    return {p.b, p.c, p.b_star, p.c_star, p.zeta};
  return {p.b_star, p.c_star, p.b, p.c, 1.0 / p.zeta};
}

cplx checked_div(cplx num, cplx den) {
  if (std::abs(den) <= 1e-300 || !is_finite(num / den))
    throw DomainError("tridiagonal coefficient: vanishing denominator (non-generic parameters)");
  return num / den;
}

// X_{M,M-1}, 1 <= M <= 2s.
cplx lower_entry(const Swapped& r, const ModelParams& p, int m) {
  const int ts = p.two_s;
  const cplx z2 = r.zeta * r.zeta;
  const cplx num = p.qpow(2 - 2 * ts) * (1.0 - p.qpow(2 * m)) *
                   (r.c - r.b * p.qpow(2 * m + 2 * ts)) *
                   (r.bs * p.qpow(ts - 1) / z2 + r.b * p.qpow(2 * m - 2)) *
                   (r.c * p.qpow(ts - 1) * z2 + r.cs * p.qpow(2 * m - 2));
  const cplx den = (r.c - r.b * p.qpow(4 * m - 2)) * (r.c - r.b * p.qpow(4 * m));
  return checked_div(num, den);
}

// X_{M-1,M}, 1 <= M <= 2s.
cplx upper_entry(const Swapped& r, const ModelParams& p, int m) {
  const int ts = p.two_s;
  const cplx z2 = r.zeta * r.zeta;
  const cplx num = (1.0 - p.qpow(2 * m - 2 * ts - 2)) *
                   (r.c - r.b * p.qpow(2 * m - 2)) *
                   (r.c + r.bs / z2 * p.qpow(2 * m + ts - 1)) *
                   (r.cs + r.b * z2 * p.qpow(2 * m + ts - 1));
  const cplx den = (r.c - r.b * p.qpow(4 * m - 4)) * (r.c - r.b * p.qpow(4 * m - 2));
  return checked_div(num, den);
}

cplx gauge_at(std::span<const cplx> g, int k) {
  return g.empty() ? cplx{1.0} : g[static_cast<std::size_t>(k)];
}

} // namespace

cplx TridiagCoeffs::at(int row, int col) const {
  const int n = size();
  if (row < 0 || col < 0 || row >= n || col >= n) return 0.0;
  if (row == col) return diag[row];
  if (row == col + 1) return lower[row];
  if (col == row + 1) return upper[col];
  return 0.0;
}

TridiagCoeffs tridiag_coeffs(CoeffKind kind, const ModelParams& p,
                             std::span<const cplx> xi, std::span<const cplx> xi_star) {
  const Swapped r = roles(kind, p);
  const int d = p.dim();
  TridiagCoeffs t;
  t.lower.assign(d, 0.0);
  t.diag.assign(d, 0.0);
  t.upper.assign(d, 0.0);
  for (int m = 1; m < d; ++m) {
    t.lower[m] = lower_entry(r, p, m);
    t.upper[m] = upper_entry(r, p, m);
  }
  const cplx theta0 = r.bs + r.cs;
  for (int m = 0; m < d; ++m) {
    const cplx up = m + 1 < d ? t.upper[m + 1] : cplx{0.0};
    t.diag[m] = theta0 - up - t.lower[m];
  }

  const bool dual = kind == CoeffKind::Astar_dual || kind == CoeffKind::A_dual;
  if (dual) {
    const std::span<const cplx> g = kind == CoeffKind::Astar_dual ? xi : xi_star;
    for (int m = 1; m < d; ++m) {
      t.lower[m] *= gauge_at(g, m) / gauge_at(g, m - 1);
      t.upper[m] *= gauge_at(g, m - 1) / gauge_at(g, m);
    }
  }
  return t;
}

cplx coeff(CoeffKind kind, int row, int col, const ModelParams& p,
           std::span<const cplx> xi, std::span<const cplx> xi_star) {
  if (std::abs(row - col) > 1)
    throw DomainError("coeff: |row - col| must be at most 1");
  const int d = p.dim();
  if (row < 0 || col < 0 || row >= d || col >= d) return 0.0;

  const Swapped r = roles(kind, p);
  cplx value;
  if (row == col + 1) {
    value = lower_entry(r, p, row);
  } else if (col == row + 1) {
    value = upper_entry(r, p, col);
  } else {
    const cplx up = row + 1 < d ? upper_entry(r, p, row + 1) : cplx{0.0};
    const cplx lo = row > 0 ? lower_entry(r, p, row) : cplx{0.0};
    value = r.bs + r.cs - up - lo;
  }
  if (kind == CoeffKind::Astar_dual) value *= gauge_at(xi, row) / gauge_at(xi, col);
  if (kind == CoeffKind::A_dual) value *= gauge_at(xi_star, row) / gauge_at(xi_star, col);
  return value;
}

cplx TridiagonalRealization::astar_dual(int row, int col) const {
  const int d = astar.size();
  if (row < 0 || col < 0 || row >= d || col >= d) return 0.0;
  return astar.at(row, col) * xi[row] / xi[col];
}

cplx TridiagonalRealization::a_dual(int row, int col) const {
  const int d = a.size();
  if (row < 0 || col < 0 || row >= d || col >= d) return 0.0;
  return a.at(row, col) * xi_star[row] / xi_star[col];
}

TridiagonalRealization build(const ModelParams& p, Gauge gauge,
                             const std::optional<GaugeChoice>& xi_choice) {
  const int d = p.dim();
  TridiagonalRealization real;
  real.params = p;
  real.gauge = gauge;
  real.xi.assign(d, 1.0);
  real.xi_star.assign(d, 1.0);
  if (xi_choice) {
    if (static_cast<int>(xi_choice->xi.size()) == d) real.xi = xi_choice->xi;
    if (static_cast<int>(xi_choice->xi_star.size()) == d) real.xi_star = xi_choice->xi_star;
    for (int k = 0; k < d; ++k)
      if (std::abs(real.xi[k]) < kTinyModulus || std::abs(real.xi_star[k]) < kTinyModulus)
        throw DomainError("gauge factors xi must be nonzero");
  }
  real.astar = tridiag_coeffs(CoeffKind::Astar, p);
  real.a = tridiag_coeffs(CoeffKind::A, p);

  const Spectrum s = spectrum_unchecked(p);
  const TridiagCoeffs& band = gauge == Gauge::theta_star_basis ? real.a : real.astar;
  CMatrix tri(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = std::max(0, r - 1); c <= std::min(d - 1, r + 1); ++c)
      tri(r, c) = band.at(r, c);

  if (gauge == Gauge::theta_star_basis) {
    real.A_mat = std::move(tri);
    real.Astar_mat = CMatrix::diagonal(s.theta_star);
  } else {
    real.A_mat = CMatrix::diagonal(s.theta);
    real.Astar_mat = std::move(tri);
  }
  return real;
}

ResidualPair verify_aw(const TridiagonalRealization& real, const StructureConstants& sc) {
  const cplx q = real.params.q();
  const CMatrix& a = real.A_mat;
  const CMatrix& as = real.Astar_mat;
  const CMatrix id = CMatrix::identity(a.rows());

  const CMatrix lhs1 = qcommutator(a, qcommutator(a, as, q), 1.0 / q);
  const CMatrix rhs1 = sc.rho * as + sc.omega * a + sc.eta * id;
  const CMatrix lhs2 = qcommutator(as, qcommutator(as, a, q), 1.0 / q);
  const CMatrix rhs2 = sc.rho * a + sc.omega * as + sc.eta_star * id;

  return {(lhs1 - rhs1).max_abs() / lhs1.max_abs(),
          (lhs2 - rhs2).max_abs() / lhs2.max_abs()};
}

namespace {

double cayley_hamilton(const CMatrix& m, const std::vector<cplx>& values) {
  const std::size_t n = m.rows();
  const CMatrix id = CMatrix::identity(n);
  const double mnorm = m.max_abs();
  CMatrix prod = id;
  double scale = 1.0;
  for (cplx v : values) {
    prod = prod * (m - v * id);
    scale *= mnorm + std::abs(v);
  }
  return prod.max_abs() / scale;
}

} // namespace

ResidualPair verify_cayley_hamilton(const TridiagonalRealization& real) {
  const Spectrum s = spectrum_unchecked(real.params);
  return {cayley_hamilton(real.A_mat, s.theta),
          cayley_hamilton(real.Astar_mat, s.theta_star)};
}

namespace {

void pin(std::vector<cplx>& v) {
  std::size_t best = 0;
  double mag = -1.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    // Ties go to the lowest index: strict comparison with a relative guard.
    if (std::abs(v[i]) > mag * (1.0 + 1e-12)) {
      mag = std::abs(v[i]);
      best = i;
    }
  }
  const cplx s = v[best];
  for (cplx& x : v) x /= s;
  v[best] = 1.0;
}

std::vector<cplx> null_vector(const CMatrix& shifted, double floor) {
  const std::size_t n = shifted.rows();
  const LU lu(shifted, floor);
  // Deterministic, generic start vector.
  std::vector<cplx> x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = cplx{1.0 + 0.1 * static_cast<double>(i), 0.05 * static_cast<double>(i * i % 7)};
  for (int it = 0; it < 3; ++it) {
    x = lu.solve(x);
    const double s = max_abs(x);
    if (!(s > 0.0) || !std::isfinite(s)) throw EigenMismatch("inverse iteration diverged");
    for (cplx& xi : x) xi /= s;
  }
  pin(x);
  return x;
}

} // namespace

EigenFamily eigen_family(const CMatrix& matrix, std::span<const cplx> known_values,
                         double tol) {
  const std::size_t n = matrix.rows();
  if (matrix.cols() != n || known_values.size() != n)
    throw DomainError("eigen_family: square matrix and one value per row required");
  const double mnorm = std::max(matrix.max_abs(), 1e-300);
  const double floor = 1e-15 * mnorm;
  const CMatrix id = CMatrix::identity(n);
  const CMatrix mt = matrix.transpose();

  EigenFamily fam;
  fam.values.assign(known_values.begin(), known_values.end());
  fam.right_vectors = CMatrix(n, n);
  fam.left_vectors = CMatrix(n, n);
  fam.residuals.assign(n, 0.0);

  for (std::size_t k = 0; k < n; ++k) {
    const cplx lambda = known_values[k];
    const std::vector<cplx> v = null_vector(matrix - lambda * id, floor);
    const std::vector<cplx> w = null_vector(mt - lambda * id, floor);

    std::vector<cplx> rv = matrix * std::span<const cplx>(v);
    std::vector<cplx> lw = row_times(w, matrix);
    for (std::size_t i = 0; i < n; ++i) {
      rv[i] -= lambda * v[i];
      lw[i] -= lambda * w[i];
    }
    const double res = std::max(max_abs(rv) / max_abs(v), max_abs(lw) / max_abs(w)) / mnorm;
    if (!(res <= tol))
      throw EigenMismatch("eigen_family: value " + std::to_string(k) +
                          " is not an eigenvalue of the matrix (residual " +
                          std::to_string(res) + ")");
    fam.residuals[k] = res;
    fam.right_vectors.set_column(k, v);
    for (std::size_t i = 0; i < n; ++i) fam.left_vectors(k, i) = w[i];
  }
  return fam;
}

double biorthogonality_defect(const EigenFamily& fam) {
  const std::size_t n = fam.values.size();
  double worst = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::vector<cplx> w = fam.left(j);
    for (std::size_t k = 0; k < n; ++k) {
      if (j == k) continue;
      const std::vector<cplx> v = fam.right(k);
      const std::vector<cplx> wk = fam.left(k);
      cplx off = 0.0, diag = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        off += w[i] * v[i];
        diag += wk[i] * v[i];
      }
      worst = std::max(worst, std::abs(off) / std::abs(diag));
    }
  }
  return worst;
}

} // namespace qrb
