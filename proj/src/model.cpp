#include "qrb/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qrb {

namespace {

bool nonzero_finite(cplx z) {
  return is_finite(z) && std::abs(z) >= kTinyModulus;
}

// |a + b| small compared with |a| + |b|.
bool cancels(cplx a, cplx b, double tol) {
  return std::abs(a + b) <= tol * (std::abs(a) + std::abs(b));
}

std::string fmt(cplx z) {
  std::ostringstream os;
  os.precision(6);
  os << "(" << z.real() << "," << z.imag() << ")";
  return os.str();
}

} // namespace

void ModelParams::validate() const {
  if (two_s < 1) throw InvalidParams("two_s must be >= 1");
  const std::pair<const char*, cplx> fields[] = {
      {"b", b}, {"c", c}, {"b_star", b_star}, {"c_star", c_star},
      {"zeta", zeta}, {"chi", chi}};
  for (const auto& [name, value] : fields) {
    if (!nonzero_finite(value))
      throw InvalidParams(std::string(name) + " must be finite and nonzero");
  }
  if (!is_finite(alpha) || !is_finite(beta))
    throw InvalidParams("alpha and beta must be finite");
  const cplx bc = b * c;
  if (std::abs(bc - b_star * c_star) > 1e-10 * std::abs(bc))
    throw InvalidParams("b*c must equal b_star*c_star");
}

StructureConstants structure_constants(const ModelParams& p) {
  const cplx q = p.q();
  const int ts = p.two_s;
  const cplx qm = q - 1.0 / q;
  const cplx q2m = p.qpow(2) - p.qpow(-2);
  const cplx qp = q + 1.0 / q;
  const cplx z2 = p.zeta * p.zeta + 1.0 / (p.zeta * p.zeta);
  const cplx qs1 = p.qpow(ts + 1) + p.qpow(-ts - 1);
  const cplx x = p.b * p.qpow(ts) + p.c * p.qpow(-ts);
  const cplx xs = p.b_star * p.qpow(ts) + p.c_star * p.qpow(-ts);
  const cplx bc = p.b * p.c;
  const cplx bcs = p.b_star * p.c_star;

  StructureConstants sc;
  sc.rho = -bc * q2m * q2m;
  sc.omega = qm * qm * (bc * z2 * qs1 - x * xs);
  sc.eta = -(q2m * q2m / qp) * bc * (x * z2 - xs * qs1);
  sc.eta_star = -(q2m * q2m / qp) * bcs * (xs * z2 - x * qs1);
  return sc;
}

cplx rho_from_dual(const ModelParams& p) {
  const cplx q2m = p.qpow(2) - p.qpow(-2);
  return -p.b_star * p.c_star * q2m * q2m;
}

double relative_min_gap(const std::vector<cplx>& values) {
  double scale = 0.0;
  for (cplx v : values) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return values.size() > 1 ? 0.0 : 1.0;
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      gap = std::min(gap, std::abs(values[i] - values[j]));
  return gap / scale;
}

Spectrum spectrum_unchecked(const ModelParams& p) {
  Spectrum s;
  const int d = p.dim();
  s.theta.reserve(d);
  s.theta_star.reserve(d);
  for (int k = 0; k < d; ++k) {
    const cplx up = p.qpow(2 * k);
    const cplx dn = p.qpow(-2 * k);
    s.theta.push_back(p.b * up + p.c * dn);
    s.theta_star.push_back(p.b_star * up + p.c_star * dn);
  }
  return s;
}

Spectrum spectrum(const ModelParams& p, double tol) {
  Spectrum s = spectrum_unchecked(p);
  if (relative_min_gap(s.theta) <= tol)
    throw SpectrumDegenerate("eigenvalue sequence theta is degenerate");
  if (relative_min_gap(s.theta_star) <= tol)
    throw SpectrumDegenerate("eigenvalue sequence theta* is degenerate");
  return s;
}

std::string_view to_string(VacuumMode mode) {
  switch (mode) {
  case VacuumMode::minus_vacuum: return "minus_vacuum";
  case VacuumMode::plus_vacuum: return "plus_vacuum";
  case VacuumMode::dual_minus: return "dual_minus";
  case VacuumMode::dual_plus: return "dual_plus";
  case VacuumMode::fix_beta_plus: return "fix_beta_plus";
  case VacuumMode::fix_beta_minus: return "fix_beta_minus";
  case VacuumMode::fix_alpha_plus: return "fix_alpha_plus";
  case VacuumMode::fix_alpha_minus: return "fix_alpha_minus";
  }
  return "unknown";
}

namespace {

// The condition reads (q^2-q^-2) chi^-1 x * coefficient = target with x one
// of alpha or beta.
struct VacuumCondition {
  bool on_alpha;
  cplx coefficient;
  double target;
};

VacuumCondition condition_of(const ModelParams& p, VacuumMode mode) {
  const int m0 = p.m0;
  switch (mode) {
  case VacuumMode::minus_vacuum:
  case VacuumMode::fix_alpha_minus:
    return {true, p.b * p.qpow(-m0), -1.0};
  case VacuumMode::plus_vacuum:
  case VacuumMode::fix_alpha_plus:
    return {true, p.c_star * p.qpow(m0), 1.0};
  case VacuumMode::dual_minus:
    return {false, p.c * p.qpow(m0 - 2), -1.0};
  case VacuumMode::dual_plus:
    return {false, p.b_star * p.qpow(-m0 + 2), 1.0};
  case VacuumMode::fix_beta_plus:
    return {false, p.b_star * p.qpow(-m0), 1.0};
  case VacuumMode::fix_beta_minus:
    return {false, p.c * p.qpow(m0), -1.0};
  }
  throw InvalidParams("unknown vacuum mode");
}

} // namespace

double vacuum_target(VacuumMode mode) {
  switch (mode) {
  case VacuumMode::minus_vacuum:
  case VacuumMode::fix_alpha_minus:
  case VacuumMode::dual_minus:
  case VacuumMode::fix_beta_minus:
    return -1.0;
  default:
    return 1.0;
  }
}

std::pair<cplx, cplx> fix_alpha_beta(const ModelParams& p, VacuumMode mode) {
  if (!nonzero_finite(p.chi)) throw InvalidParams("chi must be nonzero");
  const VacuumCondition cond = condition_of(p, mode);
  const cplx q2m = p.qpow(2) - p.qpow(-2);
  const cplx value = cond.target * p.chi / (q2m * cond.coefficient);

  switch (mode) {
  case VacuumMode::minus_vacuum:
  case VacuumMode::plus_vacuum:
    return {value, 0.0};
  case VacuumMode::dual_minus:
  case VacuumMode::dual_plus:
    return {0.0, value};
  case VacuumMode::fix_alpha_plus:
  case VacuumMode::fix_alpha_minus:
    return {value, p.beta};
  case VacuumMode::fix_beta_plus:
  case VacuumMode::fix_beta_minus:
    return {p.alpha, value};
  }
  return {p.alpha, p.beta};
}

cplx vacuum_condition(const ModelParams& p, VacuumMode mode, cplx alpha,
                      cplx beta) {
  const VacuumCondition cond = condition_of(p, mode);
  const cplx q2m = p.qpow(2) - p.qpow(-2);
  return q2m / p.chi * (cond.on_alpha ? alpha : beta) * cond.coefficient;
}

std::vector<Diagnostic> validate_genericity(const ModelParams& p, double tol) {
  std::vector<Diagnostic> out;
  auto flag = [&](std::string code, std::string msg) {
    out.push_back({std::move(code), std::move(msg)});
  };

  const int ts = p.two_s;
  const cplx z2 = p.zeta * p.zeta;

  const Spectrum s = spectrum_unchecked(p);
  if (relative_min_gap(s.theta) <= tol)
    flag("spectrum_degenerate", "theta_M are not pairwise distinct");
  if (relative_min_gap(s.theta_star) <= tol)
    flag("dual_spectrum_degenerate", "theta*_N are not pairwise distinct");

  if (int k = p.base.root_of_unity_order(2 * ts + 2, tol); k != 0)
    flag("root_of_unity", "q^{2k} = 1 at k = " + std::to_string(k));

  // Denominators (c - b q^{2k}) of the tridiagonal coefficients, 0 <= k <= 4s,
  // and their starred counterparts.
  for (int k = 0; k <= 2 * ts; ++k) {
    const cplx qk = p.qpow(2 * k);
    if (cancels(p.c, -p.b * qk, tol))
      flag("tridiag_denominator", "c - b q^{2k} vanishes at k = " + std::to_string(k));
    if (cancels(p.c_star, -p.b_star * qk, tol))
      flag("dual_tridiag_denominator",
           "c* - b* q^{2k} vanishes at k = " + std::to_string(k));
  }

  // Off-diagonal entries must not vanish (irreducibility).
  for (int m = 1; m <= ts; ++m) {
    const cplx a = p.qpow(ts - 1);
    const cplx lo = p.qpow(2 * m - 2);
    const cplx hi = p.qpow(2 * m + ts - 1);
    const std::pair<cplx, cplx> factors[] = {
        {p.b_star * a / z2, p.b * lo}, {p.c * a * z2, p.c_star * lo},
        {p.c, p.b_star * hi / z2},     {p.c_star, p.b * z2 * hi},
        {p.b * a * z2, p.b_star * lo}, {p.c_star * a / z2, p.c * lo},
    };
    for (const auto& [x, y] : factors) {
      if (cancels(x, y, tol)) {
        flag("offdiag_zero", "an off-diagonal coefficient vanishes at index " +
                                 std::to_string(m) + " (" + fmt(x) + " + " + fmt(y) + ")");
        break;
      }
    }
  }

  // k_N, k*_M and nu0 denominators: parameters x with (x; q^2)_n required
  // nonzero for n <= 2s.
  const cplx q1m = p.qpow(1 - ts);
  const cplx q1p = p.qpow(ts + 1);
  const cplx poch_params[] = {
      -(p.b_star / p.b) * q1m / z2, -(p.c / p.c_star) * q1m * z2,
      -(p.b / p.b_star) * q1m * z2, -(p.c_star / p.c) * q1m / z2,
  };
  for (cplx x : poch_params) {
    cplx xq = x;
    for (int j = 0; j < ts; ++j) {
      if (cancels(1.0, -xq, tol)) {
        flag("normalizer_denominator",
             "a q-shifted factorial in k_N, k*_M or nu0 vanishes (" + fmt(x) + ")");
        break;
      }
      xq *= p.base.q2();
    }
  }

  const cplx racah_params[] = {-(p.b / p.c_star) * q1p * z2,
                               -(p.b_star / p.c) * q1p / z2};
  for (cplx x : racah_params) {
    cplx xq = x;
    for (int j = 0; j < ts; ++j) {
      if (cancels(1.0, -xq, tol)) {
        flag("racah_denominator",
             "a denominator parameter of the q-Racah series is q^{-2j} (" + fmt(x) + ")");
        break;
      }
      xq *= p.base.q2();
    }
  }
  return out;
}

} // namespace qrb
