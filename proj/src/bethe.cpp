#include "qrb/bethe.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <thread>

#include "qrb/linalg.hpp"

namespace qrb {

namespace {

// |b(x)| relative to |x| + |1/x| below this counts as a zero of b.
constexpr double kPoleTol = 1e-14;

double b_scale(cplx x) { return std::abs(x) + 1.0 / std::abs(x); }

double b_relative(cplx x) {
  if (std::abs(x) < kTinyModulus) return 0.0;
  return std::abs(bfun(x)) / b_scale(x);
}

cplx nonzero_b(cplx x, const char* what) {
  if (std::abs(x) < kTinyModulus) throw DomainError(std::string("zero argument in ") + what);
  const cplx v = bfun(x);
  if (std::abs(v) <= kPoleTol * b_scale(x))
    throw DomainError(std::string("pole of ") + what);
  return v;
}

void require_nonzero_root(cplx u) {
  if (!(std::abs(u) > kTinyModulus) || !is_finite(u))
    throw DomainError("Bethe root is zero or not finite");
}

cplx half_power_ratio(cplx ratio, int exponent_times_two) {
  // (ratio)^{(1 +- eps)/2} is either ratio^0 or ratio^1.
  return exponent_times_two == 0 ? cplx{1.0} : ratio;
}

cplx prod_f(cplx u, std::span<const cplx> roots, std::size_t skip, const QBase& base) {
  cplx r{1.0};
  for (std::size_t j = 0; j < roots.size(); ++j)
    if (j != skip) r *= exchange_fh(u, roots[j], base).first;
  return r;
}

cplx prod_h(cplx u, std::span<const cplx> roots, std::size_t skip, const QBase& base) {
  cplx r{1.0};
  for (std::size_t j = 0; j < roots.size(); ++j)
    if (j != skip) r *= exchange_fh(u, roots[j], base).second;
  return r;
}

// prod_{j != skip} b(u/u_j) b(q u u_j)
cplx pair_denominator(cplx u, std::span<const cplx> roots, std::size_t skip,
                      const QBase& base) {
  cplx r{1.0};
  for (std::size_t j = 0; j < roots.size(); ++j) {
    if (j == skip) continue;
    r *= nonzero_b(u / roots[j], "inhomogeneous denominator") *
         nonzero_b(base.q() * u * roots[j], "inhomogeneous denominator");
  }
  return r;
}

constexpr std::size_t kNoSkip = std::numeric_limits<std::size_t>::max();

} // namespace

std::string_view to_string(BetheKind kind) {
  switch (kind) {
  case BetheKind::hom_minus: return "hom_minus";
  case BetheKind::hom_plus: return "hom_plus";
  case BetheKind::inhom_plus: return "inhom_plus";
  case BetheKind::inhom_minus: return "inhom_minus";
  case BetheKind::dual_inhom_plus: return "dual_inhom_plus";
  case BetheKind::dual_inhom_minus: return "dual_inhom_minus";
  }
  return "unknown";
}

std::optional<BetheKind> parse_bethe_kind(std::string_view name) {
  for (BetheKind k : kAllBetheKinds)
    if (to_string(k) == name) return k;
  return std::nullopt;
}

bool is_homogeneous(BetheKind kind) {
  return kind == BetheKind::hom_minus || kind == BetheKind::hom_plus;
}

int epsilon(BetheKind kind) {
  switch (kind) {
  case BetheKind::hom_minus:
  case BetheKind::inhom_minus:
  case BetheKind::dual_inhom_minus:
    return -1;
  default:
    return 1;
  }
}

bool targets_dual_spectrum(BetheKind kind) {
  return kind == BetheKind::hom_plus || kind == BetheKind::inhom_minus ||
         kind == BetheKind::dual_inhom_minus;
}

BetheSystem BetheSystem::make(BetheKind kind, const ModelParams& p, int level) {
  p.validate();
  BetheSystem sys;
  sys.kind = kind;
  sys.params = p;
  if (is_homogeneous(kind)) {
    if (level < 0 || level > p.two_s)
      throw InvalidParams("level " + std::to_string(level) + " outside [0, " +
                          std::to_string(p.two_s) + "] for " + std::string(to_string(kind)));
    sys.level = level;
  } else {
    if (level >= 0 && level != p.two_s)
      throw InvalidParams("level must equal two_s = " + std::to_string(p.two_s) + " for " +
                          std::string(to_string(kind)));
    sys.level = p.two_s;
  }
  return sys;
}

std::pair<cplx, cplx> lambda12(int eps, cplx u, const ModelParams& p) {
  require_nonzero_root(u);
  const int ts = p.two_s;
  const cplx z = p.zeta;
  const cplx ui = 1.0 / u;
  const cplx pref = p.qpow(-ts - 1) / (eps > 0 ? u : ui);
  const cplx ratio_c = half_power_ratio(p.c / p.c_star, 1 - eps);
  const cplx ratio_b = half_power_ratio(p.b_star / p.b, 1 + eps);

  const cplx l1 = pref * (p.qpow(ts + 1) * u / z - ui * z) * (p.qpow(ts + 1) * u * z - ui / z) *
                  (u * p.c_star * p.qpow(-ts) + ui * p.b * p.qpow(ts)) *
                  (u * ratio_c + ui * ratio_b);

  const cplx den = p.q() * u * u - 1.0 / (p.q() * u * u);
  if (std::abs(den) <= kPoleTol * (std::abs(p.q() * u * u) + std::abs(1.0 / (p.q() * u * u))))
    throw DomainError("pole of Lambda_2");
  const cplx l2 = (u * u - ui * ui) * pref / den * (p.qpow(ts - 1) * ui * z - u / z) *
                  (p.qpow(ts - 1) * ui / z - u * z) *
                  (p.base.q2() * u * p.b * p.qpow(ts) + ui * p.c_star * p.qpow(-ts)) *
                  (p.base.q2() * u * ratio_b + ui * ratio_c);
  return {l1, l2};
}

std::pair<cplx, cplx> exchange_fh(cplx u, cplx v, const QBase& base) {
  require_nonzero_root(u);
  require_nonzero_root(v);
  const cplx q = base.q();
  const cplx bquv = nonzero_b(q * u * v, "f/h");
  const cplx f = bfun(q * v / u) * bfun(u * v) / (nonzero_b(v / u, "f") * bquv);
  const cplx h = bfun(base.q2() * u * v) * bfun(q * u / v) / (bquv * nonzero_b(u / v, "h"));
  return {f, h};
}

cplx gamma_eps(int eps, cplx u, int m, const ModelParams& p) {
  require_nonzero_root(u);
  const cplx first = eps > 0 ? p.beta : p.alpha;
  const cplx second = eps > 0 ? p.alpha : p.beta;
  return first * p.qpow(-m) * u - second * p.qpow(m) / u;
}

cplx etabar(cplx u, const StructureConstants& sc, const QBase& base) {
  require_nonzero_root(u);
  if (std::abs(sc.rho) < kTinyModulus) throw DomainError("rho vanishes");
  return (base.q() + 1.0 / base.q()) / sc.rho * (sc.eta * u + sc.eta_star / u);
}

cplx symmetrized_root(cplx u, const QBase& base) {
  const cplx q = base.q();
  return (q * u * u + 1.0 / (q * u * u)) / (q + 1.0 / q);
}

cplx inhomogeneity_product(cplx u, const ModelParams& p) {
  // q^{1/2+k-s} = sqrt(q) q^{k} q^{-s}; only even powers of sqrt(q) survive
  // in the product of the b(...) pairs, so the principal branch is fine.
  const cplx sq = std::sqrt(p.q());
  cplx r{1.0};
  for (int k = 0; k <= p.two_s; ++k) {
    // 2(1/2 + k - s) = 1 + 2k - two_s
    const int twice = 1 + 2 * k - p.two_s;
    const cplx qk = twice >= 0 ? ipow(sq, twice) : 1.0 / ipow(sq, -twice);
    r *= bfun(qk * p.zeta * u) * bfun(qk * u / p.zeta);
  }
  return r;
}

cplx nu_inhom(int eps, const ModelParams& p) {
  const int s4 = 2 * p.two_s;
  return eps > 0 ? p.qpow(-1 - s4) * p.c_star : p.qpow(1 + s4) * p.b;
}

cplx nu_dual(int eps, const ModelParams& p) {
  const int s4 = 2 * p.two_s;
  return eps > 0 ? p.qpow(1 + s4) * p.b_star : p.qpow(-1 - s4) * p.c;
}

cplx residual(const BetheSystem& sys, std::span<const cplx> roots, std::size_t i) {
  if (i >= roots.size()) throw DomainError("root index out of range");
  const ModelParams& p = sys.params;
  const QBase& base = p.base;
  const int eps = epsilon(sys.kind);
  const cplx u = roots[i];
  require_nonzero_root(u);

  const auto [l1, l2] = lambda12(eps, u, p);
  const cplx u2 = u * u;
  const cplx bu2 = bfun(u2);
  const cplx ratio = bu2 / nonzero_b(p.q() * u2, "b(q u^2)");
  const cplx pf = prod_f(u, roots, i, base);
  const cplx ph = prod_h(u, roots, i, base);

  switch (sys.kind) {
  case BetheKind::hom_minus:
  case BetheKind::hom_plus:
    return -ratio * pf * l1 + ph * l2;
  case BetheKind::inhom_plus:
  case BetheKind::inhom_minus: {
    const cplx ue = eps > 0 ? u : 1.0 / u;
    const cplx q2u3 = p.base.q2() * u2 * u;
    const cplx second = eps > 0 ? 1.0 / q2u3 : q2u3;
    const cplx inhom = nu_inhom(eps, p) * (eps > 0 ? 1.0 / u2 : u2) * bu2 /
                       bfun(p.q()) * inhomogeneity_product(u, p) /
                       pair_denominator(u, roots, i, base);
    return ratio * ue * pf * l1 - second * ph * l2 + inhom;
  }
  case BetheKind::dual_inhom_plus:
  case BetheKind::dual_inhom_minus: {
    const cplx ue = eps > 0 ? 1.0 / u : u;
    const cplx q2u3 = p.base.q2() * u2 * u;
    const cplx second = eps > 0 ? q2u3 : 1.0 / q2u3;
    const cplx inhom = nu_dual(eps, p) * bu2 / bfun(p.q()) * inhomogeneity_product(u, p) /
                       pair_denominator(u, roots, i, base);
    return ratio * ue * pf * l1 - second * ph * l2 + inhom;
  }
  }
  throw DomainError("unknown Bethe kind");
}

std::vector<cplx> residual_vector(const BetheSystem& sys, std::span<const cplx> roots) {
  std::vector<cplx> out(roots.size());
  for (std::size_t i = 0; i < roots.size(); ++i) out[i] = residual(sys, roots, i);
  return out;
}

cplx dual_plus_delta_residual(std::span<const cplx> roots, std::size_t i,
                              const ModelParams& p) {
  if (i >= roots.size()) throw DomainError("root index out of range");
  const QBase& base = p.base;
  const cplx v = roots[i];
  require_nonzero_root(v);
  const auto [l1, l2] = lambda12(1, v, p);
  const cplx v2 = v * v;
  const cplx delta = p.b_star * p.qpow(2 * p.two_s);
  return bfun(v2) / (v * nonzero_b(p.q() * v2, "b(q v^2)")) * prod_f(v, roots, i, base) * l1 -
         p.base.q2() * v2 * v * prod_h(v, roots, i, base) * l2 +
         delta * p.q() * bfun(v2) / bfun(p.q()) * inhomogeneity_product(v, p) /
             pair_denominator(v, roots, i, base);
}

cplx homogeneous_functional(int eps, cplx u, std::span<const cplx> roots,
                            const ModelParams& p, const StructureConstants& sc) {
  require_nonzero_root(u);
  const QBase& base = p.base;
  const auto [l1, l2] = lambda12(eps, u, p);
  const cplx u2 = u * u;
  const cplx bu2 = nonzero_b(u2, "b(u^2)");
  const cplx bqu2 = nonzero_b(p.q() * u2, "b(q u^2)");
  const cplx bq2u2 = nonzero_b(p.base.q2() * u2, "b(q^2 u^2)");
  const cplx pf = prod_f(u, roots, kNoSkip, base);
  const cplx ph = prod_h(u, roots, kNoSkip, base);
  const cplx ue = eps > 0 ? u : 1.0 / u;
  const cplx q = p.q();
  const cplx et = eps > 0 ? q * u * etabar(1.0 / u, sc, base) + etabar(u, sc, base) / (q * u)
                          : q * u * etabar(u, sc, base) + etabar(1.0 / u, sc, base) / (q * u);
  return ue / bu2 * (l1 * pf / bqu2 + l2 * ph / bq2u2) + et / (bu2 * bq2u2);
}

cplx dual_plus_functional(cplx v, std::span<const cplx> roots, const ModelParams& p,
                          const StructureConstants& sc) {
  require_nonzero_root(v);
  const QBase& base = p.base;
  const auto [l1, l2] = lambda12(1, v, p);
  const cplx v2 = v * v;
  const cplx q = p.q();
  const cplx bv2 = nonzero_b(v2, "b(v^2)");
  const cplx bqv2 = nonzero_b(q * v2, "b(q v^2)");
  const cplx bq2v2 = nonzero_b(p.base.q2() * v2, "b(q^2 v^2)");
  const cplx delta = p.b_star * p.qpow(2 * p.two_s);
  const cplx et = q * v * etabar(v, sc, base) + etabar(1.0 / v, sc, base) / (q * v);
  return 1.0 / (v * bv2 * bqv2) * prod_f(v, roots, kNoSkip, base) * l1 +
         p.base.q2() * v2 * v / (bv2 * bq2v2) * prod_h(v, roots, kNoSkip, base) * l2 -
         q * delta * inhomogeneity_product(v, p) / pair_denominator(v, roots, kNoSkip, base) +
         et / (bv2 * bq2v2);
}

cplx closed_form_eigenvalue(BetheKind kind, std::span<const cplx> roots,
                            const ModelParams& p) {
  if (is_homogeneous(kind))
    throw DomainError("no closed-form eigenvalue for homogeneous kinds");
  const cplx q = p.q();
  cplx S{0.0};
  for (cplx u : roots) {
    require_nonzero_root(u);
    S += q * u * u + 1.0 / (q * u * u);
  }
  const int ts = p.two_s;
  const cplx Z = (p.zeta * p.zeta + 1.0 / (p.zeta * p.zeta)) * qnumber(ts, p.base);
  switch (kind) {
  case BetheKind::inhom_plus:
    return p.qpow(-2 * ts) *
           (p.c_star * Z + p.qpow(ts) * (p.b * p.qpow(ts) + p.c * p.qpow(-ts)) - q * p.c_star * S);
  case BetheKind::inhom_minus:
    return p.qpow(2 * ts) *
           (p.b * Z + p.qpow(-ts) * (p.b_star * p.qpow(ts) + p.c_star * p.qpow(-ts)) -
            p.b * S / q);
  case BetheKind::dual_inhom_plus:
    return p.qpow(2 * ts) *
           (p.b_star * Z + p.qpow(-ts) * (p.b * p.qpow(ts) + p.c * p.qpow(-ts)) -
            p.b_star * S / q);
  case BetheKind::dual_inhom_minus:
    return p.qpow(-2 * ts) *
           (p.c * Z + p.qpow(ts) * (p.b_star * p.qpow(ts) + p.c_star * p.qpow(-ts)) -
            q * p.c * S);
  default:
    break;
  }
  throw DomainError("unknown Bethe kind");
}

namespace {

// Fixed candidate probes in 0.5 < |u| < 2; the three farthest from the
// functional's poles are used.
const std::array<cplx, 12> kProbeCandidates = {
    std::polar(0.83, 0.37),  std::polar(1.21, 1.93),  std::polar(0.67, -2.31),
    std::polar(1.47, -0.71), std::polar(0.58, 2.71),  std::polar(1.73, 1.11),
    std::polar(0.91, -1.29), std::polar(1.13, 2.53),  std::polar(0.74, 1.41),
    std::polar(1.36, -2.77), std::polar(1.62, 0.23),  std::polar(0.62, -0.57)};

double probe_clearance(cplx u, std::span<const cplx> roots, const QBase& base) {
  const cplx u2 = u * u;
  double d = std::min({b_relative(u2), b_relative(base.q() * u2), b_relative(base.q2() * u2)});
  for (cplx r : roots) {
    d = std::min(d, b_relative(u / r));
    d = std::min(d, b_relative(base.q() * u * r));
  }
  return d;
}

template <class F>
FunctionalEvaluation evaluate_at_probes(std::span<const cplx> roots, const QBase& base, F&& fn) {
  std::vector<std::pair<double, std::size_t>> ranked;
  for (std::size_t k = 0; k < kProbeCandidates.size(); ++k)
    ranked.emplace_back(-probe_clearance(kProbeCandidates[k], roots, base), k);
  std::sort(ranked.begin(), ranked.end());

  FunctionalEvaluation ev;
  for (std::size_t k = 0; k < 3; ++k) {
    const cplx u = kProbeCandidates[ranked[k].second];
    ev.probes.push_back(u);
    ev.values.push_back(fn(u));
  }
  ev.value = ev.values.front();
  double scale = 0.0;
  for (cplx v : ev.values) scale = std::max(scale, std::abs(v));
  if (!(scale > 0.0)) scale = 1.0;
  for (cplx v : ev.values) ev.spread = std::max(ev.spread, std::abs(v - ev.value) / scale);
  if (!std::isfinite(ev.spread)) ev.spread = std::numeric_limits<double>::infinity();
  return ev;
}

} // namespace

FunctionalEvaluation evaluate_homogeneous(int eps, std::span<const cplx> roots,
                                          const ModelParams& p) {
  const StructureConstants sc = structure_constants(p);
  return evaluate_at_probes(roots, p.base, [&](cplx u) {
    return homogeneous_functional(eps, u, roots, p, sc);
  });
}

FunctionalEvaluation evaluate_dual_plus(std::span<const cplx> roots, const ModelParams& p) {
  const StructureConstants sc = structure_constants(p);
  return evaluate_at_probes(roots, p.base,
                            [&](cplx v) { return dual_plus_functional(v, roots, p, sc); });
}

cplx eigenvalue_from_roots(const BetheSystem& sys, std::span<const cplx> roots,
                           double probe_tol) {
  if (!is_homogeneous(sys.kind)) return closed_form_eigenvalue(sys.kind, roots, sys.params);
  const FunctionalEvaluation ev = evaluate_homogeneous(epsilon(sys.kind), roots, sys.params);
  if (!(ev.spread <= probe_tol))
    throw DomainError("eigenvalue functional depends on u (spread " +
                      std::to_string(ev.spread) + "): roots are off-shell");
  return ev.value;
}

// ---------------------------------------------------------------------------
// solver

namespace {

double u01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

bool start_is_clear(std::span<const cplx> u, const QBase& base) {
  constexpr double d = 1e-3;
  const std::array<cplx, 4> fixed = {cplx{1, 0}, cplx{-1, 0}, cplx{0, 1}, cplx{0, -1}};
  for (std::size_t i = 0; i < u.size(); ++i) {
    for (cplx f : fixed)
      if (std::abs(u[i] - f) < d) return false;
    if (std::abs(bfun(base.q() * u[i] * u[i])) < d) return false;
    for (std::size_t j = i + 1; j < u.size(); ++j) {
      if (std::abs(symmetrized_root(u[i], base) - symmetrized_root(u[j], base)) < d) return false;
      if (std::abs(bfun(u[i] / u[j])) < d) return false;
      if (std::abs(bfun(base.q() * u[i] * u[j])) < d) return false;
    }
  }
  return true;
}

std::vector<std::vector<cplx>> generate_starts(int L, const SolverConfig& cfg,
                                               const QBase& base) {
  std::mt19937_64 gen(cfg.seed);
  const double hi = std::log(cfg.start_radius), lo = -hi;
  std::vector<std::vector<cplx>> starts(static_cast<std::size_t>(std::max(cfg.starts, 0)));
  for (auto& s : starts) {
    s.resize(static_cast<std::size_t>(L));
    for (int attempt = 0; attempt < 1000; ++attempt) {
      for (auto& u : s) {
        const double r = std::exp(lo + (hi - lo) * u01(gen));
        const double phi = 2.0 * std::numbers::pi * u01(gen);
        u = std::polar(r, phi);
      }
      if (start_is_clear(s, base)) break;
    }
  }
  return starts;
}

std::optional<std::vector<cplx>> safe_residuals(const BetheSystem& sys,
                                                std::span<const cplx> x) {
  try {
    std::vector<cplx> r = residual_vector(sys, x);
    for (cplx v : r)
      if (!is_finite(v)) return std::nullopt;
    return r;
  } catch (const NumericError&) {
    return std::nullopt;
  }
}

struct NewtonOutcome {
  bool converged = false;
  std::vector<cplx> roots;
  double residual = std::numeric_limits<double>::infinity();
};

NewtonOutcome newton(const BetheSystem& sys, std::vector<cplx> x, const SolverConfig& cfg) {
  NewtonOutcome out;
  const std::size_t L = x.size();
  auto F = safe_residuals(sys, x);
  if (!F) return out;
  double fn = max_abs(*F);

  int polish = 0;
  for (int it = 0; it < cfg.max_iter; ++it) {
    if (fn < cfg.tol) {
      // a couple of extra steps push the residual to rounding level
      if (++polish > 2) break;
    }
    CMatrix J(L, L);
    bool ok = true;
    for (std::size_t j = 0; j < L && ok; ++j) {
      const double h = 1e-7 * std::max(1.0, std::abs(x[j]));
      std::vector<cplx> xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      auto fp = safe_residuals(sys, xp);
      auto fm = safe_residuals(sys, xm);
      if (!fp || !fm) {
        ok = false;
        break;
      }
      for (std::size_t i = 0; i < L; ++i) J(i, j) = ((*fp)[i] - (*fm)[i]) / (2.0 * h);
    }
    if (!ok) break;
    const LU lu(J);
    if (!(lu.min_pivot() > 1e-14 * std::max(J.max_abs(), kTinyModulus))) break;
    std::vector<cplx> rhs(L);
    for (std::size_t i = 0; i < L; ++i) rhs[i] = -(*F)[i];
    const std::vector<cplx> dx = lu.solve(rhs);

    double t = 1.0;
    bool accepted = false;
    for (int halving = 0; halving <= 10; ++halving, t *= 0.5) {
      std::vector<cplx> xn(L);
      for (std::size_t i = 0; i < L; ++i) xn[i] = x[i] + t * dx[i];
      auto Fn = safe_residuals(sys, xn);
      if (!Fn) continue;
      const double fnn = max_abs(*Fn);
      if (fnn < fn) {
        x = std::move(xn);
        F = std::move(Fn);
        fn = fnn;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    bool wild = false;
    for (cplx u : x)
      if (!(std::abs(u) > 1e-4 && std::abs(u) < 1e4)) wild = true;
    if (wild) break;
  }
  out.converged = fn < cfg.tol;
  out.roots = std::move(x);
  out.residual = fn;
  return out;
}

// Pick the representative of u ~ -u with positive real part (or positive
// imaginary part on the imaginary axis).
cplx canonical_sign(cplx u) {
  if (u.real() < 0.0 || (u.real() == 0.0 && u.imag() < 0.0)) return -u;
  return u;
}

bool lex_less(cplx a, cplx b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

bool same_multiset(const std::vector<cplx>& a, const std::vector<cplx>& b, double tol) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (cplx x : a) {
    bool found = false;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      if (std::abs(x - b[j]) <= tol * std::max(1.0, std::abs(x))) {
        used[j] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

bool is_admissible(const BetheSolution& s, double tol) {
  for (cplx u : s.roots) {
    if (!(std::abs(u) > kTinyModulus)) return false;
    if (!(std::abs(bfun(u * u)) > tol)) return false;
  }
  for (std::size_t i = 0; i < s.symmetrized.size(); ++i)
    for (std::size_t j = i + 1; j < s.symmetrized.size(); ++j)
      if (!(std::abs(s.symmetrized[i] - s.symmetrized[j]) > tol)) return false;
  return true;
}

void reconstruct_and_match(const BetheSystem& sys, BetheSolution& s, const SolverConfig& cfg) {
  try {
    if (is_homogeneous(sys.kind)) {
      const FunctionalEvaluation ev = evaluate_homogeneous(epsilon(sys.kind), s.roots, sys.params);
      s.reconstructed_eigenvalue = ev.value;
      s.functional_spread = ev.spread;
    } else {
      s.reconstructed_eigenvalue = closed_form_eigenvalue(sys.kind, s.roots, sys.params);
    }
  } catch (const NumericError&) {
    s.reconstructed_eigenvalue.reset();
    return;
  }
  if (!(s.functional_spread <= cfg.probe_tol)) return;

  const Spectrum sp = spectrum_unchecked(sys.params);
  const std::vector<cplx>& target = targets_dual_spectrum(sys.kind) ? sp.theta_star : sp.theta;
  const cplx lam = *s.reconstructed_eigenvalue;
  double best = std::numeric_limits<double>::infinity();
  int best_k = -1;
  int within = 0;
  for (std::size_t k = 0; k < target.size(); ++k) {
    const double err = std::abs(lam - target[k]) / std::max(std::abs(target[k]), kTinyModulus);
    if (err <= cfg.match_tol) ++within;
    if (err < best) {
      best = err;
      best_k = static_cast<int>(k);
    }
  }
  s.match_error = best;
  if (within == 1) s.matched_index = best_k;
}

} // namespace

std::vector<BetheSolution> solve(const BetheSystem& sys, const SolverConfig& cfg) {
  const int L = sys.level;
  const QBase& base = sys.params.base;

  if (L == 0) {
    BetheSolution s;
    s.admissible = true;
    s.hits = 1;
    reconstruct_and_match(sys, s, cfg);
    return {s};
  }

  const auto starts = generate_starts(L, cfg, base);
  std::vector<NewtonOutcome> outcomes(starts.size());

  unsigned nthreads = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                      : std::max(1u, std::thread::hardware_concurrency());
  nthreads = std::min<unsigned>(nthreads, static_cast<unsigned>(std::max<std::size_t>(starts.size(), 1)));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next.fetch_add(1); k < starts.size(); k = next.fetch_add(1))
      outcomes[k] = newton(sys, starts[k], cfg);
  };
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::vector<BetheSolution> found;
  for (const auto& o : outcomes) {
    if (!o.converged) continue;
    BetheSolution s;
    s.roots = o.roots;
    for (auto& u : s.roots) u = canonical_sign(u);
    s.residual_max = o.residual;
    for (cplx u : s.roots) s.symmetrized.push_back(symmetrized_root(u, base));
    std::vector<std::size_t> order(s.roots.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return lex_less(s.symmetrized[a], s.symmetrized[b]);
    });
    std::vector<cplx> r, U;
    for (std::size_t i : order) {
      r.push_back(s.roots[i]);
      U.push_back(s.symmetrized[i]);
    }
    s.roots = std::move(r);
    s.symmetrized = std::move(U);
    s.hits = 1;
    found.push_back(std::move(s));
  }

  std::stable_sort(found.begin(), found.end(), [](const BetheSolution& a, const BetheSolution& b) {
    return std::lexicographical_compare(a.symmetrized.begin(), a.symmetrized.end(),
                                        b.symmetrized.begin(), b.symmetrized.end(), lex_less);
  });

  std::vector<BetheSolution> unique;
  for (auto& s : found) {
    auto it = std::find_if(unique.begin(), unique.end(), [&](const BetheSolution& k) {
      return same_multiset(k.symmetrized, s.symmetrized, cfg.dedup_tol);
    });
    if (it == unique.end()) {
      unique.push_back(std::move(s));
    } else {
      it->hits += 1;
      if (s.residual_max < it->residual_max) {
        const int hits = it->hits;
        *it = std::move(s);
        it->hits = hits;
      }
    }
  }

  for (auto& s : unique) {
    s.admissible = is_admissible(s, cfg.admissibility_tol);
    if (s.admissible) reconstruct_and_match(sys, s, cfg);
  }
  return unique;
}

bool CoverageReport::complete() const {
  return std::all_of(entries.begin(), entries.end(), [](const CoverageEntry& e) { return e.hit; });
}

namespace {

void offer(CoverageEntry& e, const BetheSolution& s) {
  const bool match = s.admissible && s.matched_index && *s.matched_index == e.index;
  if (match && (!e.hit || s.residual_max < e.best->residual_max)) {
    e.hit = true;
    e.best = s;
  } else if (!e.hit && (!e.best || s.residual_max < e.best->residual_max)) {
    e.best = s;
  }
}

} // namespace

CoverageReport coverage(BetheKind kind, const ModelParams& p, const SolverConfig& cfg) {
  CoverageReport rep;
  rep.kind = kind;
  for (int k = 0; k <= p.two_s; ++k) rep.entries.push_back(CoverageEntry{k, false, std::nullopt});
  if (is_homogeneous(kind)) {
    for (int level = 0; level <= p.two_s; ++level) {
      const auto sols = solve(BetheSystem::make(kind, p, level), cfg);
      for (const auto& s : sols) offer(rep.entries[static_cast<std::size_t>(level)], s);
    }
  } else {
    const auto sols = solve(BetheSystem::make(kind, p), cfg);
    for (auto& e : rep.entries)
      for (const auto& s : sols) offer(e, s);
  }
  return rep;
}

} // namespace qrb
