#include <doctest.h>

#include <algorithm>

#include "qrb/bethe.hpp"
#include "support/draws.hpp"
#include "support/oracles.hpp"

using namespace qrb;
using qrb::testing::Rng;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

std::vector<cplx> random_roots(Rng& rng, int n) {
  std::vector<cplx> r(static_cast<std::size_t>(n));
  for (auto& u : r) u = rng.annulus();
  return r;
}

} // namespace

TEST_SUITE("bethe") {

TEST_CASE("kind names round-trip") {
  for (BetheKind k : kAllBetheKinds) CHECK(parse_bethe_kind(to_string(k)) == k);
  CHECK_FALSE(parse_bethe_kind("hom").has_value());
}

TEST_CASE("level validation") {
  const ModelParams p = qrb::testing::random_generic(500, 2);
  CHECK(BetheSystem::make(BetheKind::hom_minus, p, 0).level == 0);
  CHECK_THROWS_AS(BetheSystem::make(BetheKind::hom_plus, p, 3), InvalidParams);
  CHECK_THROWS_AS(BetheSystem::make(BetheKind::hom_plus, p, -1), InvalidParams);
  CHECK(BetheSystem::make(BetheKind::inhom_plus, p).level == 2);
  CHECK_THROWS_AS(BetheSystem::make(BetheKind::inhom_plus, p, 1), InvalidParams);
}

TEST_CASE("Lambda zeros, pole and parity") {
  const ModelParams p = qrb::testing::random_generic(501, 3);
  // any branch of q^{-s-1/2} will do: only its square enters
  const cplx qm = std::pow(p.q(), -0.5 * p.two_s - 0.5);
  for (int eps : {-1, 1}) {
    CHECK(std::abs(lambda12(eps, cplx{1.0}, p).second) < 1e-14);
    CHECK(std::abs(lambda12(eps, cplx{0.0, 1.0}, p).second) < 1e-14);
    CHECK(std::abs(lambda12(eps, qm * p.zeta, p).first) < 1e-12);
    CHECK(std::abs(lambda12(eps, qm / p.zeta, p).first) < 1e-12);
    CHECK_THROWS_AS(lambda12(eps, 1.0 / std::sqrt(p.q()), p), DomainError);
    CHECK_THROWS_AS(lambda12(eps, cplx{0.0}, p), DomainError);
  }
  Rng rng(5);
  for (int k = 0; k < 20; ++k) {
    const cplx u = rng.annulus();
    for (int eps : {-1, 1}) {
      const auto [a1, a2] = lambda12(eps, u, p);
      const auto [b1, b2] = lambda12(eps, -u, p);
      CHECK(std::abs(a1 + b1) <= 1e-13 * std::abs(a1));
      CHECK(std::abs(a2 + b2) <= 1e-13 * std::abs(a2));
    }
  }
}

TEST_CASE("exchange coefficients") {
  const QBase base(cplx{1.2, 0.35});
  const cplx q = base.q();
  Rng rng(6);
  for (int k = 0; k < 20; ++k) {
    const cplx u = rng.annulus(), v = rng.annulus();
    const auto [f, h] = exchange_fh(u, v, base);
    const auto [fm, hm] = exchange_fh(-u, v, base);
    CHECK(std::abs(f - fm) <= 1e-12 * std::abs(f));
    CHECK(std::abs(h - hm) <= 1e-12 * std::abs(h));
    const cplx fq = exchange_fh(u, q * u, base).first;
    const cplx ref = bfun(q * q) * bfun(q * u * u) / (bfun(q) * bfun(q * q * u * u));
    CHECK(std::abs(fq - ref) <= 1e-12 * std::abs(ref));
  }
  CHECK_THROWS_AS(exchange_fh(cplx{0.8, 0.1}, cplx{0.8, 0.1}, base), DomainError);
}

TEST_CASE("gamma and etabar") {
  ModelParams p = qrb::testing::random_generic(502, 2);
  p.alpha = cplx{0.3, -0.2};
  p.beta = cplx{-0.5, 0.7};
  const cplx u{0.9, 0.6};
  const int m = 3;
  CHECK(std::abs(gamma_eps(1, u, m, p) - (p.beta * p.qpow(-m) * u - p.alpha * p.qpow(m) / u)) < 1e-13);
  CHECK(std::abs(gamma_eps(-1, u, m, p) - (p.alpha * p.qpow(-m) * u - p.beta * p.qpow(m) / u)) < 1e-13);
  // alpha = beta: gamma(q^m x, m) = -gamma(q^m / x, m)
  p.beta = p.alpha;
  const cplx x{1.1, -0.4};
  CHECK(std::abs(gamma_eps(1, p.qpow(m) * x, m, p) + gamma_eps(1, p.qpow(m) / x, m, p)) < 1e-12);

  StructureConstants sc = structure_constants(p);
  const QBase& base = p.base;
  const cplx qq = base.q() + 1.0 / base.q();
  CHECK(std::abs(etabar(cplx{1.0}, sc, base) - qq * (sc.eta + sc.eta_star) / sc.rho) < 1e-12);
  CHECK(std::abs(etabar(u, sc, base) + etabar(1.0 / u, sc, base) -
                 qq / sc.rho * (sc.eta + sc.eta_star) * (u + 1.0 / u)) < 1e-12);
  sc.eta = sc.eta_star = 0.0;
  CHECK(etabar(u, sc, base) == cplx{0.0});
}

TEST_CASE("single-root homogeneous residual") {
  const ModelParams p = qrb::testing::random_generic(503, 2);
  const BetheSystem sys = BetheSystem::make(BetheKind::hom_minus, p, 1);
  const cplx u{0.8, 0.45};
  const auto [l1, l2] = lambda12(-1, u, p);
  const cplx ref = -bfun(u * u) / bfun(p.q() * u * u) * l1 + l2;
  const std::vector<cplx> roots = {u};
  CHECK(std::abs(residual(sys, roots, 0) - ref) < 1e-13 * std::abs(ref));
  CHECK_THROWS_AS(residual(sys, roots, 1), DomainError);
}

TEST_CASE("residual parity under u_i -> -u_i") {
  Rng rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    const int two_s = 1 + static_cast<int>(rng.next() % 3);
    const ModelParams p = qrb::testing::random_generic(rng, two_s);
    for (BetheKind kind : kAllBetheKinds) {
      const int level = is_homogeneous(kind) ? 1 + static_cast<int>(rng.next() % two_s) : two_s;
      const BetheSystem sys = BetheSystem::make(kind, p, level);
      std::vector<cplx> roots = random_roots(rng, level);
      const std::size_t i = rng.next() % roots.size();
      const cplx e = residual(sys, roots, i);
      roots[i] = -roots[i];
      const cplx e2 = residual(sys, roots, i);
      const double sign = is_homogeneous(kind) ? -1.0 : 1.0;
      CHECK(std::abs(e2 - sign * e) <= 1e-10 * std::abs(e));
    }
  }
}

TEST_CASE("the delta form of the dual residual is the dual_inhom_plus residual") {
  Rng rng(78);
  for (int two_s = 1; two_s <= 3; ++two_s) {
    const ModelParams p = qrb::testing::random_generic(rng, two_s);
    const BetheSystem sys = BetheSystem::make(BetheKind::dual_inhom_plus, p);
    const std::vector<cplx> roots = random_roots(rng, two_s);
    for (std::size_t i = 0; i < roots.size(); ++i)
      CHECK(rel(dual_plus_delta_residual(roots, i, p), residual(sys, roots, i)) < 1e-12);
  }
  const ModelParams p = qrb::testing::random_generic(1, 2);
  CHECK(std::abs(nu_dual(1, p) - p.q() * p.b_star * p.qpow(4)) < 1e-12);
}

TEST_CASE("closed-form eigenvalues are linear in S") {
  const ModelParams p = qrb::testing::random_generic(504, 2);
  const std::vector<cplx> r1 = {cplx{0.9, 0.3}, cplx{1.2, -0.5}};
  std::vector<cplx> r2 = r1;
  r2[0] *= cplx{1.1, 0.2};
  const cplx q = p.q();
  auto S = [&](const std::vector<cplx>& r) {
    cplx s = 0.0;
    for (cplx u : r) s += q * u * u + 1.0 / (q * u * u);
    return s;
  };
  const cplx slope = (closed_form_eigenvalue(BetheKind::inhom_plus, r2, p) -
                      closed_form_eigenvalue(BetheKind::inhom_plus, r1, p)) /
                     (S(r2) - S(r1));
  CHECK(rel(slope, -p.qpow(1 - 2 * p.two_s) * p.c_star) < 1e-12);
  CHECK_THROWS_AS(closed_form_eigenvalue(BetheKind::hom_minus, r1, p), DomainError);
}

TEST_CASE("empty root set reproduces the lowest eigenvalues") {
  for (int two_s = 1; two_s <= 4; ++two_s) {
    const ModelParams p = qrb::testing::random_generic(600 + two_s, two_s);
    const Spectrum sp = spectrum(p);
    const std::vector<cplx> none;
    CHECK(rel(eigenvalue_from_roots(BetheSystem::make(BetheKind::hom_minus, p, 0), none),
              sp.theta[0]) < 1e-10);
    CHECK(rel(eigenvalue_from_roots(BetheSystem::make(BetheKind::hom_plus, p, 0), none),
              sp.theta_star[0]) < 1e-10);
    const auto sols = solve(BetheSystem::make(BetheKind::hom_minus, p, 0), SolverConfig{});
    REQUIRE(sols.size() == 1);
    CHECK(sols[0].roots.empty());
    CHECK(sols[0].matched_index == 0);
  }
}

TEST_CASE("off-shell roots are rejected by the homogeneous functional") {
  const ModelParams p = qrb::testing::random_generic(505, 2);
  const std::vector<cplx> roots = {cplx{0.8, 0.3}};
  CHECK_THROWS_AS(eigenvalue_from_roots(BetheSystem::make(BetheKind::hom_minus, p, 1), roots),
                  DomainError);
}

TEST_CASE("spin 1/2 inhomogeneous solutions land on the spectrum") {
  const ModelParams p = qrb::testing::random_generic(506, 1);
  const Spectrum sp = spectrum(p);
  const auto sols = solve(BetheSystem::make(BetheKind::inhom_plus, p), SolverConfig{});
  std::vector<int> hit;
  for (const auto& s : sols) {
    if (!s.admissible) continue;
    REQUIRE(s.matched_index.has_value());
    CHECK(rel(*s.reconstructed_eigenvalue, sp.theta[*s.matched_index]) < 1e-6);
    hit.push_back(*s.matched_index);
  }
  std::sort(hit.begin(), hit.end());
  hit.erase(std::unique(hit.begin(), hit.end()), hit.end());
  CHECK(hit == std::vector<int>{0, 1});
}

TEST_CASE("spin 1 coverage of every kind") {
  const ModelParams p = qrb::testing::random_generic(507, 2);
  for (BetheKind kind : kAllBetheKinds) {
    CAPTURE(to_string(kind));
    const CoverageReport rep = coverage(kind, p, SolverConfig{});
    CHECK(rep.complete());
    for (const auto& e : rep.entries) {
      REQUIRE(e.best.has_value());
      CHECK(e.best->residual_max < 1e-10);
      CHECK(e.best->admissible);
    }
  }
}

TEST_CASE("distinct inhomogeneous solutions cover distinct indices") {
  const ModelParams p = qrb::testing::random_generic(508, 2);
  const auto sols = solve(BetheSystem::make(BetheKind::inhom_plus, p), SolverConfig{});
  std::vector<int> idx;
  for (const auto& s : sols)
    if (s.admissible && s.matched_index) idx.push_back(*s.matched_index);
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  CHECK(idx == std::vector<int>{0, 1, 2});
}

TEST_CASE("admissibility flags") {
  const ModelParams p = qrb::testing::random_generic(509, 2);
  const auto sols = solve(BetheSystem::make(BetheKind::dual_inhom_minus, p), SolverConfig{});
  for (const auto& s : sols) {
    bool trivial = false;
    for (cplx u : s.roots) trivial = trivial || std::abs(bfun(u * u)) <= 1e-6;
    bool coincident = false;
    for (std::size_t i = 0; i < s.symmetrized.size(); ++i)
      for (std::size_t j = i + 1; j < s.symmetrized.size(); ++j)
        coincident = coincident || std::abs(s.symmetrized[i] - s.symmetrized[j]) <= 1e-6;
    CHECK(s.admissible == !(trivial || coincident));
    if (!s.admissible) CHECK_FALSE(s.matched_index.has_value());
  }
}

TEST_CASE("on-shell homogeneous functional is u-independent and matches") {
  const ModelParams p = qrb::testing::random_generic(510, 2);
  const Spectrum sp = spectrum(p);
  for (BetheKind kind : {BetheKind::hom_minus, BetheKind::hom_plus}) {
    const BetheSystem sys = BetheSystem::make(kind, p, 2);
    for (const auto& s : solve(sys, SolverConfig{})) {
      if (!s.admissible) continue;
      const FunctionalEvaluation ev = evaluate_homogeneous(epsilon(kind), s.roots, p);
      CHECK(ev.spread < 1e-8);
      REQUIRE(s.matched_index.has_value());
      const cplx target = kind == BetheKind::hom_minus ? sp.theta[2] : sp.theta_star[2];
      CHECK(rel(ev.value, target) < 1e-6);
    }
  }
}

TEST_CASE("dual functional agrees with the closed form on-shell") {
  const ModelParams p = qrb::testing::random_generic(511, 2);
  const auto sols = solve(BetheSystem::make(BetheKind::dual_inhom_plus, p), SolverConfig{});
  int checked = 0;
  for (const auto& s : sols) {
    if (!s.admissible) continue;
    const FunctionalEvaluation ev = evaluate_dual_plus(s.roots, p);
    CHECK(ev.spread < 1e-8);
    CHECK(rel(ev.value, closed_form_eigenvalue(BetheKind::dual_inhom_plus, s.roots, p)) < 1e-8);
    ++checked;
  }
  CHECK(checked >= 3);
}

TEST_CASE("one-root Newton solutions equal the companion-matrix roots") {
  const ModelParams p = qrb::testing::random_generic(512, 2);
  const std::vector<cplx> oracle = qrb::testing::one_root_symmetrized(p);
  const auto sols = solve(BetheSystem::make(BetheKind::hom_minus, p, 1), SolverConfig{});
  std::vector<cplx> newton;
  for (const auto& s : sols)
    if (s.admissible) newton.push_back(s.symmetrized[0]);
  REQUIRE_FALSE(newton.empty());
  for (cplx u : newton) {
    double best = 1e300;
    for (cplx o : oracle) best = std::min(best, std::abs(u - o));
    CHECK(best < 1e-8);
  }
  for (cplx o : oracle) {
    double best = 1e300;
    for (cplx u : newton) best = std::min(best, std::abs(u - o));
    CHECK(best < 1e-8);
  }
}

TEST_CASE("solver output is deterministic and thread-count independent") {
  const ModelParams p = qrb::testing::random_generic(513, 2);
  const BetheSystem sys = BetheSystem::make(BetheKind::inhom_minus, p);
  SolverConfig one;
  one.threads = 1;
  SolverConfig many;
  many.threads = 4;
  const auto a = solve(sys, one);
  const auto b = solve(sys, many);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].roots == b[k].roots);
    CHECK(a[k].hits == b[k].hits);
    CHECK(a[k].residual_max == b[k].residual_max);
  }
}

}
