#include <doctest.h>

#include <algorithm>

#include "qrb/model.hpp"
#include "support/draws.hpp"

using namespace qrb;

namespace {

bool has_code(const std::vector<Diagnostic>& d, const std::string& code) {
  return std::any_of(d.begin(), d.end(), [&](const Diagnostic& x) { return x.code == code; });
}

} // namespace

TEST_SUITE("model") {

TEST_CASE("parameter validation") {
  ModelParams p = qrb::testing::random_generic(5, 2);
  CHECK_NOTHROW(p.validate());
  ModelParams bad = p;
  bad.c_star *= 1.01;
  CHECK_THROWS_AS(bad.validate(), InvalidParams);
  bad = p;
  bad.b = 0.0;
  CHECK_THROWS_AS(bad.validate(), InvalidParams);
  bad = p;
  bad.two_s = 0;
  CHECK_THROWS_AS(bad.validate(), InvalidParams);
}

TEST_CASE("eigenvalue sequences") {
  const ModelParams p = qrb::testing::random_generic(6, 3);
  const Spectrum s = spectrum(p);
  REQUIRE(s.theta.size() == 4);
  for (int m = 0; m < p.dim(); ++m) {
    CHECK(std::abs(s.theta[m] - (p.b * p.qpow(2 * m) + p.c * p.qpow(-2 * m))) < 1e-13);
    CHECK(std::abs(s.theta_star[m] - (p.b_star * p.qpow(2 * m) + p.c_star * p.qpow(-2 * m))) < 1e-13);
  }
  CHECK(relative_min_gap(s.theta) > 1e-3);

  // theta_1 = theta_0 when c = b q^2
  ModelParams deg = p;
  deg.c = p.b * p.qpow(2);
  deg.c_star = deg.b * deg.c / deg.b_star;
  CHECK_THROWS_AS(spectrum(deg), SpectrumDegenerate);
  CHECK_NOTHROW(spectrum_unchecked(deg));
}

TEST_CASE("structure constants") {
  const ModelParams p = qrb::testing::random_generic(8, 2);
  const StructureConstants sc = structure_constants(p);
  const cplx d = p.qpow(2) - p.qpow(-2);
  CHECK(std::abs(sc.rho + p.b * p.c * d * d) < 1e-13 * std::abs(sc.rho));
  CHECK(std::abs(rho_from_dual(p) - sc.rho) < 1e-12 * std::abs(sc.rho));
}

TEST_CASE("reference-state parameters satisfy their defining conditions") {
  ModelParams p = qrb::testing::random_generic(9, 2);
  p.m0 = 3;
  p.chi = cplx{0.7, 0.2};
  p.alpha = cplx{0.4, 0.1};
  p.beta = cplx{-0.3, 0.6};
  for (VacuumMode mode : {VacuumMode::minus_vacuum, VacuumMode::plus_vacuum, VacuumMode::dual_minus,
                          VacuumMode::dual_plus, VacuumMode::fix_beta_plus,
                          VacuumMode::fix_beta_minus, VacuumMode::fix_alpha_plus,
                          VacuumMode::fix_alpha_minus}) {
    const auto [alpha, beta] = fix_alpha_beta(p, mode);
    CAPTURE(to_string(mode));
    CHECK(std::abs(vacuum_condition(p, mode, alpha, beta) - vacuum_target(mode)) < 1e-13);
  }
  // the plain vacua switch the other parameter off
  CHECK(fix_alpha_beta(p, VacuumMode::minus_vacuum).second == cplx{0.0});
  CHECK(fix_alpha_beta(p, VacuumMode::dual_plus).first == cplx{0.0});
  // the single-parameter modes keep it
  CHECK(fix_alpha_beta(p, VacuumMode::fix_beta_plus).first == p.alpha);
  CHECK(fix_alpha_beta(p, VacuumMode::fix_alpha_minus).second == p.beta);
}

TEST_CASE("genericity diagnostics") {
  const ModelParams p = qrb::testing::random_generic(10, 2);
  CHECK(validate_genericity(p).empty());

  ModelParams cb = p;
  cb.c = cb.b;
  cb.c_star = cb.b * cb.c / cb.b_star;
  const auto d = validate_genericity(cb);
  CHECK(has_code(d, "tridiag_denominator"));
  const auto it = std::find_if(d.begin(), d.end(),
                               [](const Diagnostic& x) { return x.code == "tridiag_denominator"; });
  CHECK(it->message.find("k = 0") != std::string::npos);

  ModelParams root = p;
  root.base = QBase(std::polar(1.0, std::acos(-1.0) / 3.0));
  CHECK(has_code(validate_genericity(root), "root_of_unity"));
}

}
