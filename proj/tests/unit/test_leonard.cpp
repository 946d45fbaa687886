#include <doctest.h>

#include "qrb/leonard.hpp"
#include "support/draws.hpp"

using namespace qrb;
using qrb::testing::Rng;

namespace {

ModelParams swapped(const ModelParams& p) {
  ModelParams s = p;
  std::swap(s.b, s.b_star);
  std::swap(s.c, s.c_star);
  s.zeta = 1.0 / p.zeta;
  return s;
}

} // namespace

TEST_SUITE("leonard") {

TEST_CASE("A coefficients are the A* coefficients of the swapped parameters") {
  for (int two_s = 1; two_s <= 4; ++two_s) {
    const ModelParams p = qrb::testing::random_generic(100 + two_s, two_s);
    const ModelParams s = swapped(p);
    for (int r = 0; r < p.dim(); ++r)
      for (int c = std::max(0, r - 1); c <= std::min(p.two_s, r + 1); ++c)
        CHECK(std::abs(coeff(CoeffKind::A, r, c, p) - coeff(CoeffKind::Astar, r, c, s)) <
              1e-13 * std::max(1.0, std::abs(coeff(CoeffKind::A, r, c, p))));
  }
}

TEST_CASE("rows of the tridiagonal matrices sum to the lowest eigenvalue") {
  for (int two_s = 1; two_s <= 4; ++two_s) {
    const ModelParams p = qrb::testing::random_generic(200 + two_s, two_s);
    const Spectrum sp = spectrum(p);
    const TridiagCoeffs as = tridiag_coeffs(CoeffKind::Astar, p);
    const TridiagCoeffs a = tridiag_coeffs(CoeffKind::A, p);
    for (int m = 0; m < p.dim(); ++m) {
      CHECK(std::abs(as.at(m, m - 1) + as.at(m, m) + as.at(m, m + 1) - sp.theta_star[0]) < 1e-11);
      CHECK(std::abs(a.at(m, m - 1) + a.at(m, m) + a.at(m, m + 1) - sp.theta[0]) < 1e-11);
    }
    CHECK(as.at(0, -1) == cplx{0.0});
    CHECK(as.at(p.two_s + 1, p.two_s) == cplx{0.0});
  }
}

TEST_CASE("coeff edge cases") {
  const ModelParams p = qrb::testing::random_generic(300, 2);
  CHECK(coeff(CoeffKind::Astar, -1, 0, p) == cplx{0.0});
  CHECK(coeff(CoeffKind::Astar, 3, 2, p) == cplx{0.0});
  CHECK_THROWS_AS(coeff(CoeffKind::Astar, 0, 2, p), DomainError);
  for (int m = 1; m <= p.two_s; ++m) {
    CHECK(std::abs(coeff(CoeffKind::Astar, m, m - 1, p)) > 1e-8);
    CHECK(std::abs(coeff(CoeffKind::Astar, m - 1, m, p)) > 1e-8);
  }
}

TEST_CASE("dual coefficients are a diagonal similarity of the plain ones") {
  Rng rng(17);
  const ModelParams p = qrb::testing::random_generic(301, 3);
  std::vector<cplx> xi(4), xis(4);
  for (auto& x : xi) x = rng.annulus();
  for (auto& x : xis) x = rng.annulus();
  const TridiagonalRealization real = build(p, Gauge::theta_star_basis, GaugeChoice{xi, xis});
  for (int r = 0; r < 4; ++r)
    for (int c = std::max(0, r - 1); c <= std::min(3, r + 1); ++c) {
      const cplx d1 = coeff(CoeffKind::Astar_dual, r, c, p, xi, xis);
      CHECK(std::abs(d1 - coeff(CoeffKind::Astar, r, c, p) * xi[r] / xi[c]) < 1e-12);
      CHECK(std::abs(d1 - real.astar_dual(r, c)) < 1e-12);
      const cplx d2 = coeff(CoeffKind::A_dual, r, c, p, xi, xis);
      CHECK(std::abs(d2 - coeff(CoeffKind::A, r, c, p) * xis[r] / xis[c]) < 1e-12);
      CHECK(std::abs(d2 - real.a_dual(r, c)) < 1e-12);
    }
  const TridiagCoeffs t = tridiag_coeffs(CoeffKind::A_dual, p, xi, xis);
  CHECK(std::abs(t.at(2, 1) - real.a_dual(2, 1)) < 1e-12);
}

TEST_CASE("Askey-Wilson relations and Cayley-Hamilton in both bases") {
  Rng rng(41);
  for (int two_s = 1; two_s <= 4; ++two_s)
    for (int k = 0; k < 5; ++k) {
      const ModelParams p = qrb::testing::random_generic(rng, two_s);
      const StructureConstants sc = structure_constants(p);
      for (Gauge g : {Gauge::theta_star_basis, Gauge::theta_basis}) {
        const TridiagonalRealization real = build(p, g);
        CHECK(verify_aw(real, sc).max() < 1e-10);
        CHECK(verify_cayley_hamilton(real).max() < 1e-8);
      }
    }
}

TEST_CASE("perturbed structure constants break the relations") {
  const ModelParams p = qrb::testing::random_generic(302, 2);
  StructureConstants sc = structure_constants(p);
  sc.omega *= 1.001;
  CHECK(verify_aw(build(p), sc).max() > 1e-6);
}

TEST_CASE("eigenvector families") {
  const ModelParams p = qrb::testing::random_generic(303, 3);
  const TridiagonalRealization real = build(p);
  const Spectrum sp = spectrum(p);
  const EigenFamily fam = eigen_family(real.A_mat, sp.theta);
  for (double r : fam.residuals) CHECK(r < 1e-12);
  CHECK(biorthogonality_defect(fam) < 1e-10);
  for (std::size_t k = 0; k < fam.values.size(); ++k) {
    const auto v = fam.right(k);
    double mx = 0.0;
    for (cplx x : v) mx = std::max(mx, std::abs(x));
    CHECK(mx == doctest::Approx(1.0));
  }

  std::vector<cplx> wrong = sp.theta;
  wrong[1] += 0.3;
  CHECK_THROWS_AS(eigen_family(real.A_mat, wrong), EigenMismatch);
}

}
