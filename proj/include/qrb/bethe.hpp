#pragma once

// Bethe equations of homogeneous and inhomogeneous type for a q-Racah Leonard
// pair: residuals, eigenvalue reconstruction and a multistart Newton solver.

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "qrb/model.hpp"

namespace qrb {

enum class BetheKind {
  hom_minus,        ///< diagonalizes A, eps = -1, level M in [0, 2s]
  hom_plus,         ///< diagonalizes A*, eps = +1, level N in [0, 2s]
  inhom_plus,       ///< 2s roots, eigenvalue of A
  inhom_minus,      ///< 2s roots, eigenvalue of A*
  dual_inhom_plus,  ///< 2s roots, covector eigenvalue of A
  dual_inhom_minus, ///< 2s roots, covector eigenvalue of A*
};

inline constexpr std::array<BetheKind, 6> kAllBetheKinds = {
    BetheKind::hom_minus,       BetheKind::hom_plus,
    BetheKind::inhom_plus,      BetheKind::inhom_minus,
    BetheKind::dual_inhom_plus, BetheKind::dual_inhom_minus};

std::string_view to_string(BetheKind kind);
std::optional<BetheKind> parse_bethe_kind(std::string_view name);

bool is_homogeneous(BetheKind kind);
/// +1 or -1.
int epsilon(BetheKind kind);
/// True when the reconstructed eigenvalue belongs to A* (theta*_N).
bool targets_dual_spectrum(BetheKind kind);

struct BetheSystem {
  BetheKind kind = BetheKind::hom_minus;
  int level = 0;
  ModelParams params;

  /// Validates the level: [0, 2s] for homogeneous kinds, exactly 2s
  /// otherwise (a negative level selects 2s for inhomogeneous kinds).
  static BetheSystem make(BetheKind kind, const ModelParams& p, int level = -1);
};

/// (Lambda_1^eps(u), Lambda_2^eps(u)). Throws DomainError at u = 0 or at the
/// pole q u^2 = q^-1 u^-2 of Lambda_2.
std::pair<cplx, cplx> lambda12(int eps, cplx u, const ModelParams& p);

/// (f(u, v), h(u, v)) with
///   f = b(q v/u) b(u v) / (b(v/u) b(q u v)),
///   h = b(q^2 u v) b(q u/v) / (b(q u v) b(u/v)).
/// Throws DomainError at a pole.
std::pair<cplx, cplx> exchange_fh(cplx u, cplx v, const QBase& base);

/// gamma^eps(u, m) = alpha^{(1-eps)/2} beta^{(1+eps)/2} q^{-m} u
///                 - alpha^{(1+eps)/2} beta^{(1-eps)/2} q^{m} u^-1.
cplx gamma_eps(int eps, cplx u, int m, const ModelParams& p);

/// etabar(u) = (q + q^-1) rho^-1 (eta u + eta* u^-1).
cplx etabar(cplx u, const StructureConstants& sc, const QBase& base);

/// U = (q u^2 + q^-1 u^-2) / (q + q^-1).
cplx symmetrized_root(cplx u, const QBase& base);

/// prod_{k=0}^{2s} b(q^{1/2+k-s} zeta u) b(q^{1/2+k-s} zeta^-1 u).
cplx inhomogeneity_product(cplx u, const ModelParams& p);

/// nu_+ = q^{-1-4s} c*, nu_- = q^{1+4s} b.
cplx nu_inhom(int eps, const ModelParams& p);
/// nu~_+ = q^{1+4s} b*, nu~_- = q^{-1-4s} c.
cplx nu_dual(int eps, const ModelParams& p);

/// Bethe residual E at root i of the given root set.
cplx residual(const BetheSystem& sys, std::span<const cplx> roots, std::size_t i);
std::vector<cplx> residual_vector(const BetheSystem& sys, std::span<const cplx> roots);

/// The E_+ residual written with delta = b* q^{4s} as in the derivation of the
/// dual eigenvalue; agrees with residual() for dual_inhom_plus.
cplx dual_plus_delta_residual(std::span<const cplx> roots, std::size_t i,
                              const ModelParams& p);

/// Homogeneous eigenvalue functional lambda^L_eps(u, roots): the diagonal
/// part of the decomposition of A (eps = -1) or A* (eps = +1) in dynamical
/// operators, evaluated on a Bethe vector. Independent of u on-shell.
cplx homogeneous_functional(int eps, cplx u, std::span<const cplx> roots,
                            const ModelParams& p, const StructureConstants& sc);

/// lambda_+^{2s}(v, roots) for the dual inhomogeneous system; independent of v
/// on-shell, where it equals the closed form of dual_inhom_plus.
cplx dual_plus_functional(cplx v, std::span<const cplx> roots, const ModelParams& p,
                          const StructureConstants& sc);

/// Closed-form eigenvalue of an inhomogeneous kind in terms of
/// S = sum_j (q u_j^2 + q^-1 u_j^-2). Throws for homogeneous kinds.
cplx closed_form_eigenvalue(BetheKind kind, std::span<const cplx> roots,
                            const ModelParams& p);

struct FunctionalEvaluation {
  cplx value;
  double spread = 0.0; ///< max relative deviation across probe points
  std::vector<cplx> probes;
  std::vector<cplx> values;
};

/// Evaluates a u-dependent functional at three probe points in 0.5 < |u| < 2
/// chosen away from its poles.
FunctionalEvaluation evaluate_homogeneous(int eps, std::span<const cplx> roots,
                                          const ModelParams& p);
FunctionalEvaluation evaluate_dual_plus(std::span<const cplx> roots, const ModelParams& p);

inline constexpr double kProbeTol = 1e-8;

/// Eigenvalue reconstructed from roots: closed forms for inhomogeneous kinds,
/// the probed functional for homogeneous kinds. Throws DomainError when the
/// homogeneous functional varies by more than `probe_tol` (off-shell roots).
cplx eigenvalue_from_roots(const BetheSystem& sys, std::span<const cplx> roots,
                           double probe_tol = kProbeTol);

struct SolverConfig {
  int starts = 400;
  int max_iter = 200;
  double tol = 1e-10;           ///< residual max-norm for convergence
  std::uint64_t seed = 42;
  /// Starts are log-uniform in 1/start_radius < |u| < start_radius.
  double start_radius = 8.0;
  double dedup_tol = 1e-6;      ///< relative, on symmetrized roots
  double admissibility_tol = 1e-6;
  double match_tol = 1e-6;      ///< relative distance to the spectrum
  double probe_tol = kProbeTol;
  int threads = 0;              ///< 0: hardware concurrency
};

struct BetheSolution {
  std::vector<cplx> roots;
  double residual_max = 0.0;
  std::vector<cplx> symmetrized;
  bool admissible = false;
  std::optional<cplx> reconstructed_eigenvalue;
  double functional_spread = 0.0;
  std::optional<int> matched_index;
  double match_error = 0.0;
  int hits = 0; ///< number of starts converging to this solution
};

/// Multistart damped Newton. Returns every distinct converged solution
/// (admissible or not), admissible ones reconstructed and matched, ordered
/// by the lexicographic key of their symmetrized roots.
std::vector<BetheSolution> solve(const BetheSystem& sys, const SolverConfig& cfg);

struct CoverageEntry {
  int index = 0;
  bool hit = false;
  std::optional<BetheSolution> best;
};

struct CoverageReport {
  BetheKind kind = BetheKind::hom_minus;
  std::vector<CoverageEntry> entries;
  bool complete() const;
};

/// Homogeneous kinds: solve at every level 0..2s, index L hit when an
/// admissible level-L solution matches theta_L (theta*_L). Inhomogeneous
/// kinds: solve at level 2s and record which indices are matched.
CoverageReport coverage(BetheKind kind, const ModelParams& p, const SolverConfig& cfg);

} // namespace qrb
