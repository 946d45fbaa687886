#pragma once

// q-Racah polynomials, the transition matrices between the two eigenbases and
// the normalization coefficients of Bethe eigenvectors.

#include <vector>

#include "qrb/leonard.hpp"

namespace qrb {

/// R_M(theta*_N) as a terminating 4phi3 in base q^2.
cplx racah(int M, int N, const ModelParams& p);

/// (D x D) table of racah(M, N), row M, column N.
CMatrix racah_table(const ModelParams& p);

/// R_M(theta*_N) propagated upward in M with the three-term recurrence in
/// A*_{M,M'} from R_{-1} = 0, R_0 = 1.
CMatrix racah_table_recurrence(const TridiagonalRealization& real);

struct Normalizers {
  std::vector<cplx> kN;
  std::vector<cplx> kM_star;
  cplx nu0;
};

/// k_N, k*_M and nu0. Throws DomainError on a vanishing denominator.
Normalizers normalizers(const ModelParams& p);

struct TransitionData {
  CMatrix R;    ///< R(M, N) = R_M(theta*_N)
  std::vector<cplx> kN;
  std::vector<cplx> kM_star;
  cplx nu0;
  CMatrix P;    ///< P(M, N) = k_N R_M(theta*_N)
  CMatrix Pinv; ///< Pinv(N, M) = nu0^-1 k*_M R_M(theta*_N)
};

TransitionData build_transition(const ModelParams& p);

/// Residuals of the three-term recurrences in M (with A*) and in N (with A),
/// each max |lhs - rhs| / max |theta*_N R_M| (resp. |theta_M R_M|).
ResidualPair verify_recurrences(const TransitionData& td,
                                const TridiagonalRealization& real);

/// max |Pinv P - I| and max |P Pinv - I|.
ResidualPair inverse_residuals(const TransitionData& td);

/// Orthogonality of the q-Racah polynomials in both directions:
///   sum_N k_N R_M R_M' = nu0 / k*_M delta_MM'
///   sum_M k*_M R_M(theta*_N) R_M(theta*_N') = nu0 / k_N delta_NN'
/// each residual relative to the largest diagonal term.
ResidualPair orthogonality_residuals(const TransitionData& td);

/// max_M |A_mat Pinv(:, M) - theta_M Pinv(:, M)| / (|A_mat|_max |Pinv(:,M)|_max)
/// for a theta_star_basis realization.
double pinv_eigen_residual(const TransitionData& td, const TridiagonalRealization& real);

enum class RacahSide { left, right };

/// Gauge-invariant double ratio of scalar products equal to R_M(theta*_N),
/// for the eigenfamily of A_mat in the theta_star_basis (|theta*_N> = e_N):
///   left:  <th_M|th*_N><th_0|th*_0> / (<th_0|th*_N><th_M|th*_0>)
///   right: <th*_N|th_M><th*_0|th_0> / (<th*_0|th_M><th*_N|th_0>)
/// Throws DomainError on a vanishing denominator scalar product.
cplx racah_from_scalar_products(const EigenFamily& fam_A, int M, int N, RacahSide side);

CMatrix racah_table_double_ratio(const EigenFamily& fam_A, RacahSide side);

enum class NormalizerKind {
  N_hom,
  Nstar_hom,
  Ntilde_hom,
  Ntildestar_hom,
  N_inhom,
  Nstar_inhom,
  Ntilde_inhom,
  Ntildestar_inhom,
};

/// Bethe-state normalizations. Homogeneous kinds use all `roots` (the level
/// is roots.size()); inhomogeneous kinds need 2s roots and `index` selects
/// M (N_inhom, Ntilde_inhom) or N (Nstar_inhom, Ntildestar_inhom):
///   N_hom          prod_k (q u_k b(u_k^2) A*_{k,k-1})^-1
///   Nstar_hom      prod_k (-q^-1 u_k^-1 b(u_k^2) A_{k,k-1})^-1
///   Ntilde_hom     prod_k (q^-1 u_k b(u_k^2) A~*_{k,k-1})^-1
///   Ntildestar_hom prod_k (-q u_k^-1 b(u_k^2) A~_{k,k-1})^-1
///   N_inhom        Nstar_hom(u) Pinv(2s, M)
///   Nstar_inhom    N_hom(u) P(2s, N)
///   Ntilde_inhom   Ntildestar_hom(u) P(M, 2s) xi_M / xi*_2s
///   Ntildestar_inhom Ntilde_hom(u) Pinv(N, 2s) xi*_N / xi_2s
/// Throws DomainError on a zero factor.
cplx bethe_normalizer(NormalizerKind kind, std::span<const cplx> roots,
                      const TransitionData& td, const TridiagonalRealization& real,
                      int index = 0);

} // namespace qrb
