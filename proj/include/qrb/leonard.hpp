#pragma once

// Matrix realizations of a q-Racah Leonard pair and their verification.

#include <optional>
#include <vector>

#include "qrb/linalg.hpp"
#include "qrb/model.hpp"

namespace qrb {

enum class CoeffKind { Astar, A, Astar_dual, A_dual };

/// Tridiagonal coefficient X_{row,col} with |row - col| <= 1.
///
/// Astar: A*_{M,M'} from the closed forms, with A*_{M,M} = theta*_0 -
/// A*_{M,M+1} - A*_{M,M-1}. A: the same with (b, c, zeta, M) <-> (b*, c*,
/// zeta^-1, N). The dual kinds scale by xi_row / xi_col (xi for Astar_dual,
/// xi_star for A_dual); an empty gauge vector means all ones.
///
/// Indices outside [0, 2s] yield 0 (A*_{-1,0} = A*_{2s+1,2s} = 0). Throws
/// DomainError for |row - col| > 1 or a vanishing denominator.
cplx coeff(CoeffKind kind, int row, int col, const ModelParams& p,
           std::span<const cplx> xi = {}, std::span<const cplx> xi_star = {});

/// Coefficients X_{k,k-1}, X_{k,k}, X_{k-1,k} of one tridiagonal family.
struct TridiagCoeffs {
  std::vector<cplx> lower; ///< lower[k] = X_{k,k-1}, lower[0] = 0
  std::vector<cplx> diag;  ///< diag[k]  = X_{k,k}
  std::vector<cplx> upper; ///< upper[k] = X_{k-1,k}, upper[0] = 0

  /// X_{row,col}; zero outside the band or the index range.
  cplx at(int row, int col) const;
  int size() const { return static_cast<int>(diag.size()); }
};

TridiagCoeffs tridiag_coeffs(CoeffKind kind, const ModelParams& p,
                             std::span<const cplx> xi = {},
                             std::span<const cplx> xi_star = {});

enum class Gauge { theta_star_basis, theta_basis };

struct TridiagonalRealization {
  ModelParams params;
  Gauge gauge = Gauge::theta_star_basis;
  CMatrix A_mat;
  CMatrix Astar_mat;
  std::vector<cplx> xi;      ///< <theta_M|theta_M>
  std::vector<cplx> xi_star; ///< <theta*_N|theta*_N>
  TridiagCoeffs astar;       ///< A*_{M,M'}
  TridiagCoeffs a;           ///< A_{N,N'}

  /// A~*_{M,M'} = A*_{M,M'} xi_M / xi_M'.
  cplx astar_dual(int row, int col) const;
  /// A~_{N,N'} = A_{N,N'} xi*_N / xi*_N'.
  cplx a_dual(int row, int col) const;
};

struct GaugeChoice {
  std::vector<cplx> xi;
  std::vector<cplx> xi_star;
};

/// Both D x D matrices in the requested basis. In theta_star_basis the matrix
/// of A* is diag(theta*_N) and A_mat(r, c) = A_{r,c}; in theta_basis A is
/// diag(theta_M) and Astar_mat(r, c) = A*_{r,c}. Default gauge xi = xi* = 1.
TridiagonalRealization build(const ModelParams& p,
                             Gauge gauge = Gauge::theta_star_basis,
                             const std::optional<GaugeChoice>& xi_choice = std::nullopt);

struct ResidualPair {
  double first = 0.0;
  double second = 0.0;
  double max() const { return first > second ? first : second; }
};

/// Askey-Wilson residuals
///   |[A,[A,A*]_q]_{q^-1} - rho A* - omega A - eta I|_max / |[A,[A,A*]_q]_{q^-1}|_max
/// and the starred counterpart.
ResidualPair verify_aw(const TridiagonalRealization& real,
                       const StructureConstants& sc);

/// |prod_M (A - theta_M)|_max / prod_M (|A|_max + |theta_M|) and the starred
/// analogue.
ResidualPair verify_cayley_hamilton(const TridiagonalRealization& real);

class EigenMismatch : public NumericError {
public:
  using NumericError::NumericError;
};

struct EigenFamily {
  std::vector<cplx> values;
  CMatrix right_vectors; ///< column k: M v_k = lambda_k v_k
  CMatrix left_vectors;  ///< row k:    w_k M = lambda_k w_k
  std::vector<double> residuals; ///< max of right/left residual / |M|_max

  std::vector<cplx> right(std::size_t k) const { return right_vectors.column(k); }
  std::vector<cplx> left(std::size_t k) const { return left_vectors.row(k); }
};

/// Right and left eigenvectors for the given (simple, known) eigenvalues by
/// inverse iteration on M - lambda I. Each vector is pinned so that its
/// largest-modulus component (lowest index on ties) equals 1.
/// Throws EigenMismatch when a residual exceeds `tol` |M|_max.
EigenFamily eigen_family(const CMatrix& matrix, std::span<const cplx> known_values,
                         double tol = 1e-8);

/// max_{j != k} |w_j . v_k| / |w_k . v_k|.
double biorthogonality_defect(const EigenFamily& fam);

} // namespace qrb
