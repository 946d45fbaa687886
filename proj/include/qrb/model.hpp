#pragma once

// Parameters of one Leonard pair of q-Racah type, its structure constants and
// eigenvalue sequences.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qrb/qnum.hpp"

namespace qrb {

/// Parameter record rejected at construction (zero where nonzero is
/// required, b c != b* c*, two_s < 1).
class InvalidParams : public NumericError {
public:
  using NumericError::NumericError;
};

/// Two eigenvalues of a sequence coincide.
class SpectrumDegenerate : public NumericError {
public:
  using NumericError::NumericError;
};

struct ModelParams {
  QBase base{cplx{2.0, 0.0}};
  int two_s = 1; ///< dimension is two_s + 1
  cplx b{1.0}, c{1.0};
  cplx b_star{1.0}, c_star{1.0};
  cplx zeta{1.0};
  int m0 = 0;
  cplx chi{1.0};
  cplx alpha{0.0};
  cplx beta{0.0};

  int dim() const { return two_s + 1; }
  cplx q() const { return base.q(); }
  cplx qpow(int n) const { return base.pow(n); }

  /// Throws InvalidParams unless b, c, b*, c*, zeta, chi are nonzero and
  /// finite, two_s >= 1 and |b c - b* c*| <= 1e-10 |b c|.
  void validate() const;
};

struct StructureConstants {
  cplx rho;
  cplx omega;
  cplx eta;
  cplx eta_star;
};

/// rho = -b c (q^2 - q^-2)^2; omega, eta, eta* in the zeta parametrization.
StructureConstants structure_constants(const ModelParams& p);

/// rho evaluated from the starred pair, -b* c* (q^2 - q^-2)^2.
cplx rho_from_dual(const ModelParams& p);

struct Spectrum {
  std::vector<cplx> theta;      ///< theta_M = b q^{2M} + c q^{-2M}
  std::vector<cplx> theta_star; ///< theta*_N = b* q^{2N} + c* q^{-2N}
};

inline constexpr double kDefaultDegeneracyTol = 1e-8;

/// Smallest pairwise gap divided by the largest modulus in `values`.
double relative_min_gap(const std::vector<cplx>& values);

/// Both eigenvalue sequences. Throws SpectrumDegenerate when either sequence
/// has relative_min_gap <= tol.
Spectrum spectrum(const ModelParams& p, double tol = kDefaultDegeneracyTol);

/// Same sequences without the distinctness check.
Spectrum spectrum_unchecked(const ModelParams& p);

enum class VacuumMode {
  minus_vacuum,
  plus_vacuum,
  dual_minus,
  dual_plus,
  fix_beta_plus,
  fix_beta_minus,
  fix_alpha_plus,
  fix_alpha_minus,
};

std::string_view to_string(VacuumMode mode);

/// Reference-state parameters (alpha, beta) for the requested mode.
///
///   minus_vacuum     (q^2-q^-2) chi^-1 alpha b q^{-m0}      = -1, beta = 0
///   plus_vacuum      (q^2-q^-2) chi^-1 alpha c* q^{m0}      =  1, beta = 0
///   dual_minus       (q^2-q^-2) chi^-1 beta  c q^{m0-2}     = -1, alpha = 0
///   dual_plus        (q^2-q^-2) chi^-1 beta  b* q^{-m0+2}   =  1, alpha = 0
///   fix_beta_plus   (q^2-q^-2) chi^-1 beta  b* q^{-m0}     =  1
///   fix_beta_minus  (q^2-q^-2) chi^-1 beta  c q^{m0}       = -1
///   fix_alpha_plus   (q^2-q^-2) chi^-1 alpha c* q^{m0}      =  1
///   fix_alpha_minus  (q^2-q^-2) chi^-1 alpha b q^{-m0}      = -1
///
/// The fix_alpha_* and fix_beta_* modes fix one parameter; the other keeps its value from `p`.
std::pair<cplx, cplx> fix_alpha_beta(const ModelParams& p, VacuumMode mode);

/// Left side of the defining condition of `mode` at the given (alpha, beta);
/// equals the mode's target (+1 or -1) after fix_alpha_beta.
cplx vacuum_condition(const ModelParams& p, VacuumMode mode, cplx alpha,
                      cplx beta);

/// +1 or -1.
double vacuum_target(VacuumMode mode);

struct Diagnostic {
  std::string code;
  std::string message;
};

/// Every violated genericity condition, empty when the parameters are
/// generic. Codes: "spectrum_degenerate", "dual_spectrum_degenerate",
/// "root_of_unity", "tridiag_denominator", "dual_tridiag_denominator",
/// "offdiag_zero", "normalizer_denominator", "racah_denominator".
std::vector<Diagnostic> validate_genericity(const ModelParams& p,
                                            double tol = kDefaultDegeneracyTol);

} // namespace qrb
