#pragma once

// Verification pipeline and the machine-readable outputs of the command line
// tool.

#include <string>
#include <vector>

#include <json.hpp>

#include "qrb/bethe.hpp"
#include "qrb/config.hpp"
#include "qrb/linalg.hpp"

namespace qrb {

/// Parameters failed the genericity gate.
class GenericityRefusal : public std::runtime_error {
public:
  explicit GenericityRefusal(std::vector<Diagnostic> diags);
  const std::vector<Diagnostic>& diagnostics() const { return diags_; }

private:
  std::vector<Diagnostic> diags_;
};

/// Throws GenericityRefusal unless validate_genericity is empty.
void require_generic(const ModelParams& p, double tol);

struct CheckRecord {
  std::string name;
  std::optional<double> residual; ///< empty when nothing could be measured
  double threshold = 0.0;
  bool pass = false;
};

struct VerificationReport {
  nlohmann::json instance;
  std::vector<CheckRecord> checks;
  nlohmann::json bethe = nlohmann::json::array();
  nlohmann::json racah = nlohmann::json::array();
  bool pass = false;

  nlohmann::json to_json() const;
  /// name,residual,threshold,pass
  std::string checks_csv() const;
};

VerificationReport run_verify(const RunConfig& cfg);

enum class RacahRoute { series, recurrence, double_ratio };

std::optional<RacahRoute> parse_racah_route(std::string_view name);

CMatrix run_racah_table(const RunConfig& cfg, RacahRoute route);
/// Header "M,N,re,im", one row per entry, row-major in (M, N).
std::string racah_csv(const CMatrix& table);
nlohmann::json racah_json(const CMatrix& table);

/// All distinct admissible solutions at the given level.
std::vector<BetheSolution> run_bethe(const RunConfig& cfg, BetheKind kind, int level);
nlohmann::json bethe_json(BetheKind kind, int level, const std::vector<BetheSolution>& sols);
std::string bethe_csv(const std::vector<BetheSolution>& sols);

nlohmann::json spectrum_json(const RunConfig& cfg);
std::string spectrum_csv(const RunConfig& cfg);

nlohmann::json solution_json(const BetheSolution& s);

} // namespace qrb
