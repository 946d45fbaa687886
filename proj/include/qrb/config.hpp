#pragma once

// Run configuration read from a JSON file.

#include <cstdint>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "qrb/bethe.hpp"
#include "qrb/model.hpp"

namespace qrb {

/// Malformed or out-of-range configuration; the message starts with the
/// dotted path of the offending field.
class ConfigError : public std::runtime_error {
public:
  ConfigError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

private:
  std::string path_;
};

struct Tolerances {
  double identity_tol = 1e-8;
  double bethe_tol = 1e-10;
  double match_tol = 1e-6;
  double dedup_tol = 1e-6;
};

enum class OutputFormat { json, csv };

struct RunConfig {
  ModelParams model;
  Tolerances tolerances;
  int starts = 400;
  int max_iter = 200;
  std::uint64_t seed = 42;
  OutputFormat format = OutputFormat::json;
  std::string path; ///< empty: standard output

  SolverConfig solver() const;
};

/// Parses and validates a configuration object. Throws ConfigError.
/// The constraint b c = b* c* is checked here (path "c_star").
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& file);

nlohmann::json to_json(cplx z);
nlohmann::json to_json(const ModelParams& p);

} // namespace qrb
