// Command line front end: verify, racah, bethe, spectrum.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qrb/report.hpp"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitRefused = 2;

void emit(const qrb::RunConfig& cfg, const std::string& text) {
  if (cfg.path.empty() || cfg.path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.path);
  if (!out) throw qrb::ConfigError("output.path", "cannot write " + cfg.path);
  out << text;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"q-Racah Leonard pairs and their Bethe equations"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string route = "series";
  std::string kind_name;
  int level = -1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "JSON configuration file")->required();
    sub->add_option("--seed", seed, "override solver.seed");
  };

  CLI::App* verify = app.add_subcommand("verify", "run every check and print the report");
  add_common(verify);
  CLI::App* racah = app.add_subcommand("racah", "table of R_M(theta*_N)");
  add_common(racah);
  racah->add_option("--route", route, "series | recurrence | double-ratio")
      ->check(CLI::IsMember({"series", "recurrence", "double-ratio"}));
  CLI::App* bethe = app.add_subcommand("bethe", "solve one Bethe system");
  add_common(bethe);
  std::string kinds;
  for (auto k : qrb::kAllBetheKinds) kinds += (kinds.empty() ? "" : ", ") + std::string(qrb::to_string(k));
  bethe->add_option("--kind", kind_name, "one of: " + kinds)->required();
  bethe->add_option("--level", level, "number of roots (homogeneous kinds); defaults to 2s");
  CLI::App* spectrum = app.add_subcommand("spectrum", "eigenvalue sequences and structure constants");
  add_common(spectrum);

  CLI11_PARSE(app, argc, argv);

  try {
    qrb::RunConfig cfg = qrb::load_config(config_path);
    if (seed) cfg.seed = *seed;
    const bool csv = cfg.format == qrb::OutputFormat::csv;

    if (verify->parsed()) {
      const qrb::VerificationReport rep = qrb::run_verify(cfg);
      emit(cfg, csv ? rep.checks_csv() : dump(rep.to_json()));
      return rep.pass ? 0 : kExitFail;
    }
    if (racah->parsed()) {
      const qrb::CMatrix table = qrb::run_racah_table(cfg, *qrb::parse_racah_route(route));
      emit(cfg, csv ? qrb::racah_csv(table) : dump(qrb::racah_json(table)));
      return 0;
    }
    if (bethe->parsed()) {
      const auto kind = qrb::parse_bethe_kind(kind_name);
      if (!kind) {
        std::cerr << "error: unknown kind '" << kind_name << "'; valid kinds: " << kinds << "\n";
        return kExitRefused;
      }
      const int lvl = level < 0 ? cfg.model.two_s : level;
      std::vector<qrb::BetheSolution> sols;
      try {
        sols = qrb::run_bethe(cfg, *kind, lvl);
      } catch (const qrb::InvalidParams& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRefused;
      }
      emit(cfg, csv ? qrb::bethe_csv(sols) : dump(qrb::bethe_json(*kind, lvl, sols)));
      return 0;
    }
    if (spectrum->parsed()) {
      emit(cfg, csv ? qrb::spectrum_csv(cfg) : dump(qrb::spectrum_json(cfg)));
      return 0;
    }
  } catch (const qrb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitRefused;
  } catch (const qrb::GenericityRefusal& e) {
    std::cerr << "refused: parameters are not generic\n";
    for (const auto& d : e.diagnostics()) std::cerr << "  " << d.code << ": " << d.message << "\n";
    return kExitRefused;
  } catch (const qrb::InvalidParams& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return kExitRefused;
  } catch (const qrb::NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitFail;
}
