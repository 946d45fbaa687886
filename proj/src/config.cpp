#include "qrb/config.hpp"

#include <cmath>
#include <fstream>
#include <utility>

namespace qrb {

using nlohmann::json;

namespace {

const json* member(const json& j, const char* key) {
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

cplx read_cplx(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigError(path, "expected [re, im]");
  const cplx z{j[0].get<double>(), j[1].get<double>()};
  if (!is_finite(z)) throw ConfigError(path, "not finite");
  return z;
}

cplx required_cplx(const json& j, const char* key) {
  const json* v = member(j, key);
  if (!v) throw ConfigError(key, "missing");
  return read_cplx(*v, key);
}

long long read_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<long long>();
}

double positive(const json& parent, const char* key, const std::string& prefix, double fallback) {
  const json* v = member(parent, key);
  if (!v) return fallback;
  const std::string path = prefix + "." + key;
  if (!v->is_number()) throw ConfigError(path, "expected a number");
  const double x = v->get<double>();
  if (!(x > 0.0) || !std::isfinite(x)) throw ConfigError(path, "must be positive");
  return x;
}

} // namespace

SolverConfig RunConfig::solver() const {
  SolverConfig s;
  s.starts = starts;
  s.max_iter = max_iter;
  s.seed = seed;
  s.tol = tolerances.bethe_tol;
  s.match_tol = tolerances.match_tol;
  s.dedup_tol = tolerances.dedup_tol;
  return s;
}

RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("$", "configuration must be a JSON object");
  RunConfig cfg;
  ModelParams& p = cfg.model;

  const cplx q = required_cplx(j, "q");
  try {
    p.base = QBase(q);
  } catch (const DomainError& e) {
    throw ConfigError("q", e.what());
  }
  const json* ts = member(j, "two_s");
  if (!ts) throw ConfigError("two_s", "missing");
  const long long two_s = read_int(*ts, "two_s");
  if (two_s < 1 || two_s > 64) throw ConfigError("two_s", "must be in [1, 64]");
  p.two_s = static_cast<int>(two_s);
  p.b = required_cplx(j, "b");
  p.c = required_cplx(j, "c");
  p.b_star = required_cplx(j, "b_star");
  p.c_star = required_cplx(j, "c_star");
  p.zeta = required_cplx(j, "zeta");
  if (const json* m0 = member(j, "m0")) {
    p.m0 = static_cast<int>(read_int(*m0, "m0"));
  } else {
    throw ConfigError("m0", "missing");
  }
  if (const json* chi = member(j, "chi")) p.chi = read_cplx(*chi, "chi");

  const std::pair<const char*, cplx> nonzero[] = {{"b", p.b},           {"c", p.c},
                                                  {"b_star", p.b_star}, {"c_star", p.c_star},
                                                  {"zeta", p.zeta},     {"chi", p.chi}};
  for (const auto& [key, v] : nonzero)
    if (std::abs(v) == 0.0) throw ConfigError(key, "must be nonzero");
  if (std::abs(p.b * p.c - p.b_star * p.c_star) > 1e-10 * std::abs(p.b * p.c))
    throw ConfigError("c_star", "b*c must equal b_star*c_star");

  if (const json* t = member(j, "tolerances")) {
    if (!t->is_object()) throw ConfigError("tolerances", "expected an object");
    Tolerances& tol = cfg.tolerances;
    tol.identity_tol = positive(*t, "identity_tol", "tolerances", tol.identity_tol);
    tol.bethe_tol = positive(*t, "bethe_tol", "tolerances", tol.bethe_tol);
    tol.match_tol = positive(*t, "match_tol", "tolerances", tol.match_tol);
    tol.dedup_tol = positive(*t, "dedup_tol", "tolerances", tol.dedup_tol);
  }

  if (const json* s = member(j, "solver")) {
    if (!s->is_object()) throw ConfigError("solver", "expected an object");
    if (const json* v = member(*s, "starts")) {
      const long long n = read_int(*v, "solver.starts");
      if (n < 1 || n > 1000000) throw ConfigError("solver.starts", "must be in [1, 1000000]");
      cfg.starts = static_cast<int>(n);
    }
    if (const json* v = member(*s, "max_iter")) {
      const long long n = read_int(*v, "solver.max_iter");
      if (n < 1 || n > 100000) throw ConfigError("solver.max_iter", "must be in [1, 100000]");
      cfg.max_iter = static_cast<int>(n);
    }
    if (const json* v = member(*s, "seed")) {
      if (!v->is_number_integer()) throw ConfigError("solver.seed", "expected an integer");
      if (v->is_number_unsigned()) cfg.seed = v->get<std::uint64_t>();
      else {
        const long long n = v->get<long long>();
        if (n < 0) throw ConfigError("solver.seed", "must be non-negative");
        cfg.seed = static_cast<std::uint64_t>(n);
      }
    }
  }

  if (const json* o = member(j, "output")) {
    if (!o->is_object()) throw ConfigError("output", "expected an object");
    if (const json* f = member(*o, "format")) {
      if (!f->is_string()) throw ConfigError("output.format", "expected \"json\" or \"csv\"");
      const std::string s = f->get<std::string>();
      if (s == "json") cfg.format = OutputFormat::json;
      else if (s == "csv") cfg.format = OutputFormat::csv;
      else throw ConfigError("output.format", "expected \"json\" or \"csv\", got \"" + s + "\"");
    }
    if (const json* path = member(*o, "path")) {
      if (!path->is_string()) throw ConfigError("output.path", "expected a string");
      cfg.path = path->get<std::string>();
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("$", "cannot open " + file);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("$", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json to_json(const ModelParams& p) {
  return json{{"q", to_json(p.q())},           {"two_s", p.two_s},
              {"b", to_json(p.b)},             {"c", to_json(p.c)},
              {"b_star", to_json(p.b_star)},   {"c_star", to_json(p.c_star)},
              {"zeta", to_json(p.zeta)},       {"m0", p.m0},
              {"chi", to_json(p.chi)}};
}

} // namespace qrb
