#include "qrb/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "qrb/leonard.hpp"
#include "qrb/transition.hpp"

namespace qrb {

using nlohmann::json;

namespace {

std::string join_codes(const std::vector<Diagnostic>& diags) {
  std::string s = "parameters are not generic:";
  for (const auto& d : diags) s += " " + d.code + " (" + d.message + ");";
  return s;
}

std::string num(double x) {
  if (x == 0.0) x = 0.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json optional_cplx(const std::optional<cplx>& z) { return z ? to_json(*z) : json(nullptr); }

json cplx_array(std::span<const cplx> v) {
  json a = json::array();
  for (cplx z : v) a.push_back(to_json(z));
  return a;
}

// max |a - b| over the table relative to max |a|.
double table_difference(const CMatrix& a, const CMatrix& b) {
  double diff = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) diff = std::max(diff, std::abs(a(r, c) - b(r, c)));
  return diff / std::max(a.max_abs(), kTinyModulus);
}

double unit_row_column_defect(const CMatrix& r) {
  double d = 0.0;
  for (std::size_t k = 0; k < r.rows(); ++k) {
    d = std::max(d, std::abs(r(0, k) - 1.0));
    d = std::max(d, std::abs(r(k, 0) - 1.0));
  }
  return d;
}

void add(VerificationReport& rep, std::string name, std::optional<double> residual,
         double threshold) {
  const bool pass = residual && std::isfinite(*residual) && *residual < threshold;
  rep.checks.push_back(CheckRecord{std::move(name), residual, threshold, pass});
}

} // namespace

GenericityRefusal::GenericityRefusal(std::vector<Diagnostic> diags)
    : std::runtime_error(join_codes(diags)), diags_(std::move(diags)) {}

void require_generic(const ModelParams& p, double tol) {
  auto diags = validate_genericity(p, tol);
  if (!diags.empty()) throw GenericityRefusal(std::move(diags));
}

json solution_json(const BetheSolution& s) {
  return json{{"roots", cplx_array(s.roots)},
              {"symmetrized", cplx_array(s.symmetrized)},
              {"residual", s.residual_max},
              {"admissible", s.admissible},
              {"reconstructed_eigenvalue", optional_cplx(s.reconstructed_eigenvalue)},
              {"functional_spread", s.functional_spread},
              {"matched_index", s.matched_index ? json(*s.matched_index) : json(nullptr)},
              {"match_error", s.match_error},
              {"hits", s.hits}};
}

json VerificationReport::to_json() const {
  json checks_json = json::array();
  for (const auto& c : checks)
    checks_json.push_back(json{{"name", c.name},
                               {"residual", c.residual ? json(*c.residual) : json(nullptr)},
                               {"threshold", c.threshold},
                               {"pass", c.pass}});
  return json{{"instance", instance}, {"checks", checks_json}, {"bethe", bethe},
              {"racah", racah},       {"pass", pass},          {"versions", {{"spec", "1.0"}}}};
}

std::string VerificationReport::checks_csv() const {
  std::ostringstream out;
  out << "name,residual,threshold,pass\n";
  for (const auto& c : checks)
    out << c.name << ',' << (c.residual ? num(*c.residual) : std::string()) << ','
        << num(c.threshold) << ',' << (c.pass ? "true" : "false") << '\n';
  return out.str();
}

VerificationReport run_verify(const RunConfig& cfg) {
  const ModelParams& p = cfg.model;
  const double tol = cfg.tolerances.identity_tol;
  p.validate();
  require_generic(p, kDefaultDegeneracyTol);

  VerificationReport rep;
  rep.instance = to_json(p);
  rep.instance["tolerances"] = json{{"identity_tol", cfg.tolerances.identity_tol},
                                    {"bethe_tol", cfg.tolerances.bethe_tol},
                                    {"match_tol", cfg.tolerances.match_tol},
                                    {"dedup_tol", cfg.tolerances.dedup_tol}};
  rep.instance["solver"] = json{{"starts", cfg.starts}, {"max_iter", cfg.max_iter}, {"seed", cfg.seed}};

  add(rep, "model_constraint",
      std::abs(p.b * p.c - p.b_star * p.c_star) / std::abs(p.b * p.c), tol);

  const StructureConstants sc = structure_constants(p);
  const Spectrum sp = spectrum(p);
  const TridiagonalRealization real = build(p, Gauge::theta_star_basis);
  const TridiagonalRealization real_theta = build(p, Gauge::theta_basis);

  const ResidualPair aw = verify_aw(real, sc);
  add(rep, "askey_wilson_A", aw.first, tol);
  add(rep, "askey_wilson_Astar", aw.second, tol);
  const ResidualPair aw_t = verify_aw(real_theta, sc);
  add(rep, "askey_wilson_A_theta_basis", aw_t.first, tol);
  add(rep, "askey_wilson_Astar_theta_basis", aw_t.second, tol);
  const ResidualPair ch = verify_cayley_hamilton(real);
  add(rep, "cayley_hamilton_A", ch.first, tol);
  add(rep, "cayley_hamilton_Astar", ch.second, tol);

  const TransitionData td = build_transition(p);
  const ResidualPair inv = inverse_residuals(td);
  add(rep, "transition_inverse_left", inv.first, tol);
  add(rep, "transition_inverse_right", inv.second, tol);
  add(rep, "transition_eigenvectors", pinv_eigen_residual(td, real), tol);
  const ResidualPair rec = verify_recurrences(td, real);
  add(rep, "recurrence_in_M", rec.first, tol);
  add(rep, "recurrence_in_N", rec.second, tol);
  const ResidualPair orth = orthogonality_residuals(td);
  add(rep, "orthogonality_in_N", orth.first, tol);
  add(rep, "orthogonality_in_M", orth.second, tol);

  const EigenFamily fam = eigen_family(real.A_mat, sp.theta, tol);
  add(rep, "eigenvector_residual",
      *std::max_element(fam.residuals.begin(), fam.residuals.end()), tol);
  add(rep, "biorthogonality", biorthogonality_defect(fam), tol);

  const CMatrix series = td.R;
  const CMatrix recur = racah_table_recurrence(real);
  const CMatrix left_ratio = racah_table_double_ratio(fam, RacahSide::left);
  const CMatrix right_ratio = racah_table_double_ratio(fam, RacahSide::right);
  add(rep, "racah_series_vs_recurrence", table_difference(series, recur), tol);
  add(rep, "racah_series_vs_left_ratio", table_difference(series, left_ratio), tol);
  add(rep, "racah_series_vs_right_ratio", table_difference(series, right_ratio), tol);
  add(rep, "racah_unit_row_column", unit_row_column_defect(series), tol);

  const double scale = std::max(series.max_abs(), kTinyModulus);
  for (int m = 0; m < p.dim(); ++m)
    for (int n = 0; n < p.dim(); ++n) {
      const auto M = static_cast<std::size_t>(m), N = static_cast<std::size_t>(n);
      rep.racah.push_back(json{{"M", m},
                               {"N", n},
                               {"series", to_json(series(M, N))},
                               {"double_ratio", to_json(left_ratio(M, N))},
                               {"recurrence_residual", std::abs(recur(M, N) - series(M, N)) / scale}});
    }

  const SolverConfig solver = cfg.solver();
  for (BetheKind kind : kAllBetheKinds) {
    const CoverageReport cov = coverage(kind, p, solver);
    double dual_functional = 0.0;
    bool dual_measured = false;
    for (const auto& e : cov.entries) {
      json row{{"kind", std::string(to_string(kind))},
               {"index", e.index},
               {"level", is_homogeneous(kind) ? e.index : p.two_s},
               {"hit", e.hit}};
      row["solution"] = e.best ? solution_json(*e.best) : json(nullptr);
      rep.bethe.push_back(std::move(row));
      add(rep, "bethe_" + std::string(to_string(kind)) + "_" + std::to_string(e.index),
          e.hit ? std::optional<double>(e.best->match_error) : std::nullopt,
          cfg.tolerances.match_tol);

      if (kind == BetheKind::dual_inhom_plus && e.hit) {
        const FunctionalEvaluation ev = evaluate_dual_plus(e.best->roots, p);
        const cplx closed = *e.best->reconstructed_eigenvalue;
        dual_functional = std::max({dual_functional, ev.spread,
                                    std::abs(ev.value - closed) / std::abs(closed)});
        dual_measured = true;
      }
    }
    if (kind == BetheKind::dual_inhom_plus)
      add(rep, "dual_plus_functional",
          dual_measured ? std::optional<double>(dual_functional) : std::nullopt, kProbeTol);
  }

  rep.pass = std::all_of(rep.checks.begin(), rep.checks.end(),
                         [](const CheckRecord& c) { return c.pass; });
  return rep;
}

std::optional<RacahRoute> parse_racah_route(std::string_view name) {
  if (name == "series") return RacahRoute::series;
  if (name == "recurrence") return RacahRoute::recurrence;
  if (name == "double-ratio" || name == "double_ratio") return RacahRoute::double_ratio;
  return std::nullopt;
}

CMatrix run_racah_table(const RunConfig& cfg, RacahRoute route) {
  const ModelParams& p = cfg.model;
  p.validate();
  require_generic(p, kDefaultDegeneracyTol);
  switch (route) {
  case RacahRoute::series:
    return racah_table(p);
  case RacahRoute::recurrence:
    return racah_table_recurrence(build(p, Gauge::theta_star_basis));
  case RacahRoute::double_ratio: {
    const TridiagonalRealization real = build(p, Gauge::theta_star_basis);
    const EigenFamily fam = eigen_family(real.A_mat, spectrum(p).theta);
    return racah_table_double_ratio(fam, RacahSide::left);
  }
  }
  throw DomainError("unknown route");
}

std::string racah_csv(const CMatrix& table) {
  std::ostringstream out;
  out << "M,N,re,im\n";
  for (std::size_t m = 0; m < table.rows(); ++m)
    for (std::size_t n = 0; n < table.cols(); ++n)
      out << m << ',' << n << ',' << num(table(m, n).real()) << ',' << num(table(m, n).imag())
          << '\n';
  return out.str();
}

json racah_json(const CMatrix& table) {
  json a = json::array();
  for (std::size_t m = 0; m < table.rows(); ++m)
    for (std::size_t n = 0; n < table.cols(); ++n)
      a.push_back(json{{"M", m}, {"N", n}, {"value", to_json(table(m, n))}});
  return a;
}

std::vector<BetheSolution> run_bethe(const RunConfig& cfg, BetheKind kind, int level) {
  const ModelParams& p = cfg.model;
  require_generic(p, kDefaultDegeneracyTol);
  const BetheSystem sys = BetheSystem::make(kind, p, level);
  std::vector<BetheSolution> all = solve(sys, cfg.solver());
  std::vector<BetheSolution> out;
  for (auto& s : all)
    if (s.admissible) out.push_back(std::move(s));
  return out;
}

json bethe_json(BetheKind kind, int level, const std::vector<BetheSolution>& sols) {
  json a = json::array();
  for (const auto& s : sols) a.push_back(solution_json(s));
  return json{{"kind", std::string(to_string(kind))}, {"level", level}, {"solutions", a}};
}

std::string bethe_csv(const std::vector<BetheSolution>& sols) {
  std::ostringstream out;
  out << "solution,matched_index,residual,eig_re,eig_im,root,u_re,u_im,U_re,U_im\n";
  for (std::size_t k = 0; k < sols.size(); ++k) {
    const auto& s = sols[k];
    const std::string head =
        std::to_string(k) + ',' + (s.matched_index ? std::to_string(*s.matched_index) : "") + ',' +
        num(s.residual_max) + ',' +
        (s.reconstructed_eigenvalue ? num(s.reconstructed_eigenvalue->real()) + ',' +
                                          num(s.reconstructed_eigenvalue->imag())
                                    : std::string(","));
    if (s.roots.empty()) out << head << ",,,,,\n";
    for (std::size_t i = 0; i < s.roots.size(); ++i)
      out << head << ',' << i << ',' << num(s.roots[i].real()) << ',' << num(s.roots[i].imag())
          << ',' << num(s.symmetrized[i].real()) << ',' << num(s.symmetrized[i].imag()) << '\n';
  }
  return out.str();
}

json spectrum_json(const RunConfig& cfg) {
  const ModelParams& p = cfg.model;
  require_generic(p, kDefaultDegeneracyTol);
  const Spectrum sp = spectrum(p);
  const StructureConstants sc = structure_constants(p);
  return json{{"theta", cplx_array(sp.theta)},
              {"theta_star", cplx_array(sp.theta_star)},
              {"structure_constants",
               {{"rho", to_json(sc.rho)},
                {"omega", to_json(sc.omega)},
                {"eta", to_json(sc.eta)},
                {"eta_star", to_json(sc.eta_star)}}}};
}

std::string spectrum_csv(const RunConfig& cfg) {
  const ModelParams& p = cfg.model;
  require_generic(p, kDefaultDegeneracyTol);
  const Spectrum sp = spectrum(p);
  std::ostringstream out;
  out << "sequence,index,re,im\n";
  for (std::size_t k = 0; k < sp.theta.size(); ++k)
    out << "theta," << k << ',' << num(sp.theta[k].real()) << ',' << num(sp.theta[k].imag()) << '\n';
  for (std::size_t k = 0; k < sp.theta_star.size(); ++k)
    out << "theta_star," << k << ',' << num(sp.theta_star[k].real()) << ','
        << num(sp.theta_star[k].imag()) << '\n';
  return out.str();
}

} // namespace qrb
