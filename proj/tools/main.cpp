// Command-line front end: solve / diagnose / stability / converge, driven by a
// strict JSON config. Writes report.json and tables/*.csv into the output
// directory. Exit codes: 0 all requested checks passed (a solver collapse is a
// finding, not a failure), 2 checks ran with failures, 1 usage/config error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "equilib/diagnostics.hpp"
#include "equilib/meanfield.hpp"
#include "equilib/solver.hpp"
#include "equilib/system.hpp"
#include "equilib/test_field.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace equilib;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& where) {
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : allowed) {
      if (item.key() == k) { ok = true; break; }
    }
    if (!ok) {
      throw ConfigError("unknown key \"" + item.key() + "\" in " + where);
    }
  }
}

ProblemSpec parse_problem_spec(const json& j) {
  check_keys(j, {"dimension", "interaction", "potential"}, "spec");
  ProblemSpec spec;
  spec.dim = Dimension(j.value("dimension", 2));
  if (j.contains("interaction")) {
    spec.interaction = InteractionSpec::from_json(j.at("interaction"));
  }
  if (j.contains("potential")) {
    spec.potential = PotentialSpec::from_json(j.at("potential"));
  }
  return spec;
}

struct GeneratorParams {
  int n = 0;
  std::string pattern = "all_plus";
  double box_half_width = 1.0;
  unsigned seed = 0;
};

struct RunConfig {
  ProblemSpec spec;
  std::optional<Configuration> inline_initial;
  std::optional<GeneratorParams> generator;
  SolverOptions solver;
  json diagnostics = json::array();
  std::string output_dir = "out";
  std::vector<int> n_values;
  std::vector<unsigned> seeds;
  double tolerance_scale = 1.0;
};

Configuration parse_inline_configuration(const json& j) {
  check_keys(j, {"positions", "charges"}, "initial");
  const auto pts = j.at("positions").get<std::vector<std::vector<double>>>();
  const auto q = j.at("charges").get<std::vector<double>>();
  if (pts.empty()) throw ConfigError("initial.positions is empty");
  if (pts.size() != q.size()) {
    throw ConfigError("initial.positions and initial.charges disagree in length");
  }
  const int d = static_cast<int>(pts[0].size());
  Eigen::MatrixXd pos(d, static_cast<int>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (static_cast<int>(pts[i].size()) != d) {
      throw ConfigError("initial.positions rows have inconsistent dimension");
    }
    for (int k = 0; k < d; ++k) pos(k, static_cast<int>(i)) = pts[i][k];
  }
  Eigen::VectorXd charges(static_cast<int>(q.size()));
  for (std::size_t i = 0; i < q.size(); ++i) charges[static_cast<int>(i)] = q[i];
  return Configuration(pos, charges);
}

RunConfig parse_run_config(const json& j) {
  check_keys(j,
             {"spec", "initial", "solver", "diagnostics", "output_dir",
              "n_values", "seeds", "tolerance_scale"},
             "config");
  RunConfig cfg;
  if (j.contains("spec")) cfg.spec = parse_problem_spec(j.at("spec"));
  if (j.contains("initial")) {
    const json& init = j.at("initial");
    if (init.contains("generator")) {
      check_keys(init, {"generator"}, "initial");
      const json& g = init.at("generator");
      check_keys(g, {"n", "pattern", "box_half_width", "seed"}, "initial.generator");
      GeneratorParams gp;
      gp.n = g.at("n").get<int>();
      gp.pattern = g.value("pattern", "all_plus");
      if (gp.pattern != "all_plus" && gp.pattern != "alternating") {
        throw ConfigError("unknown charge pattern \"" + gp.pattern + "\"");
      }
      gp.box_half_width = g.value("box_half_width", 1.0);
      gp.seed = g.value("seed", 0u);
      cfg.generator = gp;
    } else {
      cfg.inline_initial = parse_inline_configuration(init);
    }
  }
  if (j.contains("solver")) cfg.solver = SolverOptions::from_json(j.at("solver"));
  if (j.contains("diagnostics")) {
    if (!j.at("diagnostics").is_array()) {
      throw ConfigError("diagnostics must be an array");
    }
    cfg.diagnostics = j.at("diagnostics");
  }
  if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
  if (j.contains("n_values")) cfg.n_values = j.at("n_values").get<std::vector<int>>();
  if (j.contains("seeds")) cfg.seeds = j.at("seeds").get<std::vector<unsigned>>();
  if (j.contains("tolerance_scale")) {
    cfg.tolerance_scale = j.at("tolerance_scale").get<double>();
    if (cfg.tolerance_scale <= 0) throw ConfigError("tolerance_scale must be > 0");
  }
  return cfg;
}

json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file \"" + path + "\"");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // translate the byte offset into line/column
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') { ++line; col = 1; } else { ++col; }
    }
    throw ConfigError(path + ":" + std::to_string(line) + ":" +
                      std::to_string(col) + ": " + e.what());
  }
}

Configuration load_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open state file \"" + path + "\"");
  return Configuration::read_particle_table(in);
}

Configuration initial_configuration(const RunConfig& cfg,
                                    std::optional<unsigned> seed_override) {
  if (cfg.inline_initial) return *cfg.inline_initial;
  if (cfg.generator) {
    const GeneratorParams& g = *cfg.generator;
    const unsigned seed = seed_override.value_or(g.seed);
    const ChargePattern pat = g.pattern == "alternating" ? ChargePattern::alternating
                                                         : ChargePattern::all_plus;
    return random_configuration(g.n, pat, g.box_half_width, seed);
  }
  throw ConfigError("config has no \"initial\" section");
}

// One requested check with its verdict; every tolerance is echoed.
struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  json detail;
};

json checks_to_json(const std::vector<Check>& checks) {
  json out = json::array();
  for (const auto& c : checks) {
    json e{{"name", c.name},
           {"value", c.value},
           {"tolerance", c.tolerance},
           {"pass", c.pass}};
    if (!c.detail.is_null()) e["detail"] = c.detail;
    out.push_back(e);
  }
  return out;
}

std::vector<TestField> default_fields(double extent) {
  return {TestField::constant_bump(Eigen::Vector2d(1, 0), Eigen::Vector2d::Zero(),
                                   2 * extent),
          TestField::coordinate_bump(0, 1, 1, Eigen::Vector2d::Zero(), 2 * extent),
          TestField::rotational_bump(Eigen::Vector2d::Zero(), 2 * extent)};
}

json configuration_to_json(const Configuration& cfg) {
  json pos = json::array();
  for (int i = 0; i < cfg.size(); ++i) {
    json row = json::array();
    for (int k = 0; k < cfg.dim(); ++k) row.push_back(cfg.positions()(k, i));
    pos.push_back(row);
  }
  json charges = json::array();
  for (int i = 0; i < cfg.size(); ++i) charges.push_back(cfg.charge(i));
  return {{"positions", pos}, {"charges", charges}};
}

void write_report(const fs::path& dir, const json& report) {
  fs::create_directories(dir);
  std::ofstream out(dir / "report.json");
  out << report.dump(2) << "\n";
}

void write_csv(const fs::path& dir, const std::string& name,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  fs::create_directories(dir / "tables");
  std::ofstream out(dir / "tables" / name);
  for (std::size_t k = 0; k < header.size(); ++k) {
    out << (k ? "," : "") << header[k];
  }
  out << "\n";
  out.precision(17);
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      out << (k ? "," : "") << row[k];
    }
    out << "\n";
  }
}

// ---- subcommands -----------------------------------------------------------

int cmd_solve(const RunConfig& cfg, const fs::path& outdir,
              std::optional<unsigned> seed_override, double tol_scale) {
  Configuration init = initial_configuration(cfg, seed_override);
  SolveReport rep = cfg.solver.mode == SolveMode::descent
                        ? minimize_energy(init, cfg.spec, cfg.solver)
                        : solve_critical(init, cfg.spec, cfg.solver);

  std::vector<Check> checks;
  if (rep.status == SolveStatus::converged) {
    // post-hoc certification, recomputed from scratch
    const double tol = cfg.solver.residual_tolerance * tol_scale *
                       (cfg.solver.mode == SolveMode::descent
                            ? rep.final_config.charge_mass()
                            : 1.0);
    const double res = max_residual_norm(rep.final_config, cfg.spec);
    checks.push_back({"residual_certified", res, tol, res <= tol, {}});
  }

  json report{{"command", "solve"},
              {"spec", {{"dimension", cfg.spec.dim.value()},
                        {"interaction", cfg.spec.interaction.to_json()},
                        {"potential", cfg.spec.potential.to_json()}}},
              {"solver", cfg.solver.to_json()},
              {"tolerance_scale", tol_scale},
              {"result", rep.to_json()},
              {"final_configuration", configuration_to_json(rep.final_config)},
              {"checks", checks_to_json(checks)}};
  write_report(outdir, report);

  std::vector<std::vector<double>> trace_rows;
  for (std::size_t k = 0; k < rep.trace.size(); ++k) {
    trace_rows.push_back({static_cast<double>(k), rep.trace[k].residual_norm,
                          rep.trace[k].min_gap, rep.trace[k].energy});
  }
  write_csv(outdir, "trace.csv", {"iteration", "residual_norm", "min_gap", "energy"},
            trace_rows);
  {
    fs::create_directories(outdir);
    std::ofstream st(outdir / "final_state.txt");
    rep.final_config.write_particle_table(st);
  }

  for (const auto& c : checks) {
    if (!c.pass) return 2;
  }
  return 0;  // collapse or max_iter is a finding, not a failure
}

int cmd_diagnose(const RunConfig& cfg, const Configuration& state,
                 const fs::path& outdir, double tol_scale) {
  std::vector<Check> checks;
  const double scale = state.scale();

  json requested = cfg.diagnostics;
  if (requested.empty()) {
    requested = json::array({json{{"check", "flux"}},
                             json{{"check", "vorticity"}},
                             json{{"check", "divergence"}}});
  }

  std::vector<std::vector<double>> flux_rows;
  for (const auto& item : requested) {
    check_keys(item, {"check", "tolerance", "nodes", "step"}, "diagnostics entry");
    const std::string name = item.at("check").get<std::string>();
    if (name == "flux") {
      const int nodes = item.value("nodes", 512);
      const double tol = item.value("tolerance", 1e-7) * tol_scale;
      const double delta = 0.4 * std::min(state.min_gap(), 1.0);
      for (int i = 0; i < state.size(); ++i) {
        Eigen::VectorXd computed =
            flux_integral(state, cfg.spec, state.position(i), delta, nodes);
        Eigen::VectorXd expected = flux_expected(state, cfg.spec, i);
        const double gap = (computed - expected).norm() / (1 + expected.norm());
        checks.push_back({"flux_particle_" + std::to_string(i), gap, tol,
                          gap <= tol,
                          json{{"computed", {computed[0], computed[1]}},
                               {"expected", {expected[0], expected[1]}},
                               {"delta", delta},
                               {"nodes", nodes}}});
        flux_rows.push_back({static_cast<double>(i), computed[0], computed[1],
                             expected[0], expected[1], gap});
      }
    } else if (name == "vorticity") {
      const double tol = item.value("tolerance", 1e-10) * tol_scale * scale;
      auto r = residuals(state, cfg.spec);
      int k = 0;
      for (const TestField& phi : default_fields(1 + scale)) {
        const double v = vorticity_residual(state, cfg.spec, phi);
        double direct = 0.0;
        for (int i = 0; i < state.size(); ++i) {
          direct += state.weight(i) * phi.value(state.position(i)).dot(r[i]);
        }
        const double gap = std::abs(v - direct);
        checks.push_back({"vorticity_identity_field_" + std::to_string(k), gap,
                          tol, gap <= tol, json{{"weak_form", v}, {"residual_sum", direct}}});
        ++k;
      }
    } else if (name == "divergence") {
      const double step = item.value("step", 1e-3);
      const double tol = item.value("tolerance", 1e-4) * tol_scale;
      // probe midway between the configuration hull and a far ring
      Eigen::Vector2d probe(1.7 * scale, 0.9 * scale);
      FieldEvaluator field(state, cfg.spec);
      const double div = divergence_probe(state, cfg.spec, probe, step).norm();
      checks.push_back({"divergence_probe", div, tol, div <= tol,
                        json{{"point", {probe[0], probe[1]}}, {"step", step}}});
    } else {
      throw ConfigError("unknown diagnostic check \"" + name + "\"");
    }
  }

  json report{{"command", "diagnose"},
              {"spec", {{"dimension", cfg.spec.dim.value()},
                        {"interaction", cfg.spec.interaction.to_json()},
                        {"potential", cfg.spec.potential.to_json()}}},
              {"tolerance_scale", tol_scale},
              {"configuration", configuration_to_json(state)},
              {"residual_norm", max_residual_norm(state, cfg.spec)},
              {"boundedness_statistic", boundedness_statistic(state, cfg.spec)},
              {"checks", checks_to_json(checks)}};
  write_report(outdir, report);
  if (!flux_rows.empty()) {
    write_csv(outdir, "flux.csv",
              {"particle", "computed_x", "computed_y", "expected_x", "expected_y",
               "relative_gap"},
              flux_rows);
  }

  for (const auto& c : checks) {
    if (!c.pass) return 2;
  }
  return 0;
}

int cmd_stability(const RunConfig& cfg, const Configuration& state,
                  const fs::path& outdir) {
  json variants = json::object();
  bool all_pass = true;
  std::vector<std::vector<double>> rows;
  for (StabilityVariant v : {StabilityVariant::literal, StabilityVariant::grouped,
                             StabilityVariant::full_hessian}) {
    StabilityReport rep = stability_check(state, cfg.spec, v);
    variants[to_string(v)] = rep.to_json();
    all_pass = all_pass && rep.pass;
    rows.push_back({static_cast<double>(rows.size()), rep.min_eigenvalue,
                    rep.tolerance, rep.pass ? 1.0 : 0.0});
  }
  json report{{"command", "stability"},
              {"spec", {{"dimension", cfg.spec.dim.value()},
                        {"interaction", cfg.spec.interaction.to_json()},
                        {"potential", cfg.spec.potential.to_json()}}},
              {"configuration", configuration_to_json(state)},
              {"variants", variants},
              {"pass", all_pass}};
  write_report(outdir, report);
  write_csv(outdir, "stability.csv",
            {"variant_index", "min_eigenvalue", "tolerance", "pass"}, rows);
  return all_pass ? 0 : 2;
}

int cmd_converge(const RunConfig& cfg, const fs::path& outdir,
                 std::optional<unsigned> seed_override) {
  if (cfg.n_values.empty()) {
    throw ConfigError("converge requires a nonempty \"n_values\" list");
  }
  std::vector<unsigned> seeds = cfg.seeds;
  if (seed_override) {
    seeds.assign(cfg.n_values.size(), *seed_override);
  }
  if (seeds.empty()) seeds.push_back(0);

  std::vector<StudyRow> rows = convergence_study(cfg.spec, cfg.n_values, seeds,
                                                 cfg.solver);

  std::vector<Check> checks;
  bool gap_decreasing = true, field_decreasing = true;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    gap_decreasing = gap_decreasing && rows[k].dual_gap < rows[k - 1].dual_gap;
    field_decreasing =
        field_decreasing && rows[k].field_l2_gap < rows[k - 1].field_l2_gap;
  }
  if (rows.size() > 1) {
    checks.push_back({"dual_norm_gap_decreasing", gap_decreasing ? 1.0 : 0.0, 1.0,
                      gap_decreasing, {}});
    checks.push_back({"field_l2_gap_decreasing", field_decreasing ? 1.0 : 0.0, 1.0,
                      field_decreasing, {}});
  }

  json table = json::array();
  std::vector<std::vector<double>> csv_rows;
  for (const auto& r : rows) {
    table.push_back(r.to_json());
    csv_rows.push_back({static_cast<double>(r.n), static_cast<double>(r.seed),
                        r.residual_norm, r.boundedness, r.dual_gap,
                        r.support_radius, r.bulk_density, r.field_l2_gap, r.energy});
  }
  json report{{"command", "converge"},
              {"spec", {{"dimension", cfg.spec.dim.value()},
                        {"interaction", cfg.spec.interaction.to_json()},
                        {"potential", cfg.spec.potential.to_json()}}},
              {"solver", cfg.solver.to_json()},
              {"rows", table},
              {"checks", checks_to_json(checks)}};
  write_report(outdir, report);
  write_csv(outdir, "study.csv",
            {"n", "seed", "residual_norm", "boundedness", "dual_gap",
             "support_radius", "bulk_density", "field_l2_gap", "energy"},
            csv_rows);

  for (const auto& c : checks) {
    if (!c.pass) return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equilibrium solver and identity verifier for signed "
               "Coulomb/point-vortex particle systems"};
  app.require_subcommand(1);

  std::string config_path, state_path, output_override;
  std::optional<unsigned> seed_override;
  unsigned seed_flag = 0;
  int threads = 0;
  double tolerance_scale_flag = 0.0;

  auto add_common = [&](CLI::App* sub, bool needs_state) {
    sub->add_option("config", config_path, "JSON run configuration")->required();
    if (needs_state) {
      sub->add_option("state", state_path, "particle table state file")->required();
    }
    sub->add_option("--seed", seed_flag, "override the generator seed")
        ->each([&](const std::string&) { seed_override = seed_flag; });
    sub->add_option("--threads", threads,
                    "worker thread budget (results are identical for any value)");
    sub->add_option("--output", output_override, "override the output directory");
    sub->add_option("--tolerance-scale", tolerance_scale_flag,
                    "multiply all check tolerances");
  };

  CLI::App* solve = app.add_subcommand("solve", "find a critical point or minimizer");
  CLI::App* diagnose =
      app.add_subcommand("diagnose", "certify flux/vorticity/divergence identities");
  CLI::App* stability =
      app.add_subcommand("stability", "second-order condition reports");
  CLI::App* converge =
      app.add_subcommand("converge", "mean-field convergence study");
  add_common(solve, false);
  add_common(diagnose, true);
  add_common(stability, true);
  add_common(converge, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    RunConfig cfg = parse_run_config(load_config_file(config_path));

    fs::path outdir = cfg.output_dir;
    if (const char* env = std::getenv("EQUILIB_OUTPUT_DIR")) outdir = env;
    if (!output_override.empty()) outdir = output_override;

    double tol_scale = cfg.tolerance_scale;
    if (tolerance_scale_flag > 0.0) tol_scale = tolerance_scale_flag;

    if (threads > 0) {
      // reductions are order-fixed, so the thread budget never changes output
      Eigen::setNbThreads(threads);
    }

    if (solve->parsed()) return cmd_solve(cfg, outdir, seed_override, tol_scale);
    if (diagnose->parsed()) {
      return cmd_diagnose(cfg, load_state_file(state_path), outdir, tol_scale);
    }
    if (stability->parsed()) {
      return cmd_stability(cfg, load_state_file(state_path), outdir);
    }
    if (converge->parsed()) return cmd_converge(cfg, outdir, seed_override);
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
