#include "npovm/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "npovm/csv.hpp"
#include "npovm/errors.hpp"
#include "npovm/mcsim.hpp"

namespace npovm::cli {

using optimizer::Axis;
using optimizer::ConstraintSet;
using optimizer::EMode;
using optimizer::OptimizerConfig;
using optimizer::SweepPoint;
using scenarios::ParamMap;
using scenarios::ScenarioId;
using scenarios::ScenarioParams;

namespace {

constexpr double kPi = std::numbers::pi;

constexpr double kCaptionLambda = 0.25;
constexpr double kCaptionMu = 0.33;
constexpr double kBodyLambda = 1.0 / 3.0;
constexpr double kBodyMu = 0.25;

const std::vector<std::string>& value_names() {
  static const std::vector<std::string> names{"theta", "phi", "chi", "delta", "m_x", "m_y", "m_z",
                                              "n_x",   "n_y", "n_z", "lambda", "mu", "x",   "y"};
  return names;
}

bool is_free_name(const std::string& key) { return key == "theta" || key == "phi"; }

ParamMap fixed_values(const ParamMap& values) {
  ParamMap out;
  for (const auto& [key, value] : values) {
    if (!is_free_name(key)) out[key] = value;
  }
  return out;
}

struct FigureSetup {
  ScenarioParams tmpl;
  std::vector<Axis> axes;
  ConstraintSet constraints;
  optimizer::PointMapper mapper = optimizer::default_point_mapper;
};

std::vector<double> interior(std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) {
    out[k] = static_cast<double>(k + 1) / static_cast<double>(count + 1);
  }
  return out;
}

// Figure defaults with user overrides of fixed parameters applied.
FigureSetup figure_setup(const RunConfig& config) {
  const FigureId id = *config.figure_id;
  const std::size_t res =
      static_cast<std::size_t>(config.resolution.value_or(id == FigureId::Fig3 ? 21 : 101));
  for (const auto& [key, value] : config.values) {
    if (is_free_name(key)) throw InvalidArgument("figure: " + key + " is optimized, not an input");
  }
  auto with_overrides = [&](ScenarioId sid, ParamMap fixed) {
    for (const auto& [key, value] : config.values) fixed[key] = value;
    return scenarios::make_params(sid, fixed);
  };
  const double lambda = config.body_text_roles ? kBodyLambda : kCaptionLambda;
  const double mu = config.body_text_roles ? kBodyMu : kCaptionMu;

  FigureSetup s;
  switch (id) {
    case FigureId::Fig1:
      s.tmpl = with_overrides(ScenarioId::Example, {});
      s.axes = {{"d", optimizer::linspace(0.0, 0.999, res)}};
      break;
    case FigureId::Fig2:
      s.tmpl = with_overrides(ScenarioId::CaseI, {{"chi", 0.0}, {"delta", 0.0}});
      s.axes = {{"chi", optimizer::linspace(0.0, kPi / 2, res)},
                {"delta", optimizer::linspace(0.0, kPi / 2, res)}};
      s.constraints.d = 0.4;
      break;
    case FigureId::Fig3:
      s.tmpl = with_overrides(ScenarioId::CaseII, {{"m_x", 0.0}, {"m_y", 0.0}, {"m_z", 0.0},
                                                   {"n_x", 0.0}, {"n_y", 0.0}, {"n_z", 0.0}});
      s.axes = {{"m", optimizer::linspace(-1.0, 1.0, res)},
                {"n", optimizer::linspace(-1.0, 1.0, res)},
                {"p", optimizer::linspace(0.0, 1.0, res)}};
      s.constraints.d = 0.6;
      s.mapper = [](const ScenarioParams& tmpl, const ConstraintSet& c, const ParamMap& axis) {
        ParamMap fixed = tmpl.fixed;
        fixed["m_x"] = 0.0;
        fixed["m_y"] = 0.0;
        fixed["m_z"] = axis.at("m");
        fixed["n_x"] = axis.at("p");
        fixed["n_y"] = 0.0;
        fixed["n_z"] = axis.at("n");
        // Rejects |n| > 1.
        const qstate::BlochVector n(fixed["n_x"], fixed["n_y"], fixed["n_z"]);
        return SweepPoint{scenarios::make_params(ScenarioId::CaseII, fixed), c};
      };
      break;
    case FigureId::Fig4:
      s.tmpl = with_overrides(ScenarioId::CaseIII, {{"lambda", 0.5}, {"mu", 0.5}});
      s.axes = {{"lambda", interior(res)}, {"mu", interior(res)}};
      s.constraints.d = 0.3;
      s.constraints.e = 0.1;
      s.constraints.e_mode = EMode::ReportOnly;
      break;
    case FigureId::Fig5:
    case FigureId::Fig6: {
      const ScenarioId sid = id == FigureId::Fig5 ? ScenarioId::CaseIV : ScenarioId::CaseIVProduct;
      s.tmpl = with_overrides(sid, {{"lambda", lambda}, {"mu", mu}, {"x", 0.0}, {"y", 0.0}});
      s.axes = {{"x", optimizer::linspace(0.0, kPi / 2, res)},
                {"y", optimizer::linspace(0.0, 2 * kPi, res)}};
      // Fig5 defaults to the tightest feasible bound 2|lambda - mu|.
      s.constraints.d =
          id == FigureId::Fig5
              ? std::min(1.0, 2.0 * std::abs(s.tmpl.fixed.at("lambda") - s.tmpl.fixed.at("mu")))
              : 0.16;
      break;
    }
  }
  if (config.d) s.constraints.d = *config.d;
  if (config.e) s.constraints.e = *config.e;
  if (config.e_mode) s.constraints.e_mode = *config.e_mode;
  s.constraints.validate();
  return s;
}

OptimizerConfig optimizer_config(const RunConfig& config) {
  OptimizerConfig c;
  if (config.command != Command::Figure && config.resolution) {
    c.grid_points_per_dim = *config.resolution;
  }
  return c;
}

ConstraintSet single_constraints(const RunConfig& config) {
  ConstraintSet c;
  c.d = config.d.value_or(1.0);
  c.e = config.e.value_or(1.0);
  c.e_mode = config.e_mode.value_or(EMode::Strict);
  c.validate();
  return c;
}

// Runs `body` against the configured output file or `out`.
int with_output(const RunConfig& config, std::ostream& out, std::ostream& err,
                const std::function<void(std::ostream&)>& body) {
  if (config.out_path.empty()) {
    body(out);
    return kExitOk;
  }
  std::ofstream file(config.out_path, std::ios::binary);
  if (!file) {
    err << "error: cannot open " << config.out_path << " for writing\n";
    return kExitUsage;
  }
  body(file);
  file.close();
  if (!file) {
    err << "error: failed writing " << config.out_path << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

void print_flags(const ScenarioParams& params, std::ostream& err) {
  for (const auto& flag : params.flags) err << "note: " << flag << "\n";
}

}  // namespace

std::optional<FigureId> parse_figure(std::string_view name) {
  static const std::map<std::string_view, FigureId> table{
      {"fig1", FigureId::Fig1}, {"fig2", FigureId::Fig2}, {"fig3", FigureId::Fig3},
      {"fig4", FigureId::Fig4}, {"fig5", FigureId::Fig5}, {"fig6", FigureId::Fig6}};
  const auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

void RunConfig::validate() const {
  if ((command == Command::Figure) != figure_id.has_value()) {
    throw InvalidArgument("figure id is required for, and only for, the figure command");
  }
  if (resolution && *resolution < 3) throw InvalidArgument("resolution must be >= 3");
  if (d && !(*d >= 0.0 && *d <= 1.0)) throw InvalidArgument("d must lie in [0, 1]");
  if (e && !(*e >= 0.0 && *e <= 1.0)) throw InvalidArgument("E must lie in [0, 1]");
  if ((command == Command::Optimize || command == Command::Simulate) && !scenario) {
    throw InvalidArgument("--scenario is required");
  }
  if (command == Command::Optimize && !d) throw InvalidArgument("--d is required");
  if (command == Command::Simulate && trials < 1) throw InvalidArgument("trials must be >= 1");
  for (const auto& [key, value] : values) {
    if (!std::isfinite(value)) throw InvalidArgument(key + " must be finite");
  }
}

int run_figure(const RunConfig& config, std::ostream& out, std::ostream& err) {
  config.validate();
  const FigureSetup setup = figure_setup(config);
  optimizer::SweepOptions options;
  options.threads = config.threads;
  options.mapper = setup.mapper;
  const auto table =
      optimizer::sweep(setup.axes, setup.tmpl, setup.constraints, optimizer_config(config), options);
  return with_output(config, out, err, [&](std::ostream& os) {
    csv::write_sweep(os, table, setup.tmpl.free, setup.tmpl.id == ScenarioId::CaseIII);
  });
}

int run_optimize(const RunConfig& config, std::ostream& out, std::ostream& err) {
  config.validate();
  const ScenarioParams params = scenarios::make_params(*config.scenario, fixed_values(config.values));
  print_flags(params, err);
  optimizer::SweepOptions options;
  options.threads = 1;
  const auto table =
      optimizer::sweep({}, params, single_constraints(config), optimizer_config(config), options);
  if (!table.rows.front().message.empty()) err << "note: " << table.rows.front().message << "\n";
  return with_output(config, out, err, [&](std::ostream& os) {
    csv::write_sweep(os, table, params.free, params.id == ScenarioId::CaseIII);
  });
}

int run_simulate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  config.validate();
  const ScenarioParams params = scenarios::make_params(*config.scenario, fixed_values(config.values));
  print_flags(params, err);
  const scenarios::ScenarioModel model(params);

  ParamMap point;
  bool complete = true;
  for (const auto& name : params.free) {
    const auto it = config.values.find(name);
    if (it == config.values.end()) {
      complete = false;
    } else {
      point[name] = it->second;
    }
  }
  if (!complete) {
    if (!config.d) {
      throw InvalidArgument("simulate needs every free parameter (theta, phi) or --d");
    }
    point = optimizer::optimize(params, single_constraints(config), optimizer_config(config)).argmin;
  }

  const auto pair = model.build(point);
  mcsim::SimulationOptions options;
  options.threads = config.threads;
  const auto report = mcsim::simulate(pair, config.trials, config.seed, options);
  return with_output(config, out, err, [&](std::ostream& os) {
    os << "scenario," << scenarios::to_string(params.id) << "\n";
    for (const auto& [name, value] : point) os << name << "," << csv::format_real(value) << "\n";
    os << "trials," << report.trials << "\n"
       << "errors," << report.errors << "\n"
       << "empirical_error," << csv::format_real(report.empirical_error) << "\n"
       << "standard_error," << csv::format_real(report.standard_error) << "\n"
       << "analytic_error," << csv::format_real(report.analytic_error.value()) << "\n"
       << "z_score," << csv::format_real(report.z_score) << "\n"
       << "seed," << report.seed << "\n";
  });
}

int run_verify(const RunConfig& config, std::ostream& out, std::ostream& err,
               const VerifyOptions& options) {
  const auto checks = verify_checks(options);
  std::size_t failed = 0;
  for (const auto& c : checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << " expected=" << csv::format_real(c.expected)
        << " got=" << csv::format_real(c.got) << " tol=" << csv::format_real(c.tolerance) << "\n";
    if (!c.passed) ++failed;
  }
  out << checks.size() - failed << "/" << checks.size() << " checks passed\n";
  if (!config.report_path.empty()) {
    std::ofstream file(config.report_path, std::ios::binary);
    if (!file) {
      err << "error: cannot open " << config.report_path << " for writing\n";
      return kExitUsage;
    }
    file << "check,expected,got,tolerance,status\n";
    for (const auto& c : checks) {
      file << c.name << "," << csv::format_real(c.expected) << "," << csv::format_real(c.got) << ","
           << csv::format_real(c.tolerance) << "," << (c.passed ? "pass" : "fail") << "\n";
    }
  }
  return failed == 0 ? kExitOk : kExitVerifyFailed;
}

// ---------------------------------------------------------------------------

namespace {

std::string dashed(std::string name) {
  for (char& ch : name) {
    if (ch == '_') ch = '-';
  }
  return name;
}

ParamMap read_params_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open parameter file " + path);
  ParamMap out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidArgument(path + ":" + std::to_string(line_no) + ": expected key=value");
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string text = trim(line.substr(eq + 1));
    std::istringstream is(text);
    is.imbue(std::locale::classic());
    double value = 0.0;
    if (!(is >> value) || !is.eof()) {
      throw InvalidArgument(path + ":" + std::to_string(line_no) + ": bad number '" + text + "'");
    }
    out[key] = value;
  }
  return out;
}

struct ValueFlags {
  std::map<std::string, std::optional<double>> values;
  std::string params_file;

  void attach(CLI::App& app, bool with_free) {
    for (const auto& name : value_names()) {
      if (!with_free && is_free_name(name)) continue;
      app.add_option("--" + dashed(name), values[name], name);
    }
    app.add_option("--params", params_file, "key=value parameter file");
  }

  ParamMap collect() const {
    ParamMap out;
    if (!params_file.empty()) out = read_params_file(params_file);
    for (const auto& [name, value] : values) {
      if (value) out[name] = *value;
    }
    return out;
  }
};

}  // namespace

int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Constrained joint-measurement state discrimination"};
  app.require_subcommand(1);

  RunConfig config;
  std::string figure_name;
  std::string scenario_name;
  std::string e_mode_name;
  std::optional<int> resolution;
  std::optional<double> d;
  std::optional<double> e;
  unsigned threads = 0;

  const std::vector<std::string> scenario_names{"example", "case1", "case2",
                                                "case3",   "case4", "case4-product"};
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--resolution", resolution, "grid points per axis");
    sub->add_option("--d", d, "auxiliary distinguishability bound");
    sub->add_option("--E", e, "concurrence bound");
    sub->add_option("--e-mode", e_mode_name, "strict or report")
        ->check(CLI::IsMember({"strict", "report"}));
    sub->add_option("--out", config.out_path, "output file (default stdout)");
    sub->add_option("--threads", threads, "worker threads (0 = all cores)");
  };

  auto* figure = app.add_subcommand("figure", "emit a figure dataset as CSV");
  figure->add_option("--id", figure_name, "fig1..fig6")
      ->required()
      ->check(CLI::IsMember({"fig1", "fig2", "fig3", "fig4", "fig5", "fig6"}));
  figure->add_flag("--body-text-roles", config.body_text_roles,
                   "fig5/fig6: lambda = 1/3, mu = 1/4");
  add_common(figure);
  ValueFlags figure_values;
  figure_values.attach(*figure, false);

  auto* optimize = app.add_subcommand("optimize", "optimize one scenario");
  optimize->add_option("--scenario", scenario_name)->required()->check(CLI::IsMember(scenario_names));
  add_common(optimize);
  ValueFlags optimize_values;
  optimize_values.attach(*optimize, false);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo run of the joint measurement");
  simulate->add_option("--scenario", scenario_name)->required()->check(CLI::IsMember(scenario_names));
  simulate->add_option("--trials", config.trials)->check(CLI::PositiveNumber);
  simulate->add_option("--seed", config.seed);
  add_common(simulate);
  ValueFlags simulate_values;
  simulate_values.attach(*simulate, true);

  auto* verify = app.add_subcommand("verify", "run the oracle checks");
  verify->add_option("--report", config.report_path, "CSV report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    config.resolution = resolution;
    config.d = d;
    config.e = e;
    config.threads = threads;
    if (!e_mode_name.empty()) {
      config.e_mode = e_mode_name == "strict" ? EMode::Strict : EMode::ReportOnly;
    }
    if (!scenario_name.empty()) config.scenario = scenarios::parse_scenario(scenario_name);

    if (*figure) {
      config.command = Command::Figure;
      config.figure_id = parse_figure(figure_name);
      config.values = figure_values.collect();
      return run_figure(config, out, err);
    }
    if (*optimize) {
      config.command = Command::Optimize;
      config.values = optimize_values.collect();
      return run_optimize(config, out, err);
    }
    if (*simulate) {
      config.command = Command::Simulate;
      config.values = simulate_values.collect();
      return run_simulate(config, out, err);
    }
    config.command = Command::Verify;
    return run_verify(config, out, err);
  } catch (const InvalidArgument& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitUsage;
  } catch (const optimizer::InfeasibleProblem& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitVerifyFailed;
  }
}

}  // namespace npovm::cli
