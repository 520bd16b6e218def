#include "npovm/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "npovm/errors.hpp"

namespace npovm::optimizer {

using scenarios::ScenarioId;
using scenarios::ScenarioModel;

void ConstraintSet::validate() const {
  if (!(d >= 0.0 && d <= 1.0)) throw InvalidArgument("constraint d must lie in [0, 1]");
  if (!(e >= 0.0 && e <= 1.0)) throw InvalidArgument("constraint E must lie in [0, 1]");
}

void OptimizerConfig::validate() const {
  if (grid_points_per_dim < 3) throw InvalidArgument("grid_points_per_dim must be >= 3");
  if (!(refine_tolerance > 0.0 && refine_tolerance < 1e-3)) {
    throw InvalidArgument("refine_tolerance must lie in (0, 1e-3)");
  }
  if (max_refine_iterations < 1) throw InvalidArgument("max_refine_iterations must be >= 1");
  if (!(constraint_slack > 0.0)) throw InvalidArgument("constraint_slack must be positive");
}

namespace {

constexpr int kBisectionSteps = 64;

struct Slacks {
  double d;
  double e;
};

class Problem {
 public:
  Problem(const ScenarioParams& params, const ConstraintSet& constraints,
          const OptimizerConfig& config)
      : model_(params), constraints_(constraints), config_(config) {}

  const ScenarioModel& model() const { return model_; }
  std::size_t dim() const { return model_.free_dim(); }

  Slacks slacks(std::span<const double> x) const {
    return {constraints_.d - model_.aux_distance(x), constraints_.e - model_.max_concurrence(x)};
  }

  bool is_feasible(const Slacks& s) const {
    const double tol = config_.constraint_slack;
    return s.d >= -tol && (constraints_.e_mode == EMode::ReportOnly || s.e >= -tol);
  }

  bool is_feasible(std::span<const double> x) const { return is_feasible(slacks(x)); }

  double violation(const Slacks& s) const {
    double v = std::max(0.0, -s.d);
    if (constraints_.e_mode == EMode::Strict) v = std::max(v, -s.e);
    return v;
  }

  double objective(std::span<const double> x) const {
    ++evaluations_;
    return model_.objective(x);
  }

  std::size_t evaluations() const { return evaluations_; }

  void clamp(std::vector<double>& x) const {
    for (double& v : x) v = std::clamp(v, ScenarioModel::kFreeLower, ScenarioModel::free_upper());
  }

  // Furthest feasible point on the segment anchor -> target (anchor feasible).
  std::vector<double> project(const std::vector<double>& anchor,
                              const std::vector<double>& target) const {
    if (is_feasible(target)) return target;
    double lo = 0.0;
    double hi = 1.0;
    std::vector<double> probe(anchor.size());
    for (int step = 0; step < kBisectionSteps; ++step) {
      const double mid = 0.5 * (lo + hi);
      for (std::size_t i = 0; i < probe.size(); ++i) {
        probe[i] = anchor[i] + mid * (target[i] - anchor[i]);
      }
      if (is_feasible(probe)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    for (std::size_t i = 0; i < probe.size(); ++i) {
      probe[i] = anchor[i] + lo * (target[i] - anchor[i]);
    }
    return probe;
  }

  ParamMap named(std::span<const double> x) const {
    ParamMap out;
    for (std::size_t i = 0; i < x.size(); ++i) out[model_.params().free[i]] = x[i];
    return out;
  }

 private:
  ScenarioModel model_;
  ConstraintSet constraints_;
  OptimizerConfig config_;
  mutable std::size_t evaluations_ = 0;
};

struct Vertex {
  std::vector<double> x;
  double f;
};

struct RefineOutcome {
  Vertex best;
  bool converged;
};

// Nelder-Mead over the box [0, pi/2]^n; every vertex stays feasible.
RefineOutcome refine(const Problem& problem, Vertex start, double step, const OptimizerConfig& config) {
  const std::size_t n = problem.dim();
  const double upper = ScenarioModel::free_upper();

  auto admit = [&](std::vector<double> x, const std::vector<double>& anchor) {
    problem.clamp(x);
    x = problem.project(anchor, x);
    const double f = problem.objective(x);
    return Vertex{std::move(x), f};
  };

  std::vector<Vertex> simplex;
  simplex.push_back(start);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x = start.x;
    x[i] = x[i] + step <= upper ? x[i] + step : x[i] - step;
    simplex.push_back(admit(std::move(x), start.x));
  }

  auto order = [&] {
    std::stable_sort(simplex.begin(), simplex.end(),
                     [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
  };

  const double x_tolerance = std::sqrt(config.refine_tolerance) * 1e-2;
  for (int iter = 0; iter < config.max_refine_iterations; ++iter) {
    order();
    const Vertex& best = simplex.front();
    const Vertex& worst = simplex.back();
    double diameter = 0.0;
    for (const auto& v : simplex) {
      for (std::size_t i = 0; i < n; ++i) diameter = std::max(diameter, std::abs(v.x[i] - best.x[i]));
    }
    if (worst.f - best.f <= config.refine_tolerance && diameter <= x_tolerance) {
      return {simplex.front(), true};
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[k].x[i] / static_cast<double>(n);
    }
    auto along = [&](double coeff) {
      std::vector<double> x(n);
      for (std::size_t i = 0; i < n; ++i) x[i] = centroid[i] + coeff * (worst.x[i] - centroid[i]);
      return x;
    };

    const std::vector<double> anchor = best.x;
    Vertex reflected = admit(along(-1.0), anchor);
    if (reflected.f < simplex.front().f) {
      Vertex expanded = admit(along(-2.0), anchor);
      simplex.back() = expanded.f < reflected.f ? std::move(expanded) : std::move(reflected);
      continue;
    }
    if (reflected.f < simplex[n - 1].f) {
      simplex.back() = std::move(reflected);
      continue;
    }
    const bool outside = reflected.f < worst.f;
    Vertex contracted = admit(along(outside ? -0.5 : 0.5), anchor);
    if (contracted.f < (outside ? reflected.f : worst.f)) {
      simplex.back() = std::move(contracted);
      continue;
    }
    for (std::size_t k = 1; k <= n; ++k) {
      std::vector<double> x(n);
      for (std::size_t i = 0; i < n; ++i) x[i] = anchor[i] + 0.5 * (simplex[k].x[i] - anchor[i]);
      simplex[k] = admit(std::move(x), anchor);
    }
  }
  order();
  return {simplex.front(), false};
}

}  // namespace

FeasibilityReport feasible(const ScenarioParams& params, const ParamMap& point,
                           const ConstraintSet& constraints, double constraint_slack) {
  OptimizerConfig config;
  config.constraint_slack = constraint_slack;
  const Problem problem(params, constraints, config);
  const auto x = problem.model().unpack(point);
  const Slacks s = problem.slacks(x);
  ParamMap slacks{{"d", s.d}, {"E", s.e}};
  if (params.id == ScenarioId::CaseIII) {
    slacks["d_reduced"] = constraints.d - problem.model().reduced_aux_trace_distance(x);
  }
  return {problem.is_feasible(s), std::move(slacks)};
}

OptimizationResult optimize(const ScenarioParams& params, const ConstraintSet& constraints,
                            const OptimizerConfig& config) {
  constraints.validate();
  config.validate();
  const Problem problem(params, constraints, config);
  const std::size_t n = problem.dim();
  const std::size_t g = static_cast<std::size_t>(config.grid_points_per_dim);
  const double step = ScenarioModel::free_upper() / static_cast<double>(g - 1);

  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= g;

  // Scan order: first free variable slowest.
  auto grid_point = [&](std::size_t flat) {
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
      x[i] = static_cast<double>(flat % g) * step;
      flat /= g;
    }
    return x;
  };

  std::vector<double> values(total, std::numeric_limits<double>::infinity());
  double best_violation = std::numeric_limits<double>::infinity();
  std::size_t least_violating = 0;
  bool any_feasible = false;
  for (std::size_t flat = 0; flat < total; ++flat) {
    const auto x = grid_point(flat);
    const Slacks s = problem.slacks(x);
    if (problem.is_feasible(s)) {
      values[flat] = problem.objective(x);
      any_feasible = true;
    } else if (!any_feasible) {
      const double v = problem.violation(s);
      if (v < best_violation) {
        best_violation = v;
        least_violating = flat;
      }
    }
  }

  if (!any_feasible) {
    const auto x = grid_point(least_violating);
    const Slacks s = problem.slacks(x);
    throw InfeasibleProblem("no feasible point: minimal constraint violation " +
                                std::to_string(best_violation),
                            best_violation, ParamMap{{"d", s.d}, {"E", s.e}}, problem.named(x));
  }

  const double f_min = *std::min_element(values.begin(), values.end());
  std::size_t chosen = 0;
  while (!(values[chosen] <= f_min + config.refine_tolerance)) ++chosen;

  Vertex start{grid_point(chosen), values[chosen]};
  const RefineOutcome refined = refine(problem, start, step, config);
  const Vertex& best = refined.best.f <= start.f ? refined.best : start;

  const auto x = best.x;
  const FeasibilityReport report =
      feasible(params, problem.named(x), constraints, config.constraint_slack);
  const ProbabilityValue p_npovm(best.f);
  const ProbabilityValue p_povm = problem.model().povm_error();

  std::map<std::string, bool> active;
  active["d"] = std::abs(report.slacks.at("d")) <= kBoundaryTolerance;
  active["E"] = std::abs(report.slacks.at("E")) <= kBoundaryTolerance;

  return OptimizationResult{p_npovm,
                            problem.named(x),
                            p_povm,
                            p_npovm.value() - p_povm.value(),
                            report.slacks,
                            std::move(active),
                            report.feasible,
                            refined.converged,
                            problem.evaluations()};
}

double delta_p(const ScenarioParams& params, const ConstraintSet& constraints,
               const OptimizerConfig& config) {
  return optimize(params, constraints, config).delta_p;
}

// ---------------------------------------------------------------------------

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  if (count == 0) throw InvalidArgument("linspace: count must be >= 1");
  if (count == 1) return {lo};
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  out.back() = hi;
  return out;
}

SweepPoint default_point_mapper(const ScenarioParams& tmpl, const ConstraintSet& constraints,
                                const ParamMap& axis_point) {
  ConstraintSet c = constraints;
  ParamMap fixed = tmpl.fixed;
  for (const auto& [name, value] : axis_point) {
    if (name == "d") {
      c.d = value;
    } else if (name == "E") {
      c.e = value;
    } else {
      fixed[name] = value;
    }
  }
  return {scenarios::make_params(tmpl.id, fixed), c};
}

SweepTable sweep(const std::vector<Axis>& grid, const ScenarioParams& tmpl,
                 const ConstraintSet& constraints, const OptimizerConfig& config,
                 const SweepOptions& options) {
  config.validate();
  std::size_t total = 1;
  for (const auto& axis : grid) {
    if (axis.values.empty()) throw InvalidArgument("sweep: axis " + axis.name + " is empty");
    if (total > options.max_points / axis.values.size()) {
      throw InvalidArgument("sweep: grid exceeds the cap of " +
                            std::to_string(options.max_points) + " points");
    }
    total *= axis.values.size();
  }
  if (total > options.max_points) {
    throw InvalidArgument("sweep: grid exceeds the cap of " + std::to_string(options.max_points) +
                          " points");
  }

  SweepTable table{grid, std::vector<SweepRow>(total)};

  auto run_row = [&](std::size_t flat) {
    SweepRow& row = table.rows[flat];
    row.axis_values.resize(grid.size());
    ParamMap axis_point;
    std::size_t rest = flat;
    for (std::size_t a = grid.size(); a-- > 0;) {
      const std::size_t idx = rest % grid[a].values.size();
      rest /= grid[a].values.size();
      row.axis_values[a] = grid[a].values[idx];
      axis_point[grid[a].name] = grid[a].values[idx];
    }
    std::optional<SweepPoint> point;
    try {
      point = options.mapper(tmpl, constraints, axis_point);
      row.result = optimize(point->params, point->constraints, config);
      row.status = RowStatus::Ok;
    } catch (const InfeasibleProblem& e) {
      row.status = RowStatus::Infeasible;
      row.slacks = e.slacks();
      row.message = e.what();
      row.p_povm = ScenarioModel(point->params).povm_error().value();
    } catch (const InvalidArgument& e) {
      row.status = RowStatus::InvalidPoint;
      row.message = e.what();
    }
  };

  unsigned threads = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(total)));
  if (threads == 1) {
    for (std::size_t flat = 0; flat < total; ++flat) run_row(flat);
    return table;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> workers;
  for (unsigned t = 0; t < threads; ++t) {
    workers.emplace_back([&] {
      for (std::size_t flat = next++; flat < total; flat = next++) run_row(flat);
    });
  }
  workers.clear();
  return table;
}

}  // namespace npovm::optimizer
