#pragma once

// Constrained minimization of the joint Helstrom error
//
//   min over auxiliary parameters of 1/2 - 1/4 ||rho_AB - sigma_AB||_1
//   subject to  D(rho_A, sigma_A) <= d,  max{C(rho_AB), C(sigma_AB)} <= E
//
// by an exhaustive feasibility-filtered grid followed by a Nelder-Mead
// refinement whose infeasible proposals are pulled back onto the constraint
// boundary by bisection toward the current best vertex.

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "npovm/measures.hpp"
#include "npovm/scenarios.hpp"

namespace npovm::optimizer {

using measures::ProbabilityValue;
using scenarios::ParamMap;
using scenarios::ScenarioParams;

enum class EMode {
  /// Points violating the concurrence bound are infeasible.
  Strict,
  /// The concurrence slack is recorded but never rejects a point.
  ReportOnly,
};

struct ConstraintSet {
  double d = 1.0;
  double e = 1.0;
  EMode e_mode = EMode::Strict;

  /// Throws InvalidArgument unless d, e lie in [0, 1].
  void validate() const;
};

struct OptimizerConfig {
  int grid_points_per_dim = 101;
  double refine_tolerance = 1e-8;
  int max_refine_iterations = 500;
  double constraint_slack = 1e-9;

  void validate() const;
};

inline constexpr double kBoundaryTolerance = 1e-6;

struct OptimizationResult {
  ProbabilityValue p_npovm;
  ParamMap argmin;
  ProbabilityValue p_povm;
  /// p_npovm - p_povm; negative values mean the extension beats Helstrom.
  double delta_p;
  /// "d" and "E" slacks (bound minus attained value). CaseIII also carries
  /// "d_reduced", the slack against the reduced-state trace distance, for
  /// reporting only.
  ParamMap constraint_slacks;
  std::map<std::string, bool> boundary_active;
  bool feasible;
  bool converged;
  std::size_t evaluations;
};

/// Thrown when no grid point satisfies the constraints.
class InfeasibleProblem : public std::runtime_error {
 public:
  InfeasibleProblem(const std::string& what, double min_violation, ParamMap slacks,
                    ParamMap point)
      : std::runtime_error(what),
        min_violation_(min_violation),
        slacks_(std::move(slacks)),
        point_(std::move(point)) {}

  /// Smallest max-violation over the grid.
  double min_violation() const { return min_violation_; }
  /// Slacks at the least-violating grid point.
  const ParamMap& slacks() const { return slacks_; }
  const ParamMap& point() const { return point_; }

 private:
  double min_violation_;
  ParamMap slacks_;
  ParamMap point_;
};

struct FeasibilityReport {
  bool feasible;
  ParamMap slacks;
};

FeasibilityReport feasible(const ScenarioParams& params, const ParamMap& point,
                           const ConstraintSet& constraints, double constraint_slack = 1e-9);

/// Deterministic for fixed inputs. Throws InfeasibleProblem when the grid has
/// no feasible point; a refinement that hits max_refine_iterations returns
/// its best point with converged = false.
OptimizationResult optimize(const ScenarioParams& params, const ConstraintSet& constraints,
                            const OptimizerConfig& config = {});

double delta_p(const ScenarioParams& params, const ConstraintSet& constraints,
               const OptimizerConfig& config = {});

// ---------------------------------------------------------------------------
// Sweeps.

struct Axis {
  std::string name;
  std::vector<double> values;
};

/// Evenly spaced values from lo to hi inclusive (count >= 1).
std::vector<double> linspace(double lo, double hi, std::size_t count);

enum class RowStatus { Ok, Infeasible, InvalidPoint };

struct SweepRow {
  std::vector<double> axis_values;
  RowStatus status;
  std::optional<OptimizationResult> result;
  /// Baseline for rows that could not be optimized (when computable).
  std::optional<double> p_povm;
  /// Slacks at the least-violating grid point for Infeasible rows.
  ParamMap slacks;
  std::string message;
};

struct SweepTable {
  std::vector<Axis> axes;
  std::vector<SweepRow> rows;
};

/// Scenario and constraints for one grid point.
struct SweepPoint {
  ScenarioParams params;
  ConstraintSet constraints;
};

/// Maps axis values (keyed by axis name) onto a concrete point. The default
/// mapper treats "d" and "E" as constraint overrides and every other name as
/// a fixed scenario parameter.
using PointMapper =
    std::function<SweepPoint(const ScenarioParams&, const ConstraintSet&, const ParamMap&)>;

SweepPoint default_point_mapper(const ScenarioParams& tmpl, const ConstraintSet& constraints,
                                const ParamMap& axis_point);

struct SweepOptions {
  std::size_t max_points = 1'000'000;
  /// 0 selects std::thread::hardware_concurrency().
  unsigned threads = 0;
  PointMapper mapper = default_point_mapper;
};

/// One row per grid point in lexicographic order (first axis slowest).
/// InvalidArgument from a point's scenario construction marks that row
/// InvalidPoint; InfeasibleProblem marks it Infeasible.
SweepTable sweep(const std::vector<Axis>& grid, const ScenarioParams& tmpl,
                 const ConstraintSet& constraints, const OptimizerConfig& config = {},
                 const SweepOptions& options = {});

}  // namespace npovm::optimizer
