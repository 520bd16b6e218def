#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "npovm/errors.hpp"
#include "npovm/linalg.hpp"
#include "npovm/measures.hpp"
#include "npovm/optimizer.hpp"
#include "npovm/scenarios.hpp"
#include "support.hpp"

namespace npovm::optimizer {
namespace {

using qstate::BlochVector;
using testing::Random;

constexpr double kPi = std::numbers::pi;

// Independent closed forms used as oracles.
double example_oracle(double d) { return 0.5 * (1.0 - std::sqrt((1.0 + d * d) / 2.0)); }
double case1_oracle(double d, double chi, double delta) {
  const double c = std::cos(delta - chi);
  const double s = std::sin(delta - chi);
  return 0.5 - 0.5 * std::sqrt(d * d * c * c + s * s);
}

ConstraintSet with_d(double d) {
  ConstraintSet cs;
  cs.d = d;
  return cs;
}

TEST(Optimize, ExampleAtFourTenths) {
  const auto r = optimize(scenarios::example_params(), with_d(0.4));
  EXPECT_NEAR(r.p_npovm.value(), 0.119212, 1e-4);
  EXPECT_NEAR(r.p_npovm.value(), example_oracle(0.4), 1e-6);
  EXPECT_TRUE(r.feasible);
  EXPECT_TRUE(r.converged);
  EXPECT_TRUE(r.boundary_active.at("d"));
  EXPECT_EQ(r.delta_p, r.p_npovm.value() - r.p_povm.value());
}

TEST(Optimize, ExampleAtZeroIsHelstrom) {
  const auto r = optimize(scenarios::example_params(), with_d(0.0));
  EXPECT_NEAR(r.p_npovm.value(), 0.146447, 1e-6);
  EXPECT_NEAR(r.p_npovm.value(), r.p_povm.value(), 1e-6);
  EXPECT_NEAR(delta_p(scenarios::example_params(), with_d(0.0)), 0.0, 1e-6);
}

TEST(Optimize, CaseIMatchesClosedForm) {
  const auto r = optimize(scenarios::case1_params(0.2, 0.9), with_d(0.5));
  EXPECT_NEAR(r.p_npovm.value(), case1_oracle(0.5, 0.2, 0.9), 1e-4);
  EXPECT_NEAR(r.p_povm.value(), 0.5 * (1.0 - std::sin(0.7)), 1e-12);
}

TEST(DeltaP, IdenticalAndOrthogonalTargets) {
  EXPECT_NEAR(delta_p(scenarios::case1_params(0.5, 0.5), with_d(0.4)), -0.2, 1e-6);
  EXPECT_NEAR(delta_p(scenarios::case1_params(0.3, 0.3 + kPi / 2), with_d(0.4)), 0.0, 1e-6);
  EXPECT_NEAR(delta_p(scenarios::case1_params(0.0, kPi / 2), with_d(0.9)), 0.0, 1e-6);
}

TEST(Feasible, Examples) {
  const auto same = feasible(scenarios::example_params(), {{"theta", 0.7}, {"phi", 0.7}}, with_d(0.3));
  EXPECT_TRUE(same.feasible);
  EXPECT_NEAR(same.slacks.at("d"), 0.3, 1e-15);

  ConstraintSet strict;
  strict.d = 1.0;
  strict.e = 0.1;
  const auto p3 = scenarios::case3_params(0.5, 0.5);
  const auto bad = feasible(p3, {{"theta", 0.2}, {"phi", 0.2}}, strict);
  EXPECT_NEAR(bad.slacks.at("E"), -0.9, 1e-10);
  EXPECT_FALSE(bad.feasible);
  EXPECT_TRUE(bad.slacks.count("d_reduced"));

  ConstraintSet report = strict;
  report.e_mode = EMode::ReportOnly;
  const auto reported = feasible(p3, {{"theta", 0.2}, {"phi", 0.2}}, report);
  EXPECT_TRUE(reported.feasible);
  EXPECT_NEAR(reported.slacks.at("E"), -0.9, 1e-10);

  const auto p4 = scenarios::case4_params(0.25, 0.33, 0.4, 1.0);
  const auto edge = feasible(p4, {{"theta", 0.5}}, with_d(0.16));
  EXPECT_NEAR(edge.slacks.at("d"), 0.0, 1e-12);
  EXPECT_TRUE(edge.feasible);
  EXPECT_FALSE(feasible(p4, {{"theta", 0.5}}, with_d(0.15)).feasible);
}

TEST(Optimize, InfeasibleProblemCarriesViolation) {
  ConstraintSet cs;
  cs.d = 0.3;
  cs.e = 0.1;
  try {
    optimize(scenarios::case3_params(0.5, 0.5), cs);
    FAIL() << "expected InfeasibleProblem";
  } catch (const InfeasibleProblem& e) {
    EXPECT_NEAR(e.min_violation(), 0.9, 1e-10);
    EXPECT_NEAR(e.slacks().at("E"), -0.9, 1e-10);
    EXPECT_EQ(e.point().size(), 2u);
  }
  // Case IV with d below 2|lambda - mu| has no feasible theta at all.
  EXPECT_THROW(optimize(scenarios::case4_params(0.25, 0.33, 0.4, 1.0), with_d(0.1)),
               InfeasibleProblem);
}

TEST(Optimize, ReportOnlyCaseIIIMatchesPureStateFormula) {
  // With the Schmidt-vector bound active the optimum satisfies
  // |sin(theta - phi)| = d, giving 1/2 - 1/2 sqrt(1 - (1 - d^2) K^2).
  ConstraintSet cs;
  cs.d = 0.3;
  cs.e = 0.1;
  cs.e_mode = EMode::ReportOnly;
  for (auto [lambda, mu] : {std::pair{0.2, 0.7}, std::pair{0.5, 0.3}, std::pair{0.9, 0.85}}) {
    const auto r = optimize(scenarios::case3_params(lambda, mu), cs);
    const double k = std::sqrt(lambda * mu) + std::sqrt((1 - lambda) * (1 - mu));
    EXPECT_NEAR(r.p_npovm.value(), 0.5 - 0.5 * std::sqrt(1.0 - (1.0 - 0.09) * k * k), 1e-6);
    EXPECT_LT(r.delta_p, 0.0);
    EXPECT_LT(r.constraint_slacks.at("E"), 0.0);
  }
}

TEST(Optimize, CaseIVIsBelowFormulaBaseline) {
  const auto r = optimize(scenarios::case4_params(0.25, 0.33, 0.6, 2.0), with_d(0.16));
  EXPECT_NEAR(r.p_povm.value(), scenarios::case4_povm_error(0.25, 0.33, 0.6, 2.0).value(), 1e-10);
  EXPECT_LT(r.delta_p, 0.0);
  EXPECT_EQ(r.argmin.size(), 1u);
}

TEST(Optimize, DeterministicAcrossCalls) {
  const auto p = scenarios::case1_params(0.4, 1.3);
  const auto a = optimize(p, with_d(0.35));
  const auto b = optimize(p, with_d(0.35));
  EXPECT_EQ(a.p_npovm.value(), b.p_npovm.value());
  EXPECT_EQ(a.argmin, b.argmin);
  EXPECT_EQ(a.evaluations, b.evaluations);
}

TEST(Config, Validation) {
  OptimizerConfig c;
  EXPECT_NO_THROW(c.validate());
  c.grid_points_per_dim = 2;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = {};
  c.refine_tolerance = 1e-2;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = {};
  c.max_refine_iterations = 0;
  EXPECT_THROW(c.validate(), InvalidArgument);
  EXPECT_THROW(optimize(scenarios::example_params(), with_d(1.5)), InvalidArgument);
  ConstraintSet bad;
  bad.e = -0.1;
  EXPECT_THROW(bad.validate(), InvalidArgument);
}

TEST(Optimize, NonConvergenceIsFlagged) {
  OptimizerConfig c;
  c.max_refine_iterations = 1;
  const auto r = optimize(scenarios::case1_params(0.2, 0.9), with_d(0.5), c);
  EXPECT_FALSE(r.converged);
  EXPECT_TRUE(r.feasible);
  EXPECT_LE(r.p_npovm.value(), r.p_povm.value() + 1e-6);
}

TEST(OptimizerProperty, OracleEquivalenceAndBoundaryActivity) {
  Random rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const double d = rng.uniform(0.0, 0.95);
    const double chi = rng.uniform(0.0, kPi / 2);
    const double delta = rng.uniform(0.0, kPi / 2);
    const auto r = optimize(scenarios::case1_params(chi, delta), with_d(d));
    EXPECT_NEAR(r.p_npovm.value(), case1_oracle(d, chi, delta), 1e-4)
        << "d=" << d << " chi=" << chi << " delta=" << delta;
    // Identical targets make the objective flat in (theta, phi).
    if (std::abs(std::sin(delta - chi)) > 1e-3) {
      EXPECT_NEAR(std::abs(std::sin(r.argmin.at("theta") - r.argmin.at("phi"))), d, 1e-5);
    }
  }
}

TEST(OptimizerProperty, MonotoneInD) {
  for (const auto& p : {scenarios::example_params(), scenarios::case1_params(0.3, 1.0),
                        scenarios::case2_params({0.1, 0.2, 0.5}, {-0.3, 0.0, 0.4})}) {
    double prev = 1.0;
    for (double d = 0.0; d <= 1.0; d += 0.125) {
      const double v = optimize(p, with_d(d)).p_npovm.value();
      EXPECT_LE(v, prev + 1e-6);
      prev = v;
    }
  }
}

TEST(OptimizerProperty, MonotoneInEUnderStrictMode) {
  // Joint concurrences here are 2 sqrt(lambda (1 - lambda)) ~ 0.436 and 0.6
  // whatever the free angles, so E gates feasibility as a step.
  const auto p = scenarios::case3_params(0.05, 0.1);
  ConstraintSet tight;
  tight.d = 0.4;
  tight.e = 0.5;
  EXPECT_THROW(optimize(p, tight), InfeasibleProblem);
  double prev = 1.0;
  for (double e : {0.6, 0.7, 0.8, 1.0}) {
    ConstraintSet cs;
    cs.d = 0.4;
    cs.e = e;
    const double v = optimize(p, cs).p_npovm.value();
    EXPECT_LE(v, prev + 1e-6);
    prev = v;
  }
}

TEST(OptimizerProperty, CaseIISandwichUpperEnd) {
  // The POVM baseline is always attainable at theta = phi.
  Random rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const auto r = optimize(scenarios::case2_params(rng.bloch(), rng.bloch()), with_d(0.6));
    EXPECT_LE(r.p_npovm.value(), r.p_povm.value() + 1e-12);
  }
}

TEST(Linspace, EndpointsAndCount) {
  const auto v = linspace(0.0, 1.0, 5);
  ASSERT_EQ(v.size(), 5u);
  EXPECT_EQ(v.front(), 0.0);
  EXPECT_EQ(v.back(), 1.0);
  EXPECT_EQ(v[2], 0.5);
  EXPECT_EQ(linspace(0.3, 0.7, 1), std::vector<double>{0.3});
  EXPECT_THROW(linspace(0.0, 1.0, 0), InvalidArgument);
}

TEST(Sweep, RowOrderIsLexicographic) {
  const std::vector<Axis> grid{{"chi", {0.1, 0.2}}, {"delta", {0.5, 0.6, 0.7}}};
  SweepOptions opts;
  opts.threads = 3;
  const auto t = sweep(grid, scenarios::case1_params(0.0, 0.0), with_d(0.4), {}, opts);
  ASSERT_EQ(t.rows.size(), 6u);
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(t.rows[i].axis_values[0], grid[0].values[i / 3]);
    EXPECT_EQ(t.rows[i].axis_values[1], grid[1].values[i % 3]);
    ASSERT_EQ(t.rows[i].status, RowStatus::Ok);
    EXPECT_NEAR(t.rows[i].result->p_npovm.value(),
                case1_oracle(0.4, grid[0].values[i / 3], grid[1].values[i % 3]), 1e-4);
  }
}

TEST(Sweep, SinglePointEqualsOptimize) {
  const auto t = sweep({{"d", {0.4}}}, scenarios::example_params(), with_d(1.0));
  ASSERT_EQ(t.rows.size(), 1u);
  const auto direct = optimize(scenarios::example_params(), with_d(0.4));
  EXPECT_EQ(t.rows[0].result->p_npovm.value(), direct.p_npovm.value());
  EXPECT_EQ(t.rows[0].result->argmin, direct.argmin);
}

TEST(Sweep, ThreadCountDoesNotChangeResults) {
  const std::vector<Axis> grid{{"d", linspace(0.0, 0.9, 7)}};
  SweepOptions one;
  one.threads = 1;
  SweepOptions four;
  four.threads = 4;
  const auto a = sweep(grid, scenarios::example_params(), {}, {}, one);
  const auto b = sweep(grid, scenarios::example_params(), {}, {}, four);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].result->p_npovm.value(), b.rows[i].result->p_npovm.value());
  }
}

TEST(Sweep, FigureOneCurveDecreases) {
  const auto t = sweep({{"d", linspace(0.0, 0.95, 21)}}, scenarios::example_params(), {});
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    EXPECT_LT(t.rows[i].result->p_npovm.value(), t.rows[i - 1].result->p_npovm.value());
  }
}

TEST(Sweep, CapInfeasibleAndInvalidRows) {
  SweepOptions capped;
  capped.max_points = 5;
  EXPECT_THROW(sweep({{"d", linspace(0, 1, 6)}}, scenarios::example_params(), {}, {}, capped),
               InvalidArgument);
  EXPECT_THROW(sweep({{"d", {}}}, scenarios::example_params(), {}), InvalidArgument);

  ConstraintSet cs;
  cs.d = 0.3;
  cs.e = 0.1;
  const auto t = sweep({{"lambda", {0.5, 0.0}}}, scenarios::case3_params(0.3, 0.3), cs);
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0].status, RowStatus::Infeasible);
  ASSERT_TRUE(t.rows[0].p_povm.has_value());
  EXPECT_NEAR(t.rows[0].slacks.at("E"), -0.9, 1e-10);
  EXPECT_EQ(t.rows[1].status, RowStatus::InvalidPoint);
}

}  // namespace
}  // namespace npovm::optimizer
