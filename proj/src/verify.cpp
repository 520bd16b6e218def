#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "npovm/cli.hpp"
#include "npovm/csv.hpp"
#include "npovm/linalg.hpp"
#include "npovm/mcsim.hpp"
#include "npovm/measures.hpp"
#include "npovm/optimizer.hpp"
#include "npovm/scenarios.hpp"

namespace npovm::cli {

namespace {

constexpr double kPi = std::numbers::pi;

class Recorder {
 public:
  void check(std::string name, double expected, double got, double tol) {
    const bool ok = std::isfinite(got) && std::abs(expected - got) <= tol;
    checks_.push_back({std::move(name), expected, got, tol, ok});
  }

  // Records an exception as a failed check instead of aborting the suite.
  template <typename F>
  void guarded(const std::string& name, F&& body) {
    try {
      body();
    } catch (const std::exception&) {
      checks_.push_back({name, 0.0, std::nan(""), 0.0, false});
    }
  }

  std::vector<VerifyCheck> take() { return std::move(checks_); }

 private:
  std::vector<VerifyCheck> checks_;
};

std::string tag(const char* base, double v) { return std::string(base) + "[" + csv::format_real(v) + "]"; }

}  // namespace

std::vector<VerifyCheck> verify_checks(const VerifyOptions& options) {
  Recorder rec;
  const double c = options.example_constant;
  auto example_oracle = [c](double d) { return 0.5 * (1.0 - std::sqrt((1.0 + d * d) / c)); };

  for (double d : {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}) {
    rec.guarded(tag("example_closed_form", d), [&] {
      rec.check(tag("example_closed_form", d), example_oracle(d),
                scenarios::analytic_example_error(d).value.value(), 1e-12);
    });
  }

  const optimizer::OptimizerConfig config;
  for (double d : {0.0, 0.4, 0.9}) {
    rec.guarded(tag("example_optimum", d), [&] {
      optimizer::ConstraintSet cs;
      cs.d = d;
      const auto r = optimizer::optimize(scenarios::example_params(), cs, config);
      rec.check(tag("example_optimum", d), example_oracle(d), r.p_npovm.value(),
                d == 0.0 ? 1e-6 : 1e-4);
    });
  }

  for (double dt : {0.0, 0.3, 0.7, 1.1, kPi / 2}) {
    rec.guarded(tag("example_spectrum", dt), [&] {
      const auto pair = scenarios::build_example(0.2 + dt, 0.2);
      const auto values =
          linalg::hermitian_eigenvalues(pair.rho_ab.matrix() - pair.sigma_ab.matrix());
      const double half = 0.5 * std::sqrt(3.0 - std::cos(2.0 * dt));
      const double expected[4] = {-half, 0.0, 0.0, half};
      double worst = 0.0;
      for (std::size_t i = 0; i < 4; ++i) worst = std::max(worst, std::abs(values[i] - expected[i]));
      rec.check(tag("example_spectrum", dt), 0.0, worst, 1e-10);
      rec.check(tag("example_trace_norm", dt), scenarios::example_joint_trace_norm(dt),
                linalg::trace_norm(pair.rho_ab.matrix() - pair.sigma_ab.matrix()), 1e-10);
    });
  }

  struct Case1 {
    double d, chi, delta;
  };
  for (const Case1 p : {Case1{0.5, 0.2, 0.9}, Case1{0.3, 1.2, 0.1}, Case1{0.8, 0.0, 1.3}}) {
    const std::string name = "case1_optimum[" + csv::format_real(p.d) + ";" +
                              csv::format_real(p.chi) + ";" + csv::format_real(p.delta) + "]";
    rec.guarded(name, [&] {
      optimizer::ConstraintSet cs;
      cs.d = p.d;
      const auto r = optimizer::optimize(scenarios::case1_params(p.chi, p.delta), cs, config);
      rec.check(name, scenarios::analytic_case1_error(p.d, p.chi, p.delta).value.value(),
                r.p_npovm.value(), 1e-4);
    });
  }

  for (double d : {0.1, 0.5, 0.9}) {
    rec.guarded(tag("case1_reduces_to_example", d), [&] {
      rec.check(tag("case1_reduces_to_example", d), example_oracle(d),
                scenarios::analytic_case1_error(d, 0.0, kPi / 4).value.value(), 1e-6);
    });
  }

  rec.guarded("case1_identical_targets_delta_p", [&] {
    optimizer::ConstraintSet cs;
    cs.d = 0.4;
    rec.check("case1_identical_targets_delta_p", -0.2,
              optimizer::delta_p(scenarios::case1_params(0.5, 0.5), cs, config), 1e-4);
  });

  // The auxiliary pure states contribute 2|sin(theta - phi)| <= 2d to the
  // joint trace norm, so the triangle inequality on the product gives
  // 1/2 - (2d + |m - n|) / 4 as the lower end.
  rec.guarded("case2_sandwich", [&] {
    const qstate::BlochVector m(0.1, 0.2, 0.5);
    const qstate::BlochVector n(-0.3, 0.0, 0.4);
    optimizer::ConstraintSet cs;
    cs.d = 0.6;
    const auto r = optimizer::optimize(scenarios::case2_params(m, n), cs, config);
    const double lower = std::max(0.0, 0.5 - 0.25 * (2.0 * cs.d + m.distance(n)));
    const double outside = std::max({0.0, lower - 1e-6 - r.p_npovm.value(),
                                     r.p_npovm.value() - r.p_povm.value()});
    rec.check("case2_sandwich", 0.0, outside, 0.0);
  });

  for (double x : {0.3, 1.0}) {
    for (double y : {0.5, 4.0}) {
      const std::string name =
          "case4_povm_formula[" + csv::format_real(x) + ";" + csv::format_real(y) + "]";
      rec.guarded(name, [&] {
        const scenarios::ScenarioModel model(scenarios::case4_params(0.25, 0.33, x, y));
        rec.check(name, scenarios::case4_povm_error(0.25, 0.33, x, y).value(),
                  model.povm_error().value(), 1e-10);
        const double a[1] = {0.1};
        const double b[1] = {1.4};
        rec.check("case4_theta_invariance[" + csv::format_real(x) + ";" + csv::format_real(y) + "]",
                  model.objective(a), model.objective(b), 1e-10);
      });
    }
  }

  for (double lambda : {0.1, 0.5, 0.77}) {
    rec.guarded(tag("case3_concurrence", lambda), [&] {
      const auto pair = scenarios::build_case3(0.4, 0.9, lambda, 0.3);
      rec.check(tag("case3_concurrence", lambda), measures::schmidt_concurrence(lambda),
                measures::concurrence_pure(*pair.rho_vector), 1e-10);
    });
  }

  rec.guarded("measurement_attains_helstrom", [&] {
    const auto pair = scenarios::build_case1(0.3, 1.0, 0.2, 0.9);
    const auto m = mcsim::helstrom_projectors(pair);
    rec.check("measurement_attains_helstrom",
              measures::helstrom_success(pair.rho_ab, pair.sigma_ab).value(),
              measures::success_probability(pair.rho_ab, pair.sigma_ab, m.m0, m.m1).value.value(),
              1e-10);
  });

  return rec.take();
}

}  // namespace npovm::cli
