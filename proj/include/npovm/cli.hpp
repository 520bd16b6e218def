#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "npovm/optimizer.hpp"
#include "npovm/scenarios.hpp"

namespace npovm::cli {

enum class Command { Figure, Optimize, Simulate, Verify };

enum class FigureId { Fig1, Fig2, Fig3, Fig4, Fig5, Fig6 };

std::optional<FigureId> parse_figure(std::string_view name);

/// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;

struct RunConfig {
  Command command = Command::Verify;
  std::optional<FigureId> figure_id;
  /// Points per axis for figures, optimizer grid points otherwise. Unset
  /// selects the per-figure default (101, or 21 for fig3).
  std::optional<int> resolution;
  std::optional<double> d;
  std::optional<double> e;
  /// Unset selects strict, except fig4 which reports only.
  std::optional<optimizer::EMode> e_mode;
  std::optional<scenarios::ScenarioId> scenario;
  /// Fixed scenario parameters plus optional theta / phi.
  scenarios::ParamMap values;
  /// Empty writes to the provided stream.
  std::string out_path;
  std::string report_path;
  std::uint64_t trials = 100'000;
  std::uint64_t seed = 1;
  /// fig5/fig6: lambda = 1/3, mu = 1/4 instead of 0.25, 0.33.
  bool body_text_roles = false;
  unsigned threads = 0;

  /// Throws InvalidArgument on inconsistent settings.
  void validate() const;
};

/// Test hook for the verification suite.
struct VerifyOptions {
  /// Denominator inside the square root of the Example closed form.
  double example_constant = 2.0;
};

struct VerifyCheck {
  std::string name;
  double expected;
  double got;
  double tolerance;
  bool passed;
};

std::vector<VerifyCheck> verify_checks(const VerifyOptions& options = {});

int run_figure(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_optimize(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_verify(const RunConfig& config, std::ostream& out, std::ostream& err,
               const VerifyOptions& options = {});

/// Parses argv and dispatches. Returns the exit status; never throws.
int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace npovm::cli
