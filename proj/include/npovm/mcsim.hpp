#pragma once

// Monte Carlo estimate of the error rate of the optimal joint projective
// measurement, sampled with a counter-based generator so that the counts
// do not depend on how trials are split across threads.

#include <cstdint>

#include "npovm/linalg.hpp"
#include "npovm/measures.hpp"
#include "npovm/scenarios.hpp"

namespace npovm::mcsim {

using linalg::ComplexMatrix;
using measures::ProbabilityValue;
using scenarios::JointStatePair;

/// Eigenvalues of rho - sigma at or below this go to m1.
inline constexpr double kTieEpsilon = 1e-10;

struct MeasurementPair {
  /// Outcome "rho".
  ComplexMatrix m0;
  /// Outcome "sigma".
  ComplexMatrix m1;
};

/// Projectors onto the positive eigenspace of rho_AB - sigma_AB and its
/// complement.
MeasurementPair helstrom_projectors(const JointStatePair& pair);

struct SimulationReport {
  std::uint64_t trials;
  std::uint64_t errors;
  double empirical_error;
  double standard_error;
  ProbabilityValue analytic_error;
  /// (empirical - analytic) / standard_error. With a zero standard error it
  /// is 0 on agreement within 1e-9 and +-inf otherwise.
  double z_score;
  std::uint64_t seed;
};

struct SimulationOptions {
  /// 0 selects std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// Trial i uses Philox block i under key `seed`: the first uniform picks
/// the prepared state (equal priors), the second samples the outcome.
SimulationReport simulate(const JointStatePair& pair, std::uint64_t trials, std::uint64_t seed,
                          const SimulationOptions& options = {});

/// Same, for an explicit measurement on arbitrary states of equal dimension.
SimulationReport simulate(const qstate::DensityMatrix& rho, const qstate::DensityMatrix& sigma,
                          const MeasurementPair& measurement, std::uint64_t trials,
                          std::uint64_t seed, const SimulationOptions& options = {});

}  // namespace npovm::mcsim
