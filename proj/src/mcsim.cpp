#include "npovm/mcsim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "npovm/errors.hpp"
#include "npovm/philox.hpp"

namespace npovm::mcsim {

namespace {

constexpr double kBornSlack = 1e-9;

// Outcome-0 probability for one prepared state, after range checks.
double born_outcome0(const ComplexMatrix& state, const MeasurementPair& m) {
  double p0 = (state * m.m0).trace().real();
  double p1 = (state * m.m1).trace().real();
  for (double p : {p0, p1}) {
    if (!(p >= -kBornSlack && p <= 1.0 + kBornSlack)) {
      throw NumericalFailure("Born probability " + std::to_string(p) + " outside [0, 1]");
    }
  }
  p0 = std::max(p0, 0.0);
  p1 = std::max(p1, 0.0);
  const double total = p0 + p1;
  if (std::abs(total - 1.0) > kBornSlack) {
    throw NumericalFailure("Born probabilities sum to " + std::to_string(total));
  }
  return p0 / total;
}

std::uint64_t count_errors(double p_rho0, double p_sigma0, std::uint64_t seed,
                           std::uint64_t begin, std::uint64_t end) {
  std::uint64_t errors = 0;
  for (std::uint64_t i = begin; i < end; ++i) {
    const auto [pick, outcome] = philox::uniform_pair(seed, i);
    if (pick < 0.5) {
      errors += outcome < p_rho0 ? 0 : 1;
    } else {
      errors += outcome < p_sigma0 ? 1 : 0;
    }
  }
  return errors;
}

}  // namespace

MeasurementPair helstrom_projectors(const JointStatePair& pair) {
  const ComplexMatrix diff = pair.rho_ab.matrix() - pair.sigma_ab.matrix();
  const auto eig = linalg::hermitian_eigensystem(diff);
  const std::size_t n = diff.dim();
  ComplexMatrix m0(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (eig.values[k] <= kTieEpsilon) continue;
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        m0(r, c) += eig.vectors(r, k) * std::conj(eig.vectors(c, k));
      }
    }
  }
  return {m0, ComplexMatrix::identity(n) - m0};
}

SimulationReport simulate(const qstate::DensityMatrix& rho, const qstate::DensityMatrix& sigma,
                          const MeasurementPair& measurement, std::uint64_t trials,
                          std::uint64_t seed, const SimulationOptions& options) {
  if (trials < 1) throw InvalidArgument("simulate: trials must be >= 1");
  const auto analytic = measures::success_probability(rho, sigma, measurement.m0, measurement.m1);
  const double p_rho0 = born_outcome0(rho.matrix(), measurement);
  const double p_sigma0 = born_outcome0(sigma.matrix(), measurement);

  unsigned threads = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
  threads = static_cast<unsigned>(std::clamp<std::uint64_t>(threads, 1, trials));

  std::vector<std::uint64_t> partial(threads, 0);
  const std::uint64_t chunk = trials / threads;
  const std::uint64_t extra = trials % threads;
  auto bounds = [&](unsigned t) {
    const std::uint64_t begin = t * chunk + std::min<std::uint64_t>(t, extra);
    return std::pair{begin, begin + chunk + (t < extra ? 1 : 0)};
  };
  if (threads == 1) {
    partial[0] = count_errors(p_rho0, p_sigma0, seed, 0, trials);
  } else {
    std::vector<std::jthread> workers;
    for (unsigned t = 0; t < threads; ++t) {
      workers.emplace_back([&, t] {
        const auto [begin, end] = bounds(t);
        partial[t] = count_errors(p_rho0, p_sigma0, seed, begin, end);
      });
    }
  }
  std::uint64_t errors = 0;
  for (auto e : partial) errors += e;

  const double n = static_cast<double>(trials);
  const double p_hat = static_cast<double>(errors) / n;
  const double se = std::sqrt(p_hat * (1.0 - p_hat) / n);
  const ProbabilityValue analytic_error(1.0 - analytic.value.value());
  const double gap = p_hat - analytic_error.value();
  double z = 0.0;
  if (se > 0.0) {
    z = gap / se;
  } else if (std::abs(gap) > kBornSlack) {
    z = std::copysign(std::numeric_limits<double>::infinity(), gap);
  }
  return {trials, errors, p_hat, se, analytic_error, z, seed};
}

SimulationReport simulate(const JointStatePair& pair, std::uint64_t trials, std::uint64_t seed,
                          const SimulationOptions& options) {
  return simulate(pair.rho_ab, pair.sigma_ab, helstrom_projectors(pair), trials, seed, options);
}

}  // namespace npovm::mcsim
