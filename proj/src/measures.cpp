#include "npovm/measures.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "npovm/errors.hpp"

namespace npovm::measures {

namespace {

constexpr double kCompletenessTolerance = 1e-10;
constexpr double kPriorTolerance = 1e-12;
constexpr double kPositivityTolerance = 1e-10;
constexpr double kRangeViolation = 1e-9;

void require_same_dim(const DensityMatrix& rho, const DensityMatrix& sigma, const char* what) {
  if (rho.dim() != sigma.dim()) {
    throw InvalidArgument(std::string(what) + ": states have different dimensions");
  }
}

bool is_positive_semidefinite(const ComplexMatrix& m) {
  if (!m.is_hermitian()) return false;
  return linalg::hermitian_eigenvalues(m).front() >= -kPositivityTolerance;
}

}  // namespace

ProbabilityValue::ProbabilityValue(double p) {
  if (!(p >= -kSlack && p <= 1.0 + kSlack)) {
    throw InvalidArgument("probability " + std::to_string(p) + " outside [0, 1]");
  }
  p_ = std::clamp(p, 0.0, 1.0);
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma, "trace_distance");
  return 0.5 * linalg::trace_norm(rho.matrix() - sigma.matrix());
}

HelstromValues helstrom(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma, "helstrom");
  const double norm = linalg::trace_norm(rho.matrix() - sigma.matrix());
  const ProbabilityValue error(0.5 - 0.25 * norm);
  return {error, ProbabilityValue(1.0 - error.value())};
}

ProbabilityValue helstrom_error(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return helstrom(rho, sigma).error;
}

ProbabilityValue helstrom_success(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return helstrom(rho, sigma).success;
}

SuccessReport success_probability(const DensityMatrix& rho, const DensityMatrix& sigma,
                                  const ComplexMatrix& m0, const ComplexMatrix& m1, double p0,
                                  double p1) {
  require_same_dim(rho, sigma, "success_probability");
  if (m0.dim() != rho.dim() || m1.dim() != rho.dim()) {
    throw InvalidArgument("success_probability: measurement dimension does not match states");
  }
  if (!(p0 >= 0.0 && p1 >= 0.0 && std::abs(p0 + p1 - 1.0) <= kPriorTolerance)) {
    throw InvalidArgument("success_probability: priors must be nonnegative and sum to 1");
  }
  const double completeness = (m0 + m1).max_abs_diff(ComplexMatrix::identity(rho.dim()));
  if (!(completeness <= kCompletenessTolerance)) {
    throw InvalidArgument("success_probability: m0 + m1 differs from identity by " +
                          std::to_string(completeness));
  }

  const double value =
      p0 * (rho.matrix() * m0).trace().real() + p1 * (sigma.matrix() * m1).trace().real();
  if (value < -kRangeViolation || value > 1.0 + kRangeViolation) {
    throw NumericalFailure("success_probability: value " + std::to_string(value) +
                           " outside [0, 1]");
  }
  return {ProbabilityValue(std::clamp(value, 0.0, 1.0)),
          is_positive_semidefinite(m0) && is_positive_semidefinite(m1)};
}

double concurrence_pure(const qstate::PureTwoQubit& psi) {
  std::array<linalg::Complex, 4> conj_psi;
  for (std::size_t i = 0; i < 4; ++i) conj_psi[i] = std::conj(psi[i]);
  const auto flip = linalg::tensor_product(linalg::pauli_y(), linalg::pauli_y());
  const auto tilde = linalg::apply(flip, conj_psi);
  return std::abs(linalg::inner(psi.amplitudes(), tilde));
}

double schmidt_concurrence(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw InvalidArgument("schmidt_concurrence: lambda " + std::to_string(lambda) +
                          " outside [0, 1]");
  }
  return 2.0 * std::sqrt(lambda * (1.0 - lambda));
}

}  // namespace npovm::measures
