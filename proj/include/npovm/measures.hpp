#pragma once

#include "npovm/linalg.hpp"
#include "npovm/qstate.hpp"

namespace npovm::measures {

using linalg::ComplexMatrix;
using qstate::DensityMatrix;

/// A probability in [0, 1]. Construction accepts values up to 1e-12 outside
/// the interval (clamped) and rejects anything further out.
class ProbabilityValue {
 public:
  static constexpr double kSlack = 1e-12;

  explicit ProbabilityValue(double p);
  double value() const { return p_; }

 private:
  double p_;
};

/// 1/2 ||rho - sigma||_1.
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

struct HelstromValues {
  ProbabilityValue error;
  ProbabilityValue success;
};

/// Minimum error and maximum success for equiprobable rho, sigma from one
/// trace-norm evaluation; success is computed as 1 - error.
HelstromValues helstrom(const DensityMatrix& rho, const DensityMatrix& sigma);

/// 1/2 - 1/4 ||rho - sigma||_1 (equal priors).
ProbabilityValue helstrom_error(const DensityMatrix& rho, const DensityMatrix& sigma);

/// 1/2 + 1/4 ||rho - sigma||_1 (equal priors).
ProbabilityValue helstrom_success(const DensityMatrix& rho, const DensityMatrix& sigma);

struct SuccessReport {
  ProbabilityValue value;
  /// True when m0 and m1 are both positive semidefinite (within 1e-10).
  bool is_povm;
};

/// p0 Tr(rho m0) + p1 Tr(sigma m1) for a two-outcome measurement that may
/// include non-positive elements. Requires m0 + m1 = I (1e-10) and
/// p0 + p1 = 1. Values outside [0, 1] by more than 1e-9 raise
/// NumericalFailure; smaller excursions are clamped.
SuccessReport success_probability(const DensityMatrix& rho, const DensityMatrix& sigma,
                                  const ComplexMatrix& m0, const ComplexMatrix& m1,
                                  double p0 = 0.5, double p1 = 0.5);

/// |<psi| (sigma_y (x) sigma_y) |psi*>| for a normalized two-qubit state.
double concurrence_pure(const qstate::PureTwoQubit& psi);

/// 2 sqrt(lambda (1 - lambda)) for Schmidt weight lambda in [0, 1].
double schmidt_concurrence(double lambda);

}  // namespace npovm::measures
