#pragma once

// Joint-state families that extend a pair of target qubit states (rho_B,
// sigma_B) with an auxiliary qubit A, and the closed-form expressions that
// serve as analytic oracles for the optimizer.
//
// Families (free auxiliary variables in brackets):
//   Example        [theta, phi]  |psi(theta)> (x) |0>  vs  |psi(phi)> (x) |+>
//   CaseI          [theta, phi]  |psi(theta)> (x) |chi>  vs  |psi(phi)> (x) |delta>
//   CaseII         [theta, phi]  |psi(theta)><psi| (x) rho_B(m)  vs  ... (x) sigma_B(n)
//   CaseIII        [theta, phi]  sqrt(l)|psi>|0> + sqrt(1-l)|psi_perp>|1>, same with mu, phi
//   CaseIV         [theta]       shared A Schmidt basis, primed B basis for sigma
//   CaseIVProduct  [theta, phi]  product extensions of the CaseIV targets

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "npovm/linalg.hpp"
#include "npovm/measures.hpp"
#include "npovm/qstate.hpp"

namespace npovm::scenarios {

using linalg::ComplexMatrix;
using measures::ProbabilityValue;
using qstate::BlochVector;
using qstate::DensityMatrix;
using qstate::PureTwoQubit;

enum class ScenarioId { Example, CaseI, CaseII, CaseIII, CaseIV, CaseIVProduct };

/// "example", "case1", "case2", "case3", "case4", "case4-product".
std::string_view to_string(ScenarioId id);
std::optional<ScenarioId> parse_scenario(std::string_view name);

using ParamMap = std::map<std::string, double>;

/// Extensions rho_AB, sigma_AB together with their marginals. The vectors
/// are present when the joint states are pure.
struct JointStatePair {
  ScenarioId scenario;
  DensityMatrix rho_ab;
  DensityMatrix sigma_ab;
  DensityMatrix rho_a;
  DensityMatrix sigma_a;
  DensityMatrix rho_b;
  DensityMatrix sigma_b;
  std::optional<PureTwoQubit> rho_vector;
  std::optional<PureTwoQubit> sigma_vector;
};

JointStatePair build_example(double theta, double phi);
JointStatePair build_case1(double theta, double phi, double chi, double delta);
JointStatePair build_case2(double theta, double phi, const BlochVector& m, const BlochVector& n);
/// lambda, mu must lie in (0, 1).
JointStatePair build_case3(double theta, double phi, double lambda, double mu);
JointStatePair build_case4(double theta, double lambda, double mu, double x, double y);
JointStatePair build_case4_product(double theta, double phi, double lambda, double mu, double x,
                                   double y);

/// Concurrences of (rho_AB, sigma_AB). Pure joint states use the spin-flip
/// formula; product extensions with a mixed factor are separable and
/// report 0.
std::pair<double, double> joint_concurrences(const JointStatePair& pair);

/// sigma_B of the CaseIV family: mu|0'><0'| + (1-mu)|1'><1'|, i.e.
/// [[c, a - ib], [a + ib, 1 - c]] with c = sin^2 x + mu cos 2x and
/// a - ib = sin 2x e^{-iy} (2mu - 1) / 2.
DensityMatrix case4_sigma_b(double mu, double x, double y);

/// Rotates a Bloch pair to (0, 0, m) / (p, 0, n) with p >= 0, preserving
/// |m - n|. A zero first vector leaves the second on the +z axis.
std::pair<BlochVector, BlochVector> canonicalize_bloch_pair(const BlochVector& m,
                                                            const BlochVector& n);

// ---------------------------------------------------------------------------
// Scenario descriptions consumed by the optimizer.

struct ScenarioParams {
  ScenarioId id;
  ParamMap fixed;
  std::vector<std::string> free;
  /// Range notes produced while normalizing `fixed` (wrapped angles,
  /// degenerate inputs). Never fatal.
  std::vector<std::string> flags;
};

/// Required fixed parameter names for each family.
const std::vector<std::string>& fixed_parameter_names(ScenarioId id);
const std::vector<std::string>& free_parameter_names(ScenarioId id);

/// Validates and normalizes a parameter map: checks that every required key
/// is present and no unknown key is, rejects non-physical values
/// (InvalidArgument), wraps angles into their period (pi for state angles,
/// 2 pi for the phase y) and flags values outside the documented ranges.
ScenarioParams make_params(ScenarioId id, const ParamMap& fixed);

ScenarioParams example_params();
ScenarioParams case1_params(double chi, double delta);
ScenarioParams case2_params(const BlochVector& m, const BlochVector& n);
ScenarioParams case3_params(double lambda, double mu);
ScenarioParams case4_params(double lambda, double mu, double x, double y);
ScenarioParams case4_product_params(double lambda, double mu, double x, double y);

/// Which auxiliary distinguishability the d-constraint bounds.
enum class AuxDistance {
  /// 1/2 ||rho_A - sigma_A||_1 of the reduced auxiliary states.
  ReducedTraceDistance,
  /// 1/2 || |psi_A><psi_A| - |phi_A><phi_A| ||_1 of the leading Schmidt
  /// vectors, i.e. |sin(theta - phi)|.
  SchmidtVectorTraceDistance,
  /// ||rho_A - sigma_A||_1 of the reduced auxiliary states (2|lambda - mu|
  /// for CaseIV).
  ReducedTraceNorm,
};

AuxDistance aux_distance_kind(ScenarioId id);

/// Precomputed evaluator for one ScenarioParams. Cheap to call in inner
/// loops: `difference` and `aux_distance` build no validated objects.
class ScenarioModel {
 public:
  explicit ScenarioModel(ScenarioParams params);

  const ScenarioParams& params() const { return params_; }
  std::size_t free_dim() const { return params_.free.size(); }
  /// Every free variable ranges over [0, pi/2].
  static constexpr double kFreeLower = 0.0;
  static double free_upper();

  /// rho_AB - sigma_AB at the given free values.
  ComplexMatrix difference(std::span<const double> free) const;
  /// 1/2 - 1/4 ||rho_AB - sigma_AB||_1.
  double objective(std::span<const double> free) const;
  /// The quantity bounded by d (see AuxDistance).
  double aux_distance(std::span<const double> free) const;
  /// Reduced-state trace distance 1/2 ||rho_A - sigma_A||_1, for reporting.
  double reduced_aux_trace_distance(std::span<const double> free) const;
  /// max of the two joint concurrences.
  double max_concurrence(std::span<const double> free) const;

  /// Fully validated JointStatePair.
  JointStatePair build(std::span<const double> free) const;
  JointStatePair build(const ParamMap& point) const;
  /// Free values in params().free order, read from a named map.
  std::vector<double> unpack(const ParamMap& point) const;

  const DensityMatrix& rho_b() const { return *rho_b_; }
  const DensityMatrix& sigma_b() const { return *sigma_b_; }
  /// Helstrom error of the targets (the POVM baseline).
  ProbabilityValue povm_error() const;

 private:
  // Pure joint state vectors (Example, CaseI, CaseIII, CaseIV).
  std::pair<std::array<linalg::Complex, 4>, std::array<linalg::Complex, 4>> joint_vectors(
      std::span<const double> free) const;

  ScenarioParams params_;
  std::optional<DensityMatrix> rho_b_;
  std::optional<DensityMatrix> sigma_b_;
  // Cached fixed quantities.
  double lambda_ = 0.0;
  double mu_ = 0.0;
  std::array<linalg::Complex, 2> primed0_{};
  std::array<linalg::Complex, 2> primed1_{};
};

// ---------------------------------------------------------------------------
// Closed forms.

struct FlaggedProbability {
  ProbabilityValue value;
  /// Set for well-defined but degenerate inputs (d = 1, identical targets).
  bool degenerate;
};

/// 1/2 (1 - sqrt((1 + d^2) / 2)), d in [0, 1].
FlaggedProbability analytic_example_error(double d);

/// 1/2 - 1/2 sqrt(d^2 cos^2(delta - chi) + sin^2(delta - chi)), d in [0, 1].
FlaggedProbability analytic_case1_error(double d, double chi, double delta);

struct LowerBound {
  /// max(0, raw).
  ProbabilityValue value;
  /// 1/2 - 1/4 (d + |m - n|), possibly negative.
  double raw;
};

LowerBound case2_lower_bound(double d, const BlochVector& m, const BlochVector& n);

/// 1/2 [1 - sqrt((lambda - c)^2 + a^2 + b^2)] with a, b, c of case4_sigma_b.
ProbabilityValue case4_povm_error(double lambda, double mu, double x, double y);

/// sqrt(3 - cos 2 dtheta): joint trace norm of the Example family.
double example_joint_trace_norm(double dtheta);

}  // namespace npovm::scenarios
