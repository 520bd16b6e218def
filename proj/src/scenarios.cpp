#include "npovm/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "npovm/errors.hpp"

namespace npovm::scenarios {

using linalg::Complex;
using linalg::Subsystem;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRangeSlack = 1e-12;
constexpr double kDegenerateTolerance = 1e-12;

using Vec2 = std::array<Complex, 2>;
using Vec4 = std::array<Complex, 4>;

Vec2 angle_state(double t) { return {std::cos(t), std::sin(t)}; }
Vec2 angle_complement(double t) { return {std::sin(t), -std::cos(t)}; }

Vec4 kron2(const Vec2& a, const Vec2& b) {
  return {a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]};
}

// sqrt(w) |a>|b0> + sqrt(1 - w) |a_perp>|b1>.
Vec4 schmidt_state(double w, const Vec2& a, const Vec2& a_perp, const Vec2& b0, const Vec2& b1) {
  const Vec4 first = kron2(a, b0);
  const Vec4 second = kron2(a_perp, b1);
  const double s0 = std::sqrt(w);
  const double s1 = std::sqrt(1.0 - w);
  Vec4 out;
  for (std::size_t i = 0; i < 4; ++i) out[i] = s0 * first[i] + s1 * second[i];
  return out;
}

const Vec2 kKet0{1.0, 0.0};
const Vec2 kKet1{0.0, 1.0};

// Families whose joint states are |psi_A><psi_A| (x) (mixed target).
bool has_mixed_factor(ScenarioId id) {
  return id == ScenarioId::CaseII || id == ScenarioId::CaseIVProduct;
}

std::string format_value(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

void require_finite(const ParamMap& fixed) {
  for (const auto& [key, value] : fixed) {
    if (!std::isfinite(value)) {
      throw InvalidArgument("parameter " + key + " must be finite");
    }
  }
}

void require_open_unit(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) {
    throw InvalidArgument(std::string(name) + " = " + format_value(v) + " must lie in (0, 1)");
  }
}

// Wraps `value` into [0, period) when it is outside [lo, hi] and records a flag.
void normalize_angle(ParamMap& fixed, const std::string& key, double lo, double hi, double period,
                     std::vector<std::string>& flags) {
  const double original = fixed.at(key);
  if (original >= lo - kRangeSlack && original <= hi + kRangeSlack) return;
  double wrapped = std::fmod(original, period);
  if (wrapped < 0.0) wrapped += period;
  fixed[key] = wrapped;
  std::string note = key + "=" + format_value(original) + " outside [" + format_value(lo) + ", " +
                     format_value(hi) + "]; wrapped to " + format_value(wrapped);
  if (wrapped > hi + kRangeSlack) note += " (still outside documented range)";
  flags.push_back(std::move(note));
}

BlochVector bloch_from(const ParamMap& fixed, const char* prefix) {
  const std::string p(prefix);
  return {fixed.at(p + "_x"), fixed.at(p + "_y"), fixed.at(p + "_z")};
}

ParamMap bloch_entries(const BlochVector& m, const BlochVector& n) {
  return {{"m_x", m.x()}, {"m_y", m.y()}, {"m_z", m.z()},
          {"n_x", n.x()}, {"n_y", n.y()}, {"n_z", n.z()}};
}

}  // namespace

std::string_view to_string(ScenarioId id) {
  switch (id) {
    case ScenarioId::Example: return "example";
    case ScenarioId::CaseI: return "case1";
    case ScenarioId::CaseII: return "case2";
    case ScenarioId::CaseIII: return "case3";
    case ScenarioId::CaseIV: return "case4";
    case ScenarioId::CaseIVProduct: return "case4-product";
  }
  return "unknown";
}

std::optional<ScenarioId> parse_scenario(std::string_view name) {
  for (auto id : {ScenarioId::Example, ScenarioId::CaseI, ScenarioId::CaseII, ScenarioId::CaseIII,
                  ScenarioId::CaseIV, ScenarioId::CaseIVProduct}) {
    if (to_string(id) == name) return id;
  }
  return std::nullopt;
}

const std::vector<std::string>& fixed_parameter_names(ScenarioId id) {
  static const std::vector<std::string> none;
  static const std::vector<std::string> case1{"chi", "delta"};
  static const std::vector<std::string> case2{"m_x", "m_y", "m_z", "n_x", "n_y", "n_z"};
  static const std::vector<std::string> case3{"lambda", "mu"};
  static const std::vector<std::string> case4{"lambda", "mu", "x", "y"};
  switch (id) {
    case ScenarioId::Example: return none;
    case ScenarioId::CaseI: return case1;
    case ScenarioId::CaseII: return case2;
    case ScenarioId::CaseIII: return case3;
    case ScenarioId::CaseIV:
    case ScenarioId::CaseIVProduct: return case4;
  }
  return none;
}

const std::vector<std::string>& free_parameter_names(ScenarioId id) {
  static const std::vector<std::string> one{"theta"};
  static const std::vector<std::string> two{"theta", "phi"};
  return id == ScenarioId::CaseIV ? one : two;
}

AuxDistance aux_distance_kind(ScenarioId id) {
  switch (id) {
    case ScenarioId::CaseIII: return AuxDistance::SchmidtVectorTraceDistance;
    case ScenarioId::CaseIV: return AuxDistance::ReducedTraceNorm;
    default: return AuxDistance::ReducedTraceDistance;
  }
}

ScenarioParams make_params(ScenarioId id, const ParamMap& fixed) {
  const auto& names = fixed_parameter_names(id);
  for (const auto& name : names) {
    if (!fixed.contains(name)) {
      throw InvalidArgument(std::string(to_string(id)) + ": missing parameter " + name);
    }
  }
  for (const auto& [key, value] : fixed) {
    if (std::find(names.begin(), names.end(), key) == names.end()) {
      throw InvalidArgument(std::string(to_string(id)) + ": unknown parameter " + key);
    }
  }
  require_finite(fixed);

  ScenarioParams params{id, fixed, free_parameter_names(id), {}};
  auto& f = params.fixed;
  switch (id) {
    case ScenarioId::Example:
      break;
    case ScenarioId::CaseI: {
      normalize_angle(f, "chi", 0.0, kPi / 2, kPi, params.flags);
      normalize_angle(f, "delta", 0.0, kPi / 2, kPi, params.flags);
      if (std::abs(std::sin(f["delta"] - f["chi"])) <= kDegenerateTolerance) {
        params.flags.emplace_back("identical targets (delta = chi)");
      }
      break;
    }
    case ScenarioId::CaseII: {
      const BlochVector m = bloch_from(f, "m");
      const BlochVector n = bloch_from(f, "n");
      if (m.distance(n) <= kDegenerateTolerance) {
        params.flags.emplace_back("identical targets (m = n)");
      }
      break;
    }
    case ScenarioId::CaseIII:
      require_open_unit(f["lambda"], "lambda");
      require_open_unit(f["mu"], "mu");
      if (f["lambda"] == f["mu"]) params.flags.emplace_back("identical targets (lambda = mu)");
      break;
    case ScenarioId::CaseIV:
    case ScenarioId::CaseIVProduct:
      require_open_unit(f["lambda"], "lambda");
      require_open_unit(f["mu"], "mu");
      normalize_angle(f, "x", 0.0, kPi / 2, kPi, params.flags);
      normalize_angle(f, "y", 0.0, 2 * kPi, 2 * kPi, params.flags);
      break;
  }
  return params;
}

ScenarioParams example_params() { return make_params(ScenarioId::Example, {}); }

ScenarioParams case1_params(double chi, double delta) {
  return make_params(ScenarioId::CaseI, {{"chi", chi}, {"delta", delta}});
}

ScenarioParams case2_params(const BlochVector& m, const BlochVector& n) {
  return make_params(ScenarioId::CaseII, bloch_entries(m, n));
}

ScenarioParams case3_params(double lambda, double mu) {
  return make_params(ScenarioId::CaseIII, {{"lambda", lambda}, {"mu", mu}});
}

ScenarioParams case4_params(double lambda, double mu, double x, double y) {
  return make_params(ScenarioId::CaseIV, {{"lambda", lambda}, {"mu", mu}, {"x", x}, {"y", y}});
}

ScenarioParams case4_product_params(double lambda, double mu, double x, double y) {
  return make_params(ScenarioId::CaseIVProduct,
                     {{"lambda", lambda}, {"mu", mu}, {"x", x}, {"y", y}});
}

DensityMatrix case4_sigma_b(double mu, double x, double y) {
  if (!(mu >= 0.0 && mu <= 1.0) || !std::isfinite(x) || !std::isfinite(y)) {
    throw InvalidArgument("case4_sigma_b: mu must lie in [0, 1] and angles must be finite");
  }
  const double c = std::sin(x) * std::sin(x) + mu * std::cos(2 * x);
  const Complex off = std::sin(2 * x) * std::polar(1.0, -y) * (2 * mu - 1) / 2.0;
  return DensityMatrix(ComplexMatrix(2, {c, off, std::conj(off), 1.0 - c}));
}

std::pair<BlochVector, BlochVector> canonicalize_bloch_pair(const BlochVector& m,
                                                            const BlochVector& n) {
  const double m_norm = m.norm();
  if (m_norm == 0.0) {
    return {BlochVector(0.0, 0.0, 0.0), BlochVector(0.0, 0.0, n.norm())};
  }
  const double ux = m.x() / m_norm;
  const double uy = m.y() / m_norm;
  const double uz = m.z() / m_norm;
  const double along = n.x() * ux + n.y() * uy + n.z() * uz;
  const double px = n.x() - along * ux;
  const double py = n.y() - along * uy;
  const double pz = n.z() - along * uz;
  return {BlochVector(0.0, 0.0, m_norm), BlochVector(std::hypot(px, py, pz), 0.0, along)};
}

// ---------------------------------------------------------------------------

double ScenarioModel::free_upper() { return kPi / 2; }

ScenarioModel::ScenarioModel(ScenarioParams params) : params_(std::move(params)) {
  const auto& f = params_.fixed;
  switch (params_.id) {
    case ScenarioId::Example:
      rho_b_.emplace(ComplexMatrix::outer(kKet0));
      sigma_b_.emplace(ComplexMatrix::outer(Vec2{std::sqrt(0.5), std::sqrt(0.5)}));
      break;
    case ScenarioId::CaseI:
      rho_b_.emplace(ComplexMatrix::outer(angle_state(f.at("chi"))));
      sigma_b_.emplace(ComplexMatrix::outer(angle_state(f.at("delta"))));
      break;
    case ScenarioId::CaseII:
      rho_b_.emplace(qstate::bloch_to_density(bloch_from(f, "m")));
      sigma_b_.emplace(qstate::bloch_to_density(bloch_from(f, "n")));
      break;
    case ScenarioId::CaseIII: {
      lambda_ = f.at("lambda");
      mu_ = f.at("mu");
      const std::array<double, 2> rd{lambda_, 1.0 - lambda_};
      const std::array<double, 2> sd{mu_, 1.0 - mu_};
      rho_b_.emplace(ComplexMatrix::diagonal(rd));
      sigma_b_.emplace(ComplexMatrix::diagonal(sd));
      break;
    }
    case ScenarioId::CaseIV:
    case ScenarioId::CaseIVProduct: {
      lambda_ = f.at("lambda");
      mu_ = f.at("mu");
      const std::array<double, 2> rd{lambda_, 1.0 - lambda_};
      rho_b_.emplace(ComplexMatrix::diagonal(rd));
      sigma_b_.emplace(case4_sigma_b(mu_, f.at("x"), f.at("y")));
      const auto [p0, p1] = qstate::primed_basis(f.at("x"), f.at("y"));
      primed0_ = {p0[0], p0[1]};
      primed1_ = {p1[0], p1[1]};
      break;
    }
  }
}

namespace {

void require_free_dim(std::span<const double> free, std::size_t expected) {
  if (free.size() != expected) {
    throw InvalidArgument("expected " + std::to_string(expected) + " free values, got " +
                          std::to_string(free.size()));
  }
}

}  // namespace

std::pair<std::array<Complex, 4>, std::array<Complex, 4>> ScenarioModel::joint_vectors(
    std::span<const double> free) const {
  require_free_dim(free, free_dim());
  const double theta = free[0];
  const double phi = params_.id == ScenarioId::CaseIV ? theta : free[1];
  switch (params_.id) {
    case ScenarioId::Example:
      return {kron2(angle_state(theta), kKet0),
              kron2(angle_state(phi), Vec2{std::sqrt(0.5), std::sqrt(0.5)})};
    case ScenarioId::CaseI:
      return {kron2(angle_state(theta), angle_state(params_.fixed.at("chi"))),
              kron2(angle_state(phi), angle_state(params_.fixed.at("delta")))};
    case ScenarioId::CaseIII:
      return {schmidt_state(lambda_, angle_state(theta), angle_complement(theta), kKet0, kKet1),
              schmidt_state(mu_, angle_state(phi), angle_complement(phi), kKet0, kKet1)};
    case ScenarioId::CaseIV:
      return {schmidt_state(lambda_, angle_state(theta), angle_complement(theta), kKet0, kKet1),
              schmidt_state(mu_, angle_state(phi), angle_complement(phi), primed0_, primed1_)};
    default:
      throw InvalidArgument("joint_vectors: family has mixed joint states");
  }
}

ComplexMatrix ScenarioModel::difference(std::span<const double> free) const {
  require_free_dim(free, free_dim());
  if (has_mixed_factor(params_.id)) {
    const auto a_rho = ComplexMatrix::outer(angle_state(free[0]));
    const auto a_sigma = ComplexMatrix::outer(angle_state(free[1]));
    return linalg::tensor_product(a_rho, rho_b_->matrix()) -
           linalg::tensor_product(a_sigma, sigma_b_->matrix());
  }
  const auto [psi, chi] = joint_vectors(free);
  return ComplexMatrix::outer(psi) - ComplexMatrix::outer(chi);
}

double ScenarioModel::objective(std::span<const double> free) const {
  return 0.5 - 0.25 * linalg::trace_norm(difference(free));
}

double ScenarioModel::aux_distance(std::span<const double> free) const {
  require_free_dim(free, free_dim());
  switch (aux_distance_kind(params_.id)) {
    case AuxDistance::ReducedTraceDistance:
      return reduced_aux_trace_distance(free);
    case AuxDistance::SchmidtVectorTraceDistance: {
      const auto diff = ComplexMatrix::outer(angle_state(free[0])) -
                        ComplexMatrix::outer(angle_state(free[1]));
      return 0.5 * linalg::trace_norm(diff);
    }
    case AuxDistance::ReducedTraceNorm:
      return 2.0 * reduced_aux_trace_distance(free);
  }
  return 0.0;
}

double ScenarioModel::reduced_aux_trace_distance(std::span<const double> free) const {
  return 0.5 * linalg::trace_norm(linalg::partial_trace(difference(free), Subsystem::A));
}

double ScenarioModel::max_concurrence(std::span<const double> free) const {
  if (has_mixed_factor(params_.id)) return 0.0;
  const auto [psi, chi] = joint_vectors(free);
  return std::max(measures::concurrence_pure(PureTwoQubit(psi)),
                  measures::concurrence_pure(PureTwoQubit(chi)));
}

std::vector<double> ScenarioModel::unpack(const ParamMap& point) const {
  std::vector<double> values;
  for (const auto& name : params_.free) {
    const auto it = point.find(name);
    if (it == point.end()) {
      throw InvalidArgument("missing free parameter " + name);
    }
    if (!std::isfinite(it->second)) {
      throw InvalidArgument("free parameter " + name + " must be finite");
    }
    values.push_back(it->second);
  }
  return values;
}

JointStatePair ScenarioModel::build(const ParamMap& point) const { return build(unpack(point)); }

JointStatePair ScenarioModel::build(std::span<const double> free) const {
  require_free_dim(free, free_dim());
  std::optional<PureTwoQubit> rho_vec;
  std::optional<PureTwoQubit> sigma_vec;
  ComplexMatrix rho_ab(4);
  ComplexMatrix sigma_ab(4);
  if (has_mixed_factor(params_.id)) {
    rho_ab = linalg::tensor_product(ComplexMatrix::outer(angle_state(free[0])), rho_b_->matrix());
    sigma_ab =
        linalg::tensor_product(ComplexMatrix::outer(angle_state(free[1])), sigma_b_->matrix());
  } else {
    const auto [psi, chi] = joint_vectors(free);
    rho_vec.emplace(psi);
    sigma_vec.emplace(chi);
    rho_ab = rho_vec->projector();
    sigma_ab = sigma_vec->projector();
  }

  return JointStatePair{params_.id,
                        DensityMatrix(rho_ab),
                        DensityMatrix(sigma_ab),
                        DensityMatrix(linalg::partial_trace(rho_ab, Subsystem::A)),
                        DensityMatrix(linalg::partial_trace(sigma_ab, Subsystem::A)),
                        DensityMatrix(linalg::partial_trace(rho_ab, Subsystem::B)),
                        DensityMatrix(linalg::partial_trace(sigma_ab, Subsystem::B)),
                        rho_vec,
                        sigma_vec};
}

ProbabilityValue ScenarioModel::povm_error() const {
  return measures::helstrom_error(*rho_b_, *sigma_b_);
}

std::pair<double, double> joint_concurrences(const JointStatePair& pair) {
  if (pair.rho_vector && pair.sigma_vector) {
    return {measures::concurrence_pure(*pair.rho_vector),
            measures::concurrence_pure(*pair.sigma_vector)};
  }
  if (pair.scenario == ScenarioId::CaseII || pair.scenario == ScenarioId::CaseIVProduct) {
    return {0.0, 0.0};
  }
  throw InvalidArgument("joint_concurrences: mixed joint states are not supported");
}

// ---------------------------------------------------------------------------

JointStatePair build_example(double theta, double phi) {
  const std::array<double, 2> free{theta, phi};
  return ScenarioModel(example_params()).build(free);
}

JointStatePair build_case1(double theta, double phi, double chi, double delta) {
  const std::array<double, 2> free{theta, phi};
  return ScenarioModel(case1_params(chi, delta)).build(free);
}

JointStatePair build_case2(double theta, double phi, const BlochVector& m, const BlochVector& n) {
  const std::array<double, 2> free{theta, phi};
  return ScenarioModel(case2_params(m, n)).build(free);
}

JointStatePair build_case3(double theta, double phi, double lambda, double mu) {
  const std::array<double, 2> free{theta, phi};
  return ScenarioModel(case3_params(lambda, mu)).build(free);
}

JointStatePair build_case4(double theta, double lambda, double mu, double x, double y) {
  const std::array<double, 1> free{theta};
  return ScenarioModel(case4_params(lambda, mu, x, y)).build(free);
}

JointStatePair build_case4_product(double theta, double phi, double lambda, double mu, double x,
                                   double y) {
  const std::array<double, 2> free{theta, phi};
  return ScenarioModel(case4_product_params(lambda, mu, x, y)).build(free);
}

// ---------------------------------------------------------------------------

namespace {

void require_unit_d(double d, const char* what) {
  if (!(d >= 0.0 && d <= 1.0)) {
    throw InvalidArgument(std::string(what) + ": d = " + format_value(d) +
                          " must lie in [0, 1]");
  }
}

}  // namespace

FlaggedProbability analytic_case1_error(double d, double chi, double delta) {
  require_unit_d(d, "analytic_case1_error");
  if (!std::isfinite(chi) || !std::isfinite(delta)) {
    throw InvalidArgument("analytic_case1_error: angles must be finite");
  }
  const double c = std::cos(delta - chi);
  const double s = std::sin(delta - chi);
  const bool identical = std::abs(s) <= kDegenerateTolerance;
  return {ProbabilityValue(0.5 - 0.5 * std::sqrt(d * d * c * c + s * s)), d == 1.0 || identical};
}

FlaggedProbability analytic_example_error(double d) {
  require_unit_d(d, "analytic_example_error");
  return {analytic_case1_error(d, 0.0, std::numbers::pi / 4).value, d == 1.0};
}

LowerBound case2_lower_bound(double d, const BlochVector& m, const BlochVector& n) {
  require_unit_d(d, "case2_lower_bound");
  const double raw = 0.5 - 0.25 * (d + m.distance(n));
  return {ProbabilityValue(std::max(0.0, raw)), raw};
}

ProbabilityValue case4_povm_error(double lambda, double mu, double x, double y) {
  if (!(lambda >= 0.0 && lambda <= 1.0) || !(mu >= 0.0 && mu <= 1.0)) {
    throw InvalidArgument("case4_povm_error: lambda and mu must lie in [0, 1]");
  }
  if (!std::isfinite(x) || !std::isfinite(y)) {
    throw InvalidArgument("case4_povm_error: angles must be finite");
  }
  const double c = std::sin(x) * std::sin(x) + mu * std::cos(2 * x);
  const double k = std::sin(2 * x) * (2 * mu - 1) / 2.0;
  const double a = k * std::cos(y);
  const double b = k * std::sin(y);
  return ProbabilityValue(0.5 * (1.0 - std::sqrt((lambda - c) * (lambda - c) + a * a + b * b)));
}

double example_joint_trace_norm(double dtheta) { return std::sqrt(3.0 - std::cos(2.0 * dtheta)); }

}  // namespace npovm::scenarios
