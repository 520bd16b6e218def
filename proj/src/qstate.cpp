#include "npovm/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "npovm/errors.hpp"

namespace npovm::qstate {

namespace {

template <std::size_t N>
void require_normalized(const std::array<Complex, N>& amps, const char* what) {
  double norm2 = 0.0;
  for (const auto& a : amps) norm2 += std::norm(a);
  if (!(std::abs(norm2 - 1.0) <= kNormTolerance)) {
    throw InvalidArgument(std::string(what) + ": state is not normalized (norm^2 = " +
                          std::to_string(norm2) + ")");
  }
}

}  // namespace

PureQubit::PureQubit(Complex a0, Complex a1) : amps_{a0, a1} {
  require_normalized(amps_, "PureQubit");
}

ComplexMatrix PureQubit::projector() const { return ComplexMatrix::outer(amps_); }

PureTwoQubit::PureTwoQubit(std::array<Complex, 4> amps) : amps_(amps) {
  require_normalized(amps_, "PureTwoQubit");
}

PureTwoQubit PureTwoQubit::product(const PureQubit& a, const PureQubit& b) {
  return PureTwoQubit({a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]});
}

ComplexMatrix PureTwoQubit::projector() const { return ComplexMatrix::outer(amps_); }

BlochVector::BlochVector(double x, double y, double z) : r_{x, y, z} {
  if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z)) {
    throw InvalidArgument("BlochVector: components must be finite");
  }
  if (norm() > 1.0 + kNormTolerance) {
    throw InvalidArgument("BlochVector: norm " + std::to_string(norm()) + " exceeds 1");
  }
}

double BlochVector::norm() const { return std::hypot(r_[0], r_[1], r_[2]); }

double BlochVector::distance(const BlochVector& other) const {
  return std::hypot(r_[0] - other.r_[0], r_[1] - other.r_[1], r_[2] - other.r_[2]);
}

DensityMatrix::DensityMatrix(const ComplexMatrix& m) : m_(m) {
  if (!m.is_hermitian()) {
    throw InvalidArgument("DensityMatrix: operator is not Hermitian");
  }
  const Complex tr = m.trace();
  if (!(std::abs(tr - 1.0) <= kTraceTolerance)) {
    throw InvalidArgument("DensityMatrix: trace " + std::to_string(tr.real()) + " != 1");
  }
  const double min_eig = linalg::hermitian_eigenvalues(m).front();
  if (min_eig < -kPositivityTolerance) {
    throw InvalidArgument("DensityMatrix: negative eigenvalue " + std::to_string(min_eig));
  }
}

PureQubit pure_from_angle(double theta) { return {std::cos(theta), std::sin(theta)}; }

PureQubit orthogonal_complement(double theta) { return {std::sin(theta), -std::cos(theta)}; }

std::pair<PureQubit, PureQubit> primed_basis(double x, double y) {
  const Complex phase = std::polar(1.0, y);
  return {PureQubit(std::cos(x), phase * std::sin(x)),
          PureQubit(std::sin(x), -phase * std::cos(x))};
}

DensityMatrix bloch_to_density(const BlochVector& r) {
  const ComplexMatrix m(2, {0.5 * (1.0 + r.z()), Complex(0.5 * r.x(), -0.5 * r.y()),
                            Complex(0.5 * r.x(), 0.5 * r.y()), 0.5 * (1.0 - r.z())});
  return DensityMatrix(m);
}

BlochVector density_to_bloch(const DensityMatrix& rho) {
  if (rho.dim() != 2) {
    throw InvalidArgument("density_to_bloch: state must be 2x2");
  }
  const auto& m = rho.matrix();
  // Tr(rho sigma_x) = 2 Re rho_10, Tr(rho sigma_y) = 2 Im rho_10, Tr(rho sigma_z) = rho_00 - rho_11.
  return {2.0 * m(1, 0).real(), 2.0 * m(1, 0).imag(), (m(0, 0) - m(1, 1)).real()};
}

template <std::size_t N>
std::array<Complex, N> canonical_phase(std::span<const Complex, N> amps) {
  std::array<Complex, N> out;
  std::copy(amps.begin(), amps.end(), out.begin());
  for (const auto& a : out) {
    const double mag = std::abs(a);
    if (mag > kNormTolerance) {
      const Complex undo = std::conj(a) / mag;
      for (auto& b : out) b *= undo;
      break;
    }
  }
  return out;
}

template std::array<Complex, 2> canonical_phase<2>(std::span<const Complex, 2>);
template std::array<Complex, 4> canonical_phase<4>(std::span<const Complex, 4>);

}  // namespace npovm::qstate
