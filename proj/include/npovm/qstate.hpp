#pragma once

// Qubit and qubit-pair states, plus the angle-parametrized pure-state
// families used to build auxiliary extensions.

#include <array>
#include <span>
#include <utility>

#include "npovm/linalg.hpp"

namespace npovm::qstate {

using linalg::Complex;
using linalg::ComplexMatrix;

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-12;
inline constexpr double kPositivityTolerance = 1e-10;

/// Normalized single-qubit state vector (a0, a1).
class PureQubit {
 public:
  /// Throws InvalidArgument unless |a0|^2 + |a1|^2 = 1 within kNormTolerance.
  PureQubit(Complex a0, Complex a1);

  Complex operator[](std::size_t i) const { return amps_[i]; }
  std::span<const Complex, 2> amplitudes() const { return amps_; }

  /// |psi><psi|.
  ComplexMatrix projector() const;

 private:
  std::array<Complex, 2> amps_;
};

/// Normalized two-qubit state vector, A-major.
class PureTwoQubit {
 public:
  explicit PureTwoQubit(std::array<Complex, 4> amps);
  /// |a>_A (x) |b>_B.
  static PureTwoQubit product(const PureQubit& a, const PureQubit& b);

  Complex operator[](std::size_t i) const { return amps_[i]; }
  std::span<const Complex, 4> amplitudes() const { return amps_; }
  ComplexMatrix projector() const;

 private:
  std::array<Complex, 4> amps_;
};

/// Real 3-vector with norm at most 1 (+1e-12).
class BlochVector {
 public:
  BlochVector(double x, double y, double z);

  double x() const { return r_[0]; }
  double y() const { return r_[1]; }
  double z() const { return r_[2]; }
  double norm() const;
  /// Euclidean distance |r - other|.
  double distance(const BlochVector& other) const;

 private:
  std::array<double, 3> r_;
};

/// Unit-trace positive semidefinite Hermitian operator (2x2 or 4x4).
class DensityMatrix {
 public:
  /// Validates Hermiticity (1e-12), trace (1e-12), and the smallest
  /// eigenvalue (>= -1e-10); throws InvalidArgument otherwise.
  explicit DensityMatrix(const ComplexMatrix& m);
  static DensityMatrix from_pure(const PureQubit& psi) { return DensityMatrix(psi.projector()); }
  static DensityMatrix from_pure(const PureTwoQubit& psi) {
    return DensityMatrix(psi.projector());
  }

  const ComplexMatrix& matrix() const { return m_; }
  std::size_t dim() const { return m_.dim(); }

 private:
  ComplexMatrix m_;
};

/// cos(theta)|0> + sin(theta)|1>.
PureQubit pure_from_angle(double theta);

/// sin(theta)|0> - cos(theta)|1>, orthogonal to pure_from_angle(theta).
PureQubit orthogonal_complement(double theta);

/// (|0'>, |1'>) with |0'> = cos x|0> + e^{iy} sin x|1> and
/// |1'> = sin x|0> - e^{iy} cos x|1>.
std::pair<PureQubit, PureQubit> primed_basis(double x, double y);

/// (I + r.sigma) / 2.
DensityMatrix bloch_to_density(const BlochVector& r);

/// r_i = Tr(rho sigma_i) for a 2x2 state.
BlochVector density_to_bloch(const DensityMatrix& rho);

/// Copy of `amps` multiplied by the global phase that makes its first
/// non-negligible amplitude real and nonnegative. Used for comparisons only;
/// constructors keep their literal signs.
template <std::size_t N>
std::array<Complex, N> canonical_phase(std::span<const Complex, N> amps);

extern template std::array<Complex, 2> canonical_phase<2>(std::span<const Complex, 2>);
extern template std::array<Complex, 4> canonical_phase<4>(std::span<const Complex, 4>);

}  // namespace npovm::qstate
