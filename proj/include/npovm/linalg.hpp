#pragma once

// Dense complex linear algebra for the 2x2 and 4x4 operators of a qubit or
// a qubit pair. Everything here is value-typed and allocation-free except
// EigenSystem, which owns a small std::vector.
//
// Tensor ordering is A-major throughout: for a two-qubit index
// k = 2 * a + b, `a` labels subsystem A and `b` subsystem B, so
// |psi>_A (x) |0>_B has amplitudes (psi_0, 0, psi_1, 0).

#include <array>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace npovm::linalg {

using Complex = std::complex<double>;

inline constexpr double kHermitianTolerance = 1e-12;

/// Square complex matrix of dimension 2 or 4, stored row-major in a fixed
/// 16-slot buffer.
class ComplexMatrix {
 public:
  static constexpr std::size_t kMaxDim = 4;

  ComplexMatrix() : ComplexMatrix(2) {}
  /// Zero matrix. Throws InvalidArgument unless dim is 2 or 4.
  explicit ComplexMatrix(std::size_t dim);
  /// Row-major entries; length must equal dim * dim.
  ComplexMatrix(std::size_t dim, std::span<const Complex> entries);
  ComplexMatrix(std::size_t dim, std::initializer_list<Complex> entries);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const double> diag);
  /// Rank-one projector |v><v| (v need not be normalized).
  static ComplexMatrix outer(std::span<const Complex> v);

  std::size_t dim() const { return dim_; }

  Complex operator()(std::size_t row, std::size_t col) const {
    return data_[row * kMaxDim + col];
  }
  Complex& operator()(std::size_t row, std::size_t col) {
    return data_[row * kMaxDim + col];
  }

  /// Row-major copy of the dim*dim entries.
  std::vector<Complex> entries() const;

  ComplexMatrix adjoint() const;
  Complex trace() const;
  double frobenius_norm() const;
  /// max_ij |A_ij - conj(A_ji)|.
  double hermiticity_defect() const;
  bool is_hermitian(double tol = kHermitianTolerance) const {
    return hermiticity_defect() <= tol;
  }
  /// max_ij |A_ij - B_ij|; dimensions must agree.
  double max_abs_diff(const ComplexMatrix& other) const;

  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(Complex scale);

  friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) {
    return lhs += rhs;
  }
  friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) {
    return lhs -= rhs;
  }
  friend ComplexMatrix operator-(ComplexMatrix m) { return m *= -1.0; }
  friend ComplexMatrix operator*(ComplexMatrix m, Complex s) { return m *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix m) { return m *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);

 private:
  std::size_t dim_;
  std::array<Complex, kMaxDim * kMaxDim> data_{};
};

/// Eigen-decomposition of a Hermitian matrix. values are ascending; column k
/// of `vectors` is the unit eigenvector for values[k].
struct EigenSystem {
  std::vector<double> values;
  ComplexMatrix vectors;
};

enum class Subsystem { A, B };

/// Kronecker product a (x) b of two 2x2 operators, A-major.
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);

/// Cyclic complex Jacobi. Throws InvalidArgument for non-Hermitian input and
/// NumericalFailure if the off-diagonal norm does not fall below threshold
/// within the sweep budget. Eigenvectors within a degenerate cluster are
/// Gram-Schmidt re-orthonormalized in index order, and each vector's first
/// non-negligible component is made real and nonnegative.
EigenSystem hermitian_eigensystem(const ComplexMatrix& h);

/// Ascending eigenvalues only (no eigenvector accumulation).
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h);

/// Sum of absolute eigenvalues of a Hermitian matrix.
double trace_norm(const ComplexMatrix& a);

/// Reduced operator on the `keep` subsystem of a 4x4 operator.
ComplexMatrix partial_trace(const ComplexMatrix& rho_ab, Subsystem keep);

/// Pauli matrices.
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

/// Matrix-vector product; v.size() must equal m.dim().
std::vector<Complex> apply(const ComplexMatrix& m, std::span<const Complex> v);

/// <u|v> = sum_i conj(u_i) v_i.
Complex inner(std::span<const Complex> u, std::span<const Complex> v);

/// Kronecker product of two state vectors, A-major.
std::vector<Complex> kron(std::span<const Complex> a, std::span<const Complex> b);

}  // namespace npovm::linalg
