#pragma once

#include <Eigen/Dense>

#include <complex>
#include <random>
#include <vector>

#include "npovm/linalg.hpp"
#include "npovm/qstate.hpp"

namespace npovm::testing {

using linalg::Complex;
using linalg::ComplexMatrix;

inline Eigen::MatrixXcd to_eigen(const ComplexMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.dim());
  Eigen::MatrixXcd out(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) out(r, c) = m(r, c);
  }
  return out;
}

inline ComplexMatrix from_eigen(const Eigen::MatrixXcd& m) {
  ComplexMatrix out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
  }
  return out;
}

/// Reference trace norm from Eigen's self-adjoint solver.
inline double eigen_trace_norm(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(to_eigen(m));
  return solver.eigenvalues().cwiseAbs().sum();
}

class Random {
 public:
  explicit Random(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }
  double normal() { return std::normal_distribution<double>()(gen_); }

  ComplexMatrix hermitian(std::size_t dim) {
    ComplexMatrix h(dim);
    for (std::size_t r = 0; r < dim; ++r) {
      h(r, r) = normal();
      for (std::size_t c = r + 1; c < dim; ++c) {
        h(r, c) = Complex(normal(), normal());
        h(c, r) = std::conj(h(r, c));
      }
    }
    return h;
  }

  /// Haar-ish unitary: Q factor of a complex Gaussian matrix.
  ComplexMatrix unitary(std::size_t dim) {
    Eigen::MatrixXcd g(dim, dim);
    for (std::size_t r = 0; r < dim; ++r) {
      for (std::size_t c = 0; c < dim; ++c) g(r, c) = Complex(normal(), normal());
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    return from_eigen(qr.householderQ() * Eigen::MatrixXcd::Identity(dim, dim));
  }

  /// Random density matrix W W^dag / Tr.
  ComplexMatrix density(std::size_t dim) {
    Eigen::MatrixXcd w(dim, dim);
    for (std::size_t r = 0; r < dim; ++r) {
      for (std::size_t c = 0; c < dim; ++c) w(r, c) = Complex(normal(), normal());
    }
    Eigen::MatrixXcd rho = w * w.adjoint();
    rho /= rho.trace();
    return from_eigen(rho);
  }

  std::vector<Complex> unit_vector(std::size_t dim) {
    std::vector<Complex> v(dim);
    double norm = 0.0;
    for (auto& a : v) {
      a = Complex(normal(), normal());
      norm += std::norm(a);
    }
    for (auto& a : v) a /= std::sqrt(norm);
    return v;
  }

  qstate::BlochVector bloch() {
    for (;;) {
      const double x = uniform(-1, 1), y = uniform(-1, 1), z = uniform(-1, 1);
      if (x * x + y * y + z * z <= 1.0) return {x, y, z};
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace npovm::testing
