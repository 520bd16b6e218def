#include "npovm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "npovm/errors.hpp"

namespace npovm::linalg {

namespace {

constexpr double kOffDiagonalThreshold = 1e-13;
constexpr int kMaxSweeps = 100;
constexpr double kDegeneracyGap = 1e-10;
constexpr double kPhaseCutoff = 1e-12;

void check_dim(std::size_t dim) {
  if (dim != 2 && dim != 4) {
    throw InvalidArgument("matrix dimension must be 2 or 4, got " + std::to_string(dim));
  }
}

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw InvalidArgument(std::string(what) + ": dimension mismatch (" +
                          std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) + ")");
  }
}

double off_diagonal_norm(const ComplexMatrix& a) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < a.dim(); ++j) {
      if (i != j) sum += std::norm(a(i, j));
    }
  }
  return std::sqrt(sum);
}

// Diagonalizes `a` in place. When `v` is non-null it accumulates the
// rotations so that on exit h = v * diag(a) * v^H.
void jacobi_diagonalize(ComplexMatrix& a, ComplexMatrix* v) {
  const std::size_t n = a.dim();
  const double threshold = kOffDiagonalThreshold * std::max(1.0, a.frobenius_norm());

  for (int sweep = 0; sweep <= kMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) <= threshold) {
      return;
    }
    if (sweep == kMaxSweeps) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double r = std::abs(apq);
        if (r == 0.0) continue;

        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * r);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex phase = apq / r;
        // G = [[c, s*phase], [-s*conj(phase), c]] acting on the (p, q) plane.
        const Complex g_pq = s * phase;
        const Complex g_qp = -s * std::conj(phase);

        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = akp * c + akq * g_qp;
          a(k, q) = akp * g_pq + akq * c;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = c * apk + std::conj(g_qp) * aqk;
          a(q, k) = std::conj(g_pq) * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();

        if (v != nullptr) {
          for (std::size_t k = 0; k < n; ++k) {
            const Complex vkp = (*v)(k, p);
            const Complex vkq = (*v)(k, q);
            (*v)(k, p) = vkp * c + vkq * g_qp;
            (*v)(k, q) = vkp * g_pq + vkq * c;
          }
        }
      }
    }
  }
  throw NumericalFailure("hermitian_eigensystem: Jacobi iteration did not converge in " +
                         std::to_string(kMaxSweeps) + " sweeps");
}

void require_hermitian(const ComplexMatrix& h, const char* what) {
  const double defect = h.hermiticity_defect();
  if (!(defect <= kHermitianTolerance)) {
    throw InvalidArgument(std::string(what) + ": matrix is not Hermitian (defect " +
                          std::to_string(defect) + ")");
  }
}

std::vector<std::size_t> ascending_order(const ComplexMatrix& diag) {
  std::vector<std::size_t> order(diag.dim());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return diag(i, i).real() < diag(j, j).real();
  });
  return order;
}

void orthonormalize_columns(ComplexMatrix& vecs, std::size_t first, std::size_t last) {
  const std::size_t n = vecs.dim();
  for (std::size_t j = first; j < last; ++j) {
    for (std::size_t i = first; i < j; ++i) {
      Complex proj = 0.0;
      for (std::size_t k = 0; k < n; ++k) proj += std::conj(vecs(k, i)) * vecs(k, j);
      for (std::size_t k = 0; k < n; ++k) vecs(k, j) -= proj * vecs(k, i);
    }
    double norm = 0.0;
    for (std::size_t k = 0; k < n; ++k) norm += std::norm(vecs(k, j));
    norm = std::sqrt(norm);
    if (norm == 0.0) {
      throw NumericalFailure("hermitian_eigensystem: degenerate eigenvectors are linearly dependent");
    }
    for (std::size_t k = 0; k < n; ++k) vecs(k, j) /= norm;
  }
}

void canonicalize_phase(ComplexMatrix& vecs, std::size_t col) {
  for (std::size_t k = 0; k < vecs.dim(); ++k) {
    const double mag = std::abs(vecs(k, col));
    if (mag > kPhaseCutoff) {
      const Complex undo = std::conj(vecs(k, col)) / mag;
      for (std::size_t m = 0; m < vecs.dim(); ++m) vecs(m, col) *= undo;
      vecs(k, col) = mag;
      return;
    }
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim) { check_dim(dim); }

ComplexMatrix::ComplexMatrix(std::size_t dim, std::span<const Complex> entries) : dim_(dim) {
  check_dim(dim);
  if (entries.size() != dim * dim) {
    throw InvalidArgument("matrix entries length " + std::to_string(entries.size()) +
                          " does not match dim^2 = " + std::to_string(dim * dim));
  }
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) (*this)(i, j) = entries[i * dim + j];
  }
}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::initializer_list<Complex> entries)
    : ComplexMatrix(dim, std::span<const Complex>(entries.begin(), entries.size())) {}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> diag) {
  ComplexMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const Complex> v) {
  ComplexMatrix m(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = v[i] * std::conj(v[j]);
  }
  return m;
}

std::vector<Complex> ComplexMatrix::entries() const {
  std::vector<Complex> out;
  out.reserve(dim_ * dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) out.push_back((*this)(i, j));
  }
  return out;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) m(i, j) = std::conj((*this)(j, i));
  }
  return m;
}

Complex ComplexMatrix::trace() const {
  Complex t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const {
  double sum = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) sum += std::norm((*this)(i, j));
  }
  return std::sqrt(sum);
}

double ComplexMatrix::hermiticity_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = i; j < dim_; ++j) {
      worst = std::max(worst, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    }
  }
  return worst;
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix& other) const {
  require_same_dim(*this, other, "max_abs_diff");
  double worst = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      worst = std::max(worst, std::abs((*this)(i, j) - other(i, j)));
    }
  }
  return worst;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  require_same_dim(*this, rhs, "operator+");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
  require_same_dim(*this, rhs, "operator-");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
  for (auto& x : data_) x *= scale;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  require_same_dim(lhs, rhs, "operator*");
  const std::size_t n = lhs.dim();
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const Complex lik = lhs(i, k);
      for (std::size_t j = 0; j < n; ++j) out(i, j) += lik * rhs(k, j);
    }
  }
  return out;
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != 2 || b.dim() != 2) {
    throw InvalidArgument("tensor_product: both factors must be 2x2");
  }
  ComplexMatrix out(4);
  for (std::size_t ia = 0; ia < 2; ++ia) {
    for (std::size_t ja = 0; ja < 2; ++ja) {
      for (std::size_t ib = 0; ib < 2; ++ib) {
        for (std::size_t jb = 0; jb < 2; ++jb) {
          out(2 * ia + ib, 2 * ja + jb) = a(ia, ja) * b(ib, jb);
        }
      }
    }
  }
  return out;
}

EigenSystem hermitian_eigensystem(const ComplexMatrix& h) {
  require_hermitian(h, "hermitian_eigensystem");
  const std::size_t n = h.dim();
  ComplexMatrix a = h;
  ComplexMatrix v = ComplexMatrix::identity(n);
  jacobi_diagonalize(a, &v);

  const auto order = ascending_order(a);
  EigenSystem out{std::vector<double>(n), ComplexMatrix(n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t row = 0; row < n; ++row) out.vectors(row, k) = v(row, order[k]);
  }

  std::size_t start = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    if (k == n || out.values[k] - out.values[k - 1] > kDegeneracyGap) {
      if (k - start > 1) orthonormalize_columns(out.vectors, start, k);
      start = k;
    }
  }
  for (std::size_t k = 0; k < n; ++k) canonicalize_phase(out.vectors, k);
  return out;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h) {
  require_hermitian(h, "hermitian_eigenvalues");
  ComplexMatrix a = h;
  jacobi_diagonalize(a, nullptr);
  std::vector<double> values(a.dim());
  for (std::size_t k = 0; k < a.dim(); ++k) values[k] = a(k, k).real();
  std::sort(values.begin(), values.end());
  return values;
}

double trace_norm(const ComplexMatrix& a) {
  double sum = 0.0;
  for (double lambda : hermitian_eigenvalues(a)) sum += std::abs(lambda);
  return sum;
}

ComplexMatrix partial_trace(const ComplexMatrix& rho_ab, Subsystem keep) {
  if (rho_ab.dim() != 4) {
    throw InvalidArgument("partial_trace: operator must be 4x4");
  }
  ComplexMatrix out(2);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      Complex sum = 0.0;
      for (std::size_t k = 0; k < 2; ++k) {
        sum += keep == Subsystem::B ? rho_ab(2 * k + i, 2 * k + j) : rho_ab(2 * i + k, 2 * j + k);
      }
      out(i, j) = sum;
    }
  }
  return out;
}

ComplexMatrix pauli_x() { return ComplexMatrix(2, {0.0, 1.0, 1.0, 0.0}); }
ComplexMatrix pauli_y() {
  return ComplexMatrix(2, {0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0});
}
ComplexMatrix pauli_z() { return ComplexMatrix(2, {1.0, 0.0, 0.0, -1.0}); }

std::vector<Complex> apply(const ComplexMatrix& m, std::span<const Complex> v) {
  if (v.size() != m.dim()) {
    throw InvalidArgument("apply: vector length does not match matrix dimension");
  }
  std::vector<Complex> out(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (std::size_t j = 0; j < m.dim(); ++j) out[i] += m(i, j) * v[j];
  }
  return out;
}

Complex inner(std::span<const Complex> u, std::span<const Complex> v) {
  if (u.size() != v.size()) {
    throw InvalidArgument("inner: vector lengths differ");
  }
  Complex sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) sum += std::conj(u[i]) * v[i];
  return sum;
}

std::vector<Complex> kron(std::span<const Complex> a, std::span<const Complex> b) {
  std::vector<Complex> out;
  out.reserve(a.size() * b.size());
  for (const Complex& x : a) {
    for (const Complex& y : b) out.push_back(x * y);
  }
  return out;
}

}  // namespace npovm::linalg
