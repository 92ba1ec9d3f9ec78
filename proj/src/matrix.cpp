#include "mnms/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mnms {

ComplexMatrix::ComplexMatrix(std::size_t dim, std::initializer_list<Complex> entries)
    : dim_(dim), a_(entries) {
  if (a_.size() != dim * dim) {
    throw std::invalid_argument("ComplexMatrix: entry count does not match dimension");
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::pauli(int axis) {
  switch (axis) {
    case 0: return ComplexMatrix(2, {0.0, 1.0, 1.0, 0.0});
    case 1: return ComplexMatrix(2, {0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0});
    case 2: return ComplexMatrix(2, {1.0, 0.0, 0.0, -1.0});
    default: throw std::invalid_argument("pauli: axis must be 0, 1 or 2");
  }
}

Complex ComplexMatrix::trace() const {
  Complex t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

double ComplexMatrix::hermiticity_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = i; j < dim_; ++j)
      worst = std::max(worst, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  return worst;
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix& other) const {
  if (dim_ != other.dim_) throw std::invalid_argument("max_abs_diff: dimension mismatch");
  double worst = 0.0;
  for (std::size_t k = 0; k < a_.size(); ++k) worst = std::max(worst, std::abs(a_[k] - other.a_[k]));
  return worst;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const Complex& z : a_) s += std::norm(z);
  return std::sqrt(s);
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  if (dim_ != rhs.dim_) throw std::invalid_argument("matrix add: dimension mismatch");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += rhs.a_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
  if (dim_ != rhs.dim_) throw std::invalid_argument("matrix subtract: dimension mismatch");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= rhs.a_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
  for (Complex& z : a_) z *= scale;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  if (lhs.dim_ != rhs.dim_) throw std::invalid_argument("matrix multiply: dimension mismatch");
  const std::size_t n = lhs.dim_;
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const Complex lik = lhs(i, k);
      if (lik == Complex{}) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += lik * rhs(k, j);
    }
  }
  return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t n = a.dim() * b.dim();
  if (n > kMaxDim) throw std::length_error("kron: result dimension exceeds 256");
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex{}) continue;
      for (std::size_t k = 0; k < b.dim(); ++k)
        for (std::size_t l = 0; l < b.dim(); ++l)
          out(i * b.dim() + k, j * b.dim() + l) = aij * b(k, l);
    }
  return out;
}

ComplexMatrix outer(std::span<const Complex> v) {
  ComplexMatrix m(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = v[i] * std::conj(v[j]);
  return m;
}

namespace {

double off_diagonal_norm(const ComplexMatrix& h) {
  double s = 0.0;
  for (std::size_t i = 0; i < h.dim(); ++i)
    for (std::size_t j = 0; j < h.dim(); ++j)
      if (i != j) s += std::norm(h(i, j));
  return std::sqrt(s);
}

// Cyclic Jacobi for Hermitian matrices. Each pivot is phased real first,
// then removed with a real Givens rotation; V accumulates the unitary.
HermEigenSystem jacobi(ComplexMatrix h, bool want_vectors) {
  const std::size_t n = h.dim();
  ComplexMatrix v = want_vectors ? ComplexMatrix::identity(n) : ComplexMatrix();
  constexpr double kOffTol = 1e-13;
  constexpr int kMaxSweeps = 64;

  for (int sweep = 0; sweep < kMaxSweeps && off_diagonal_norm(h) >= kOffTol; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double beta = std::abs(h(p, q));
        if (beta < 1e-300) continue;

        // Phase column q so the pivot becomes real positive.
        const Complex phase = std::conj(h(p, q)) / beta;
        for (std::size_t k = 0; k < n; ++k) {
          h(k, q) *= phase;
          h(q, k) *= std::conj(phase);
        }
        if (want_vectors)
          for (std::size_t k = 0; k < n; ++k) v(k, q) *= phase;

        const double tau = (h(q, q).real() - h(p, p).real()) / (2.0 * beta);
        const double t =
            (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          const Complex hp = h(k, p), hq = h(k, q);
          h(k, p) = c * hp - s * hq;
          h(k, q) = s * hp + c * hq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex hp = h(p, k), hq = h(q, k);
          h(p, k) = c * hp - s * hq;
          h(q, k) = s * hp + c * hq;
        }
        if (want_vectors) {
          for (std::size_t k = 0; k < n; ++k) {
            const Complex vp = v(k, p), vq = v(k, q);
            v(k, p) = c * vp - s * vq;
            v(k, q) = s * vp + c * vq;
          }
        }
        h(p, q) = h(q, p) = 0.0;
      }
    }
  }

  std::vector<double> vals(n);
  for (std::size_t i = 0; i < n; ++i) vals[i] = h(i, i).real();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return vals[a] > vals[b]; });

  HermEigenSystem out;
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.values[i] = vals[order[i]];
  if (want_vectors) {
    out.vectors = ComplexMatrix(n);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) out.vectors(k, j) = v(k, order[j]);
  }
  return out;
}

ComplexMatrix symmetrized(const ComplexMatrix& m, double herm_tol) {
  if (m.hermiticity_defect() > herm_tol)
    throw std::invalid_argument("herm_eigvals: input is not Hermitian within tolerance");
  ComplexMatrix h(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j)
      h(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
  return h;
}

}  // namespace

std::vector<double> herm_eigvals(const ComplexMatrix& m, double herm_tol) {
  return jacobi(symmetrized(m, herm_tol), false).values;
}

HermEigenSystem herm_eig(const ComplexMatrix& m, double herm_tol) {
  return jacobi(symmetrized(m, herm_tol), true);
}

bool is_psd(const ComplexMatrix& m, double tol) {
  const std::vector<double> vals = herm_eigvals(m);
  return vals.empty() || vals.back() >= -tol;
}

}  // namespace mnms
