#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace mnms {

using Complex = std::complex<double>;

// Library-wide tolerances. Constructed states are exact to rounding;
// sampled states accumulate O(1e-14) error, so 1e-10 leaves a wide margin.
inline constexpr double kHermTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;

// Hard cap on matrix dimension (8 qubits). Everything here is small and
// dense; there is no sparse path.
inline constexpr std::size_t kMaxDim = 256;

/// Dense complex matrix, row-major storage.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t dim) : dim_(dim), a_(dim * dim) {}
  ComplexMatrix(std::size_t dim, std::initializer_list<Complex> entries);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix pauli(int axis);  // 0,1,2 -> sigma_x, sigma_y, sigma_z

  std::size_t dim() const { return dim_; }
  Complex& operator()(std::size_t i, std::size_t j) { return a_[i * dim_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }
  std::span<const Complex> entries() const { return a_; }
  std::span<Complex> entries() { return a_; }

  Complex trace() const;
  ComplexMatrix adjoint() const;
  double hermiticity_defect() const;  // max entrywise |m - m^dagger|
  double max_abs_diff(const ComplexMatrix& other) const;
  double frobenius_norm() const;

  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(Complex scale);
  friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
  friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
  friend ComplexMatrix operator*(Complex scale, ComplexMatrix m) { return m *= scale; }
  friend ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);

 private:
  std::size_t dim_ = 0;
  std::vector<Complex> a_;
};

/// Kronecker product. Throws std::length_error if the result would exceed
/// kMaxDim.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Projector |v><v| of a (not necessarily normalized) state vector.
ComplexMatrix outer(std::span<const Complex> v);

/// Eigenvalues of a Hermitian matrix, sorted descending. Uses cyclic Jacobi
/// rotations; all matrices here are tiny, so determinism beats speed.
/// Throws std::invalid_argument if the hermiticity defect exceeds herm_tol.
std::vector<double> herm_eigvals(const ComplexMatrix& m, double herm_tol = kHermTol);

struct HermEigenSystem {
  std::vector<double> values;  // descending
  ComplexMatrix vectors;       // column k is the eigenvector of values[k]
};
HermEigenSystem herm_eig(const ComplexMatrix& m, double herm_tol = kHermTol);

/// True iff every eigenvalue of the Hermitian matrix m is >= -tol.
bool is_psd(const ComplexMatrix& m, double tol = kPsdTol);

}  // namespace mnms
