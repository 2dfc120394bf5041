#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace unigen::linalg {

using Complex = std::complex<double>;

/// Dense square complex matrix, row-major, dim >= 2.
///
/// Values are immutable in practice: every operation below returns a new
/// matrix, so instances can be shared freely across threads.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t dim);
  ComplexMatrix(std::size_t dim, std::vector<Complex> entries);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const Complex> diag);

  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] Complex& operator()(std::size_t row, std::size_t col) noexcept {
    return entries_[row * dim_ + col];
  }
  [[nodiscard]] const Complex& operator()(std::size_t row, std::size_t col) const noexcept {
    return entries_[row * dim_ + col];
  }
  [[nodiscard]] std::span<const Complex> entries() const noexcept { return entries_; }

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scale);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<Complex> entries_;
};

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator-(const ComplexMatrix& lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(Complex scale, ComplexMatrix m);

/// Pure state in C^d.
class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(std::vector<Complex> amplitudes);

  /// Computational basis state |index> in dimension dim.
  static StateVector basis(std::size_t dim, std::size_t index);

  [[nodiscard]] std::size_t dim() const noexcept { return amplitudes_.size(); }
  [[nodiscard]] const Complex& operator[](std::size_t i) const noexcept { return amplitudes_[i]; }
  [[nodiscard]] Complex& operator[](std::size_t i) noexcept { return amplitudes_[i]; }
  [[nodiscard]] std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }

  [[nodiscard]] double norm() const noexcept;
  /// Rescales to unit norm. Throws ContractViolation for the zero vector.
  StateVector& normalize();

  friend bool operator==(const StateVector&, const StateVector&) = default;

 private:
  std::vector<Complex> amplitudes_;
};

/// Real coordinates p_k of a generator expansion, length d^2 - 1.
struct ParameterVector {
  std::vector<double> components;

  [[nodiscard]] std::size_t size() const noexcept { return components.size(); }
  [[nodiscard]] double operator[](std::size_t k) const noexcept { return components[k]; }
};

[[nodiscard]] constexpr std::size_t generator_count(std::size_t dim) noexcept {
  return dim * dim - 1;
}

/// Generalized Gell-Mann basis of su(d).
///
/// Ordering is fixed so that parameter vectors are portable: all symmetric
/// pairs (j<k) lexicographically, then all antisymmetric pairs
/// lexicographically, then the diagonal generators l = 1..d-1. For d = 2 this
/// is (sigma_x, sigma_y, sigma_z). Every element is Hermitian and traceless
/// with Tr(s_a s_b) = 2 delta_ab.
std::vector<ComplexMatrix> gell_mann_generators(std::size_t dim);

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // columns, matching eigenvalues
  int sweeps = 0;
};

/// Cyclic complex Jacobi eigensolver for small Hermitian matrices.
///
/// Throws ContractViolation if `h` is not Hermitian within 1e-10 and
/// NumericFailure if the off-diagonal norm does not drop below 1e-14 (scaled
/// by max(1, ||H||_F)) within 100 sweeps.
EigenDecomposition hermitian_eig(const ComplexMatrix& h);

/// H = sum_k p_k sigma_k over the Gell-Mann basis of `generators`.
ComplexMatrix generator_sum(const ParameterVector& p, std::span<const ComplexMatrix> generators);

/// exp(-i sum_k p_k sigma_k), via eigendecomposition of the Hermitian exponent.
ComplexMatrix unitary_from_params(const ParameterVector& p, std::size_t dim);
ComplexMatrix unitary_from_params(const ParameterVector& p, std::span<const ComplexMatrix> generators);

/// SU(2) closed form cos|p| I - i sin|p| (p/|p|).sigma. Requires p.size() == 3.
ComplexMatrix su2_closed_form(const ParameterVector& p);

ComplexMatrix dagger(const ComplexMatrix& u);
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
StateVector apply(const ComplexMatrix& u, const StateVector& s);

Complex inner(const StateVector& a, const StateVector& b);  // <a|b>
Complex trace(const ComplexMatrix& m);
Complex determinant2(const ComplexMatrix& m);

/// |<a|b>|^2. Throws InvalidDimension on mismatched dims.
double fidelity(const StateVector& a, const StateVector& b);

/// Largest absolute entry of a - b.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
/// max |U^dagger U - I|.
double unitarity_defect(const ComplexMatrix& u);
bool is_hermitian(const ComplexMatrix& m, double tol);

}  // namespace unigen::linalg
