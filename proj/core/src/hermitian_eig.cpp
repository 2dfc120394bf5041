#include <algorithm>
#include <cmath>
#include <numeric>

#include "unigen/error.hpp"
#include "unigen/linalg.hpp"

namespace unigen::linalg {

namespace {

constexpr double kHermitianTol = 1e-10;
constexpr double kOffDiagonalTol = 1e-14;
constexpr int kMaxSweeps = 100;

double off_diagonal_norm(const ComplexMatrix& a) {
  double sum = 0.0;
  for (std::size_t r = 0; r < a.dim(); ++r) {
    for (std::size_t c = 0; c < a.dim(); ++c) {
      if (r != c) sum += std::norm(a(r, c));
    }
  }
  return std::sqrt(sum);
}

double frobenius_norm(const ComplexMatrix& a) {
  double sum = 0.0;
  for (const auto& z : a.entries()) sum += std::norm(z);
  return std::sqrt(sum);
}

// Annihilates a(p, q) with the unitary W = diag(1, e^{-i phi}) R(theta)
// restricted to the (p, q) plane: A <- W^dagger A W, V <- V W.
void rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
  const Complex apq = a(p, q);
  const double r = std::abs(apq);
  if (r == 0.0) return;

  const Complex phase = apq / r;  // e^{i phi}
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double theta = 0.5 * std::atan2(2.0 * r, app - aqq);
  const double cs = std::cos(theta);
  const double sn = std::sin(theta);

  const Complex w00 = cs;
  const Complex w01 = -sn;
  const Complex w10 = std::conj(phase) * sn;
  const Complex w11 = std::conj(phase) * cs;

  const std::size_t d = a.dim();
  for (std::size_t k = 0; k < d; ++k) {
    const Complex akp = a(k, p);
    const Complex akq = a(k, q);
    a(k, p) = akp * w00 + akq * w10;
    a(k, q) = akp * w01 + akq * w11;
  }
  for (std::size_t k = 0; k < d; ++k) {
    const Complex apk = a(p, k);
    const Complex aqk = a(q, k);
    a(p, k) = std::conj(w00) * apk + std::conj(w10) * aqk;
    a(q, k) = std::conj(w01) * apk + std::conj(w11) * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();

  for (std::size_t k = 0; k < d; ++k) {
    const Complex vkp = v(k, p);
    const Complex vkq = v(k, q);
    v(k, p) = vkp * w00 + vkq * w10;
    v(k, q) = vkp * w01 + vkq * w11;
  }
}

}  // namespace

EigenDecomposition hermitian_eig(const ComplexMatrix& h) {
  if (h.dim() < 2) throw InvalidDimension("hermitian_eig needs dim >= 2");
  if (!is_hermitian(h, kHermitianTol)) {
    throw ContractViolation("hermitian_eig: input is not Hermitian within 1e-10");
  }

  const std::size_t d = h.dim();
  ComplexMatrix a = h;
  for (std::size_t i = 0; i < d; ++i) a(i, i) = a(i, i).real();
  ComplexMatrix v = ComplexMatrix::identity(d);

  const double threshold = kOffDiagonalTol * std::max(1.0, frobenius_norm(a));
  int sweeps = 0;
  while (off_diagonal_norm(a) > threshold) {
    if (sweeps == kMaxSweeps) {
      throw NumericFailure("hermitian_eig: no convergence after 100 Jacobi sweeps");
    }
    for (std::size_t p = 0; p + 1 < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) rotate(a, v, p, q);
    }
    ++sweeps;
  }

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a(x, x).real() < a(y, y).real();
  });

  EigenDecomposition out{std::vector<double>(d), ComplexMatrix(d), sweeps};
  for (std::size_t col = 0; col < d; ++col) {
    out.eigenvalues[col] = a(order[col], order[col]).real();
    for (std::size_t row = 0; row < d; ++row) out.eigenvectors(row, col) = v(row, order[col]);
  }
  return out;
}

}  // namespace unigen::linalg
