#include "unigen/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "unigen/error.hpp"

namespace unigen::linalg {

namespace {

void require_dim(std::size_t dim) {
  if (dim < 2) {
    throw InvalidDimension("matrix dimension must be >= 2, got " + std::to_string(dim));
  }
}

void require_same(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw InvalidDimension(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                           " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim) {
  require_dim(dim);
}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), entries_(std::move(entries)) {
  require_dim(dim);
  if (entries_.size() != dim * dim) {
    throw InvalidDimension("matrix needs " + std::to_string(dim * dim) + " entries, got " +
                           std::to_string(entries_.size()));
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> diag) {
  ComplexMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same(dim_, other.dim_, "matrix sum");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
  for (auto& z : entries_) z *= scale;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) {
  lhs += rhs;
  return lhs;
}

ComplexMatrix operator-(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  ComplexMatrix out = lhs;
  out += -1.0 * rhs;
  return out;
}

ComplexMatrix operator*(Complex scale, ComplexMatrix m) {
  m *= scale;
  return m;
}

StateVector::StateVector(std::vector<Complex> amplitudes) : amplitudes_(std::move(amplitudes)) {
  require_dim(amplitudes_.size());
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
  require_dim(dim);
  if (index >= dim) {
    throw InvalidDimension("basis index " + std::to_string(index) + " out of range");
  }
  std::vector<Complex> amps(dim);
  amps[index] = 1.0;
  return StateVector(std::move(amps));
}

double StateVector::norm() const noexcept {
  double sum = 0.0;
  for (const auto& a : amplitudes_) sum += std::norm(a);
  return std::sqrt(sum);
}

StateVector& StateVector::normalize() {
  const double n = norm();
  if (n == 0.0) throw ContractViolation("cannot normalize the zero vector");
  for (auto& a : amplitudes_) a /= n;
  return *this;
}

std::vector<ComplexMatrix> gell_mann_generators(std::size_t dim) {
  require_dim(dim);
  std::vector<ComplexMatrix> out;
  out.reserve(generator_count(dim));
  const Complex i_unit{0.0, 1.0};

  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t k = j + 1; k < dim; ++k) {
      ComplexMatrix m(dim);
      m(j, k) = 1.0;
      m(k, j) = 1.0;
      out.push_back(std::move(m));
    }
  }
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t k = j + 1; k < dim; ++k) {
      ComplexMatrix m(dim);
      m(j, k) = -i_unit;
      m(k, j) = i_unit;
      out.push_back(std::move(m));
    }
  }
  for (std::size_t l = 1; l < dim; ++l) {
    ComplexMatrix m(dim);
    const double scale = std::sqrt(2.0 / static_cast<double>(l * (l + 1)));
    for (std::size_t m_idx = 0; m_idx < l; ++m_idx) m(m_idx, m_idx) = scale;
    m(l, l) = -scale * static_cast<double>(l);
    out.push_back(std::move(m));
  }
  return out;
}

ComplexMatrix generator_sum(const ParameterVector& p, std::span<const ComplexMatrix> generators) {
  if (generators.empty()) throw InvalidDimension("empty generator basis");
  require_same(p.size(), generators.size(), "parameter vector");
  ComplexMatrix h(generators.front().dim());
  for (std::size_t k = 0; k < p.size(); ++k) {
    const auto src = generators[k].entries();
    for (std::size_t r = 0; r < h.dim(); ++r) {
      for (std::size_t c = 0; c < h.dim(); ++c) h(r, c) += p[k] * src[r * h.dim() + c];
    }
  }
  return h;
}

ComplexMatrix unitary_from_params(const ParameterVector& p, std::span<const ComplexMatrix> generators) {
  const ComplexMatrix h = generator_sum(p, generators);
  const EigenDecomposition eig = hermitian_eig(h);
  const std::size_t d = h.dim();
  const ComplexMatrix& v = eig.eigenvectors;

  ComplexMatrix u(d);
  for (std::size_t m = 0; m < d; ++m) {
    const Complex phase = std::polar(1.0, -eig.eigenvalues[m]);
    for (std::size_t r = 0; r < d; ++r) {
      const Complex vr = v(r, m) * phase;
      for (std::size_t c = 0; c < d; ++c) u(r, c) += vr * std::conj(v(c, m));
    }
  }
  return u;
}

ComplexMatrix unitary_from_params(const ParameterVector& p, std::size_t dim) {
  const auto generators = gell_mann_generators(dim);
  return unitary_from_params(p, generators);
}

ComplexMatrix su2_closed_form(const ParameterVector& p) {
  if (p.size() != 3) {
    throw InvalidDimension("su2_closed_form needs 3 parameters, got " + std::to_string(p.size()));
  }
  const double theta = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
  if (theta == 0.0) return ComplexMatrix::identity(2);

  const double c = std::cos(theta);
  const double s = std::sin(theta) / theta;  // folds the 1/|p| normalisation in
  const double nx = s * p[0];
  const double ny = s * p[1];
  const double nz = s * p[2];
  // cos I - i sin (n.sigma)
  return ComplexMatrix(2, {Complex{c, -nz}, Complex{-ny, -nx},
                           Complex{ny, -nx}, Complex{c, nz}});
}

ComplexMatrix dagger(const ComplexMatrix& u) {
  ComplexMatrix out(u.dim());
  for (std::size_t r = 0; r < u.dim(); ++r) {
    for (std::size_t c = 0; c < u.dim(); ++c) out(c, r) = std::conj(u(r, c));
  }
  return out;
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same(a.dim(), b.dim(), "matmul");
  const std::size_t d = a.dim();
  ComplexMatrix out(d);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t k = 0; k < d; ++k) {
      const Complex ark = a(r, k);
      for (std::size_t c = 0; c < d; ++c) out(r, c) += ark * b(k, c);
    }
  }
  return out;
}

StateVector apply(const ComplexMatrix& u, const StateVector& s) {
  require_same(u.dim(), s.dim(), "apply");
  std::vector<Complex> out(s.dim());
  for (std::size_t r = 0; r < u.dim(); ++r) {
    Complex acc = 0.0;
    for (std::size_t c = 0; c < u.dim(); ++c) acc += u(r, c) * s[c];
    out[r] = acc;
  }
  return StateVector(std::move(out));
}

Complex inner(const StateVector& a, const StateVector& b) {
  require_same(a.dim(), b.dim(), "inner product");
  Complex acc = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

Complex trace(const ComplexMatrix& m) {
  Complex acc = 0.0;
  for (std::size_t i = 0; i < m.dim(); ++i) acc += m(i, i);
  return acc;
}

Complex determinant2(const ComplexMatrix& m) {
  if (m.dim() != 2) throw InvalidDimension("determinant2 needs a 2x2 matrix");
  return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
}

double fidelity(const StateVector& a, const StateVector& b) {
  return std::norm(inner(a, b));
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same(a.dim(), b.dim(), "max_abs_diff");
  double worst = 0.0;
  const auto ea = a.entries();
  const auto eb = b.entries();
  for (std::size_t i = 0; i < ea.size(); ++i) worst = std::max(worst, std::abs(ea[i] - eb[i]));
  return worst;
}

double unitarity_defect(const ComplexMatrix& u) {
  return max_abs_diff(matmul(dagger(u), u), ComplexMatrix::identity(u.dim()));
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  for (std::size_t r = 0; r < m.dim(); ++r) {
    for (std::size_t c = r; c < m.dim(); ++c) {
      if (std::abs(m(r, c) - std::conj(m(c, r))) > tol) return false;
    }
  }
  return true;
}

}  // namespace unigen::linalg
