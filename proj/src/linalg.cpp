// Copyright 2026 The qreduce Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qreduce/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qreduce/error.hpp"

namespace qreduce {
namespace {

void require_dim(std::size_t dim) {
  if (dim == 0 || dim > kMaxDim) {
    throw DimensionError("dimension " + std::to_string(dim) + " outside [1, " +
                         std::to_string(kMaxDim) + "]");
  }
}

void require_same_dim(std::size_t a, std::size_t b, const char* op) {
  if (a != b) {
    throw DimensionError(std::string(op) + ": dimension mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// ComplexVector

ComplexVector::ComplexVector(std::size_t dim) : data_(dim) { require_dim(dim); }

ComplexVector::ComplexVector(std::vector<Complex> entries) : data_(std::move(entries)) {
  require_dim(data_.size());
}

ComplexVector::ComplexVector(std::initializer_list<Complex> entries) : data_(entries) {
  require_dim(data_.size());
}

ComplexVector ComplexVector::basis(std::size_t dim, std::size_t index) {
  ComplexVector v(dim);
  if (index >= dim) throw DimensionError("basis index out of range");
  v[index] = 1.0;
  return v;
}

double ComplexVector::norm() const {
  double sum = 0.0;
  for (const auto& c : data_) sum += std::norm(c);
  return std::sqrt(sum);
}

bool ComplexVector::is_unit(double tol) const { return std::abs(norm() - 1.0) <= tol; }

ComplexVector ComplexVector::normalized(double tol) const {
  const double n = norm();
  if (n <= tol) throw InvalidArgument("cannot normalize a vector of norm " + std::to_string(n));
  ComplexVector out = *this;
  out *= 1.0 / n;
  return out;
}

ComplexVector& ComplexVector::operator+=(const ComplexVector& other) {
  require_same_dim(dim(), other.dim(), "vector add");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexVector& ComplexVector::operator-=(const ComplexVector& other) {
  require_same_dim(dim(), other.dim(), "vector subtract");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexVector& ComplexVector::operator*=(Complex scale) {
  for (auto& c : data_) c *= scale;
  return *this;
}

ComplexVector operator+(ComplexVector a, const ComplexVector& b) { return a += b; }
ComplexVector operator-(ComplexVector a, const ComplexVector& b) { return a -= b; }
ComplexVector operator*(Complex scale, ComplexVector v) { return v *= scale; }

Complex inner(const ComplexVector& a, const ComplexVector& b) {
  require_same_dim(a.dim(), b.dim(), "inner");
  Complex sum = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) sum += std::conj(a[i]) * b[i];
  return sum;
}

// ---------------------------------------------------------------------------
// ComplexMatrix

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_() {
  require_dim(dim);
  data_.assign(dim * dim, Complex{});
}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> row_major)
    : dim_(dim), data_(std::move(row_major)) {
  require_dim(dim);
  if (data_.size() != dim * dim) {
    throw DimensionError("expected " + std::to_string(dim * dim) + " entries, got " +
                         std::to_string(data_.size()));
  }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : dim_(rows.size()) {
  require_dim(dim_);
  data_.reserve(dim_ * dim_);
  for (const auto& row : rows) {
    if (row.size() != dim_) throw DimensionError("matrix rows must form a square");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::initializer_list<double> values) {
  return diagonal(std::span<const double>(values.begin(), values.size()));
}

ComplexMatrix ComplexMatrix::outer(const ComplexVector& a, const ComplexVector& b) {
  require_same_dim(a.dim(), b.dim(), "outer");
  ComplexMatrix m(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < b.dim(); ++j) m(i, j) = a[i] * std::conj(b[j]);
  }
  return m;
}

Complex ComplexMatrix::trace() const {
  Complex sum = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) sum += (*this)(i, i);
  return sum;
}

double ComplexMatrix::norm_max() const {
  double best = 0.0;
  for (const auto& c : data_) best = std::max(best, std::abs(c));
  return best;
}

double ComplexMatrix::norm_frobenius() const {
  double sum = 0.0;
  for (const auto& c : data_) sum += std::norm(c);
  return std::sqrt(sum);
}

bool ComplexMatrix::is_hermitian(double tol) const {
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = i; j < dim_; ++j) {
      if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
    }
  }
  return true;
}

bool ComplexMatrix::is_projector(double tol) const {
  return is_hermitian(tol) && max_abs_diff(matmul(*this, *this), *this) <= tol;
}

bool ComplexMatrix::is_unitary(double tol) const {
  return max_abs_diff(matmul(adjoint(*this), *this), identity(dim_)) <= tol;
}

ComplexVector ComplexMatrix::apply(const ComplexVector& v) const {
  require_same_dim(dim_, v.dim(), "apply");
  ComplexVector out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    Complex sum = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) sum += (*this)(i, j) * v[j];
    out[i] = sum;
  }
  return out;
}

Complex ComplexMatrix::expectation(const ComplexVector& v) const { return inner(v, apply(v)); }

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_dim(dim_, other.dim_, "matrix add");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_dim(dim_, other.dim_, "matrix subtract");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
  for (auto& c : data_) c *= scale;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(Complex scale, ComplexMatrix m) { return m *= scale; }
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) { return matmul(a, b); }

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a.dim(), b.dim(), "max_abs_diff");
  double best = 0.0;
  const auto ea = a.entries();
  const auto eb = b.entries();
  for (std::size_t i = 0; i < ea.size(); ++i) best = std::max(best, std::abs(ea[i] - eb[i]));
  return best;
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a.dim(), b.dim(), "matmul");
  const std::size_t n = a.dim();
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

ComplexMatrix adjoint(const ComplexMatrix& a) {
  ComplexMatrix out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < a.dim(); ++j) out(j, i) = std::conj(a(i, j));
  }
  return out;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t na = a.dim();
  const std::size_t nb = b.dim();
  if (na * nb > kMaxDim) {
    throw DimensionError("tensor product dimension " + std::to_string(na * nb) +
                         " exceeds cap " + std::to_string(kMaxDim));
  }
  ComplexMatrix out(na * nb);
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < na; ++j) {
      const Complex aij = a(i, j);
      for (std::size_t k = 0; k < nb; ++k) {
        for (std::size_t l = 0; l < nb; ++l) out(i * nb + k, j * nb + l) = aij * b(k, l);
      }
    }
  }
  return out;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return matmul(a, b) - matmul(b, a);
}

std::size_t projector_rank(const ComplexMatrix& p) {
  return static_cast<std::size_t>(std::llround(p.trace().real()));
}

void fix_phase(ComplexVector& v, double tol) {
  for (std::size_t i = 0; i < v.dim(); ++i) {
    const double mod = std::abs(v[i]);
    if (mod > tol) {
      v *= std::conj(v[i]) / mod;
      v[i] = mod;
      return;
    }
  }
}

ComplexMatrix apply_spectral_function(const ComplexMatrix& a,
                                      const std::function<double(double)>& f, double tol) {
  const HermitianEigen eig = hermitian_eig(a, tol);
  ComplexMatrix out(a.dim());
  for (std::size_t i = 0; i < eig.eigenvalues.size(); ++i) {
    const double fi = f(eig.eigenvalues[i]);
    if (fi == 0.0) continue;
    out += fi * ComplexMatrix::outer(eig.eigenvectors[i], eig.eigenvectors[i]);
  }
  return out;
}

void require_orthonormal(std::span<const ComplexVector> vectors, double tol) {
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].dim() != vectors.front().dim()) {
      throw DimensionError("vectors of differing dimension");
    }
    if (!vectors[i].is_unit(tol)) {
      throw InvalidArgument("vector " + std::to_string(i) + " is not a unit vector");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(inner(vectors[j], vectors[i])) > tol) {
        throw InvalidArgument("vectors " + std::to_string(j) + " and " + std::to_string(i) +
                              " are not orthogonal");
      }
    }
  }
}

ComplexMatrix projector_from_vectors(std::span<const ComplexVector> vectors, double tol) {
  if (vectors.empty()) throw InvalidArgument("projector_from_vectors: empty family");
  require_orthonormal(vectors, tol);
  ComplexMatrix out(vectors.front().dim());
  for (const auto& v : vectors) out += ComplexMatrix::outer(v, v);
  return out;
}

namespace pauli {

ComplexMatrix identity() { return ComplexMatrix::identity(2); }
ComplexMatrix x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
ComplexMatrix y() { return {{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}}; }
ComplexMatrix z() { return {{1.0, 0.0}, {0.0, -1.0}}; }

}  // namespace pauli
}  // namespace qreduce
