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

#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace qreduce {

using Complex = std::complex<double>;

/// Largest supported Hilbert-space dimension (six spin-1/2 sites).
inline constexpr std::size_t kMaxDim = 64;

/// Default absolute tolerance for every numerical predicate.
inline constexpr double kDefaultTol = 1e-9;

class ComplexVector {
 public:
  explicit ComplexVector(std::size_t dim);
  explicit ComplexVector(std::vector<Complex> entries);
  ComplexVector(std::initializer_list<Complex> entries);

  static ComplexVector basis(std::size_t dim, std::size_t index);

  std::size_t dim() const noexcept { return data_.size(); }
  Complex& operator[](std::size_t i) { return data_[i]; }
  const Complex& operator[](std::size_t i) const { return data_[i]; }
  std::span<const Complex> entries() const noexcept { return data_; }

  double norm() const;
  bool is_unit(double tol = kDefaultTol) const;
  /// Throws InvalidArgument for a vector of norm <= tol.
  ComplexVector normalized(double tol = kDefaultTol) const;

  ComplexVector& operator+=(const ComplexVector& other);
  ComplexVector& operator-=(const ComplexVector& other);
  ComplexVector& operator*=(Complex scale);

 private:
  std::vector<Complex> data_;
};

ComplexVector operator+(ComplexVector a, const ComplexVector& b);
ComplexVector operator-(ComplexVector a, const ComplexVector& b);
ComplexVector operator*(Complex scale, ComplexVector v);

/// <a|b>, antilinear in the first argument.
Complex inner(const ComplexVector& a, const ComplexVector& b);

/// Dense square complex matrix, row-major.
class ComplexMatrix {
 public:
  /// Zero matrix. Dimensions outside [1, kMaxDim] throw DimensionError.
  explicit ComplexMatrix(std::size_t dim);
  ComplexMatrix(std::size_t dim, std::vector<Complex> row_major);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const double> values);
  static ComplexMatrix diagonal(std::initializer_list<double> values);
  /// |a><b|
  static ComplexMatrix outer(const ComplexVector& a, const ComplexVector& b);

  std::size_t dim() const noexcept { return dim_; }
  Complex& operator()(std::size_t row, std::size_t col) { return data_[row * dim_ + col]; }
  const Complex& operator()(std::size_t row, std::size_t col) const {
    return data_[row * dim_ + col];
  }
  std::span<const Complex> entries() const noexcept { return data_; }

  Complex trace() const;
  double norm_max() const;
  double norm_frobenius() const;

  bool is_hermitian(double tol = kDefaultTol) const;
  /// M^2 = M = M^dagger within tol.
  bool is_projector(double tol = kDefaultTol) const;
  bool is_unitary(double tol = kDefaultTol) const;

  ComplexVector apply(const ComplexVector& v) const;
  /// <v|M|v>
  Complex expectation(const ComplexVector& v) const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scale);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t dim_;
  std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex scale, ComplexMatrix m);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

/// Largest entrywise modulus of a - b.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix adjoint(const ComplexMatrix& a);
/// Kronecker product; the left factor carries the slow index.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
/// ab - ba
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
/// Rank of an orthogonal projector, read off its trace.
std::size_t projector_rank(const ComplexMatrix& p);

struct HermitianEigen {
  std::vector<double> eigenvalues;          // descending
  std::vector<ComplexVector> eigenvectors;  // orthonormal, same order
};

/// Eigendecomposition by cyclic complex Jacobi rotations.
///
/// Eigenvalues come back in descending order; exact ties keep the order of
/// the diagonal they converged on, so a diagonal input yields the canonical
/// basis. The first entry of each eigenvector whose modulus exceeds tol is
/// made real and positive.
///
/// Throws NotHermitianError if !a.is_hermitian(tol) and ConvergenceError
/// when the off-diagonal norm is still above threshold after kJacobiMaxSweeps.
HermitianEigen hermitian_eig(const ComplexMatrix& a, double tol = kDefaultTol);

inline constexpr int kJacobiMaxSweeps = 100;
inline constexpr double kJacobiThreshold = 1e-12;

/// Multiplies v by a unit phase so its first entry above tol is real positive.
void fix_phase(ComplexVector& v, double tol = kDefaultTol);

/// f(A) = sum_i f(l_i) |v_i><v_i|.
ComplexMatrix apply_spectral_function(const ComplexMatrix& a,
                                      const std::function<double(double)>& f,
                                      double tol = kDefaultTol);

/// sum_i |v_i><v_i| for an orthonormal family; throws InvalidArgument otherwise.
ComplexMatrix projector_from_vectors(std::span<const ComplexVector> vectors,
                                     double tol = kDefaultTol);

/// Throws InvalidArgument unless the vectors are pairwise orthogonal unit
/// vectors of a common dimension.
void require_orthonormal(std::span<const ComplexVector> vectors, double tol = kDefaultTol);

namespace pauli {
ComplexMatrix identity();
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
}  // namespace pauli

}  // namespace qreduce
