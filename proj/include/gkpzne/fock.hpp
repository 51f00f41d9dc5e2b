// Copyright 2026 The gkpzne Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Dense linear algebra on a truncated Fock space.

#include <complex>

#include <Eigen/Dense>

#include "gkpzne/error.hpp"

namespace gkpzne {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Tolerance on max |H - H^dagger| entries for inputs declared Hermitian.
inline constexpr double kHermitianTol = 1e-10;
/// Eigenvalues below this fraction of the largest one count as zero.
inline constexpr double kSpectralFloor = 1e-12;
/// Largest supported Fock cutoff (dense eigendecomposition cost cap).
inline constexpr int kMaxDim = 1024;

/// Square complex matrix on the span of |0>, ..., |dim-1>.
///
/// Values are immutable once built; every binary operation checks that both
/// operands live on the same truncation.
class FockMatrix {
 public:
  explicit FockMatrix(CMatrix entries);

  static FockMatrix identity(int dim);
  static FockMatrix zero(int dim);
  /// |psi><phi|
  static FockMatrix outer(const CVector& psi, const CVector& phi);

  int dim() const noexcept { return static_cast<int>(entries_.rows()); }
  const CMatrix& matrix() const noexcept { return entries_; }
  cplx operator()(int row, int col) const { return entries_(row, col); }

  FockMatrix adjoint() const;
  cplx trace() const { return entries_.trace(); }
  /// max |A_ij - B_ij|
  double max_abs_diff(const FockMatrix& other) const;
  /// max |A_ij - conj(A_ji)|
  double hermitian_defect() const;

  friend FockMatrix operator+(const FockMatrix& a, const FockMatrix& b);
  friend FockMatrix operator-(const FockMatrix& a, const FockMatrix& b);
  friend FockMatrix operator*(const FockMatrix& a, const FockMatrix& b);
  friend FockMatrix operator*(cplx s, const FockMatrix& a);

 private:
  CMatrix entries_;
};

void require_same_dim(int a, int b, const char* where);

FockMatrix annihilation(int dim);
FockMatrix creation(int dim);
FockMatrix number_operator(int dim);
/// (-1)^n on the diagonal.
FockMatrix parity_operator(int dim);
CVector fock_state(int n, int dim);

/// exp(alpha a^dagger - conj(alpha) a) on the truncated space, computed by
/// diagonalising the Hermitian generator i(alpha a^dagger - conj(alpha) a).
FockMatrix displacement(cplx alpha, int dim);

/// Smallest cutoff that contains a coherent state of amplitude |alpha|.
int coherent_cutoff(double abs_alpha);

/// Fock components exp(-|alpha|^2/2) alpha^n / sqrt(n!) for n < dim.
/// Throws CutoffTooSmall when |alpha|^2 + 6|alpha| + 10 > dim.
CVector coherent_state(cplx alpha, int dim);

/// Same components without the tail rule; evaluated in log space so large
/// amplitudes underflow to zero instead of overflowing.
CVector coherent_components(cplx alpha, int dim);

/// (H + eps I)^{-1/2} for eps > 0, or the pseudo-inverse square root on the
/// support of H for eps == 0 (eigenvalues below kSpectralFloor * lambda_max
/// map to 0). H must be Hermitian and PSD within tolerance.
CMatrix psd_inv_sqrt(const CMatrix& h, double epsilon);
FockMatrix psd_inv_sqrt(const FockMatrix& h, double epsilon);

/// psd_inv_sqrt(h, relative_epsilon * lambda_max(h)) with a single
/// eigendecomposition; also reports lambda_max.
CMatrix psd_inv_sqrt_relative(const CMatrix& h, double relative_epsilon,
                              double* lambda_max = nullptr);

/// Orthogonal projector onto eigenvectors with eigenvalue above
/// kSpectralFloor * lambda_max.
CMatrix support_projector(const CMatrix& h);

/// Largest eigenvalue of a Hermitian matrix.
double max_eigenvalue(const CMatrix& h);
double min_eigenvalue(const CMatrix& h);

/// Cheap PSD test: Cholesky of H + tol I.
bool is_psd_within(const CMatrix& h, double tol);

double max_abs(const CMatrix& m);
double hermitian_defect(const CMatrix& m);

}  // namespace gkpzne
