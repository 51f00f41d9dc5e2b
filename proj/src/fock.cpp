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

#include "gkpzne/fock.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gkpzne {

namespace {

void check_dim(int dim) {
  if (dim < 2 || dim > kMaxDim) {
    throw Error(ErrorKind::InvalidDimension,
                "Fock cutoff must lie in [2, " + std::to_string(kMaxDim) +
                    "], got " + std::to_string(dim));
  }
}

Eigen::SelfAdjointEigenSolver<CMatrix> hermitian_eigen(const CMatrix& h,
                                                       const char* where) {
  if (h.rows() != h.cols()) {
    throw Error(ErrorKind::InvalidDimension,
                std::string(where) + ": matrix is not square");
  }
  const double defect = hermitian_defect(h);
  if (defect > kHermitianTol) {
    throw Error(ErrorKind::NotHermitian,
                std::string(where) + ": max |H - H^dagger| = " +
                    std::to_string(defect));
  }
  const CMatrix sym = 0.5 * (h + h.adjoint());
  return Eigen::SelfAdjointEigenSolver<CMatrix>(sym);
}

}  // namespace

FockMatrix::FockMatrix(CMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    throw Error(ErrorKind::InvalidDimension, "FockMatrix must be square");
  }
  check_dim(static_cast<int>(entries_.rows()));
}

FockMatrix FockMatrix::identity(int dim) {
  check_dim(dim);
  return FockMatrix(CMatrix::Identity(dim, dim));
}

FockMatrix FockMatrix::zero(int dim) {
  check_dim(dim);
  return FockMatrix(CMatrix::Zero(dim, dim));
}

FockMatrix FockMatrix::outer(const CVector& psi, const CVector& phi) {
  if (psi.size() != phi.size()) {
    throw Error(ErrorKind::DimensionMismatch, "outer product of unequal vectors");
  }
  return FockMatrix(psi * phi.adjoint());
}

FockMatrix FockMatrix::adjoint() const { return FockMatrix(entries_.adjoint()); }

double FockMatrix::max_abs_diff(const FockMatrix& other) const {
  require_same_dim(dim(), other.dim(), "max_abs_diff");
  return max_abs(entries_ - other.entries_);
}

double FockMatrix::hermitian_defect() const {
  return gkpzne::hermitian_defect(entries_);
}

FockMatrix operator+(const FockMatrix& a, const FockMatrix& b) {
  require_same_dim(a.dim(), b.dim(), "operator+");
  return FockMatrix(a.entries_ + b.entries_);
}

FockMatrix operator-(const FockMatrix& a, const FockMatrix& b) {
  require_same_dim(a.dim(), b.dim(), "operator-");
  return FockMatrix(a.entries_ - b.entries_);
}

FockMatrix operator*(const FockMatrix& a, const FockMatrix& b) {
  require_same_dim(a.dim(), b.dim(), "operator*");
  return FockMatrix(a.entries_ * b.entries_);
}

FockMatrix operator*(cplx s, const FockMatrix& a) {
  return FockMatrix(s * a.entries_);
}

void require_same_dim(int a, int b, const char* where) {
  if (a != b) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(where) + ": cutoff " + std::to_string(a) +
                    " vs " + std::to_string(b));
  }
}

FockMatrix annihilation(int dim) {
  check_dim(dim);
  CMatrix a = CMatrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return FockMatrix(std::move(a));
}

FockMatrix creation(int dim) { return annihilation(dim).adjoint(); }

FockMatrix number_operator(int dim) {
  check_dim(dim);
  CMatrix n = CMatrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) n(k, k) = static_cast<double>(k);
  return FockMatrix(std::move(n));
}

FockMatrix parity_operator(int dim) {
  check_dim(dim);
  CMatrix p = CMatrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) p(k, k) = (k % 2 == 0) ? 1.0 : -1.0;
  return FockMatrix(std::move(p));
}

CVector fock_state(int n, int dim) {
  check_dim(dim);
  if (n < 0 || n >= dim) {
    throw Error(ErrorKind::Parameter, "Fock level outside the truncation");
  }
  CVector v = CVector::Zero(dim);
  v(n) = 1.0;
  return v;
}

FockMatrix displacement(cplx alpha, int dim) {
  check_dim(dim);
  const CMatrix a = annihilation(dim).matrix();
  const CMatrix generator = alpha * a.adjoint() - std::conj(alpha) * a;
  // generator is anti-Hermitian; i * generator is Hermitian.
  const CMatrix herm = cplx(0.0, 1.0) * generator;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (herm + herm.adjoint()));
  const Eigen::VectorXd& lambda = es.eigenvalues();
  CVector phases(dim);
  for (int k = 0; k < dim; ++k) phases(k) = std::polar(1.0, -lambda(k));
  const CMatrix& u = es.eigenvectors();
  return FockMatrix(u * phases.asDiagonal() * u.adjoint());
}

int coherent_cutoff(double abs_alpha) {
  return static_cast<int>(
      std::ceil(abs_alpha * abs_alpha + 6.0 * abs_alpha + 10.0));
}

CVector coherent_components(cplx alpha, int dim) {
  if (dim < 1) throw Error(ErrorKind::InvalidDimension, "empty coherent state");
  CVector v = CVector::Zero(dim);
  const double r = std::abs(alpha);
  if (r == 0.0) {
    v(0) = 1.0;
    return v;
  }
  const double theta = std::arg(alpha);
  const double log_r = std::log(r);
  for (int n = 0; n < dim; ++n) {
    const double log_amp =
        -0.5 * r * r + n * log_r - 0.5 * std::lgamma(n + 1.0);
    if (log_amp < -745.0) continue;
    v(n) = std::polar(std::exp(log_amp), n * theta);
  }
  return v;
}

CVector coherent_state(cplx alpha, int dim) {
  check_dim(dim);
  if (coherent_cutoff(std::abs(alpha)) > dim) {
    throw Error(ErrorKind::CutoffTooSmall,
                "coherent amplitude " + std::to_string(std::abs(alpha)) +
                    " needs cutoff " +
                    std::to_string(coherent_cutoff(std::abs(alpha))) +
                    ", have " + std::to_string(dim));
  }
  return coherent_components(alpha, dim);
}

namespace {

CMatrix inv_sqrt_from_spectrum(const Eigen::SelfAdjointEigenSolver<CMatrix>& es,
                               double epsilon) {
  const Eigen::VectorXd& lambda = es.eigenvalues();
  const double scale = lambda.cwiseAbs().maxCoeff();
  const double lambda_max = lambda.maxCoeff();
  if (lambda.minCoeff() < -kHermitianTol * std::max(scale, 1e-300)) {
    throw Error(ErrorKind::NotPsd, "psd_inv_sqrt: eigenvalue " +
                                       std::to_string(lambda.minCoeff()));
  }
  const Eigen::Index n = lambda.size();
  Eigen::VectorXd f(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double l = std::max(lambda(k), 0.0);
    if (epsilon > 0.0) {
      f(k) = 1.0 / std::sqrt(l + epsilon);
    } else {
      f(k) = (lambda_max > 0.0 && l > kSpectralFloor * lambda_max)
                 ? 1.0 / std::sqrt(l)
                 : 0.0;
    }
  }
  const CMatrix& u = es.eigenvectors();
  return u * f.asDiagonal() * u.adjoint();
}

}  // namespace

CMatrix psd_inv_sqrt(const CMatrix& h, double epsilon) {
  if (!(epsilon >= 0.0)) {
    throw Error(ErrorKind::Parameter, "psd_inv_sqrt: epsilon must be >= 0");
  }
  return inv_sqrt_from_spectrum(hermitian_eigen(h, "psd_inv_sqrt"), epsilon);
}

CMatrix psd_inv_sqrt_relative(const CMatrix& h, double relative_epsilon,
                              double* lambda_max) {
  if (!(relative_epsilon >= 0.0)) {
    throw Error(ErrorKind::Parameter, "psd_inv_sqrt: epsilon must be >= 0");
  }
  const auto es = hermitian_eigen(h, "psd_inv_sqrt");
  const double top = std::max(es.eigenvalues().maxCoeff(), 0.0);
  if (lambda_max) *lambda_max = top;
  return inv_sqrt_from_spectrum(es, relative_epsilon * top);
}

FockMatrix psd_inv_sqrt(const FockMatrix& h, double epsilon) {
  return FockMatrix(psd_inv_sqrt(h.matrix(), epsilon));
}

CMatrix support_projector(const CMatrix& h) {
  const auto es = hermitian_eigen(h, "support_projector");
  const Eigen::VectorXd& lambda = es.eigenvalues();
  const double lambda_max = lambda.maxCoeff();
  Eigen::VectorXd keep(lambda.size());
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    keep(k) = (lambda_max > 0.0 && lambda(k) > kSpectralFloor * lambda_max)
                  ? 1.0
                  : 0.0;
  }
  const CMatrix& u = es.eigenvectors();
  return u * keep.asDiagonal() * u.adjoint();
}

double max_eigenvalue(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (h + h.adjoint()),
                                           Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

double min_eigenvalue(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (h + h.adjoint()),
                                           Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool is_psd_within(const CMatrix& h, double tol) {
  const CMatrix shifted =
      0.5 * (h + h.adjoint()) +
      tol * CMatrix::Identity(h.rows(), h.cols());
  Eigen::LLT<CMatrix> llt(shifted);
  return llt.info() == Eigen::Success;
}

double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermitian_defect(const CMatrix& m) {
  return max_abs(m - m.adjoint());
}

}  // namespace gkpzne
