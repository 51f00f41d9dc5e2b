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

// Finite-energy square-lattice GKP qubit built from a Gaussian-weighted sum of
// coherent states, Löwdin-orthonormalised and calibrated to a target
// codespace-mean photon number.

#include <optional>
#include <utility>

#include "gkpzne/fock.hpp"

namespace gkpzne {

inline constexpr int kLogicalDim = 2;
/// Lattice terms with envelope weight below this are dropped.
inline constexpr double kDefaultLatticeTol = 1e-12;
/// Largest tolerated fraction of a codeword's squared norm lying above the
/// Fock cutoff before construction is refused.
inline constexpr double kMaxTruncatedWeight = 1e-3;

struct CodeOptions {
  double lattice_tol = kDefaultLatticeTol;
  double max_truncated_weight = kMaxTruncatedWeight;
};

struct RawCodeword {
  CVector state;  ///< unit norm on the truncated space
  int terms_retained = 0;
  /// 1 - |P_cut psi|^2 / |psi|^2 with the exact norm from coherent overlaps.
  double truncated_weight = 0.0;
};

/// Normalised |phi~_mu(delta)> projected onto the first `dim` Fock levels.
///
/// Sums exp[-(pi/2) delta^2 ((2 n1 + mu)^2 + n2^2)] exp[-i (pi/2)(2 n1 + mu) n2]
/// |alpha_{n1 n2}> over lattice centres alpha = sqrt(pi/2)[(2 n1 + mu) + i n2]
/// whose envelope weight is at least lattice_tol.
RawCodeword raw_codeword(double delta, int mu, int dim,
                         const CodeOptions& options = {});

/// G_{mu nu} = <raw_mu|raw_nu> for unit-norm inputs; Hermitian with unit
/// diagonal. Throws CodewordsCollinear when its smallest eigenvalue < 1e-12.
Eigen::Matrix2cd gram_matrix(const CVector& raw0, const CVector& raw1);

/// |phi_mu> = sum_nu |raw_nu> (G^{-1/2})_{nu mu}.
std::pair<CVector, CVector> lowdin_orthonormalize(const CVector& raw0,
                                                  const CVector& raw1,
                                                  const Eigen::Matrix2cd& gram);

/// Tr(n P_L) / 2.
double mean_photon_of_projector(const FockMatrix& projector);

/// n_Delta = 1 / (exp(2 Delta^2) - 1).
double envelope_photon_number(double delta);
/// Inverse of envelope_photon_number: sqrt(ln(1 + 1/nbar) / 2).
double initial_delta_guess(double nbar);

/// Default Fock cutoff for a code of mean photon number nbar:
/// max(80, ceil(14 nbar + 40)), capped at kMaxDim.
int default_cutoff(double nbar);

class GkpCode {
 public:
  /// Builds the code at a fixed envelope width.
  static GkpCode build(double delta, int dim, const CodeOptions& options = {});

  double delta() const noexcept { return delta_; }
  /// Realised Tr(n P_L)/2.
  double nbar() const noexcept { return nbar_; }
  /// Calibration target; equals nbar() for codes built at fixed delta.
  double target_nbar() const noexcept { return target_nbar_; }
  int dim() const noexcept { return static_cast<int>(isometry_.rows()); }
  const CVector& phi0() const noexcept { return phi0_; }
  const CVector& phi1() const noexcept { return phi1_; }
  /// E = |phi_0><0| + |phi_1><1| as a dim x 2 matrix.
  const CMatrix& isometry() const noexcept { return isometry_; }
  /// P_L = E E^dagger
  const FockMatrix& projector() const noexcept { return projector_; }
  int lattice_terms_retained() const noexcept { return terms_; }
  double truncated_weight() const noexcept { return truncated_weight_; }

 private:
  GkpCode(double delta, double target, double nbar, CVector phi0, CVector phi1,
          int terms, double truncated_weight);

  friend GkpCode calibrate_code(double, std::optional<int>, const CodeOptions&);

  double delta_;
  double target_nbar_;
  double nbar_;
  CVector phi0_;
  CVector phi1_;
  CMatrix isometry_;
  FockMatrix projector_;
  int terms_;
  double truncated_weight_;
};

struct CodeSummary {
  double target_nbar = 0.0;
  double delta = 0.0;
  double realized_nbar = 0.0;
  int dim = 0;
  int lattice_terms_retained = 0;
  double truncated_weight = 0.0;
};

CodeSummary summarize(const GkpCode& code);

/// Finds delta with |nbar(delta) - target| <= 1e-6 max(1, target) by
/// bisection on [0.05, 1.4] (expanded once to [0.025, 1.5] if the target is
/// not bracketed). The first probe sits at initial_delta_guess(target).
GkpCode calibrate_code(double target_nbar, std::optional<int> dim_hint = {},
                       const CodeOptions& options = {});

}  // namespace gkpzne
