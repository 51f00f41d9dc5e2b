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

// Pure-loss channel in Kraus form and the Petz (transpose) recovery map
// relative to a GKP codespace.

#include <cstddef>
#include <variant>
#include <vector>

#include "gkpzne/fock.hpp"
#include "gkpzne/gkp_code.hpp"

namespace gkpzne {

/// Regularisation of N_L^{-1/2}, relative to the largest eigenvalue of N_L.
inline constexpr double kDefaultPetzEpsilon = 1e-12;

enum class ChannelKind { Loss, Petz, Generic };

/// A single Kraus operator, stored in whichever layout matches its structure.
///
///  * shifted diagonal: K|n> = coeffs[n] |n - shift>   (loss operators)
///  * low rank:         K = left * right^dagger       (Petz operators, rank 2)
///  * dense
class KrausOperator {
 public:
  static KrausOperator shifted_diagonal(int shift, CVector coeffs);
  static KrausOperator low_rank(CMatrix left, CMatrix right);
  static KrausOperator dense(CMatrix entries);

  int dim() const noexcept { return dim_; }
  /// True when every stored coefficient is exactly zero.
  bool is_zero() const noexcept { return zero_; }
  CMatrix to_dense() const;

  /// K x for a dim x k block.
  CMatrix apply(const CMatrix& x) const;
  /// K^dagger x for a dim x k block.
  CMatrix apply_adjoint(const CMatrix& x) const;
  /// out += K rho K^dagger
  void add_sandwich(const CMatrix& rho, CMatrix& out) const;
  /// out += K^dagger x K
  void add_adjoint_sandwich(const CMatrix& x, CMatrix& out) const;
  /// out += K^dagger K
  void add_gram(CMatrix& out) const;

 private:
  struct ShiftedDiagonal {
    int shift;
    CVector coeffs;
  };
  struct LowRank {
    CMatrix left;
    CMatrix right;
  };
  using Rep = std::variant<ShiftedDiagonal, LowRank, CMatrix>;

  KrausOperator(Rep rep, int dim);

  Rep rep_;
  int dim_;
  bool zero_;
};

/// Ordered Kraus operators sharing one cutoff, plus channel metadata.
class KrausSet {
 public:
  KrausSet(ChannelKind kind, int dim, std::vector<KrausOperator> ops,
           double eta, double epsilon = 0.0);

  ChannelKind kind() const noexcept { return kind_; }
  int dim() const noexcept { return dim_; }
  double eta() const noexcept { return eta_; }
  /// x = -ln(eta)
  double loss_depth() const;
  double epsilon() const noexcept { return epsilon_; }
  std::size_t size() const noexcept { return ops_.size(); }
  const KrausOperator& operator[](std::size_t i) const { return ops_.at(i); }
  const std::vector<KrausOperator>& ops() const noexcept { return ops_; }

  /// Dense copy of operator i.
  FockMatrix op(std::size_t i) const;
  /// sum_k K_k^dagger K_k
  FockMatrix completeness_operator() const;
  /// max |I - sum_k K_k^dagger K_k|
  double completeness_defect() const;

  /// Set when every operator is left * right_k^dagger with one shared
  /// left factor (Petz sets): then sum_k K X K^dagger = left M left^dagger.
  bool has_shared_left() const noexcept { return shared_left_.size() > 0; }
  const CMatrix& shared_left() const noexcept { return shared_left_; }
  /// M = sum_k right_k^dagger X right_k; requires has_shared_left().
  CMatrix factored_image(const CMatrix& x) const;

 private:
  friend KrausSet petz_recovery(const KrausSet&, const GkpCode&, double);

  ChannelKind kind_;
  int dim_;
  std::vector<KrausOperator> ops_;
  double eta_;
  double epsilon_;
  CMatrix shared_left_;
  CMatrix right_stack_;  // [right_0 right_1 ...]
};

/// E_l = (gamma/eta)^{l/2} a^l / sqrt(l!) eta^{n/2}, gamma = 1 - eta, for
/// l = 0 .. dim-1. Completeness is exact on the truncated space.
KrausSet loss_kraus(double eta, int dim);
/// loss_kraus(exp(-x), dim)
KrausSet loss_kraus_from_depth(double x, int dim);

/// sum_k K rho K^dagger
FockMatrix apply_channel(const KrausSet& channel, const FockMatrix& rho);
/// sum_k K^dagger X K
FockMatrix apply_adjoint(const KrausSet& channel, const FockMatrix& x);

/// Same as apply_channel on a raw matrix; no checks beyond the dimension.
CMatrix apply_channel(const KrausSet& channel, const CMatrix& rho);

/// Petz recovery R_l = P_L E_l^dagger (N_L + eps lambda_max I)^{-1/2} with
/// N_L = N(P_L). epsilon == 0 selects the pseudo-inverse square root on the
/// support of N_L. Operators with identically zero E_l P_L are omitted.
KrausSet petz_recovery(const KrausSet& loss, const GkpCode& code,
                       double epsilon = kDefaultPetzEpsilon);

/// N_L = N(P_L) for a code.
FockMatrix noisy_codespace(const KrausSet& loss, const GkpCode& code);

}  // namespace gkpzne
