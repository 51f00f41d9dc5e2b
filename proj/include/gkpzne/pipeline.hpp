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

// Encode, lose, recover and decode a single logical qubit; survival weight,
// leak-aware and conditional Pauli expectations; single-qubit PTM.

#include <optional>
#include <string_view>

#include <Eigen/Dense>

#include "gkpzne/channel.hpp"
#include "gkpzne/gkp_code.hpp"

namespace gkpzne {

using Block2 = Eigen::Matrix2cd;

/// Tolerance used when auditing weights and expectation values.
inline constexpr double kPhysicalTol = 1e-8;
/// Below this survival weight the conditional value is undefined.
inline constexpr double kMinWeight = 1e-12;

enum class Pauli { I = 0, X = 1, Y = 2, Z = 3 };

Block2 pauli_matrix(Pauli p);
const char* to_string(Pauli p);
/// Accepts I, X, Y, Z (case-insensitive).
std::optional<Pauli> parse_pauli(std::string_view label);

/// 2x2 logical density, possibly trace-deficient.
class LogicalDensity {
 public:
  /// Validates Hermiticity (1e-10), eigenvalues >= -1e-9, weight <= 1 + 1e-9.
  explicit LogicalDensity(const Block2& block);

  /// Named pure states: "0", "1", "+", "-", "+i", "-i"; "mixed" is I/2.
  static LogicalDensity from_label(std::string_view label);

  const Block2& block() const noexcept { return block_; }
  double weight() const noexcept { return weight_; }

  /// Copy with eigenvalues in (-1e-9, 0) set to zero, rescaled to the
  /// original weight. Meant for reporting; stored blocks stay raw.
  Block2 clipped_block() const;

 private:
  struct Trusted {};
  LogicalDensity(const Block2& block, Trusted);
  friend LogicalDensity run_pipeline(const LogicalDensity&, const GkpCode&,
                                     const KrausSet&, const KrausSet&);

  Block2 block_;
  double weight_;
};

struct Expectation {
  double leak = 0.0;
  std::optional<double> conditional;
  double weight = 0.0;
};

/// leak = Tr(O block), conditional = leak / weight when weight > 1e-12.
/// Throws PhysicalBounds when the weight leaves [0, 1] or |conditional|
/// exceeds 1 by more than 1e-8.
Expectation expectations(const LogicalDensity& rho, Pauli obs);
/// Same audit for externally computed (leak, weight) pairs.
Expectation make_expectation(double leak, double weight);

/// The pipeline's linear map on an arbitrary 2x2 operator, without
/// positivity checks.
Block2 propagate(const Block2& op, const GkpCode& code, const KrausSet& loss,
                 const KrausSet& recovery);

/// E^dagger R(N(E rho E^dagger)) E. Intermediates must be PSD within 1e-8.
LogicalDensity run_pipeline(const LogicalDensity& rho, const GkpCode& code,
                            const KrausSet& loss, const KrausSet& recovery);

/// chi_ij = Tr[sigma_i Lambda(sigma_j)] / 2.
struct Ptm {
  Eigen::Matrix4d chi = Eigen::Matrix4d::Identity();
  double eta = 1.0;
  double nbar = 0.0;
};

Ptm single_qubit_ptm(const GkpCode& code, const KrausSet& loss,
                     const KrausSet& recovery);
/// Lambda(rho) rebuilt from the PTM.
Block2 apply_ptm(const Ptm& ptm, const Block2& rho);

}  // namespace gkpzne
