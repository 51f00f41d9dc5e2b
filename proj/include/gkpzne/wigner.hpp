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

#include <iosfwd>
#include <optional>
#include <vector>

#include "gkpzne/fock.hpp"

namespace gkpzne {

/// Uniform samples min, ..., max (inclusive) along one phase-space axis; a
/// single point requires min == max.
struct Axis {
  double min = -6.0;
  double max = 6.0;
  int points = 121;

  std::vector<double> samples() const;
  double spacing() const;
};

/// W(q, p) sampled on a rectangular grid; values(i, j) sits at
/// (q_axis[i], p_axis[j]).
struct WignerGrid {
  std::vector<double> q_axis;
  std::vector<double> p_axis;
  Eigen::MatrixXd values;
};

/// Displaced-parity Wigner function W(q,p) = (1/pi) Tr[rho D(a) P D(a)^dagger],
/// a = (q + ip)/sqrt(2), evaluated with the exact (untruncated) matrix elements
/// of the displaced parity through the Laguerre recurrence.
///
/// rho must be Hermitian; when expected_weight is given its trace must match
/// it within 1e-6.
WignerGrid wigner(const FockMatrix& rho, const Axis& q, const Axis& p,
                  std::optional<double> expected_weight = std::nullopt);

/// Trapezoidal integral of W over the grid.
double integrate(const WignerGrid& grid);

/// CSV with header `q,p,w`; rows iterate p fastest within each q.
void write_csv(std::ostream& out, const WignerGrid& grid);

}  // namespace gkpzne
