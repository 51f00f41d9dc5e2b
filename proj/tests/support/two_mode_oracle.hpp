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

// Brute-force two-mode reference: both modes encoded with the same code, each
// mode hit by its own loss and recovery, decoded with E (x) E.

#include <utility>
#include <vector>

#include <Eigen/Sparse>

#include "gkpzne/two_qubit.hpp"

namespace gkpzne::testing {

using SparseOp = Eigen::SparseMatrix<cplx>;

// K (x) I when `first` is set, I (x) K otherwise.
inline SparseOp embed(const CMatrix& k, bool first) {
  const Eigen::Index d = k.rows();
  std::vector<Eigen::Triplet<cplx>> t;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      if (k(i, j) == cplx(0.0)) continue;
      for (Eigen::Index s = 0; s < d; ++s) {
        if (first) {
          t.emplace_back(i * d + s, j * d + s, k(i, j));
        } else {
          t.emplace_back(s * d + i, s * d + j, k(i, j));
        }
      }
    }
  }
  SparseOp out(d * d, d * d);
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

inline CMatrix apply_on_mode(const KrausSet& set, const CMatrix& rho, bool first) {
  CMatrix out = CMatrix::Zero(rho.rows(), rho.cols());
  for (const auto& op : set.ops()) {
    if (op.is_zero()) continue;
    const SparseOp k = embed(op.to_dense(), first);
    const CMatrix left = k * rho;
    out += (k * left.adjoint()).adjoint();
  }
  return out;
}

/// Decoded 4x4 block for a two-qubit input after independent loss and Petz
/// recovery on both modes.
inline Block4 two_mode_pipeline(const Block4& rho, const GkpCode& code, const KrausSet& loss,
                                const KrausSet& recovery) {
  const CMatrix& e = code.isometry();
  const Eigen::Index d = e.rows();
  CMatrix ee(d * d, 4);
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = 0; b < d; ++b) {
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) ee(a * d + b, 2 * i + j) = e(a, i) * e(b, j);
      }
    }
  }
  CMatrix state = ee * rho * ee.adjoint();
  state = apply_on_mode(loss, state, true);
  state = apply_on_mode(loss, state, false);
  state = apply_on_mode(recovery, state, true);
  state = apply_on_mode(recovery, state, false);
  return ee.adjoint() * state * ee;
}

}  // namespace gkpzne::testing
