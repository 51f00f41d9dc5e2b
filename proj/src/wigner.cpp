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

#include "gkpzne/wigner.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "gkpzne/format.hpp"

namespace gkpzne {

std::vector<double> Axis::samples() const {
  if (points == 1 && max == min) return {min};
  if (points < 2 || !(max > min)) {
    throw Error(ErrorKind::Parameter,
                "axis needs max > min with at least two points, or a single point");
  }
  std::vector<double> out(points);
  const double h = spacing();
  for (int i = 0; i < points; ++i) out[i] = min + h * i;
  out.back() = max;
  return out;
}

double Axis::spacing() const { return points > 1 ? (max - min) / (points - 1) : 0.0; }

namespace {

// Accumulates sum_{m,n} rho_mn W_{|m><n|}(alpha). The basis functions obey
//   W_{00} = exp(-2|A|^2)/pi,  W_{0n} = 2A W_{0,n-1}/sqrt(n),
//   W_{mm} = (2 conj(A) W_{m-1,m} - sqrt(m) W_{m-1,m-1})/sqrt(m),
//   W_{mn} = (2A W_{m,n-1} - sqrt(m) W_{m-1,n-1})/sqrt(n),
// and W_{nm} = conj(W_{mn}).
cplx wigner_point(const CMatrix& rho, cplx a, std::vector<cplx>& row,
                  const std::vector<double>& sqrt_n) {
  const int dim = static_cast<int>(rho.rows());
  row[0] = std::exp(-2.0 * std::norm(a)) / std::numbers::pi;
  cplx acc = rho(0, 0) * row[0];
  for (int n = 1; n < dim; ++n) {
    row[n] = 2.0 * a * row[n - 1] / sqrt_n[n];
    acc += rho(0, n) * row[n] + rho(n, 0) * std::conj(row[n]);
  }
  for (int m = 1; m < dim; ++m) {
    // row holds W_{m-1, k}; overwrite in place with W_{m, k}.
    cplx diag_prev = row[m];  // W_{m-1, m}
    row[m] = (2.0 * std::conj(a) * diag_prev - sqrt_n[m] * row[m - 1]) / sqrt_n[m];
    acc += rho(m, m) * row[m];
    cplx upper = diag_prev;  // W_{m-1, n-1}
    for (int n = m + 1; n < dim; ++n) {
      const cplx next = (2.0 * a * row[n - 1] - sqrt_n[m] * upper) / sqrt_n[n];
      upper = row[n];
      row[n] = next;
      acc += rho(m, n) * row[n] + rho(n, m) * std::conj(row[n]);
    }
  }
  return acc;
}

}  // namespace

WignerGrid wigner(const FockMatrix& rho, const Axis& q, const Axis& p,
                  std::optional<double> expected_weight) {
  const double defect = rho.hermitian_defect();
  if (defect > kHermitianTol) {
    throw Error(ErrorKind::NotHermitian,
                "wigner: max |rho - rho^dagger| = " + std::to_string(defect));
  }
  if (expected_weight &&
      std::abs(rho.trace().real() - *expected_weight) > 1e-6) {
    throw Error(ErrorKind::Validation, "wigner: trace does not match weight");
  }
  WignerGrid grid;
  grid.q_axis = q.samples();
  grid.p_axis = p.samples();
  grid.values.resize(q.points, p.points);

  const int dim = rho.dim();
  std::vector<double> sqrt_n(dim);
  for (int n = 0; n < dim; ++n) sqrt_n[n] = std::sqrt(static_cast<double>(n));
  std::vector<cplx> row(dim);
  double worst_imag = 0.0;
  for (int i = 0; i < q.points; ++i) {
    for (int j = 0; j < p.points; ++j) {
      const cplx a = cplx(grid.q_axis[i], grid.p_axis[j]) / std::numbers::sqrt2;
      const cplx w = wigner_point(rho.matrix(), a, row, sqrt_n);
      worst_imag = std::max(worst_imag, std::abs(w.imag()));
      grid.values(i, j) = w.real();
    }
  }
  if (worst_imag > kHermitianTol) {
    throw Error(ErrorKind::NumericalInstability,
                "wigner: imaginary residue " + std::to_string(worst_imag));
  }
  return grid;
}

double integrate(const WignerGrid& grid) {
  const auto nq = grid.q_axis.size();
  const auto np = grid.p_axis.size();
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < nq; ++i) {
    const double hq = grid.q_axis[i + 1] - grid.q_axis[i];
    for (std::size_t j = 0; j + 1 < np; ++j) {
      const double hp = grid.p_axis[j + 1] - grid.p_axis[j];
      total += 0.25 * hq * hp *
               (grid.values(i, j) + grid.values(i + 1, j) +
                grid.values(i, j + 1) + grid.values(i + 1, j + 1));
    }
  }
  return total;
}

void write_csv(std::ostream& out, const WignerGrid& grid) {
  out << "q,p,w\n";
  for (std::size_t i = 0; i < grid.q_axis.size(); ++i) {
    for (std::size_t j = 0; j < grid.p_axis.size(); ++j) {
      out << format_double(grid.q_axis[i]) << ','
          << format_double(grid.p_axis[j]) << ','
          << format_double(grid.values(i, j)) << '\n';
    }
  }
}

}  // namespace gkpzne
