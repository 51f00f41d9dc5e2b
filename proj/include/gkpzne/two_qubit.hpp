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

// Two modes under independent (product) channels, evaluated by contracting
// single-qubit PTMs with the input's two-qubit Pauli coefficients.

#include <cstdint>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gkpzne/extrapolation.hpp"
#include "gkpzne/pipeline.hpp"

namespace gkpzne {

using Block4 = Eigen::Matrix4cd;

/// A(mu, nu) = Tr[(sigma_mu (x) sigma_nu) rho].
struct PauliCoeffs {
  Eigen::Matrix4d a = Eigen::Matrix4d::Zero();
};

/// sigma_a (x) sigma_b with mode A as the leading tensor factor.
Block4 pauli_product(Pauli a, Pauli b);

/// Requires a Hermitian, unit-trace, PSD (1e-9) input.
PauliCoeffs pauli_coeffs(const Block4& rho);
/// rho = (1/4) sum A(mu, nu) sigma_mu (x) sigma_nu
Block4 reconstruct(const PauliCoeffs& coeffs);

/// <sigma_a (x) sigma_b> = sum A(mu, nu) chiA(a, mu) chiB(b, nu), with the
/// survival weight from a = b = 0.
Expectation product_expectation(const PauliCoeffs& coeffs, const Ptm& chi_a,
                                const Ptm& chi_b, Pauli a, Pauli b);

/// (|00> + |11>)/sqrt(2)
Block4 bell_phi_plus();

/// |psi><psi| for psi built from eight standard normals (real then imaginary
/// part per component) drawn from std::mt19937_64(seed), then normalised.
Block4 haar_random_state(std::uint64_t seed);

struct ResponseOptions {
  double epsilon = kDefaultPetzEpsilon;
  std::optional<int> dim;  ///< Fock cutoff override
  CodeOptions code;
};

/// Single-qubit response of one (nbar, x) cell.
struct Response {
  Ptm ptm;
  CodeSummary code;
};

/// Thread-safe memo of calibrated codes (per nbar) and PTMs (per nbar, x).
/// Each entry is computed once; concurrent requests wait for it.
class ResponseCache {
 public:
  explicit ResponseCache(ResponseOptions options = {});

  const ResponseOptions& options() const noexcept { return options_; }
  std::shared_ptr<const GkpCode> code(double nbar);
  Response response(double nbar, double x);
  /// Number of PTMs computed so far.
  std::size_t ptm_evaluations() const;

 private:
  ResponseOptions options_;
  mutable std::mutex mutex_;
  std::map<double, std::shared_future<std::shared_ptr<const GkpCode>>> codes_;
  std::map<std::pair<double, double>, std::shared_future<Response>> responses_;
};

/// Single-qubit response computed from scratch (no cache).
Response compute_response(double nbar, double x, const ResponseOptions& options = {});

struct CoherenceRecord {
  int trial = 0;
  std::uint64_t seed = 0;
  double nbar = 0.0;
  double x = 0.0;
  std::string obs;
  double leak = 0.0;
  std::optional<double> cond;
  std::optional<double> ideal;
};

struct CoherencePoint {
  double nbar = 0.0;
  double x = 0.0;
  double mean_delta_e = 0.0;
  int used_trials = 0;
  int excluded_trials = 0;
};

struct CoherenceResult {
  std::vector<CoherencePoint> points;
  std::vector<CoherenceRecord> records;
};

/// Mean over trials of (1/3) sum_{O in XX, YY, ZZ} |<O>_cond - <O>_ideal|,
/// per schedule point. Trial i uses haar_random_state(seed0 + i); the ideal
/// is the conditional value at x = 0 with the same code. Trials with an
/// undefined conditional at some nbar are excluded there and counted.
CoherenceResult coherence_error(int trials, const EnergySchedule& schedule, double x,
                                std::uint64_t seed0, ResponseCache& cache);

}  // namespace gkpzne
