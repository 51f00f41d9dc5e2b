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

// Energy ladders, power-law extrapolation y(n) = L + c n^-p, bootstrap
// errors, log-log residual checks, cutoff parity and the dual-lattice bound.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gkpzne {

inline constexpr double kMinScheduleEnergy = 0.5;

class EnergySchedule {
 public:
  /// Strictly monotone, every point >= 0.5.
  explicit EnergySchedule(std::vector<double> points);

  const std::vector<double>& points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  double max() const;
  double min() const;

 private:
  std::vector<double> points_;
};

/// n_j = n0 - j dn for j = 0 .. k-1.
EnergySchedule build_schedule(double n0, double dn, int k);

struct DataPoint {
  double n = 0.0;
  double y = 0.0;
};

struct FitOptions {
  int max_iterations = 500;
  double p_min = 1e-3;
  double p_max = 10.0;
  /// Starting point (L, c, p); the data-driven rule is used when absent.
  std::optional<std::array<double, 3>> start;
};

struct FitResult {
  double L = 0.0;
  double c = 0.0;
  double p = 1.0;
  double se_L = 0.0;
  double se_p = 0.0;
  double rss = 0.0;
  bool converged = false;
  int iterations = 0;
  /// (n, y - model) for every input point.
  std::vector<DataPoint> residuals;

  double model(double n) const;
};

/// Levenberg-Marquardt least squares with uniform weights.
/// Requires at least four points with four distinct n values.
FitResult fit_power_law(const std::vector<DataPoint>& data,
                        const FitOptions& options = {});

struct BootstrapResult {
  double se_L = 0.0;
  double se_p = 0.0;
  int resamples = 0;
  int failures = 0;
  /// More than 20% of refits failed.
  bool unstable = false;
};

/// Refits `resamples` with-replacement resamples; resample b draws from a
/// 64-bit Mersenne Twister seeded with seed + b. Standard errors are sample
/// standard deviations over the successful refits.
BootstrapResult bootstrap_se(const std::vector<DataPoint>& data, const FitResult& fit,
                             int resamples = 1000, std::uint64_t seed = 0,
                             int jobs = 1);

struct ResidualPoint {
  double log_n = 0.0;
  double log_abs = 0.0;
  bool excluded = false;  ///< |y - L| < 1e-15
};

struct ResidualDiagnostic {
  std::vector<ResidualPoint> points;
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int excluded = 0;
};

/// log|y - L| against log n with a least-squares line; the slope should
/// approximate -p.
ResidualDiagnostic residual_diagnostic(const std::vector<DataPoint>& data,
                                       const FitResult& fit);

enum class ParityMode { AbsoluteError, DistanceToIdeal };

struct ParityEntry {
  double n_cut = 0.0;
  int n_points = 0;
  std::optional<FitResult> fit;  ///< empty when the fit failed
  std::string error;
  bool meets_benchmark = false;
};

struct ParityResult {
  std::vector<ParityEntry> entries;
  std::optional<double> parity_point;
};

/// For each cutoff, fits the points with n <= n_cut and compares the limit
/// with the raw benchmark: |L| <= |raw| in AbsoluteError mode, or
/// |L - ideal| <= |raw - ideal| in DistanceToIdeal mode.
ParityResult parity_analysis(const std::vector<DataPoint>& data, double raw_benchmark,
                             const std::vector<double>& cutoffs, ParityMode mode,
                             double ideal = 0.0);

struct AsymptoticInfidelity {
  double bound = 0.0;
  double leading_term = 0.0;
};

/// (1/4) sum_{x != 0} exp[-pi (1 - gamma)/gamma |x|^2] over the square dual
/// lattice with |x|^2 = (i^2 + j^2)/d_L, |i|, |j| <= radius.
AsymptoticInfidelity asymptotic_infidelity(double gamma, int d_l = 2, int radius = 5);

}  // namespace gkpzne
