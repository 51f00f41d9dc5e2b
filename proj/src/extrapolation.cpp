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

#include "gkpzne/extrapolation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <thread>

#include <Eigen/Dense>

#include "gkpzne/error.hpp"

namespace gkpzne {

EnergySchedule::EnergySchedule(std::vector<double> points) : points_(std::move(points)) {
  if (points_.empty()) {
    throw Error(ErrorKind::Schedule, "schedule is empty");
  }
  for (double n : points_) {
    if (!std::isfinite(n) || n < kMinScheduleEnergy) {
      throw Error(ErrorKind::Schedule, "schedule point below 0.5: " + std::to_string(n));
    }
  }
  if (points_.size() > 1) {
    const bool up = points_[1] > points_[0];
    for (std::size_t j = 1; j < points_.size(); ++j) {
      const bool ok = up ? points_[j] > points_[j - 1] : points_[j] < points_[j - 1];
      if (!ok) throw Error(ErrorKind::Schedule, "schedule is not strictly monotone");
    }
  }
}

double EnergySchedule::max() const {
  return *std::max_element(points_.begin(), points_.end());
}

double EnergySchedule::min() const {
  return *std::min_element(points_.begin(), points_.end());
}

EnergySchedule build_schedule(double n0, double dn, int k) {
  if (k < 1) throw Error(ErrorKind::Schedule, "schedule needs K >= 1");
  if (!(dn > 0.0) || !std::isfinite(dn) || !std::isfinite(n0)) {
    throw Error(ErrorKind::Schedule, "schedule step must be positive");
  }
  if (n0 - (k - 1) * dn < kMinScheduleEnergy) {
    throw Error(ErrorKind::Schedule, "schedule falls below 0.5 photons");
  }
  std::vector<double> pts(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) pts[static_cast<std::size_t>(j)] = n0 - j * dn;
  return EnergySchedule(std::move(pts));
}

double FitResult::model(double n) const { return L + c * std::pow(n, -p); }

namespace {

using Vec3 = Eigen::Vector3d;

double rss_of(const std::vector<DataPoint>& data, const Vec3& t) {
  double s = 0.0;
  for (const auto& d : data) {
    const double r = d.y - (t(0) + t(1) * std::pow(d.n, -t(2)));
    s += r * r;
  }
  return s;
}

// Least-squares (L, c) with the exponent held fixed.
std::optional<Vec3> linear_at(const std::vector<DataPoint>& data, double p) {
  Eigen::Matrix2d a = Eigen::Matrix2d::Zero();
  Eigen::Vector2d b = Eigen::Vector2d::Zero();
  for (const auto& d : data) {
    const Eigen::Vector2d row(1.0, std::pow(d.n, -p));
    a += row * row.transpose();
    b += row * d.y;
  }
  Eigen::FullPivLU<Eigen::Matrix2d> lu(a);
  if (!lu.isInvertible()) return std::nullopt;
  const Eigen::Vector2d lc = lu.solve(b);
  if (!lc.allFinite()) return std::nullopt;
  return Vec3(lc(0), lc(1), p);
}

Vec3 initial_guess(const std::vector<DataPoint>& data, const FitOptions& opt) {
  auto largest = std::max_element(data.begin(), data.end(),
                                  [](const DataPoint& a, const DataPoint& b) { return a.n < b.n; });
  auto smallest = std::min_element(data.begin(), data.end(),
                                   [](const DataPoint& a, const DataPoint& b) { return a.n < b.n; });
  const double l0 = largest->y;
  const double direction = smallest->y - l0 >= 0.0 ? 1.0 : -1.0;
  const double shift = 1e-9 * direction;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (const auto& d : data) {
    if (std::abs(d.y - l0) <= 1e-12) continue;
    const double u = std::log(d.n);
    const double v = std::log(std::abs(d.y - l0 - shift));
    sx += u; sy += v; sxx += u * u; sxy += u * v;
    ++m;
  }
  double y_min = data.front().y;
  for (const auto& d : data) y_min = std::min(y_min, d.y);
  Vec3 fallback(l0, y_min - l0, 1.0);
  if (m < 2) return fallback;
  const double den = m * sxx - sx * sx;
  if (!(std::abs(den) > 0.0)) return fallback;
  const double slope = (m * sxy - sx * sy) / den;
  const double icpt = (sy - slope * sx) / m;
  const double p0 = -slope;
  const double c0 = direction * std::exp(icpt);
  if (!std::isfinite(p0) || !std::isfinite(c0) || p0 <= 0.0) return fallback;
  return Vec3(l0, c0, std::clamp(p0, opt.p_min, opt.p_max));
}

}  // namespace

FitResult fit_power_law(const std::vector<DataPoint>& data, const FitOptions& opt) {
  if (data.size() < 4) {
    throw Error(ErrorKind::InsufficientData, "power-law fit needs at least 4 points");
  }
  std::set<double> distinct;
  double y_scale = 0.0;
  for (const auto& d : data) {
    if (!std::isfinite(d.n) || !std::isfinite(d.y) || !(d.n > 0.0)) {
      throw Error(ErrorKind::Validation, "fit data must be finite with n > 0");
    }
    distinct.insert(d.n);
    y_scale += d.y * d.y;
  }
  if (distinct.size() < 4) {
    throw Error(ErrorKind::InsufficientData, "power-law fit needs 4 distinct n values");
  }

  Vec3 t = opt.start ? Vec3((*opt.start)[0], (*opt.start)[1], (*opt.start)[2])
                     : initial_guess(data, opt);
  t(2) = std::clamp(t(2), opt.p_min, opt.p_max);
  double rss = rss_of(data, t);
  const double exact_floor = 1e-30 * std::max(y_scale, 1e-300);

  FitResult out;
  double lambda = 1e-3;
  bool converged = rss <= exact_floor;
  int iter = 0;
  const std::size_t m = data.size();
  Eigen::MatrixXd jac(m, 3);
  Eigen::VectorXd res(m);
  while (!converged && iter < opt.max_iterations) {
    ++iter;
    for (std::size_t i = 0; i < m; ++i) {
      const double np = std::pow(data[i].n, -t(2));
      jac(i, 0) = 1.0;
      jac(i, 1) = np;
      jac(i, 2) = -t(1) * std::log(data[i].n) * np;
      res(i) = data[i].y - (t(0) + t(1) * np);
    }
    const Eigen::Matrix3d jtj = jac.transpose() * jac;
    const Vec3 g = jac.transpose() * res;
    Vec3 diag = jtj.diagonal();
    const double dfloor = 1e-12 * diag.maxCoeff() + 1e-300;
    diag = diag.cwiseMax(dfloor);

    bool accepted = false;
    bool any_solvable = false;
    Vec3 first_step = Vec3::Zero();
    bool have_first = false;
    while (lambda <= 1e16) {
      Eigen::Matrix3d a = jtj;
      a.diagonal() += lambda * diag;
      Eigen::LDLT<Eigen::Matrix3d> ldlt(a);
      const Vec3 step = ldlt.solve(g);
      if (ldlt.info() != Eigen::Success || !step.allFinite()) {
        lambda *= 10.0;
        continue;
      }
      any_solvable = true;
      if (!have_first) {
        first_step = step;
        have_first = true;
      }
      Vec3 trial = t + step;
      if (trial(2) < opt.p_min || trial(2) > opt.p_max) {
        // On the bound only (L, c) remain free and the model is linear.
        const auto bounded = linear_at(data, std::clamp(trial(2), opt.p_min, opt.p_max));
        if (bounded) trial = *bounded;
        trial(2) = std::clamp(trial(2), opt.p_min, opt.p_max);
      }
      const double trial_rss = rss_of(data, trial);
      if (trial_rss < rss) {
        const Vec3 moved = trial - t;
        t = trial;
        const double prev = rss;
        rss = trial_rss;
        lambda = std::max(lambda / 10.0, 1e-12);
        accepted = true;
        bool small = true;
        for (int k = 0; k < 3; ++k) {
          if (std::abs(moved(k)) > 1e-12 * (std::abs(t(k)) + 1e-12)) small = false;
        }
        if (small || rss <= exact_floor || prev - rss <= 1e-15 * prev) converged = true;
        break;
      }
      lambda *= 10.0;
    }
    if (!any_solvable) {
      throw Error(ErrorKind::FitFailed, "singular normal equations after damping; L=" +
                                            std::to_string(t(0)) + " c=" + std::to_string(t(1)) +
                                            " p=" + std::to_string(t(2)));
    }
    if (!accepted) {
      // No damped step lowers the residual: a minimum to working precision
      // unless the first proposed step was still large.
      // A step pushing p through an active bound does not count.
      const bool pinned = (t(2) <= opt.p_min && first_step(2) < 0.0) ||
                          (t(2) >= opt.p_max && first_step(2) > 0.0);
      bool small = true;
      for (int k = 0; k < 3; ++k) {
        if (pinned) break;
        if (std::abs(first_step(k)) > 1e-6 * (std::abs(t(k)) + 1e-9)) small = false;
      }
      converged = small;
      break;
    }
  }

  out.L = t(0);
  out.c = t(1);
  out.p = t(2);
  out.iterations = iter;
  out.converged = converged;
  out.residuals.reserve(m);
  double check = 0.0;
  for (const auto& d : data) {
    const double r = d.y - out.model(d.n);
    out.residuals.push_back({d.n, r});
    check += r * r;
  }
  out.rss = check;
  return out;
}

BootstrapResult bootstrap_se(const std::vector<DataPoint>& data, const FitResult& fit,
                             int resamples, std::uint64_t seed, int jobs) {
  if (!fit.converged) {
    throw Error(ErrorKind::FitFailed, "bootstrap requires a converged fit");
  }
  if (resamples < 100) {
    throw Error(ErrorKind::Parameter, "bootstrap needs at least 100 resamples");
  }
  const std::size_t m = data.size();
  const auto count = static_cast<std::size_t>(resamples);
  std::vector<std::optional<std::array<double, 2>>> found(count);
  FitOptions opt;
  opt.start = std::array<double, 3>{fit.L, fit.c, fit.p};

  auto work = [&](std::size_t begin, std::size_t stride) {
    std::vector<DataPoint> sample(m);
    for (std::size_t b = begin; b < count; b += stride) {
      std::mt19937_64 rng(seed + b);
      std::uniform_int_distribution<std::size_t> pick(0, m - 1);
      for (auto& s : sample) s = data[pick(rng)];
      try {
        const FitResult r = fit_power_law(sample, opt);
        if (r.converged && std::isfinite(r.L) && std::isfinite(r.p)) {
          found[b] = std::array<double, 2>{r.L, r.p};
        }
      } catch (const Error&) {
      }
    }
  };
  const auto threads = static_cast<std::size_t>(std::max(1, jobs));
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < threads; ++k) pool.emplace_back(work, k, threads);
    for (auto& th : pool) th.join();
  }

  BootstrapResult out;
  out.resamples = resamples;
  double mean_l = 0, mean_p = 0;
  int ok = 0;
  for (const auto& f : found) {
    if (!f) continue;
    mean_l += (*f)[0];
    mean_p += (*f)[1];
    ++ok;
  }
  out.failures = resamples - ok;
  out.unstable = out.failures > 0.2 * resamples;
  if (ok < 2) {
    out.se_L = out.se_p = std::numeric_limits<double>::quiet_NaN();
    out.unstable = true;
    return out;
  }
  mean_l /= ok;
  mean_p /= ok;
  double var_l = 0, var_p = 0;
  for (const auto& f : found) {
    if (!f) continue;
    var_l += ((*f)[0] - mean_l) * ((*f)[0] - mean_l);
    var_p += ((*f)[1] - mean_p) * ((*f)[1] - mean_p);
  }
  out.se_L = std::sqrt(var_l / (ok - 1));
  out.se_p = std::sqrt(var_p / (ok - 1));
  return out;
}

ResidualDiagnostic residual_diagnostic(const std::vector<DataPoint>& data,
                                       const FitResult& fit) {
  if (!fit.converged) {
    throw Error(ErrorKind::FitFailed, "residual diagnostic requires a converged fit");
  }
  ResidualDiagnostic out;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  int m = 0;
  for (const auto& d : data) {
    ResidualPoint pt;
    pt.log_n = std::log(d.n);
    const double dev = std::abs(d.y - fit.L);
    if (dev < 1e-15) {
      pt.excluded = true;
      pt.log_abs = -std::numeric_limits<double>::infinity();
      ++out.excluded;
    } else {
      pt.log_abs = std::log(dev);
      sx += pt.log_n; sy += pt.log_abs;
      sxx += pt.log_n * pt.log_n; sxy += pt.log_n * pt.log_abs;
      syy += pt.log_abs * pt.log_abs;
      ++m;
    }
    out.points.push_back(pt);
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (m < 2) {
    out.slope = out.intercept = out.r2 = nan;
    return out;
  }
  const double vxx = sxx - sx * sx / m;
  const double vyy = syy - sy * sy / m;
  const double vxy = sxy - sx * sy / m;
  if (!(vxx > 0.0)) {
    out.slope = out.intercept = out.r2 = nan;
    return out;
  }
  out.slope = vxy / vxx;
  out.intercept = (sy - out.slope * sx) / m;
  out.r2 = vyy > 0.0 ? (vxy * vxy) / (vxx * vyy) : 1.0;
  return out;
}

ParityResult parity_analysis(const std::vector<DataPoint>& data, double raw_benchmark,
                             const std::vector<double>& cutoffs, ParityMode mode,
                             double ideal) {
  ParityResult out;
  const double target = mode == ParityMode::AbsoluteError ? std::abs(raw_benchmark)
                                                          : std::abs(raw_benchmark - ideal);
  for (double cut : cutoffs) {
    std::vector<DataPoint> subset;
    for (const auto& d : data) {
      if (d.n <= cut) subset.push_back(d);
    }
    if (subset.size() < 4) {
      throw Error(ErrorKind::InsufficientData,
                  "parity cutoff " + std::to_string(cut) + " keeps fewer than 4 points");
    }
    ParityEntry e;
    e.n_cut = cut;
    e.n_points = static_cast<int>(subset.size());
    try {
      FitResult f = fit_power_law(subset);
      if (f.converged) {
        const double dist = mode == ParityMode::AbsoluteError ? std::abs(f.L)
                                                              : std::abs(f.L - ideal);
        e.meets_benchmark = dist <= target;
      } else {
        e.error = "not converged";
      }
      e.fit = std::move(f);
    } catch (const Error& err) {
      e.error = err.what();
    }
    if (e.meets_benchmark && !out.parity_point) out.parity_point = cut;
    out.entries.push_back(std::move(e));
  }
  return out;
}

AsymptoticInfidelity asymptotic_infidelity(double gamma, int d_l, int radius) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw Error(ErrorKind::Parameter, "asymptotic infidelity needs 0 < gamma < 1");
  }
  if (d_l < 1) throw Error(ErrorKind::Parameter, "logical dimension must be >= 1");
  if (radius < 3) throw Error(ErrorKind::Parameter, "lattice radius must be >= 3");
  const double k = std::numbers::pi * (1.0 - gamma) / gamma / d_l;
  AsymptoticInfidelity out;
  // Sum shells from the outside in so the small terms are added first.
  double sum = 0.0;
  for (int s = 2 * radius * radius; s >= 1; --s) {
    int count = 0;
    for (int i = -radius; i <= radius; ++i) {
      for (int j = -radius; j <= radius; ++j) {
        if (i * i + j * j == s) ++count;
      }
    }
    if (count) sum += count * std::exp(-k * s);
  }
  out.bound = 0.25 * sum;
  out.leading_term = 0.25 * 4.0 * std::exp(-k);
  return out;
}

}  // namespace gkpzne
