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

#include "gkpzne/gkp_code.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace gkpzne {

namespace {

constexpr double kPi = std::numbers::pi;

struct LatticeTerm {
  int a;   // 2 n1 + mu
  int n2;
  double log_weight;
  cplx alpha;
  cplx phase;
};

std::vector<LatticeTerm> lattice_terms(double delta, int mu, double tol) {
  std::vector<LatticeTerm> terms;
  const double log_tol = std::log(tol);
  if (log_tol > 0.0) return terms;
  const double scale = 0.5 * kPi * delta * delta;
  const double radius2 = -log_tol / scale;
  const int rmax = static_cast<int>(std::floor(std::sqrt(radius2))) + 1;
  const double unit = std::sqrt(0.5 * kPi);
  for (int a = -rmax; a <= rmax; ++a) {
    if (((a - mu) % 2) != 0) continue;
    for (int n2 = -rmax; n2 <= rmax; ++n2) {
      const double log_w = -scale * (a * a + n2 * n2);
      if (log_w < log_tol) continue;
      // D(a + ib) = e^{iab} D(a) D(ib): the phase turns the sum into an
      // enveloped q-comb.
      terms.push_back({a, n2, log_w, cplx(unit * a, unit * n2),
                       std::polar(1.0, -0.5 * kPi * a * n2)});
    }
  }
  return terms;
}

// |psi|^2 of the untruncated superposition from pairwise coherent overlaps
// <a|b> = exp(-|a - b|^2 / 2 + i Im(conj(a) b)); pairs further apart than
// |a - b|^2 / 2 > 40 are dropped.
double exact_norm2(const std::vector<LatticeTerm>& terms) {
  if (terms.empty()) return 0.0;
  int amin = terms.front().a, amax = amin, nmin = terms.front().n2, nmax = nmin;
  for (const auto& t : terms) {
    amin = std::min(amin, t.a);
    amax = std::max(amax, t.a);
    nmin = std::min(nmin, t.n2);
    nmax = std::max(nmax, t.n2);
  }
  const int width = nmax - nmin + 1;
  std::vector<int> index(static_cast<std::size_t>(amax - amin + 1) * width, -1);
  for (std::size_t k = 0; k < terms.size(); ++k) {
    index[static_cast<std::size_t>(terms[k].a - amin) * width +
          (terms[k].n2 - nmin)] = static_cast<int>(k);
  }
  const double quarter_pi = 0.25 * kPi;
  constexpr double kMaxExponent = 40.0;
  const int reach = static_cast<int>(std::ceil(std::sqrt(kMaxExponent / quarter_pi)));
  double total = 0.0;
  for (const auto& tj : terms) {
    const cplx cj = std::exp(tj.log_weight) * tj.phase;
    for (int da = -reach; da <= reach; da += 1) {
      if (da % 2 != 0) continue;
      const int a = tj.a + da;
      if (a < amin || a > amax) continue;
      for (int dn = -reach; dn <= reach; ++dn) {
        if (quarter_pi * (da * da + dn * dn) > kMaxExponent) continue;
        const int n2 = tj.n2 + dn;
        if (n2 < nmin || n2 > nmax) continue;
        const int k = index[static_cast<std::size_t>(a - amin) * width + (n2 - nmin)];
        if (k < 0) continue;
        const auto& tk = terms[k];
        const cplx ck = std::exp(tk.log_weight) * tk.phase;
        const cplx overlap = std::exp(
            cplx(-quarter_pi * (da * da + dn * dn),
                 (std::conj(tj.alpha) * tk.alpha).imag()));
        total += (std::conj(cj) * ck * overlap).real();
      }
    }
  }
  return total;
}

struct Basis {
  CVector phi0;
  CVector phi1;
  int terms = 0;
  double truncated_weight = 0.0;
};

Basis orthonormal_basis(double delta, int dim, const CodeOptions& options) {
  const RawCodeword r0 = raw_codeword(delta, 0, dim, options);
  const RawCodeword r1 = raw_codeword(delta, 1, dim, options);
  const Eigen::Matrix2cd g = gram_matrix(r0.state, r1.state);
  auto [phi0, phi1] = lowdin_orthonormalize(r0.state, r1.state, g);
  return {std::move(phi0), std::move(phi1), r0.terms_retained + r1.terms_retained,
          std::max(r0.truncated_weight, r1.truncated_weight)};
}

double basis_mean_photon(const CVector& phi0, const CVector& phi1) {
  double total = 0.0;
  for (Eigen::Index n = 0; n < phi0.size(); ++n) {
    total += static_cast<double>(n) * (std::norm(phi0(n)) + std::norm(phi1(n)));
  }
  return total / kLogicalDim;
}

}  // namespace

RawCodeword raw_codeword(double delta, int mu, int dim,
                         const CodeOptions& options) {
  if (!(delta > 0.0 && delta <= 1.5)) {
    throw Error(ErrorKind::Parameter,
                "envelope width must lie in (0, 1.5], got " + std::to_string(delta));
  }
  if (mu != 0 && mu != 1) {
    throw Error(ErrorKind::Parameter, "logical index must be 0 or 1");
  }
  if (dim < 2 || dim > kMaxDim) {
    throw Error(ErrorKind::InvalidDimension, "bad Fock cutoff " + std::to_string(dim));
  }
  if (!(options.lattice_tol > 0.0)) {
    throw Error(ErrorKind::Parameter, "lattice tolerance must be positive");
  }
  const std::vector<LatticeTerm> terms = lattice_terms(delta, mu, options.lattice_tol);
  if (terms.empty()) {
    throw Error(ErrorKind::DegenerateEnvelope,
                "no lattice term has envelope weight >= lattice_tol");
  }

  std::vector<double> half_log_fact(dim);
  for (int n = 0; n < dim; ++n) half_log_fact[n] = 0.5 * std::lgamma(n + 1.0);

  CVector psi = CVector::Zero(dim);
  for (const auto& t : terms) {
    const double r = std::abs(t.alpha);
    if (r == 0.0) {
      psi(0) += std::exp(t.log_weight) * t.phase;
      continue;
    }
    const double log_r = std::log(r);
    const double theta = std::arg(t.alpha);
    const double base = t.log_weight - 0.5 * r * r;
    const double phase0 = std::arg(t.phase);
    for (int n = 0; n < dim; ++n) {
      const double log_amp = base + n * log_r - half_log_fact[n];
      if (log_amp < -700.0) continue;
      psi(n) += std::polar(std::exp(log_amp), phase0 + n * theta);
    }
  }

  const double truncated_norm2 = psi.squaredNorm();
  const double full_norm2 = exact_norm2(terms);
  const double lost = std::max(0.0, 1.0 - truncated_norm2 / full_norm2);
  if (lost > options.max_truncated_weight) {
    throw Error(ErrorKind::CutoffTooSmall,
                "codeword mu=" + std::to_string(mu) + " at delta=" +
                    std::to_string(delta) + " loses weight " +
                    std::to_string(lost) + " above cutoff " + std::to_string(dim));
  }
  RawCodeword out;
  out.state = psi / std::sqrt(truncated_norm2);
  out.terms_retained = static_cast<int>(terms.size());
  out.truncated_weight = lost;
  return out;
}

Eigen::Matrix2cd gram_matrix(const CVector& raw0, const CVector& raw1) {
  if (raw0.size() != raw1.size()) {
    throw Error(ErrorKind::DimensionMismatch, "gram_matrix: vector sizes differ");
  }
  if (std::abs(raw0.norm() - 1.0) > 1e-10 || std::abs(raw1.norm() - 1.0) > 1e-10) {
    throw Error(ErrorKind::Validation, "gram_matrix: inputs must be unit vectors");
  }
  Eigen::Matrix2cd g;
  const cplx g01 = raw0.dot(raw1);
  g(0, 0) = 1.0;
  g(1, 1) = 1.0;
  g(0, 1) = g01;
  g(1, 0) = std::conj(g01);
  // Eigenvalues of [[1, g], [g*, 1]] are 1 -/+ |g|.
  if (1.0 - std::abs(g01) < 1e-12) {
    throw Error(ErrorKind::CodewordsCollinear,
                "raw codewords are numerically collinear (|G01| = " +
                    std::to_string(std::abs(g01)) + ")");
  }
  return g;
}

std::pair<CVector, CVector> lowdin_orthonormalize(const CVector& raw0,
                                                  const CVector& raw1,
                                                  const Eigen::Matrix2cd& gram) {
  if (raw0.size() != raw1.size()) {
    throw Error(ErrorKind::DimensionMismatch, "lowdin: vector sizes differ");
  }
  const CMatrix s = psd_inv_sqrt(CMatrix(gram), 0.0);
  CMatrix raw(raw0.size(), 2);
  raw.col(0) = raw0;
  raw.col(1) = raw1;
  const CMatrix phi = raw * s;
  return {phi.col(0), phi.col(1)};
}

double mean_photon_of_projector(const FockMatrix& projector) {
  double total = 0.0;
  for (int n = 0; n < projector.dim(); ++n) {
    total += static_cast<double>(n) * projector(n, n).real();
  }
  return total / kLogicalDim;
}

double envelope_photon_number(double delta) {
  return 1.0 / std::expm1(2.0 * delta * delta);
}

double initial_delta_guess(double nbar) {
  return std::sqrt(0.5 * std::log1p(1.0 / nbar));
}

int default_cutoff(double nbar) {
  const int rule = static_cast<int>(std::ceil(14.0 * nbar + 40.0));
  return std::min(kMaxDim, std::max(80, rule));
}

GkpCode::GkpCode(double delta, double target, double nbar, CVector phi0,
                 CVector phi1, int terms, double truncated_weight)
    : delta_(delta),
      target_nbar_(target),
      nbar_(nbar),
      phi0_(std::move(phi0)),
      phi1_(std::move(phi1)),
      isometry_(phi0_.size(), 2),
      projector_(FockMatrix::zero(static_cast<int>(phi0_.size()))),
      terms_(terms),
      truncated_weight_(truncated_weight) {
  isometry_.col(0) = phi0_;
  isometry_.col(1) = phi1_;
  projector_ = FockMatrix(isometry_ * isometry_.adjoint());
}

GkpCode GkpCode::build(double delta, int dim, const CodeOptions& options) {
  Basis b = orthonormal_basis(delta, dim, options);
  const double nbar = basis_mean_photon(b.phi0, b.phi1);
  return GkpCode(delta, nbar, nbar, std::move(b.phi0), std::move(b.phi1),
                 b.terms, b.truncated_weight);
}

GkpCode calibrate_code(double target_nbar, std::optional<int> dim_hint,
                       const CodeOptions& options) {
  if (!(target_nbar >= 0.5 && target_nbar <= 200.0)) {
    throw Error(ErrorKind::Parameter,
                "target mean photon number must lie in [0.5, 200], got " +
                    std::to_string(target_nbar));
  }
  const int dim = dim_hint.value_or(default_cutoff(target_nbar));
  const double tol = 1e-6 * std::max(1.0, target_nbar);

  struct Probe {
    Basis basis;
    double nbar;
  };
  // nbar(delta) is decreasing; a probe whose codewords do not fit under the
  // cutoff is treated as +infinity.
  auto probe = [&](double delta) -> std::optional<Probe> {
    try {
      Basis b = orthonormal_basis(delta, dim, options);
      const double n = basis_mean_photon(b.phi0, b.phi1);
      return Probe{std::move(b), n};
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::CutoffTooSmall) return std::nullopt;
      throw;
    }
  };
  auto above = [&](const std::optional<Probe>& p) {
    return !p || p->nbar > target_nbar;
  };

  double lo = 0.05, hi = 1.4;
  if (!(above(probe(lo)) && !above(probe(hi)))) {
    lo = 0.025;
    hi = 1.5;
    if (!(above(probe(lo)) && !above(probe(hi)))) {
      // nbar(delta) has a shallow minimum near delta = 1, so the ends of the
      // interval can both lie above a reachable target. Walk up the
      // decreasing branch to the first crossing instead.
      bool found = false;
      double prev = 0.05;
      for (int k = 2; k <= 30; ++k) {
        const double d = 0.05 * k;
        if (!above(probe(d))) {
          lo = prev;
          hi = d;
          found = true;
          break;
        }
        prev = d;
      }
      if (!found) {
        throw Error(ErrorKind::CalibrationFailed,
                    "target " + std::to_string(target_nbar) +
                        " is not reachable for delta in [0.025, 1.5]");
      }
    }
  }

  double mid = std::clamp(initial_delta_guess(target_nbar), lo, hi);
  for (int iter = 0; iter < 200; ++iter) {
    std::optional<Probe> p = probe(mid);
    if (p && std::abs(p->nbar - target_nbar) <= tol) {
      return GkpCode(mid, target_nbar, p->nbar, std::move(p->basis.phi0),
                     std::move(p->basis.phi1), p->basis.terms,
                     p->basis.truncated_weight);
    }
    if (above(p)) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-15) break;
    mid = 0.5 * (lo + hi);
  }
  throw Error(ErrorKind::CalibrationFailed,
              "bisection did not reach the photon-number tolerance for target " +
                  std::to_string(target_nbar) + " at cutoff " + std::to_string(dim));
}

CodeSummary summarize(const GkpCode& code) {
  return {code.target_nbar(), code.delta(),  code.nbar(),
          code.dim(),         code.lattice_terms_retained(), code.truncated_weight()};
}

}  // namespace gkpzne
