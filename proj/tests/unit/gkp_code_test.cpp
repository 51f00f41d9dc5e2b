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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gkpzne/gkp_code.hpp"

namespace gkpzne {
namespace {

constexpr double kPi = std::numbers::pi;

cplx expect(const CVector& v, const CMatrix& op) { return v.dot(op * v); }

TEST(RawCodeword, WideEnvelopeIsNearVacuum) {
  const RawCodeword r = raw_codeword(1.2, 0, 80);
  EXPECT_GT(std::norm(r.state(0)), 0.9);
  EXPECT_NEAR(r.state.norm(), 1.0, 1e-12);
}

TEST(RawCodeword, UnitToleranceKeepsOnlyOrigin) {
  CodeOptions opt;
  opt.lattice_tol = 1.0;
  const RawCodeword r = raw_codeword(0.5, 0, 40, opt);
  EXPECT_EQ(r.terms_retained, 1);
  EXPECT_NEAR(std::abs(r.state(0)), 1.0, 1e-12);
}

TEST(RawCodeword, OddCodewordSitsOnOddMultiplesOfRootPi) {
  // Circular mean of q modulo 2 sqrt(pi) through <exp(i sqrt(pi) q)>.
  const int dim = 200;
  const RawCodeword r1 = raw_codeword(0.4, 1, dim);
  const RawCodeword r0 = raw_codeword(0.4, 0, dim);
  const CMatrix shift = displacement(cplx(0.0, std::sqrt(kPi / 2.0)), dim).matrix();
  const cplx z1 = expect(r1.state, shift);
  const cplx z0 = expect(r0.state, shift);
  const double q1 = std::fmod(std::arg(z1) / std::sqrt(kPi) + 2.0 * std::sqrt(kPi),
                              2.0 * std::sqrt(kPi));
  EXPECT_NEAR(q1, std::sqrt(kPi), 0.05);
  EXPECT_LT(z1.real(), -0.5);
  EXPECT_GT(z0.real(), 0.5);
}

TEST(RawCodeword, Errors) {
  EXPECT_THROW(raw_codeword(0.0, 0, 40), Error);
  EXPECT_THROW(raw_codeword(1.6, 0, 40), Error);
  EXPECT_THROW(raw_codeword(0.5, 2, 40), Error);
  try {
    raw_codeword(0.1, 0, 20);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CutoffTooSmall);
  }
}

TEST(Gram, OrthogonalInputsGiveIdentity) {
  const Eigen::Matrix2cd g = gram_matrix(fock_state(0, 4), fock_state(1, 4));
  EXPECT_LT((g - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Gram, HermitianAndApproachesOrthogonality) {
  auto overlap = [](double delta) {
    const int dim = 160;
    const Eigen::Matrix2cd g =
        gram_matrix(raw_codeword(delta, 0, dim).state, raw_codeword(delta, 1, dim).state);
    EXPECT_EQ(g(1, 0), std::conj(g(0, 1)));
    EXPECT_NEAR(g(0, 0).real(), 1.0, 1e-12);
    return std::abs(g(0, 1));
  };
  EXPECT_LT(overlap(0.2), overlap(0.6));
}

TEST(Gram, CollinearInputsRejected) {
  const CVector v = fock_state(0, 4);
  try {
    gram_matrix(v, v);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CodewordsCollinear);
  }
}

TEST(Lowdin, IdentityGramLeavesInputs) {
  const CVector a = fock_state(2, 6), b = fock_state(3, 6);
  const auto [p0, p1] = lowdin_orthonormalize(a, b, Eigen::Matrix2cd::Identity());
  EXPECT_LT((p0 - a).norm(), 1e-15);
  EXPECT_LT((p1 - b).norm(), 1e-15);
}

TEST(Lowdin, OrthonormalAndSpanPreserving) {
  const int dim = 120;
  const CVector r0 = raw_codeword(0.35, 0, dim).state;
  const CVector r1 = raw_codeword(0.35, 1, dim).state;
  const auto [p0, p1] = lowdin_orthonormalize(r0, r1, gram_matrix(r0, r1));
  EXPECT_LT(std::abs(p0.dot(p1)), 1e-10);
  EXPECT_NEAR(p0.norm(), 1.0, 1e-10);
  EXPECT_NEAR(p1.norm(), 1.0, 1e-10);

  CMatrix raw(dim, 2);
  raw << r0, r1;
  const Eigen::HouseholderQR<CMatrix> qr(raw);
  const CMatrix q = qr.householderQ() * CMatrix::Identity(dim, 2);
  CMatrix e(dim, 2);
  e << p0, p1;
  EXPECT_LT(max_abs(q * q.adjoint() - e * e.adjoint()), 1e-9);
}

TEST(MeanPhoton, ProjectorExamples) {
  const int dim = 8;
  auto proj = [&](int a, int b) {
    return FockMatrix::outer(fock_state(a, dim), fock_state(a, dim)) +
           FockMatrix::outer(fock_state(b, dim), fock_state(b, dim));
  };
  EXPECT_DOUBLE_EQ(mean_photon_of_projector(proj(0, 1)), 0.5);
  EXPECT_DOUBLE_EQ(mean_photon_of_projector(proj(2, 4)), 3.0);
}

TEST(MeanPhoton, TracksEnvelopeFormula) {
  // The coherent-state sum carries a quarter photon above the envelope
  // formula, so the relative gap closes as the envelope narrows.
  double prev_rel = INFINITY;
  for (double delta : {0.35, 0.25, 0.15}) {
    const GkpCode code = GkpCode::build(delta, 300);
    const double n_delta = envelope_photon_number(delta);
    EXPECT_NEAR(code.nbar() - n_delta, 0.25, 0.01) << delta;
    const double rel = (code.nbar() - n_delta) / n_delta;
    EXPECT_LT(rel, prev_rel);
    prev_rel = rel;
    EXPECT_NEAR(mean_photon_of_projector(code.projector()), code.nbar(), 1e-12);
  }
  EXPECT_NEAR(envelope_photon_number(0.35), 3.602, 1e-3);
}

TEST(Envelope, InitialGuessInvertsEnvelope) {
  for (double n : {1.0, 4.0, 30.0}) {
    const double d = initial_delta_guess(n);
    EXPECT_NEAR(d, std::sqrt(0.5 * std::log(1.0 + 1.0 / n)), 1e-15);
    EXPECT_NEAR(envelope_photon_number(d), n, 1e-10 * n);
  }
}

TEST(Cutoff, DefaultRule) {
  EXPECT_EQ(default_cutoff(1.0), 80);
  EXPECT_EQ(default_cutoff(30.0), 460);
  EXPECT_LE(default_cutoff(200.0), kMaxDim);
}

TEST(Calibrate, HitsTarget) {
  const GkpCode code = calibrate_code(4.0);
  EXPECT_NEAR(code.nbar(), 4.0, 4e-6);
  EXPECT_DOUBLE_EQ(code.target_nbar(), 4.0);
  const CodeSummary s = summarize(code);
  EXPECT_EQ(s.dim, code.dim());
  EXPECT_DOUBLE_EQ(s.realized_nbar, code.nbar());
  EXPECT_GT(s.lattice_terms_retained, 1);
  EXPECT_LT(s.truncated_weight, kMaxTruncatedWeight);
}

TEST(Calibrate, NarrowerEnvelopeForMoreEnergy) {
  EXPECT_LT(calibrate_code(10.0).delta(), calibrate_code(2.0).delta());
}

TEST(Calibrate, RejectsOutOfRangeTargets) {
  EXPECT_THROW(calibrate_code(0.4), Error);
  EXPECT_THROW(calibrate_code(250.0), Error);
}

TEST(Calibrate, EnergyBelowEnvelopeFloorIsUnreachable) {
  // The realised energy has a minimum near 1.04 photons, so 1 photon cannot
  // be produced by any envelope width.
  try {
    calibrate_code(1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CalibrationFailed);
  }
}

TEST(Calibrate, ReachesLowEnergyOnDecreasingBranch) {
  const GkpCode code = calibrate_code(1.2);
  EXPECT_NEAR(code.nbar(), 1.2, 1e-6 * 1.2);
  EXPECT_LT(code.delta(), 1.0);
}

TEST(CodeInvariants, IsometryAndProjector) {
  for (double n : {2.0, 6.0, 15.0, 30.0}) {
    const GkpCode code = calibrate_code(n);
    const CMatrix& e = code.isometry();
    EXPECT_LT(max_abs(e.adjoint() * e - CMatrix::Identity(2, 2)), 1e-10) << n;
    const CMatrix& p = code.projector().matrix();
    EXPECT_LT(max_abs(p * p - p), 1e-9) << n;
    EXPECT_LT(hermitian_defect(p), 1e-12) << n;
    EXPECT_NEAR(p.trace().real(), 2.0, 1e-8) << n;
  }
}

TEST(CodeInvariants, EnergyDecreasesWithEnvelopeWidth) {
  double prev = INFINITY;
  for (int k = 0; k < 10; ++k) {
    const double delta = 0.2 + 0.075 * k;
    const double n = GkpCode::build(delta, 200).nbar();
    EXPECT_LT(n, prev) << delta;
    prev = n;
  }
}

TEST(CodeInvariants, ApproximatelyStabilised) {
  for (double n : {8.0, 15.0}) {
    const GkpCode code = calibrate_code(n);
    const int dim = code.dim();
    const CMatrix sq = displacement(cplx(std::sqrt(2.0 * kPi), 0.0), dim).matrix();
    const CMatrix sp = displacement(cplx(0.0, std::sqrt(2.0 * kPi)), dim).matrix();
    for (const CVector* phi : {&code.phi0(), &code.phi1()}) {
      EXPECT_GT(expect(*phi, sq).real(), 0.8) << n;
      EXPECT_GT(expect(*phi, sp).real(), 0.8) << n;
    }
  }
}

TEST(CodeInvariants, LogicalPaulisActAsDisplacements) {
  const GkpCode code = calibrate_code(10.0);
  const int dim = code.dim();
  const CMatrix z = displacement(cplx(0.0, std::sqrt(kPi / 2.0)), dim).matrix();
  const CMatrix x = displacement(cplx(std::sqrt(kPi / 2.0), 0.0), dim).matrix();
  const CMatrix& e = code.isometry();
  const CMatrix zl = e.adjoint() * z * e;
  const CMatrix xl = e.adjoint() * x * e;
  EXPECT_GT(zl(0, 0).real(), 0.9);
  EXPECT_LT(zl(1, 1).real(), -0.9);
  EXPECT_GT(xl(0, 1).real(), 0.9);
  EXPECT_GT(xl(1, 0).real(), 0.9);
}

}  // namespace
}  // namespace gkpzne
