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
#include <map>
#include <memory>
#include <random>

#include "gkpzne/pipeline.hpp"

namespace gkpzne {
namespace {

// One calibrated code and its channels per (nbar, x), shared across tests.
struct Cell {
  std::shared_ptr<GkpCode> code;
  std::shared_ptr<KrausSet> loss;
  std::shared_ptr<KrausSet> recovery;
};

const Cell& cell(double nbar, double x) {
  static std::map<double, std::shared_ptr<GkpCode>> codes;
  static std::map<std::pair<double, double>, Cell> cells;
  auto it = cells.find({nbar, x});
  if (it != cells.end()) return it->second;
  auto& code = codes[nbar];
  if (!code) code = std::make_shared<GkpCode>(calibrate_code(nbar));
  auto loss = std::make_shared<KrausSet>(loss_kraus_from_depth(x, code->dim()));
  auto rec = std::make_shared<KrausSet>(petz_recovery(*loss, *code));
  return cells[{nbar, x}] = Cell{code, loss, rec};
}

LogicalDensity run(const Block2& rho, double nbar, double x) {
  const Cell& c = cell(nbar, x);
  return run_pipeline(LogicalDensity(rho), *c.code, *c.loss, *c.recovery);
}

double cond_x(double nbar, double x) {
  return *expectations(run(LogicalDensity::from_label("+").block(), nbar, x), Pauli::X)
              .conditional;
}

Block2 random_logical(unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::Matrix2cd m;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) m(i, j) = cplx(g(rng), g(rng));
  }
  Block2 rho = m * m.adjoint();
  return rho / rho.trace();
}

double max_abs2(const Block2& a) { return a.cwiseAbs().maxCoeff(); }

TEST(Pauli, MatricesAndLabels) {
  EXPECT_EQ(pauli_matrix(Pauli::Y)(0, 1), cplx(0.0, -1.0));
  EXPECT_EQ(parse_pauli("x"), Pauli::X);
  EXPECT_EQ(parse_pauli("Z"), Pauli::Z);
  EXPECT_FALSE(parse_pauli("Q").has_value());
  EXPECT_STREQ(to_string(Pauli::Y), "Y");
}

TEST(LogicalDensity, NamedStates) {
  EXPECT_NEAR(LogicalDensity::from_label("+").block()(0, 1).real(), 0.5, 1e-15);
  EXPECT_NEAR(LogicalDensity::from_label("-i").block()(0, 1).imag(), 0.5, 1e-15);
  EXPECT_NEAR(LogicalDensity::from_label("1").block()(1, 1).real(), 1.0, 1e-15);
  EXPECT_NEAR(LogicalDensity::from_label("mixed").weight(), 1.0, 1e-15);
  EXPECT_THROW(LogicalDensity::from_label("2"), Error);
}

TEST(LogicalDensity, Validation) {
  Block2 b = Block2::Zero();
  b(0, 1) = 0.3;
  EXPECT_THROW(LogicalDensity{b}, Error);
  b = Block2::Zero();
  b(0, 0) = 1.2;
  EXPECT_THROW(LogicalDensity{b}, Error);
  b(0, 0) = -0.1;
  EXPECT_THROW(LogicalDensity{b}, Error);
}

TEST(LogicalDensity, ClippingOnlyInReports) {
  Block2 b = Block2::Zero();
  b(0, 0) = 0.6;
  b(1, 1) = -5e-10;
  const LogicalDensity rho(b);
  EXPECT_DOUBLE_EQ(rho.block()(1, 1).real(), -5e-10);
  const Block2 c = rho.clipped_block();
  EXPECT_GE(c.selfadjointView<Eigen::Lower>().eigenvalues().minCoeff(), 0.0);
  EXPECT_NEAR(c.trace().real(), rho.weight(), 1e-15);
}

TEST(Expectations, ScaledPlusState) {
  const Block2 b = 0.45 * (Block2::Identity() + pauli_matrix(Pauli::X));
  const Expectation e = expectations(LogicalDensity(b), Pauli::X);
  EXPECT_NEAR(e.leak, 0.9, 1e-15);
  EXPECT_NEAR(*e.conditional, 1.0, 1e-15);
  EXPECT_NEAR(e.weight, 0.9, 1e-15);
}

TEST(Expectations, MixedStateIsUnbiased) {
  const LogicalDensity rho(0.5 * Block2::Identity());
  for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
    const Expectation e = expectations(rho, p);
    EXPECT_NEAR(e.leak, 0.0, 1e-15);
    EXPECT_NEAR(*e.conditional, 0.0, 1e-15);
  }
}

TEST(Expectations, UndefinedConditionalAndBounds) {
  const Expectation e = make_expectation(0.0, 1e-13);
  EXPECT_FALSE(e.conditional.has_value());
  try {
    make_expectation(0.5, 0.4);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::PhysicalBounds);
  }
  EXPECT_THROW(make_expectation(0.1, 1.1), Error);
  EXPECT_NO_THROW(make_expectation(0.4 + 1e-9, 0.4));
}

TEST(Pipeline, TransparentChannelIsIdentity) {
  for (const char* label : {"0", "1", "+", "-", "+i", "-i", "mixed"}) {
    const Block2 in = LogicalDensity::from_label(label).block();
    const LogicalDensity out = run(in, 6.0, 0.0);
    EXPECT_LT(max_abs2(out.block() - in), 1e-10) << label;
    EXPECT_NEAR(out.weight(), 1.0, 1e-10);
  }
}

TEST(Pipeline, PlusStateAtHighEnergy) {
  EXPECT_NEAR(cond_x(30.0, 0.2), 0.9988, 2e-3);
}

TEST(Pipeline, MixedInputStaysMixed) {
  const LogicalDensity out = run(0.5 * Block2::Identity(), 6.0, 0.2);
  const Block2& b = out.block();
  EXPECT_LT(std::abs(b(0, 1)), 1e-6);
  EXPECT_NEAR(b(0, 0).real(), b(1, 1).real(), 1e-6);
}

TEST(Pipeline, RejectsTraceDeficientInput) {
  const Cell& c = cell(6.0, 0.2);
  EXPECT_THROW(
      run_pipeline(LogicalDensity(0.4 * Block2::Identity()), *c.code, *c.loss, *c.recovery),
      Error);
}

TEST(Pipeline, DeepLossStillImprovesWithEnergyBelowThreshold) {
  const double c10 = cond_x(10.0, 0.4);
  EXPECT_GT(c10, 0.8);
  EXPECT_LT(c10, 1.0);
  EXPECT_GT(c10, cond_x(4.0, 0.4));
}

TEST(Pipeline, Linearity) {
  const Block2 r1 = random_logical(1), r2 = random_logical(2);
  const Block2 o1 = run(r1, 6.0, 0.3).block();
  const Block2 o2 = run(r2, 6.0, 0.3).block();
  for (double a : {0.3, 0.7}) {
    const Block2 mix = run(a * r1 + (1.0 - a) * r2, 6.0, 0.3).block();
    EXPECT_LT(max_abs2(mix - (a * o1 + (1.0 - a) * o2)), 1e-9) << a;
  }
}

TEST(Pipeline, MonotoneDegradationInDepth) {
  double prev = 1.0 + 1e-12;
  for (double x : {0.1, 0.2, 0.3, 0.4}) {
    const double v = cond_x(10.0, x);
    EXPECT_LT(v, prev) << x;
    prev = v;
  }
}

TEST(Pipeline, ImprovesWithEnergyAtModerateDepth) {
  double prev = -1.0;
  for (double n : {2.0, 4.0, 8.0, 16.0}) {
    const double v = cond_x(n, 0.2);
    EXPECT_GE(v, prev) << n;
    prev = v;
  }
}

TEST(Ptm, TransparentChannelIsIdentity) {
  const Cell& c = cell(6.0, 0.0);
  const Ptm ptm = single_qubit_ptm(*c.code, *c.loss, *c.recovery);
  EXPECT_LT((ptm.chi - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_DOUBLE_EQ(ptm.eta, 1.0);
}

TEST(Ptm, SurvivalEntryMatchesMixedWeight) {
  const Cell& c = cell(8.0, 0.2);
  const Ptm ptm = single_qubit_ptm(*c.code, *c.loss, *c.recovery);
  EXPECT_NEAR(ptm.chi(0, 0), run(0.5 * Block2::Identity(), 8.0, 0.2).weight(), 1e-12);
  EXPECT_LE(ptm.chi.cwiseAbs().maxCoeff(), 1.0 + 1e-8);
  EXPECT_NEAR(ptm.nbar, c.code->nbar(), 1e-12);
}

TEST(Ptm, ReconstructsPipelineOnRandomStates) {
  const Cell& c = cell(4.0, 0.3);
  ASSERT_EQ(c.code->dim(), 96);
  const Ptm ptm = single_qubit_ptm(*c.code, *c.loss, *c.recovery);
  for (unsigned seed : {5u, 6u, 7u}) {
    const Block2 rho = random_logical(seed);
    EXPECT_LT(max_abs2(apply_ptm(ptm, rho) - run(rho, 4.0, 0.3).block()), 1e-9) << seed;
  }
}

TEST(Ptm, PropagateIsTheLinearMap) {
  const Cell& c = cell(4.0, 0.3);
  const Block2 rho = random_logical(8);
  EXPECT_LT(max_abs2(propagate(rho, *c.code, *c.loss, *c.recovery) - run(rho, 4.0, 0.3).block()),
            1e-12);
}

}  // namespace
}  // namespace gkpzne
