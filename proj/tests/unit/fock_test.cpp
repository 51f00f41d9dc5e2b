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
#include <random>
#include <sstream>

#include "gkpzne/fock.hpp"
#include "gkpzne/wigner.hpp"

namespace gkpzne {
namespace {

constexpr double kPi = std::numbers::pi;

CMatrix random_matrix(int dim, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  CMatrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) m(i, j) = cplx(g(rng), g(rng));
  }
  return m;
}

TEST(FockMatrix, RejectsBadCutoffs) {
  EXPECT_THROW(FockMatrix::identity(1), Error);
  EXPECT_THROW(FockMatrix::identity(kMaxDim + 1), Error);
  EXPECT_THROW(FockMatrix(CMatrix::Zero(3, 4)), Error);
}

TEST(FockMatrix, MismatchedDimensionsThrow) {
  try {
    (void)(FockMatrix::identity(4) + FockMatrix::identity(5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
}

TEST(Ladder, CommutatorIsIdentityBelowTopLevel) {
  const int dim = 20;
  const CMatrix a = annihilation(dim).matrix();
  const CMatrix comm = a * a.adjoint() - a.adjoint() * a;
  EXPECT_LT(max_abs(comm.topLeftCorner(dim - 1, dim - 1) -
                    CMatrix::Identity(dim - 1, dim - 1)),
            1e-14);
}

TEST(Ladder, NumberAndParity) {
  const FockMatrix n = number_operator(6);
  const FockMatrix p = parity_operator(6);
  EXPECT_DOUBLE_EQ(n(4, 4).real(), 4.0);
  EXPECT_DOUBLE_EQ(p(3, 3).real(), -1.0);
  EXPECT_DOUBLE_EQ(p(2, 2).real(), 1.0);
}

TEST(Coherent, Vacuum) {
  const CVector v = coherent_state(0.0, 16);
  EXPECT_DOUBLE_EQ(v(0).real(), 1.0);
  EXPECT_DOUBLE_EQ(v.tail(15).norm(), 0.0);
}

TEST(Coherent, ClosedFormComponent) {
  const CVector v = coherent_state(1.0, 32);
  EXPECT_NEAR(v(2).real(), 0.4288819, 1e-7);
}

TEST(Coherent, MeanPhotonNumber) {
  const CVector v = coherent_state(2.0, 64);
  const double n = (v.adjoint() * number_operator(64).matrix() * v)(0, 0).real();
  EXPECT_NEAR(n, 4.0, 1e-9);
}

TEST(Coherent, TailRuleEnforced) {
  EXPECT_THROW(coherent_state(5.0, 20), Error);
  EXPECT_EQ(coherent_cutoff(0.0), 10);
}

TEST(Displacement, IsUnitary) {
  const CMatrix d = displacement(cplx(0.7, -0.3), 40).matrix();
  EXPECT_LT(max_abs(d * d.adjoint() - CMatrix::Identity(40, 40)), 1e-12);
}

TEST(Displacement, CompositionLaw) {
  const int dim = 160;
  const cplx alpha(1.2, 0.5), beta(-0.8, 1.1);
  const CMatrix lhs = displacement(alpha, dim).matrix() * displacement(beta, dim).matrix();
  const cplx phase = std::exp(0.5 * (alpha * std::conj(beta) - std::conj(alpha) * beta));
  const CMatrix rhs = phase * displacement(alpha + beta, dim).matrix();
  // Compare on the low-lying block where truncation does not reach.
  EXPECT_LT(max_abs((lhs - rhs).topLeftCorner(60, 60)), 1e-8);
}

TEST(Displacement, MapsVacuumToCoherentState) {
  const cplx alpha(1.0, 0.5);
  const CVector v = displacement(alpha, 80).matrix().col(0);
  EXPECT_LT((v - coherent_state(alpha, 80)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(PsdInvSqrt, Identity) {
  EXPECT_LT(max_abs(psd_inv_sqrt(CMatrix::Identity(5, 5), 0.0) - CMatrix::Identity(5, 5)),
            1e-14);
}

TEST(PsdInvSqrt, PseudoInverseOnSupport) {
  CMatrix h = CMatrix::Zero(2, 2);
  h(0, 0) = 4.0;
  const CMatrix r = psd_inv_sqrt(h, 0.0);
  EXPECT_NEAR(r(0, 0).real(), 0.5, 1e-14);
  EXPECT_NEAR(std::abs(r(1, 1)), 0.0, 1e-14);
}

TEST(PsdInvSqrt, RandomLowRankGivesSupportProjector) {
  const CMatrix m = random_matrix(16, 7).topRows(9);
  const CMatrix h = m.adjoint() * m;
  const CMatrix s = psd_inv_sqrt(h, 0.0);
  EXPECT_LT(max_abs(s * h * s - support_projector(h)), 1e-8);
  const CMatrix p = support_projector(h);
  EXPECT_NEAR(p.trace().real(), 9.0, 1e-9);
}

TEST(PsdInvSqrt, RegularisedSquareInvertsShiftedMatrix) {
  const CMatrix m = random_matrix(12, 3);
  const CMatrix h = m.adjoint() * m;
  const double eps = 1e-3;
  const CMatrix s = psd_inv_sqrt(h, eps);
  const CMatrix shifted = h + eps * CMatrix::Identity(12, 12);
  EXPECT_LT(max_abs(s * s * shifted - CMatrix::Identity(12, 12)), 1e-8);
}

TEST(PsdInvSqrt, RelativeVariantMatchesAbsolute) {
  const CMatrix m = random_matrix(10, 4);
  const CMatrix h = m.adjoint() * m;
  double top = 0.0;
  const CMatrix rel = psd_inv_sqrt_relative(h, 1e-6, &top);
  EXPECT_NEAR(top, max_eigenvalue(h), 1e-9 * top);
  EXPECT_LT(max_abs(rel - psd_inv_sqrt(h, 1e-6 * top)), 1e-10);
}

TEST(PsdInvSqrt, Errors) {
  CMatrix nh = CMatrix::Identity(3, 3);
  nh(0, 1) = 1.0;
  try {
    psd_inv_sqrt(nh, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotHermitian);
  }
  CMatrix neg = CMatrix::Identity(3, 3);
  neg(2, 2) = -0.5;
  try {
    psd_inv_sqrt(neg, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotPsd);
  }
  EXPECT_THROW(psd_inv_sqrt(CMatrix::Identity(3, 3), -1.0), Error);
}

TEST(Wigner, VacuumPeak) {
  const FockMatrix vac = FockMatrix::outer(fock_state(0, 8), fock_state(0, 8));
  const WignerGrid g = wigner(vac, {0.0, 0.0, 1}, {0.0, 0.0, 1});
  EXPECT_NEAR(g.values(0, 0), 1.0 / kPi, 1e-12);
}

TEST(Wigner, SinglePhotonOrigin) {
  const FockMatrix one = FockMatrix::outer(fock_state(1, 8), fock_state(1, 8));
  const WignerGrid g = wigner(one, {0.0, 0.0, 1}, {0.0, 0.0, 1});
  EXPECT_NEAR(g.values(0, 0), -1.0 / kPi, 1e-12);
}

TEST(Wigner, VacuumIntegratesToOne) {
  const FockMatrix vac = FockMatrix::outer(fock_state(0, 8), fock_state(0, 8));
  const WignerGrid g = wigner(vac, {-5.0, 5.0, 201}, {-5.0, 5.0, 201}, 1.0);
  EXPECT_NEAR(integrate(g), 1.0, 1e-3);
}

TEST(Wigner, CoherentStateIsDisplacedGaussian) {
  const cplx alpha(1.0, -0.5);
  const CVector v = coherent_state(alpha, 40);
  const double q0 = std::sqrt(2.0) * alpha.real();
  const double p0 = std::sqrt(2.0) * alpha.imag();
  const WignerGrid g =
      wigner(FockMatrix::outer(v, v), {q0 + 0.3, q0 + 0.3, 1}, {p0, p0, 1});
  EXPECT_NEAR(g.values(0, 0), std::exp(-0.09) / kPi, 1e-9);
}

TEST(Wigner, RejectsWeightMismatch) {
  const FockMatrix vac = FockMatrix::outer(fock_state(0, 8), fock_state(0, 8));
  EXPECT_THROW(wigner(vac, {}, {}, 0.5), Error);
}

TEST(Wigner, CsvLayout) {
  const FockMatrix vac = FockMatrix::outer(fock_state(0, 4), fock_state(0, 4));
  const WignerGrid g = wigner(vac, {-1.0, 1.0, 2}, {0.0, 1.0, 3});
  std::ostringstream out;
  write_csv(out, g);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "q,p,w");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 6);
}

}  // namespace
}  // namespace gkpzne
