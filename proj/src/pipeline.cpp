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

#include "gkpzne/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

namespace gkpzne {

namespace {

constexpr double kInputPsdTol = 1e-9;

double min_eig2(const Block2& b) {
  Eigen::SelfAdjointEigenSolver<Block2> es(b, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Block2 hermitian_part(const Block2& b) { return 0.5 * (b + b.adjoint()); }

void check_dims(const GkpCode& code, const KrausSet& loss, const KrausSet& recovery) {
  require_same_dim(code.dim(), loss.dim(), "pipeline loss");
  require_same_dim(code.dim(), recovery.dim(), "pipeline recovery");
}

CMatrix encode(const Block2& op, const GkpCode& code) {
  const CMatrix& e = code.isometry();
  return e * op * e.adjoint();
}

// E^dagger R(X) E. For factored recovery sets R(X) = V M V^dagger, so only
// the small block M is formed; `inner` receives it for positivity checks.
Block2 recover_and_decode(const CMatrix& x, const GkpCode& code,
                          const KrausSet& recovery, CMatrix* inner) {
  const CMatrix& e = code.isometry();
  if (recovery.has_shared_left()) {
    CMatrix m = recovery.factored_image(x);
    const CMatrix b = e.adjoint() * recovery.shared_left();
    Block2 out = b * m * b.adjoint();
    if (inner) *inner = std::move(m);
    return out;
  }
  CMatrix rec = apply_channel(recovery, x);
  Block2 out = e.adjoint() * rec * e;
  if (inner) *inner = std::move(rec);
  return out;
}

}  // namespace

Block2 pauli_matrix(Pauli p) {
  const cplx i(0.0, 1.0);
  Block2 m;
  switch (p) {
    case Pauli::I: m << 1, 0, 0, 1; break;
    case Pauli::X: m << 0, 1, 1, 0; break;
    case Pauli::Y: m << 0, -i, i, 0; break;
    case Pauli::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

const char* to_string(Pauli p) {
  switch (p) {
    case Pauli::I: return "I";
    case Pauli::X: return "X";
    case Pauli::Y: return "Y";
    case Pauli::Z: return "Z";
  }
  return "?";
}

std::optional<Pauli> parse_pauli(std::string_view label) {
  if (label.size() != 1) return std::nullopt;
  switch (std::toupper(static_cast<unsigned char>(label[0]))) {
    case 'I': return Pauli::I;
    case 'X': return Pauli::X;
    case 'Y': return Pauli::Y;
    case 'Z': return Pauli::Z;
    default: return std::nullopt;
  }
}

LogicalDensity::LogicalDensity(const Block2& block) : block_(block) {
  if (!block.allFinite()) {
    throw Error(ErrorKind::Validation, "logical density: non-finite entries");
  }
  if (hermitian_defect(block) > kHermitianTol) {
    throw Error(ErrorKind::NotHermitian, "logical density is not Hermitian");
  }
  block_ = hermitian_part(block);
  weight_ = block_.trace().real();
  if (min_eig2(block_) < -kInputPsdTol) {
    throw Error(ErrorKind::NotPsd, "logical density has a negative eigenvalue");
  }
  if (weight_ > 1.0 + kInputPsdTol) {
    throw Error(ErrorKind::Validation, "logical density weight exceeds 1");
  }
}

LogicalDensity::LogicalDensity(const Block2& block, Trusted)
    : block_(block), weight_(block.trace().real()) {}

LogicalDensity LogicalDensity::from_label(std::string_view label) {
  const double r = 1.0 / std::sqrt(2.0);
  const cplx i(0.0, 1.0);
  Eigen::Vector2cd v;
  if (label == "0") {
    v << 1, 0;
  } else if (label == "1") {
    v << 0, 1;
  } else if (label == "+") {
    v << r, r;
  } else if (label == "-") {
    v << r, -r;
  } else if (label == "+i") {
    v << r, i * r;
  } else if (label == "-i") {
    v << r, -i * r;
  } else if (label == "mixed") {
    return LogicalDensity(Block2(0.5 * Block2::Identity()));
  } else {
    throw Error(ErrorKind::Parameter, "unknown logical state '" + std::string(label) + "'");
  }
  return LogicalDensity(Block2(v * v.adjoint()));
}

Block2 LogicalDensity::clipped_block() const {
  Eigen::SelfAdjointEigenSolver<Block2> es(block_);
  Eigen::Vector2d lambda = es.eigenvalues();
  for (Eigen::Index k = 0; k < 2; ++k) {
    if (lambda(k) < 0.0 && lambda(k) > -kInputPsdTol) lambda(k) = 0.0;
  }
  const double sum = lambda.sum();
  if (sum > 0.0) lambda *= weight_ / sum;
  return es.eigenvectors() * lambda.asDiagonal() * es.eigenvectors().adjoint();
}

Expectation make_expectation(double leak, double weight) {
  if (!std::isfinite(leak) || !std::isfinite(weight)) {
    throw Error(ErrorKind::NumericalInstability, "expectation is not finite");
  }
  if (weight < -kPhysicalTol || weight > 1.0 + kPhysicalTol) {
    throw Error(ErrorKind::PhysicalBounds, "survival weight " + std::to_string(weight));
  }
  Expectation out{leak, std::nullopt, weight};
  if (weight > kMinWeight) {
    const double cond = leak / weight;
    if (std::abs(cond) > 1.0 + kPhysicalTol) {
      throw Error(ErrorKind::PhysicalBounds,
                  "conditional expectation " + std::to_string(cond));
    }
    out.conditional = cond;
  }
  return out;
}

Expectation expectations(const LogicalDensity& rho, Pauli obs) {
  const double leak = (pauli_matrix(obs) * rho.block()).trace().real();
  return make_expectation(leak, rho.weight());
}

Block2 propagate(const Block2& op, const GkpCode& code, const KrausSet& loss,
                 const KrausSet& recovery) {
  check_dims(code, loss, recovery);
  const CMatrix noisy = apply_channel(loss, encode(op, code));
  return recover_and_decode(noisy, code, recovery, nullptr);
}

LogicalDensity run_pipeline(const LogicalDensity& rho, const GkpCode& code,
                            const KrausSet& loss, const KrausSet& recovery) {
  check_dims(code, loss, recovery);
  if (std::abs(rho.weight() - 1.0) > kInputPsdTol) {
    throw Error(ErrorKind::Validation, "pipeline input must have unit trace");
  }
  const CMatrix noisy = apply_channel(loss, encode(rho.block(), code));
  if (!is_psd_within(noisy, kPhysicalTol)) {
    throw Error(ErrorKind::NumericalInstability, "post-loss state is not PSD");
  }
  CMatrix inner;
  const Block2 out = hermitian_part(recover_and_decode(noisy, code, recovery, &inner));
  if (!is_psd_within(inner, kPhysicalTol)) {
    throw Error(ErrorKind::NumericalInstability, "recovered state is not PSD");
  }
  if (min_eig2(out) < -kPhysicalTol) {
    throw Error(ErrorKind::NumericalInstability, "decoded block is not PSD");
  }
  const double w = out.trace().real();
  if (w < -kPhysicalTol || w > 1.0 + kPhysicalTol) {
    throw Error(ErrorKind::PhysicalBounds, "survival weight " + std::to_string(w));
  }
  return LogicalDensity(out, LogicalDensity::Trusted{});
}

Ptm single_qubit_ptm(const GkpCode& code, const KrausSet& loss,
                     const KrausSet& recovery) {
  Ptm ptm;
  ptm.eta = loss.eta();
  ptm.nbar = code.nbar();
  for (int j = 0; j < 4; ++j) {
    const Block2 image =
        propagate(pauli_matrix(static_cast<Pauli>(j)), code, loss, recovery);
    for (int i = 0; i < 4; ++i) {
      const cplx v = 0.5 * (pauli_matrix(static_cast<Pauli>(i)) * image).trace();
      if (std::abs(v.imag()) > 1e-9) {
        throw Error(ErrorKind::NumericalInstability, "PTM entry has imaginary part");
      }
      if (std::abs(v.real()) > 1.0 + kPhysicalTol) {
        throw Error(ErrorKind::PhysicalBounds, "PTM entry exceeds 1");
      }
      ptm.chi(i, j) = v.real();
    }
  }
  return ptm;
}

Block2 apply_ptm(const Ptm& ptm, const Block2& rho) {
  Block2 out = Block2::Zero();
  for (int j = 0; j < 4; ++j) {
    const cplx r = (pauli_matrix(static_cast<Pauli>(j)) * rho).trace();
    for (int i = 0; i < 4; ++i) {
      out += 0.5 * r * ptm.chi(i, j) * pauli_matrix(static_cast<Pauli>(i));
    }
  }
  return out;
}

}  // namespace gkpzne
