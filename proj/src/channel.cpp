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

#include "gkpzne/channel.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace gkpzne {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

KrausOperator::KrausOperator(Rep rep, int dim)
    : rep_(std::move(rep)), dim_(dim), zero_(false) {
  zero_ = std::visit(
      Overloaded{
          [](const ShiftedDiagonal& s) { return s.coeffs.isZero(0.0); },
          [](const LowRank& l) {
            return l.left.isZero(0.0) || l.right.isZero(0.0);
          },
          [](const CMatrix& m) { return m.isZero(0.0); }},
      rep_);
}

KrausOperator KrausOperator::shifted_diagonal(int shift, CVector coeffs) {
  const int dim = static_cast<int>(coeffs.size());
  if (dim < 2 || dim > kMaxDim) {
    throw Error(ErrorKind::InvalidDimension, "kraus: dim " + std::to_string(dim));
  }
  if (shift < 0 || shift >= dim) {
    throw Error(ErrorKind::Parameter, "kraus: shift out of range");
  }
  // Entries below the shift would map off the truncated space.
  coeffs.head(shift).setZero();
  return KrausOperator(ShiftedDiagonal{shift, std::move(coeffs)}, dim);
}

KrausOperator KrausOperator::low_rank(CMatrix left, CMatrix right) {
  const int dim = static_cast<int>(left.rows());
  if (dim < 2 || dim > kMaxDim) {
    throw Error(ErrorKind::InvalidDimension, "kraus: dim " + std::to_string(dim));
  }
  if (right.rows() != left.rows() || right.cols() != left.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "kraus: low-rank factors differ");
  }
  return KrausOperator(LowRank{std::move(left), std::move(right)}, dim);
}

KrausOperator KrausOperator::dense(CMatrix entries) {
  const int dim = static_cast<int>(entries.rows());
  if (dim < 2 || dim > kMaxDim || entries.cols() != entries.rows()) {
    throw Error(ErrorKind::InvalidDimension, "kraus: bad dense operator");
  }
  return KrausOperator(std::move(entries), dim);
}

CMatrix KrausOperator::to_dense() const {
  return std::visit(
      Overloaded{[this](const ShiftedDiagonal& s) {
                   CMatrix k = CMatrix::Zero(dim_, dim_);
                   for (int n = s.shift; n < dim_; ++n) {
                     k(n - s.shift, n) = s.coeffs(n);
                   }
                   return k;
                 },
                 [](const LowRank& l) -> CMatrix {
                   return l.left * l.right.adjoint();
                 },
                 [](const CMatrix& m) { return m; }},
      rep_);
}

CMatrix KrausOperator::apply(const CMatrix& x) const {
  require_same_dim(dim_, static_cast<int>(x.rows()), "kraus apply");
  return std::visit(
      Overloaded{[&](const ShiftedDiagonal& s) {
                   const int m = dim_ - s.shift;
                   CMatrix out = CMatrix::Zero(dim_, x.cols());
                   out.topRows(m) = s.coeffs.tail(m).asDiagonal() * x.bottomRows(m);
                   return out;
                 },
                 [&](const LowRank& l) -> CMatrix {
                   return l.left * (l.right.adjoint() * x);
                 },
                 [&](const CMatrix& k) -> CMatrix { return k * x; }},
      rep_);
}

CMatrix KrausOperator::apply_adjoint(const CMatrix& x) const {
  require_same_dim(dim_, static_cast<int>(x.rows()), "kraus apply_adjoint");
  return std::visit(
      Overloaded{[&](const ShiftedDiagonal& s) {
                   const int m = dim_ - s.shift;
                   CMatrix out = CMatrix::Zero(dim_, x.cols());
                   out.bottomRows(m) =
                       s.coeffs.tail(m).conjugate().asDiagonal() * x.topRows(m);
                   return out;
                 },
                 [&](const LowRank& l) -> CMatrix {
                   return l.right * (l.left.adjoint() * x);
                 },
                 [&](const CMatrix& k) -> CMatrix { return k.adjoint() * x; }},
      rep_);
}

void KrausOperator::add_sandwich(const CMatrix& rho, CMatrix& out) const {
  if (zero_) return;
  std::visit(
      Overloaded{[&](const ShiftedDiagonal& s) {
                   const int m = dim_ - s.shift;
                   const auto c = s.coeffs.tail(m);
                   for (int j = 0; j < m; ++j) {
                     out.col(j).head(m) += std::conj(c(j)) *
                                           c.cwiseProduct(rho.col(j + s.shift).tail(m));
                   }
                 },
                 [&](const LowRank& l) {
                   const CMatrix inner = l.right.adjoint() * rho * l.right;
                   out.noalias() += l.left * inner * l.left.adjoint();
                 },
                 [&](const CMatrix& k) {
                   out.noalias() += k * rho * k.adjoint();
                 }},
      rep_);
}

void KrausOperator::add_adjoint_sandwich(const CMatrix& x, CMatrix& out) const {
  if (zero_) return;
  std::visit(
      Overloaded{[&](const ShiftedDiagonal& s) {
                   const int m = dim_ - s.shift;
                   const auto c = s.coeffs.tail(m);
                   for (int j = 0; j < m; ++j) {
                     out.col(j + s.shift).tail(m) +=
                         c(j) * c.conjugate().cwiseProduct(x.col(j).head(m));
                   }
                 },
                 [&](const LowRank& l) {
                   const CMatrix inner = l.left.adjoint() * x * l.left;
                   out.noalias() += l.right * inner * l.right.adjoint();
                 },
                 [&](const CMatrix& k) {
                   out.noalias() += k.adjoint() * x * k;
                 }},
      rep_);
}

void KrausOperator::add_gram(CMatrix& out) const {
  if (zero_) return;
  std::visit(
      Overloaded{[&](const ShiftedDiagonal& s) {
                   for (int n = s.shift; n < dim_; ++n) {
                     out(n, n) += std::norm(s.coeffs(n));
                   }
                 },
                 [&](const LowRank& l) {
                   const CMatrix inner = l.left.adjoint() * l.left;
                   out.noalias() += l.right * inner * l.right.adjoint();
                 },
                 [&](const CMatrix& k) { out.noalias() += k.adjoint() * k; }},
      rep_);
}

KrausSet::KrausSet(ChannelKind kind, int dim, std::vector<KrausOperator> ops,
                   double eta, double epsilon)
    : kind_(kind), dim_(dim), ops_(std::move(ops)), eta_(eta), epsilon_(epsilon) {
  if (dim < 2 || dim > kMaxDim) {
    throw Error(ErrorKind::InvalidDimension, "kraus set: dim " + std::to_string(dim));
  }
  for (const auto& op : ops_) {
    require_same_dim(dim_, op.dim(), "kraus set");
  }
}

double KrausSet::loss_depth() const { return -std::log(eta_); }

FockMatrix KrausSet::op(std::size_t i) const {
  return FockMatrix(ops_.at(i).to_dense());
}

FockMatrix KrausSet::completeness_operator() const {
  CMatrix sum = CMatrix::Zero(dim_, dim_);
  for (const auto& op : ops_) op.add_gram(sum);
  return FockMatrix(std::move(sum));
}

double KrausSet::completeness_defect() const {
  const CMatrix sum = completeness_operator().matrix();
  return max_abs(CMatrix::Identity(dim_, dim_) - sum);
}

CMatrix KrausSet::factored_image(const CMatrix& x) const {
  if (!has_shared_left()) {
    throw Error(ErrorKind::Parameter, "factored_image: no shared left factor");
  }
  require_same_dim(dim_, static_cast<int>(x.rows()), "factored_image");
  const Eigen::Index r = shared_left_.cols();
  const CMatrix y = x * right_stack_;
  CMatrix m = CMatrix::Zero(r, r);
  for (Eigen::Index k = 0; k < right_stack_.cols(); k += r) {
    m.noalias() += right_stack_.middleCols(k, r).adjoint() * y.middleCols(k, r);
  }
  return m;
}

KrausSet loss_kraus(double eta, int dim) {
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw Error(ErrorKind::Parameter, "loss: eta must lie in (0, 1]");
  }
  if (dim < 2 || dim > kMaxDim) {
    throw Error(ErrorKind::InvalidDimension, "loss: dim " + std::to_string(dim));
  }
  const double gamma = 1.0 - eta;
  const double log_eta = std::log(eta);
  const double log_gamma = gamma > 0.0 ? std::log(gamma) : 0.0;
  std::vector<KrausOperator> ops;
  ops.reserve(static_cast<std::size_t>(dim));
  for (int l = 0; l < dim; ++l) {
    CVector c = CVector::Zero(dim);
    if (l == 0 || gamma > 0.0) {
      for (int n = l; n < dim; ++n) {
        const double log_binom =
            std::lgamma(n + 1.0) - std::lgamma(l + 1.0) - std::lgamma(n - l + 1.0);
        c(n) = std::exp(0.5 * (log_binom + l * log_gamma + (n - l) * log_eta));
      }
    }
    ops.push_back(KrausOperator::shifted_diagonal(l, std::move(c)));
  }
  return KrausSet(ChannelKind::Loss, dim, std::move(ops), eta);
}

KrausSet loss_kraus_from_depth(double x, int dim) {
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw Error(ErrorKind::Parameter, "loss: depth must be finite and >= 0");
  }
  return loss_kraus(std::exp(-x), dim);
}

CMatrix apply_channel(const KrausSet& channel, const CMatrix& rho) {
  require_same_dim(channel.dim(), static_cast<int>(rho.rows()), "apply_channel");
  if (channel.has_shared_left()) {
    const CMatrix& left = channel.shared_left();
    return left * channel.factored_image(rho) * left.adjoint();
  }
  CMatrix out = CMatrix::Zero(channel.dim(), channel.dim());
  for (const auto& op : channel.ops()) op.add_sandwich(rho, out);
  return out;
}

FockMatrix apply_channel(const KrausSet& channel, const FockMatrix& rho) {
  return FockMatrix(apply_channel(channel, rho.matrix()));
}

FockMatrix apply_adjoint(const KrausSet& channel, const FockMatrix& x) {
  require_same_dim(channel.dim(), x.dim(), "apply_adjoint");
  CMatrix out = CMatrix::Zero(channel.dim(), channel.dim());
  for (const auto& op : channel.ops()) op.add_adjoint_sandwich(x.matrix(), out);
  return FockMatrix(std::move(out));
}

namespace {

// Columns [2l, 2l + 1] hold F_l = E_l E; N_L = sum_l F_l F_l^dagger.
CMatrix loss_images(const KrausSet& loss, const GkpCode& code) {
  require_same_dim(loss.dim(), code.dim(), "petz");
  const int dim = loss.dim();
  const Eigen::Index r = code.isometry().cols();
  CMatrix f(dim, r * static_cast<Eigen::Index>(loss.size()));
  Eigen::Index used = 0;
  for (const auto& op : loss.ops()) {
    if (op.is_zero()) continue;
    CMatrix block = op.apply(code.isometry());
    if (block.isZero(0.0)) continue;
    f.middleCols(used, r) = block;
    used += r;
  }
  f.conservativeResize(Eigen::NoChange, used);
  return f;
}

// U g(s) V^dagger for F = U s V^dagger, with g(s) = s / sqrt(s^2 + eps s_0^2),
// or the range projector onto s^2 > floor s_0^2 when eps = 0.
template <typename Svd = Eigen::BDCSVD<CMatrix>>
CMatrix regularized_polar(const CMatrix& f, double epsilon) {
  const Svd svd(f, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double top = s.size() > 0 ? s(0) * s(0) : 0.0;
  Eigen::VectorXd g(s.size());
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    const double l = s(k) * s(k);
    if (epsilon > 0.0) {
      g(k) = s(k) / std::sqrt(l + epsilon * top);
    } else {
      g(k) = (top > 0.0 && l > kSpectralFloor * top) ? 1.0 : 0.0;
    }
  }
  return svd.matrixU() * g.asDiagonal() * svd.matrixV().adjoint();
}

}  // namespace

FockMatrix noisy_codespace(const KrausSet& loss, const GkpCode& code) {
  const CMatrix f = loss_images(loss, code);
  CMatrix n_l = CMatrix::Zero(f.rows(), f.rows());
  n_l.selfadjointView<Eigen::Lower>().rankUpdate(f);
  n_l.triangularView<Eigen::StrictlyUpper>() = n_l.adjoint();
  return FockMatrix(std::move(n_l));
}

KrausSet petz_recovery(const KrausSet& loss, const GkpCode& code,
                       double epsilon) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorKind::Parameter, "petz: epsilon must be finite and >= 0");
  }
  // R_l = P_L E_l^dagger S = E (S F_l)^dagger since S is Hermitian. With
  // F = U s V^dagger, N_L = U s^2 U^dagger and S F = U g(s) V^dagger; the SVD
  // resolves small eigenvalues of N_L to relative precision, which squaring
  // into N_L would lose.
  const CMatrix images = loss_images(loss, code);
  CMatrix stack = regularized_polar(images, epsilon);
  if (!stack.allFinite()) stack = regularized_polar<Eigen::JacobiSVD<CMatrix>>(images, epsilon);
  if (!stack.allFinite()) {
    throw Error(ErrorKind::NumericalInstability, "petz: SVD of the loss images is not finite");
  }
  const Eigen::Index r = code.isometry().cols();
  std::vector<KrausOperator> ops;
  ops.reserve(static_cast<std::size_t>(stack.cols() / r));
  for (Eigen::Index k = 0; k < stack.cols(); k += r) {
    ops.push_back(KrausOperator::low_rank(code.isometry(), stack.middleCols(k, r)));
  }
  KrausSet out(ChannelKind::Petz, loss.dim(), std::move(ops), loss.eta(), epsilon);
  out.shared_left_ = code.isometry();
  out.right_stack_ = std::move(stack);
  return out;
}

}  // namespace gkpzne
