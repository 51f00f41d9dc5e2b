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

#include "gkpzne/two_qubit.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <random>

namespace gkpzne {

namespace {

constexpr std::array<std::pair<Pauli, Pauli>, 3> kCoherenceSet{
    {{Pauli::X, Pauli::X}, {Pauli::Y, Pauli::Y}, {Pauli::Z, Pauli::Z}}};

Pauli pauli_at(int k) { return static_cast<Pauli>(k); }

// Looks up `key`, or claims it and computes the value outside the lock.
template <class Map, class Key, class Fn>
auto memoize(std::mutex& mutex, Map& map, const Key& key, Fn&& compute) {
  using Value = typename Map::mapped_type;
  std::promise<typename std::decay_t<decltype(std::declval<Value>().get())>> promise;
  Value future;
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = map.find(key);
    if (it != map.end()) return it->second.get();
    future = promise.get_future().share();
    map.emplace(key, future);
  }
  try {
    promise.set_value(compute());
  } catch (...) {
    promise.set_exception(std::current_exception());
  }
  return future.get();
}

}  // namespace

Block4 pauli_product(Pauli a, Pauli b) {
  const Block2 pa = pauli_matrix(a);
  const Block2 pb = pauli_matrix(b);
  Block4 out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      out.block<2, 2>(2 * i, 2 * j) = pa(i, j) * pb;
    }
  }
  return out;
}

PauliCoeffs pauli_coeffs(const Block4& rho) {
  if (!rho.allFinite() || hermitian_defect(rho) > kHermitianTol) {
    throw Error(ErrorKind::Validation, "two-qubit state is not Hermitian");
  }
  if (std::abs(rho.trace() - cplx(1.0)) > 1e-9) {
    throw Error(ErrorKind::Validation, "two-qubit state must have unit trace");
  }
  Eigen::SelfAdjointEigenSolver<Block4> es(Block4(0.5 * (rho + rho.adjoint())),
                                           Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-9) {
    throw Error(ErrorKind::Validation, "two-qubit state is not PSD");
  }
  PauliCoeffs out;
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      const cplx v = (pauli_product(pauli_at(mu), pauli_at(nu)) * rho).trace();
      if (std::abs(v.imag()) > 1e-10) {
        throw Error(ErrorKind::Validation, "Pauli coefficient has imaginary part");
      }
      out.a(mu, nu) = v.real();
    }
  }
  return out;
}

Block4 reconstruct(const PauliCoeffs& coeffs) {
  Block4 out = Block4::Zero();
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      out += 0.25 * coeffs.a(mu, nu) * pauli_product(pauli_at(mu), pauli_at(nu));
    }
  }
  return out;
}

Expectation product_expectation(const PauliCoeffs& coeffs, const Ptm& chi_a,
                                const Ptm& chi_b, Pauli a, Pauli b) {
  auto contract = [&](int i, int j) {
    double s = 0.0;
    for (int mu = 0; mu < 4; ++mu) {
      for (int nu = 0; nu < 4; ++nu) {
        s += coeffs.a(mu, nu) * chi_a.chi(i, mu) * chi_b.chi(j, nu);
      }
    }
    return s;
  };
  return make_expectation(contract(static_cast<int>(a), static_cast<int>(b)),
                          contract(0, 0));
}

Block4 bell_phi_plus() {
  Eigen::Vector4cd v(1.0, 0.0, 0.0, 1.0);
  v /= std::sqrt(2.0);
  return v * v.adjoint();
}

Block4 haar_random_state(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::Vector4cd v;
  for (int k = 0; k < 4; ++k) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(k) = cplx(re, im);
  }
  v.normalize();
  return v * v.adjoint();
}

Response compute_response(double nbar, double x, const ResponseOptions& options) {
  const GkpCode code = calibrate_code(nbar, options.dim, options.code);
  const KrausSet loss = loss_kraus_from_depth(x, code.dim());
  const KrausSet recovery = petz_recovery(loss, code, options.epsilon);
  return {single_qubit_ptm(code, loss, recovery), summarize(code)};
}

ResponseCache::ResponseCache(ResponseOptions options) : options_(std::move(options)) {}

std::shared_ptr<const GkpCode> ResponseCache::code(double nbar) {
  return memoize(mutex_, codes_, nbar, [&] {
    return std::make_shared<const GkpCode>(
        calibrate_code(nbar, options_.dim, options_.code));
  });
}

Response ResponseCache::response(double nbar, double x) {
  return memoize(mutex_, responses_, std::make_pair(nbar, x), [&] {
    const auto c = code(nbar);
    const KrausSet loss = loss_kraus_from_depth(x, c->dim());
    const KrausSet recovery = petz_recovery(loss, *c, options_.epsilon);
    return Response{single_qubit_ptm(*c, loss, recovery), summarize(*c)};
  });
}

std::size_t ResponseCache::ptm_evaluations() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return responses_.size();
}

CoherenceResult coherence_error(int trials, const EnergySchedule& schedule, double x,
                                std::uint64_t seed0, ResponseCache& cache) {
  if (trials < 1) throw Error(ErrorKind::Parameter, "coherence error needs trials >= 1");
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw Error(ErrorKind::Parameter, "loss depth must be finite and >= 0");
  }
  std::vector<PauliCoeffs> states;
  states.reserve(static_cast<std::size_t>(trials));
  for (int i = 0; i < trials; ++i) {
    states.push_back(pauli_coeffs(haar_random_state(seed0 + static_cast<std::uint64_t>(i))));
  }
  CoherenceResult out;
  for (double nbar : schedule.points()) {
    const Ptm noisy = cache.response(nbar, x).ptm;
    const Ptm ideal = cache.response(nbar, 0.0).ptm;
    CoherencePoint point{nbar, x, 0.0, 0, 0};
    double total = 0.0;
    for (int i = 0; i < trials; ++i) {
      const auto& a = states[static_cast<std::size_t>(i)];
      double err = 0.0;
      bool defined = true;
      for (const auto& [pa, pb] : kCoherenceSet) {
        const Expectation e = product_expectation(a, noisy, noisy, pa, pb);
        const Expectation r = product_expectation(a, ideal, ideal, pa, pb);
        out.records.push_back({i, seed0 + static_cast<std::uint64_t>(i), nbar, x,
                               std::string(to_string(pa)) + to_string(pb), e.leak,
                               e.conditional, r.conditional});
        if (!e.conditional || !r.conditional) {
          defined = false;
        } else {
          err += std::abs(*e.conditional - *r.conditional);
        }
      }
      if (defined) {
        total += err / kCoherenceSet.size();
        ++point.used_trials;
      } else {
        ++point.excluded_trials;
      }
    }
    point.mean_delta_e = point.used_trials > 0
                             ? total / point.used_trials
                             : std::numeric_limits<double>::quiet_NaN();
    out.points.push_back(point);
  }
  return out;
}

}  // namespace gkpzne
