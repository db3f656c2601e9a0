// Copyright 2026 The dpsco Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dpsco/nsgd.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dpsco/losses.hpp"

namespace dpsco {

NsgdParams derive_nsgd_params(long n, int d, double epsilon, double delta,
                              double L, double M) {
  validate_budget(epsilon, delta, n);
  if (d < 1 || L <= 0.0 || M <= 0.0) {
    throw std::invalid_argument("derive_nsgd_params: need d >= 1, L > 0, M > 0");
  }
  const double nd = static_cast<double>(n);
  const double log_inv_delta = std::log(1.0 / delta);
  const double t_raw = std::min(nd / 8.0, epsilon * epsilon * nd * nd /
                                              (32.0 * d * log_inv_delta));
  NsgdParams p;
  p.iterations = std::max<long>(1, static_cast<long>(std::floor(t_raw)));
  const double t = static_cast<double>(p.iterations);
  p.batch_size =
      std::max<long>(1, static_cast<long>(std::floor(nd * std::sqrt(epsilon / (4.0 * t)))));
  p.sigma2 = 8.0 * t * L * L * log_inv_delta / (nd * nd * epsilon * epsilon);
  p.eta = M / (L * std::sqrt(t));
  return p;
}

bool check_nsgd_smoothness_precondition(const LossFamily& loss, long n, int d,
                                        double epsilon, double delta, double M) {
  if (!loss.smoothness.has_value()) {
    throw std::invalid_argument(
        "check_nsgd_smoothness_precondition: loss '" + loss.name +
        "' is non-smooth; run it through the Moreau-envelope pipeline (run_proxgd)");
  }
  const double nd = static_cast<double>(n);
  const double log_inv_delta = std::log(1.0 / delta);
  const double cap = (loss.lipschitz / M) *
                     std::min(std::sqrt(nd / 2.0),
                              epsilon * nd / (2.0 * std::sqrt(2.0 * d * log_inv_delta)));
  return loss.smoothness.value() <= cap;
}

namespace detail {

Vector noisy_sgd_loop(
    const std::function<Vector(const Vector&, const Example&)>& per_example_grad,
    const Dataset& S, const ConvexDomain& domain, const NsgdParams& params,
    const Vector& w0, const RngContext& rng) {
  const long n = S.size();
  const long m = params.batch_size;
  const long T = params.iterations;
  if (m < 1 || m > n) {
    throw std::invalid_argument("noisy_sgd_loop: batch size must be in [1, n]");
  }
  if (w0.size() != domain.center.size()) {
    throw std::invalid_argument("noisy_sgd_loop: w0 dimension mismatch");
  }
  if (!domain.contains(w0)) {
    throw std::invalid_argument("noisy_sgd_loop: w0 must lie in the domain");
  }

  Vector w = w0;
  Vector average = Vector::Zero(w.size());
  const double sigma2 = params.noise_override_off ? 0.0 : params.sigma2;
  for (long t = 0; t < T; ++t) {
    RngStream batch_stream = rng.stream(phase::kBatch, static_cast<uint64_t>(t));
    Vector grad = Vector::Zero(w.size());
    for (long j = 0; j < m; ++j) {
      const long idx = static_cast<long>(batch_stream.next_index(static_cast<uint64_t>(n)));
      grad += per_example_grad(w, S[idx]);
    }
    grad /= static_cast<double>(m);

    RngStream noise_stream = rng.stream(phase::kStepNoise, static_cast<uint64_t>(t));
    grad += sample_gaussian(static_cast<int>(w.size()), sigma2, noise_stream);

    w = project(domain, w - params.eta * grad);
    if (!w.allFinite()) {
      std::ostringstream msg;
      msg << "noisy_sgd_loop: non-finite iterate at step " << t;
      throw std::runtime_error(msg.str());
    }
    average += w;
  }
  return average / static_cast<double>(T);
}

}  // namespace detail

TrialResult run_nsgd(const LossFamily& loss, const Dataset& S,
                     const ConvexDomain& domain, const NsgdParams& params,
                     const Vector& w0, const RngContext& rng) {
  if (!loss.smoothness.has_value()) {
    throw std::invalid_argument(
        "run_nsgd: loss '" + loss.name + "' is non-smooth; use run_proxgd");
  }
  TrialResult result;
  result.output = detail::noisy_sgd_loop(loss.gradient, S, domain, params, w0, rng);
  result.grad_evals = params.iterations * params.batch_size;
  result.excess_emp =
      empirical_loss(loss, S, result.output) - empirical_minimum(loss, S, domain);
  result.root_seed = rng.root_seed;
  result.trial = rng.trial;
  result.non_private = params.noise_override_off;
  return result;
}

}  // namespace dpsco
