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

#include "dpsco/smoothing.hpp"

#include <cmath>
#include <stdexcept>

#include "dpsco/losses.hpp"

namespace dpsco {

SmoothingParams SmoothingParams::with_prox_cap(long cap) const {
  SmoothingParams p = *this;
  if (cap < p.prox_max_iters) {
    p.prox_max_iters = std::max<long>(1, cap);
    p.certified = false;
  }
  return p;
}

SmoothingParams derive_smoothing_params(long n, int d, double epsilon,
                                        double delta, double L, double M) {
  validate_budget(epsilon, delta, n);
  if (d < 1 || L <= 0.0 || M <= 0.0) {
    throw std::invalid_argument("derive_smoothing_params: need d >= 1, L > 0, M > 0");
  }
  const double nd = static_cast<double>(n);
  const double log_inv_delta = std::log(1.0 / delta);
  const double root_d_log = std::sqrt(d * log_inv_delta);
  SmoothingParams p;
  p.beta_smooth = (L / M) * std::min(std::sqrt(nd) / 4.0,
                                     epsilon * nd / (8.0 * root_d_log));
  p.xi = 4.0 * (M / nd) *
         std::max(2.0 * root_d_log / (epsilon * nd), 1.0 / std::sqrt(nd));
  p.L_eff = L * (1.0 + 1.0 / nd);
  const double budget = std::ceil(8.0 * M * M / (p.xi * p.xi));
  p.prox_max_iters = budget > 9e18 ? static_cast<long>(9e18) : static_cast<long>(budget);
  p.certified = true;
  return p;
}

Vector prox_exact_norm(const Vector& w, const Example& z, double beta) {
  if (beta <= 0.0) throw std::invalid_argument("prox_exact_norm: beta must be positive");
  const Vector diff = w - z.point;
  const double norm = diff.norm();
  if (norm * beta <= 1.0) return z.point;
  return z.point + diff * (1.0 - 1.0 / (beta * norm));
}

Vector approx_prox(const LossFamily& loss, const Example& z, double beta,
                   const Vector& w, double xi, const ConvexDomain& domain,
                   long cap, long* steps_taken, bool* certified) {
  if (xi <= 0.0) throw std::invalid_argument("approx_prox: xi must be positive");
  if (beta < loss.lipschitz / domain.radius) {
    throw std::invalid_argument(
        "approx_prox: requires beta >= L/M for the subproblem Lipschitz bound");
  }
  const double M = domain.radius;
  const double certified_budget = std::ceil(8.0 * M * M / (xi * xi));
  long tau = cap;
  bool is_certified = true;
  if (static_cast<double>(cap) >= certified_budget) {
    tau = static_cast<long>(certified_budget);
  } else {
    is_certified = false;
  }
  tau = std::max<long>(1, tau);
  if (steps_taken != nullptr) *steps_taken = tau;
  if (certified != nullptr) *certified = is_certified;

  // Projected subgradient descent on the 1-strongly-convex g_w with step
  // 2/(s+1) and the matching s-weighted running average.
  Vector v = project(domain, w);
  Vector avg = v;
  for (long s = 1; s <= tau; ++s) {
    const Vector grad = loss.subgradient(v, z) / beta + (v - w);
    const double step = 2.0 / static_cast<double>(s + 1);
    v = project(domain, v - step * grad);
    const double mix = 2.0 / static_cast<double>(s + 1);
    avg = (1.0 - mix) * avg + mix * v;
  }
  return avg;
}

ProxConfig parse_prox_mode(const std::string& text) {
  if (text == "certified-gd") return ProxConfig{ProxMode::kCertifiedGd, 0};
  if (text == "exact-oracle") return ProxConfig{ProxMode::kExactOracle, 0};
  const std::string prefix = "capped-gd:";
  if (text.rfind(prefix, 0) == 0) {
    const long cap = std::stol(text.substr(prefix.size()));
    if (cap < 1) throw std::invalid_argument("prox mode: cap must be >= 1");
    return ProxConfig{ProxMode::kCappedGd, cap};
  }
  throw std::invalid_argument(
      "unknown prox mode '" + text +
      "' (expected certified-gd, capped-gd:<iters>, or exact-oracle)");
}

std::string prox_mode_name(const ProxConfig& config) {
  switch (config.mode) {
    case ProxMode::kCertifiedGd:
      return "certified-gd";
    case ProxMode::kCappedGd:
      return "capped-gd:" + std::to_string(config.cap);
    case ProxMode::kExactOracle:
      return "exact-oracle";
  }
  return "unknown";
}

Vector prox_point(const LossFamily& loss, const Example& z, double beta,
                  const Vector& w, double xi, const ConvexDomain& domain,
                  const ProxConfig& config, long* steps_taken, bool* certified) {
  switch (config.mode) {
    case ProxMode::kExactOracle: {
      if (loss.name != kEuclideanNormLoss) {
        throw std::invalid_argument(
            "prox_point: exact oracle is registered only for the Euclidean norm loss");
      }
      if (steps_taken != nullptr) *steps_taken = 1;
      if (certified != nullptr) *certified = true;
      return prox_exact_norm(w, z, beta);
    }
    case ProxMode::kCertifiedGd: {
      const double M = domain.radius;
      const double budget = std::ceil(8.0 * M * M / (xi * xi));
      const long cap = budget > 9e18 ? static_cast<long>(9e18) : static_cast<long>(budget);
      return approx_prox(loss, z, beta, w, xi, domain, cap, steps_taken, certified);
    }
    case ProxMode::kCappedGd:
      return approx_prox(loss, z, beta, w, xi, domain, config.cap, steps_taken, certified);
  }
  throw std::logic_error("prox_point: unreachable");
}

double moreau_value(const LossFamily& loss, const Example& z, double beta,
                    const Vector& w, const ConvexDomain& domain,
                    const ProxConfig& config, double xi) {
  const Vector v = prox_point(loss, z, beta, w, xi, domain, config);
  return loss.value(v, z) + 0.5 * beta * (w - v).squaredNorm();
}

Vector moreau_grad(const LossFamily& loss, const Example& z, double beta,
                   const Vector& w, const ConvexDomain& domain,
                   const ProxConfig& config, double xi) {
  const Vector v = prox_point(loss, z, beta, w, xi, domain, config);
  return beta * (w - v);
}

TrialResult run_proxgd(const LossFamily& loss, const Dataset& S,
                       const ConvexDomain& domain, const NsgdParams& params,
                       const SmoothingParams& smoothing, const ProxConfig& config,
                       const Vector& w0, const RngContext& rng) {
  if (loss.smoothness.has_value()) {
    throw std::invalid_argument(
        "run_proxgd: loss '" + loss.name + "' is already smooth; use run_nsgd");
  }
  long inner_steps = 0;
  bool all_certified = true;
  const auto envelope_grad = [&](const Vector& w, const Example& z) -> Vector {
    long steps = 0;
    bool certified = true;
    const Vector v = prox_point(loss, z, smoothing.beta_smooth, w, smoothing.xi,
                                domain, config, &steps, &certified);
    inner_steps += steps;
    all_certified = all_certified && certified;
    return smoothing.beta_smooth * (w - v);
  };

  TrialResult result;
  result.output = detail::noisy_sgd_loop(envelope_grad, S, domain, params, w0, rng);
  result.grad_evals = inner_steps;
  result.excess_emp =
      empirical_loss(loss, S, result.output) - empirical_minimum(loss, S, domain);
  result.root_seed = rng.root_seed;
  result.trial = rng.trial;
  result.non_private = params.noise_override_off;
  result.non_certified = !(all_certified && smoothing.certified);
  return result;
}

}  // namespace dpsco
