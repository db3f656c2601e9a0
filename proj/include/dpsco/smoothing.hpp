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

#ifndef DPSCO_SMOOTHING_HPP_
#define DPSCO_SMOOTHING_HPP_

#include "dpsco/core.hpp"
#include "dpsco/nsgd.hpp"

namespace dpsco {

// Moreau-envelope pipeline parameters:
//   beta_smooth = (L/M) min(sqrt(n)/4, eps n / (8 sqrt(d ln(1/delta))))
//   xi          = 4 (M/n) max(2 sqrt(d ln(1/delta)) / (eps n), 1/sqrt(n))
//   L_eff       = L (1 + 1/n)   (gradient approximation error beta*xi = L/n)
// The certified inner budget ceil(8 M^2 / xi^2) comes from the subgradient
// rate on the 1-strongly-convex prox subproblem.
struct SmoothingParams {
  double beta_smooth = 0.0;
  double xi = 0.0;
  long prox_max_iters = 1;
  double L_eff = 0.0;
  bool certified = true;

  // Copy with the inner budget capped below the certified count.
  SmoothingParams with_prox_cap(long cap) const;
};

SmoothingParams derive_smoothing_params(long n, int d, double epsilon,
                                        double delta, double L, double M);

// Closed-form prox of f = ||. - z|| scaled by 1/beta (block soft threshold):
// returns z when ||w - z|| <= 1/beta, else z + (w - z)(1 - 1/(beta ||w - z||)).
// Valid as stated only when the point lands inside the domain; callers keep a
// margin. Used as the test oracle for the generic solver.
Vector prox_exact_norm(const Vector& w, const Example& z, double beta);

// Projected subgradient descent on g_w(v) = f(v)/beta + ||v - w||^2 / 2 over
// the domain, with the 1-strongly-convex step schedule 2/(s+1) and weighted
// averaging. Runs min(cap, ceil(8 M^2 / xi^2)) steps; reports via
// *steps_taken / *certified when non-null. Requires beta >= L/M.
Vector approx_prox(const LossFamily& loss, const Example& z, double beta,
                   const Vector& w, double xi, const ConvexDomain& domain,
                   long cap, long* steps_taken = nullptr, bool* certified = nullptr);

enum class ProxMode { kCertifiedGd, kCappedGd, kExactOracle };

struct ProxConfig {
  ProxMode mode = ProxMode::kCertifiedGd;
  long cap = 0;  // inner-iteration cap for kCappedGd
};

ProxConfig parse_prox_mode(const std::string& text);  // "certified-gd" | "capped-gd:<k>" | "exact-oracle"
std::string prox_mode_name(const ProxConfig& config);

// The (approximate) prox point v for f = loss(., z)/beta under `config`.
Vector prox_point(const LossFamily& loss, const Example& z, double beta,
                  const Vector& w, double xi, const ConvexDomain& domain,
                  const ProxConfig& config, long* steps_taken = nullptr,
                  bool* certified = nullptr);

// Envelope value f(v) + (beta/2)||w - v||^2 and gradient beta (w - v) at the
// (approximate) prox point; the gradient error is at most beta * xi.
double moreau_value(const LossFamily& loss, const Example& z, double beta,
                    const Vector& w, const ConvexDomain& domain,
                    const ProxConfig& config, double xi);
Vector moreau_grad(const LossFamily& loss, const Example& z, double beta,
                   const Vector& w, const ConvexDomain& domain,
                   const ProxConfig& config, double xi);

// NSGD driven by approximate Moreau-envelope gradients of a non-smooth loss.
// `params` must be derived with L_eff in place of L; grad_evals counts inner
// prox gradient steps (one per call in exact-oracle mode).
TrialResult run_proxgd(const LossFamily& loss, const Dataset& S,
                       const ConvexDomain& domain, const NsgdParams& params,
                       const SmoothingParams& smoothing, const ProxConfig& config,
                       const Vector& w0, const RngContext& rng);

}  // namespace dpsco

#endif  // DPSCO_SMOOTHING_HPP_
