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

#ifndef DPSCO_NSGD_HPP_
#define DPSCO_NSGD_HPP_

#include "dpsco/core.hpp"

namespace dpsco {

// Mini-batch noisy projected SGD for smooth convex losses.
//
// Parameterization, for sample size n, dimension d, budget (epsilon, delta),
// certified Lipschitz constant L and domain radius M:
//   T      = max(1, floor(min(n/8, eps^2 n^2 / (32 d ln(1/delta)))))
//   m      = max(1, floor(n sqrt(eps / (4 T))))
//   sigma2 = 8 T L^2 ln(1/delta) / (n^2 eps^2)
//   eta    = M / (L sqrt(T))
struct NsgdParams {
  long iterations = 1;       // T
  long batch_size = 1;       // m
  double sigma2 = 0.0;       // per-coordinate Gaussian variance
  double eta = 0.0;          // step size
  bool noise_override_off = false;  // testing only; outputs become NON-PRIVATE

  // Copy with the Gaussian noise forced off.
  NsgdParams noise_off() const {
    NsgdParams p = *this;
    p.sigma2 = 0.0;
    p.noise_override_off = true;
    return p;
  }
};

NsgdParams derive_nsgd_params(long n, int d, double epsilon, double delta,
                              double L, double M);

// True iff beta <= (L/M) min(sqrt(n/2), eps n / (2 sqrt(2 d ln(1/delta)))),
// the hypothesis under which the population-loss guarantee applies. A false
// return voids the guarantee, not the mechanism; callers should warn, not
// abort. Throws for non-smooth losses (use the smoothing pipeline instead).
bool check_nsgd_smoothness_precondition(const LossFamily& loss, long n, int d,
                                        double epsilon, double delta, double M);

// Runs T iterations of batch-mean gradient steps with fresh Gaussian noise and
// projection, and returns the average of w_1..w_T. grad_evals = T * m.
// excess_pop is left NaN; callers with a data distribution fill it in.
TrialResult run_nsgd(const LossFamily& loss, const Dataset& S,
                     const ConvexDomain& domain, const NsgdParams& params,
                     const Vector& w0, const RngContext& rng);

namespace detail {

// The shared iteration used by both run_nsgd and run_proxgd: only the source
// of per-example gradients differs. Batch-index and noise streams are keyed by
// (trial, phase, step) alone, so neighboring-dataset runs couple exactly.
Vector noisy_sgd_loop(
    const std::function<Vector(const Vector&, const Example&)>& per_example_grad,
    const Dataset& S, const ConvexDomain& domain, const NsgdParams& params,
    const Vector& w0, const RngContext& rng);

}  // namespace detail

}  // namespace dpsco

#endif  // DPSCO_NSGD_HPP_
