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

#ifndef DPSCO_LOSSES_HPP_
#define DPSCO_LOSSES_HPP_

#include <string>
#include <vector>

#include "dpsco/core.hpp"

namespace dpsco {

inline constexpr const char* kSquaredDistanceLoss = "squared_distance";
inline constexpr const char* kEuclideanNormLoss = "euclidean_norm";
inline constexpr const char* kLogisticGlmLoss = "logistic_glm";

// l(w, z) = 1/2 ||w - z||^2. Certified L = 2M from ||w - z|| <= M + r_z <= 2M
// (worst case over the domain and the data ball); beta = 1; full-rank Hessian.
LossFamily squared_distance_loss(int dim, double domain_radius, double data_radius);

// l(w, z) = ||w - z||. Non-smooth; L = 1. gradient() throws std::domain_error
// at w == z, subgradient() returns 0 there (the minimizing choice).
LossFamily euclidean_norm_loss(int dim);

// l(w, (x, y)) = log(1 + exp(-y <w, x>)) with ||x|| <= 1, y in {-1, +1}.
// L = 1, beta = 1/4, rank-1 Hessian s(1-s) x x^T.
LossFamily logistic_glm_loss(int dim);

double empirical_loss(const LossFamily& loss, const Dataset& S, const Vector& w);

// High-accuracy non-private reference minimizer of the empirical loss over the
// domain (closed form for squared distance, Weiszfeld for the norm loss,
// accelerated projected gradient for logistic). Used for excess-loss reporting.
Vector empirical_minimizer(const LossFamily& loss, const Dataset& S,
                           const ConvexDomain& domain);
double empirical_minimum(const LossFamily& loss, const Dataset& S,
                         const ConvexDomain& domain);

// ---------------------------------------------------------------------------
// Synthetic data distributions with population-loss oracles.
// ---------------------------------------------------------------------------

enum class DistKind {
  kBallUniformMeanEstimation,  // z uniform in a ball around mu; pairs with squared loss
  kSpherePointsNormLoss,       // z uniform on a sphere around mu; pairs with norm loss
  kLogisticPairs,              // x uniform on the unit sphere, y ~ sigmoid(<mu, x>)
};

const char* dist_kind_name(DistKind kind);
DistKind dist_kind_from_name(const std::string& name);

struct SyntheticDistribution {
  DistKind kind = DistKind::kBallUniformMeanEstimation;
  Vector mu;            // mean / sphere center / GLM parameter
  double data_radius = 1.0;  // r_z: certified bound on ||z||

  int dim() const { return static_cast<int>(mu.size()); }
  // Radius of the generation ball/sphere around mu; examples then satisfy
  // ||z|| <= ||mu|| + generation_radius() = data_radius.
  double generation_radius() const;

  Vector population_minimizer() const { return mu; }
  // Exact min population loss when known in closed form (squared / norm
  // pairings); nullopt means Monte-Carlo only (logistic).
  std::optional<double> population_min_loss(const LossFamily& loss) const;

  Example sample_one(RngStream& rng) const;
  Dataset sample(long n, RngStream& rng) const;
};

SyntheticDistribution make_distribution(DistKind kind, Vector mu, double data_radius);

struct PopEstimate {
  double value = 0.0;
  double std_error = 0.0;
  bool exact = false;
};

// L(w; D) - min_w L(w; D) for a registered (distribution, loss) pair.
// Exact for (ball uniform, squared distance); otherwise a Monte-Carlo
// estimate from `mc_samples` fresh draws with its standard error. Unregistered
// pairs throw std::invalid_argument and point at the explicit MC entry point.
PopEstimate excess_population_loss(const SyntheticDistribution& dist,
                                   const LossFamily& loss, const Vector& w,
                                   RngStream& rng, long mc_samples = 100000);

// L(w; D) itself (same registration rules).
PopEstimate population_loss(const SyntheticDistribution& dist,
                            const LossFamily& loss, const Vector& w,
                            RngStream& rng, long mc_samples = 100000);

// Explicit Monte-Carlo mode for any pair: plain sample average of l(w, z).
PopEstimate monte_carlo_population_loss(const SyntheticDistribution& dist,
                                        const LossFamily& loss, const Vector& w,
                                        RngStream& rng, long mc_samples);

}  // namespace dpsco

#endif  // DPSCO_LOSSES_HPP_
