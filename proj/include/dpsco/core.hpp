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

#ifndef DPSCO_CORE_HPP_
#define DPSCO_CORE_HPP_

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace dpsco {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// ---------------------------------------------------------------------------
// Deterministic randomness.
//
// Every random draw in the library flows through an RngStream addressed by
// (root_seed, stream path). Streams are counter-based: the k-th draw of a
// stream is a pure function of (root_seed, path, k), so any trial replays
// bit-identically no matter how trials are scheduled, and neighboring-dataset
// runs can share randomness exactly by sharing (trial, phase, step) keys.
// ---------------------------------------------------------------------------

uint64_t splitmix64(uint64_t x);

class RngStream {
 public:
  RngStream(uint64_t root_seed, std::initializer_list<uint64_t> stream_id);

  uint64_t next_u64();
  // Uniform in [0, 1).
  double next_unit();
  // Standard normal via Box-Muller (one spare value cached per stream).
  double next_gaussian();
  // Uniform integer in [0, n).
  uint64_t next_index(uint64_t n);

  uint64_t key() const { return key_; }

 private:
  uint64_t key_;
  uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Stream phase labels. One phase per independent source of randomness an
// algorithm consumes; the step index (when present) is the third path entry.
namespace phase {
constexpr uint64_t kData = 1;       // dataset generation
constexpr uint64_t kBatch = 2;      // mini-batch index draws, keyed by step
constexpr uint64_t kStepNoise = 3;  // per-step Gaussian noise, keyed by step
constexpr uint64_t kObjNoise = 4;   // objective-perturbation noise vector G
constexpr uint64_t kOutNoise = 5;   // output-perturbation noise vector H
constexpr uint64_t kSvrg = 6;       // SVRG component picks, keyed by epoch
constexpr uint64_t kOracle = 7;     // Monte-Carlo population-loss sampling
constexpr uint64_t kProbe = 8;      // stability probe generation
constexpr uint64_t kResample = 9;   // ERM-to-SCO resampling
constexpr uint64_t kMisc = 10;
}  // namespace phase

// Identifies one trial's randomness; algorithms derive all their streams from
// this so that paired runs on neighboring datasets couple exactly.
struct RngContext {
  uint64_t root_seed = 0;
  uint64_t trial = 0;

  RngStream stream(uint64_t ph) const {
    return RngStream(root_seed, {trial, ph});
  }
  RngStream stream(uint64_t ph, uint64_t step) const {
    return RngStream(root_seed, {trial, ph, step});
  }
};

// Mean-zero Gaussian vector with the given per-coordinate variance.
// variance == 0 returns the exact zero vector.
Vector sample_gaussian(int dim, double variance, RngStream& rng);

// ---------------------------------------------------------------------------
// Domain geometry.
// ---------------------------------------------------------------------------

// M-bounded convex feasible set with exact Euclidean projection. Only the
// L2 ball is supported; all loss bounds in this library depend on the domain
// solely through its radius.
struct ConvexDomain {
  Vector center;
  double radius = 0.0;  // M

  int dim() const { return static_cast<int>(center.size()); }
  bool contains(const Vector& w, double slack = 1e-12) const;
};

ConvexDomain l2_ball(int dim, double radius);
ConvexDomain l2_ball(Vector center, double radius);

Vector project(const ConvexDomain& domain, const Vector& w);

// ---------------------------------------------------------------------------
// Privacy budget.
// ---------------------------------------------------------------------------

struct PrivacyBudget {
  double epsilon = 0.0;
  double delta = 0.0;
};

// Enforces epsilon in (0, 1] and delta in (0, 1/n^2]; throws
// std::invalid_argument naming the violated precondition.
void validate_budget(double epsilon, double delta, long n);

// ---------------------------------------------------------------------------
// Datasets and the loss-family contract.
// ---------------------------------------------------------------------------

// One example. Point losses use `point` as z; GLM losses read it as the
// feature vector x with `label` as y in {-1, +1}.
struct Example {
  Vector point;
  double label = 0.0;
};

class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<Example> examples);

  long size() const { return static_cast<long>(examples_.size()); }
  const Example& operator[](long i) const { return examples_[static_cast<size_t>(i)]; }

  // Neighboring dataset: copy with index k replaced.
  Dataset replaced(long k, Example z) const;

 private:
  std::vector<Example> examples_;
};

// Per-example convex loss with certified constants. `gradient` may throw
// std::domain_error at non-differentiable points of non-smooth losses;
// `subgradient` must always return a valid subgradient instead.
struct LossFamily {
  int dim = 0;
  std::string name;
  std::function<double(const Vector&, const Example&)> value;
  std::function<Vector(const Vector&, const Example&)> gradient;
  std::function<Vector(const Vector&, const Example&)> subgradient;
  double lipschitz = 0.0;                  // certified L
  std::optional<double> smoothness;        // certified beta; nullopt = non-smooth
  std::optional<int> hessian_rank_hint;    // nullopt = unknown
};

// Max-coordinate error between the central finite difference of `value` and
// the analytic `gradient` at (w, z). Throws std::domain_error if the loss is
// not differentiable at w.
double finite_diff_grad_check(const LossFamily& loss, const Vector& w,
                              const Example& z, double h);

// Symmetrized central-difference Hessian of the analytic gradient.
Matrix finite_diff_hessian(const LossFamily& loss, const Vector& w,
                           const Example& z, double h = 1e-5);

// ---------------------------------------------------------------------------
// Trial output shared by all algorithms.
// ---------------------------------------------------------------------------

struct TrialResult {
  Vector output;
  double excess_emp = std::numeric_limits<double>::quiet_NaN();
  double excess_pop = std::numeric_limits<double>::quiet_NaN();
  double excess_pop_se = 0.0;
  long grad_evals = 0;
  uint64_t root_seed = 0;
  uint64_t trial = 0;
  bool non_private = false;    // produced with a noise override
  bool non_certified = false;  // produced outside a certified parameter regime
};

}  // namespace dpsco

#endif  // DPSCO_CORE_HPP_
