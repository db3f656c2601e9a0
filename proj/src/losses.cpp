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

#include "dpsco/losses.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dpsco {

namespace {

double sigmoid(double t) {
  if (t >= 0.0) {
    return 1.0 / (1.0 + std::exp(-t));
  }
  const double e = std::exp(t);
  return e / (1.0 + e);
}

// log(1 + exp(-t)) without overflow for large |t|.
double log1p_exp_neg(double t) {
  if (t >= 0.0) return std::log1p(std::exp(-t));
  return -t + std::log1p(std::exp(t));
}

Vector uniform_sphere_direction(int dim, RngStream& rng) {
  Vector v(dim);
  double norm2 = 0.0;
  do {
    for (int i = 0; i < dim; ++i) v[i] = rng.next_gaussian();
    norm2 = v.squaredNorm();
  } while (norm2 == 0.0);
  return v / std::sqrt(norm2);
}

}  // namespace

LossFamily squared_distance_loss(int dim, double domain_radius, double data_radius) {
  if (data_radius > domain_radius) {
    throw std::invalid_argument("squared_distance_loss: requires data_radius <= domain_radius");
  }
  LossFamily loss;
  loss.dim = dim;
  loss.name = kSquaredDistanceLoss;
  loss.value = [](const Vector& w, const Example& z) {
    return 0.5 * (w - z.point).squaredNorm();
  };
  loss.gradient = [](const Vector& w, const Example& z) -> Vector {
    return w - z.point;
  };
  loss.subgradient = loss.gradient;
  loss.lipschitz = 2.0 * domain_radius;
  loss.smoothness = 1.0;
  loss.hessian_rank_hint = dim;
  return loss;
}

LossFamily euclidean_norm_loss(int dim) {
  LossFamily loss;
  loss.dim = dim;
  loss.name = kEuclideanNormLoss;
  loss.value = [](const Vector& w, const Example& z) {
    return (w - z.point).norm();
  };
  loss.gradient = [](const Vector& w, const Example& z) -> Vector {
    const Vector diff = w - z.point;
    const double norm = diff.norm();
    if (norm == 0.0) {
      throw std::domain_error("euclidean_norm_loss: gradient undefined at w == z");
    }
    return diff / norm;
  };
  loss.subgradient = [](const Vector& w, const Example& z) -> Vector {
    const Vector diff = w - z.point;
    const double norm = diff.norm();
    if (norm == 0.0) return Vector::Zero(w.size());
    return diff / norm;
  };
  loss.lipschitz = 1.0;
  loss.smoothness = std::nullopt;
  loss.hessian_rank_hint = std::nullopt;
  return loss;
}

LossFamily logistic_glm_loss(int dim) {
  LossFamily loss;
  loss.dim = dim;
  loss.name = kLogisticGlmLoss;
  loss.value = [](const Vector& w, const Example& z) {
    return log1p_exp_neg(z.label * w.dot(z.point));
  };
  loss.gradient = [](const Vector& w, const Example& z) -> Vector {
    const double margin = z.label * w.dot(z.point);
    return (-z.label * sigmoid(-margin)) * z.point;
  };
  loss.subgradient = loss.gradient;
  loss.lipschitz = 1.0;
  loss.smoothness = 0.25;
  loss.hessian_rank_hint = 1;
  return loss;
}

double empirical_loss(const LossFamily& loss, const Dataset& S, const Vector& w) {
  double sum = 0.0;
  for (long i = 0; i < S.size(); ++i) sum += loss.value(w, S[i]);
  return sum / static_cast<double>(S.size());
}

namespace {

Vector dataset_mean(const Dataset& S) {
  Vector mean = Vector::Zero(S[0].point.size());
  for (long i = 0; i < S.size(); ++i) mean += S[i].point;
  return mean / static_cast<double>(S.size());
}

// Weiszfeld iteration for the geometric median.
Vector geometric_median(const Dataset& S, const ConvexDomain& domain) {
  Vector w = dataset_mean(S);
  constexpr double kFloor = 1e-12;
  for (int iter = 0; iter < 5000; ++iter) {
    Vector numer = Vector::Zero(w.size());
    double denom = 0.0;
    for (long i = 0; i < S.size(); ++i) {
      const double dist = std::max((w - S[i].point).norm(), kFloor);
      numer += S[i].point / dist;
      denom += 1.0 / dist;
    }
    const Vector next = numer / denom;
    const double move = (next - w).norm();
    w = next;
    if (move < 1e-13) break;
  }
  return project(domain, w);
}

// FISTA on a smooth empirical loss over the domain.
Vector accelerated_pgd(const LossFamily& loss, const Dataset& S,
                       const ConvexDomain& domain, double smoothness,
                       int max_iters) {
  const double step = 1.0 / smoothness;
  Vector w = domain.center;
  Vector y = w;
  double t = 1.0;
  for (int k = 0; k < max_iters; ++k) {
    Vector grad = Vector::Zero(w.size());
    for (long i = 0; i < S.size(); ++i) grad += loss.gradient(y, S[i]);
    grad /= static_cast<double>(S.size());
    const Vector w_next = project(domain, y - step * grad);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = w_next + ((t - 1.0) / t_next) * (w_next - w);
    if ((w_next - w).norm() < 1e-14) {
      return w_next;
    }
    w = w_next;
    t = t_next;
  }
  return w;
}

}  // namespace

Vector empirical_minimizer(const LossFamily& loss, const Dataset& S,
                           const ConvexDomain& domain) {
  if (loss.name == kSquaredDistanceLoss) {
    return project(domain, dataset_mean(S));
  }
  if (loss.name == kEuclideanNormLoss) {
    return geometric_median(S, domain);
  }
  if (loss.name == kLogisticGlmLoss) {
    return accelerated_pgd(loss, S, domain, loss.smoothness.value(), 4000);
  }
  throw std::invalid_argument("empirical_minimizer: no reference solver registered for loss '" +
                              loss.name + "'");
}

double empirical_minimum(const LossFamily& loss, const Dataset& S,
                         const ConvexDomain& domain) {
  return empirical_loss(loss, S, empirical_minimizer(loss, S, domain));
}

const char* dist_kind_name(DistKind kind) {
  switch (kind) {
    case DistKind::kBallUniformMeanEstimation:
      return "ball_uniform_mean_estimation";
    case DistKind::kSpherePointsNormLoss:
      return "sphere_points_norm_loss";
    case DistKind::kLogisticPairs:
      return "logistic_pairs";
  }
  return "unknown";
}

DistKind dist_kind_from_name(const std::string& name) {
  if (name == "ball_uniform_mean_estimation") return DistKind::kBallUniformMeanEstimation;
  if (name == "sphere_points_norm_loss") return DistKind::kSpherePointsNormLoss;
  if (name == "logistic_pairs") return DistKind::kLogisticPairs;
  throw std::invalid_argument("unknown distribution name: " + name);
}

double SyntheticDistribution::generation_radius() const {
  if (kind == DistKind::kLogisticPairs) return 1.0;
  return data_radius - mu.norm();
}

std::optional<double> SyntheticDistribution::population_min_loss(
    const LossFamily& loss) const {
  const double r = generation_radius();
  const double d = static_cast<double>(dim());
  if (kind == DistKind::kBallUniformMeanEstimation && loss.name == kSquaredDistanceLoss) {
    // E ||z - mu||^2 over the uniform ball of radius r is r^2 d / (d + 2).
    return 0.5 * r * r * d / (d + 2.0);
  }
  if (kind == DistKind::kSpherePointsNormLoss && loss.name == kEuclideanNormLoss) {
    return r;
  }
  return std::nullopt;
}

SyntheticDistribution make_distribution(DistKind kind, Vector mu, double data_radius) {
  SyntheticDistribution dist;
  dist.kind = kind;
  dist.mu = std::move(mu);
  dist.data_radius = data_radius;
  if (kind != DistKind::kLogisticPairs && dist.generation_radius() < 0.0) {
    throw std::invalid_argument(
        "make_distribution: need ||mu|| <= data_radius so samples stay in the data ball");
  }
  return dist;
}

Example SyntheticDistribution::sample_one(RngStream& rng) const {
  const int d = dim();
  Example ex;
  switch (kind) {
    case DistKind::kBallUniformMeanEstimation: {
      const double r = generation_radius();
      const Vector dir = uniform_sphere_direction(d, rng);
      const double scale = r * std::pow(rng.next_unit(), 1.0 / static_cast<double>(d));
      ex.point = mu + scale * dir;
      break;
    }
    case DistKind::kSpherePointsNormLoss: {
      const double r = generation_radius();
      ex.point = mu + r * uniform_sphere_direction(d, rng);
      break;
    }
    case DistKind::kLogisticPairs: {
      ex.point = uniform_sphere_direction(d, rng);
      const double p_plus = sigmoid(mu.dot(ex.point));
      ex.label = rng.next_unit() < p_plus ? 1.0 : -1.0;
      break;
    }
  }
  return ex;
}

Dataset SyntheticDistribution::sample(long n, RngStream& rng) const {
  std::vector<Example> examples;
  examples.reserve(static_cast<size_t>(n));
  for (long i = 0; i < n; ++i) examples.push_back(sample_one(rng));
  return Dataset(std::move(examples));
}

namespace {

bool registered_pair(const SyntheticDistribution& dist, const LossFamily& loss) {
  return (dist.kind == DistKind::kBallUniformMeanEstimation && loss.name == kSquaredDistanceLoss) ||
         (dist.kind == DistKind::kSpherePointsNormLoss && loss.name == kEuclideanNormLoss) ||
         (dist.kind == DistKind::kLogisticPairs && loss.name == kLogisticGlmLoss);
}

[[noreturn]] void throw_unregistered(const SyntheticDistribution& dist, const LossFamily& loss) {
  std::ostringstream msg;
  msg << "no population-loss oracle registered for pair (" << dist_kind_name(dist.kind)
      << ", " << loss.name << "); call monte_carlo_population_loss explicitly";
  throw std::invalid_argument(msg.str());
}

PopEstimate mc_mean(const std::function<double(const Example&)>& f,
                    const SyntheticDistribution& dist, RngStream& rng, long samples) {
  if (samples < 2) throw std::invalid_argument("Monte-Carlo mode needs >= 2 samples");
  double sum = 0.0, sum_sq = 0.0;
  for (long i = 0; i < samples; ++i) {
    const double v = f(dist.sample_one(rng));
    sum += v;
    sum_sq += v * v;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
  return PopEstimate{mean, std::sqrt(var / n), false};
}

}  // namespace

PopEstimate monte_carlo_population_loss(const SyntheticDistribution& dist,
                                        const LossFamily& loss, const Vector& w,
                                        RngStream& rng, long mc_samples) {
  return mc_mean([&](const Example& z) { return loss.value(w, z); }, dist, rng, mc_samples);
}

PopEstimate population_loss(const SyntheticDistribution& dist, const LossFamily& loss,
                            const Vector& w, RngStream& rng, long mc_samples) {
  if (!registered_pair(dist, loss)) throw_unregistered(dist, loss);
  if (dist.kind == DistKind::kBallUniformMeanEstimation) {
    const double value = 0.5 * (w - dist.mu).squaredNorm() +
                         dist.population_min_loss(loss).value();
    return PopEstimate{value, 0.0, true};
  }
  return monte_carlo_population_loss(dist, loss, w, rng, mc_samples);
}

PopEstimate excess_population_loss(const SyntheticDistribution& dist,
                                   const LossFamily& loss, const Vector& w,
                                   RngStream& rng, long mc_samples) {
  if (!registered_pair(dist, loss)) throw_unregistered(dist, loss);
  switch (dist.kind) {
    case DistKind::kBallUniformMeanEstimation:
      return PopEstimate{0.5 * (w - dist.mu).squaredNorm(), 0.0, true};
    case DistKind::kSpherePointsNormLoss: {
      // min loss is exactly the sphere radius; only L(w; D) needs sampling.
      PopEstimate est = monte_carlo_population_loss(dist, loss, w, rng, mc_samples);
      est.value -= dist.population_min_loss(loss).value();
      return est;
    }
    case DistKind::kLogisticPairs: {
      // Paired differencing against the population minimizer mu keeps the
      // standard error far below the loss scale.
      const Vector& ref = dist.mu;
      return mc_mean(
          [&](const Example& z) { return loss.value(w, z) - loss.value(ref, z); },
          dist, rng, mc_samples);
    }
  }
  throw_unregistered(dist, loss);
}

}  // namespace dpsco
