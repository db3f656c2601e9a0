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

#include "dpsco/core.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dpsco {

namespace {
constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

double u64_to_unit(uint64_t x) {
  // 53 high bits -> [0, 1)
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

double u64_to_unit_open(uint64_t x) {
  // (0, 1]; safe as a log() argument
  return (static_cast<double>(x >> 11) + 1.0) * 0x1.0p-53;
}
}  // namespace

uint64_t splitmix64(uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

RngStream::RngStream(uint64_t root_seed, std::initializer_list<uint64_t> stream_id) {
  uint64_t key = splitmix64(root_seed);
  for (uint64_t component : stream_id) {
    key = splitmix64(key ^ splitmix64(component + kGolden));
  }
  key_ = key;
}

uint64_t RngStream::next_u64() { return splitmix64(key_ + kGolden * ++counter_); }

double RngStream::next_unit() { return u64_to_unit(next_u64()); }

double RngStream::next_gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = u64_to_unit_open(next_u64());
  const double u2 = u64_to_unit(next_u64());
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

uint64_t RngStream::next_index(uint64_t n) {
  // Fixed-point multiply; bias is O(n / 2^64), irrelevant at these scales.
  return static_cast<uint64_t>(
      (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
}

Vector sample_gaussian(int dim, double variance, RngStream& rng) {
  if (variance < 0.0) {
    throw std::invalid_argument("sample_gaussian: variance must be nonnegative");
  }
  Vector out = Vector::Zero(dim);
  if (variance == 0.0) return out;
  const double sd = std::sqrt(variance);
  for (int i = 0; i < dim; ++i) out[i] = sd * rng.next_gaussian();
  return out;
}

bool ConvexDomain::contains(const Vector& w, double slack) const {
  return (w - center).norm() <= radius + slack;
}

ConvexDomain l2_ball(int dim, double radius) {
  return l2_ball(Vector::Zero(dim), radius);
}

ConvexDomain l2_ball(Vector center, double radius) {
  if (radius <= 0.0) {
    throw std::invalid_argument("l2_ball: radius must be positive");
  }
  return ConvexDomain{std::move(center), radius};
}

Vector project(const ConvexDomain& domain, const Vector& w) {
  if (w.size() != domain.center.size()) {
    std::ostringstream msg;
    msg << "project: dimension mismatch (point " << w.size() << ", domain "
        << domain.center.size() << ")";
    throw std::invalid_argument(msg.str());
  }
  const Vector diff = w - domain.center;
  const double norm = diff.norm();
  if (norm <= domain.radius) return w;
  return domain.center + diff * (domain.radius / norm);
}

void validate_budget(double epsilon, double delta, long n) {
  if (!(epsilon > 0.0) || epsilon > 1.0) {
    std::ostringstream msg;
    msg << "privacy budget: epsilon must satisfy 0 < epsilon <= 1, got " << epsilon;
    throw std::invalid_argument(msg.str());
  }
  if (n < 1) throw std::invalid_argument("privacy budget: n must be >= 1");
  const double cap = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
  if (!(delta > 0.0) || delta > cap) {
    std::ostringstream msg;
    msg << "privacy budget: delta must satisfy 0 < delta <= 1/n^2 = " << cap
        << ", got " << delta;
    throw std::invalid_argument(msg.str());
  }
}

Dataset::Dataset(std::vector<Example> examples) : examples_(std::move(examples)) {
  if (examples_.empty()) {
    throw std::invalid_argument("Dataset: need at least one example");
  }
}

Dataset Dataset::replaced(long k, Example z) const {
  if (k < 0 || k >= size()) {
    throw std::invalid_argument("Dataset::replaced: index out of range");
  }
  std::vector<Example> copy = examples_;
  copy[static_cast<size_t>(k)] = std::move(z);
  return Dataset(std::move(copy));
}

double finite_diff_grad_check(const LossFamily& loss, const Vector& w,
                              const Example& z, double h) {
  if (h <= 0.0) throw std::invalid_argument("finite_diff_grad_check: h must be positive");
  const Vector g = loss.gradient(w, z);  // throws at non-differentiable points
  double worst = 0.0;
  Vector wp = w, wm = w;
  for (int i = 0; i < w.size(); ++i) {
    wp[i] = w[i] + h;
    wm[i] = w[i] - h;
    const double fd = (loss.value(wp, z) - loss.value(wm, z)) / (2.0 * h);
    worst = std::max(worst, std::abs(fd - g[i]));
    wp[i] = w[i];
    wm[i] = w[i];
  }
  return worst;
}

Matrix finite_diff_hessian(const LossFamily& loss, const Vector& w,
                           const Example& z, double h) {
  const int d = static_cast<int>(w.size());
  Matrix hess(d, d);
  Vector wp = w, wm = w;
  for (int j = 0; j < d; ++j) {
    wp[j] = w[j] + h;
    wm[j] = w[j] - h;
    const Vector gp = loss.gradient(wp, z);
    const Vector gm = loss.gradient(wm, z);
    hess.col(j) = (gp - gm) / (2.0 * h);
    wp[j] = w[j];
    wm[j] = w[j];
  }
  return 0.5 * (hess + hess.transpose());
}

}  // namespace dpsco
