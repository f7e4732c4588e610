// Copyright 2026 The Polymerlab Authors
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

#include "polymer/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace polymer {
namespace {

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InvalidParameter("epsilon must be positive and finite, got " + std::to_string(epsilon));
  }
}

void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw InvalidParameter("alpha must lie in [0, 1], got " + std::to_string(alpha));
  }
}

void check_time(const Trajectory& traj, Index t) {
  if (t < 0 || t > traj.T) {
    throw InvalidParameter("time " + std::to_string(t) + " outside {0.." + std::to_string(traj.T) + "}");
  }
}

std::span<const double> row_span(const Trajectory& traj, Index t) {
  return {traj.u.row(t).data(), static_cast<std::size_t>(traj.J)};
}

bool in_bin(double value, std::int64_t z, double epsilon, double alpha) {
  const double zd = static_cast<double>(z);
  return zd * epsilon - alpha * epsilon < value && value <= zd * epsilon + (1.0 - alpha) * epsilon;
}

}  // namespace

std::int64_t ObservableRecord::N_total() const {
  std::int64_t total = 0;
  for (std::size_t t = 1; t < intersections.size(); ++t) total += intersections[t];
  return total;
}

double center_of_mass(const Trajectory& traj, Index t) {
  check_time(traj, t);
  return traj.u.row(t).mean();
}

double radius_of_gyration(const Trajectory& traj) {
  if (traj.T < 1) throw InvalidParameter("radius of gyration needs T >= 1");
  double total = 0.0;
  for (Index t = 1; t <= traj.T; ++t) {
    const auto row = traj.u.row(t);
    total += (row.array() - row.mean()).square().sum();
  }
  return std::sqrt(total / static_cast<double>(traj.T * traj.J));
}

std::int64_t self_intersection_count(std::span<const double> values, double epsilon) {
  check_epsilon(epsilon);
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t J = sorted.size();
  std::int64_t pairs = 0;
  std::size_t hi = 0;
  for (std::size_t lo = 0; lo < J; ++lo) {
    if (hi < lo + 1) hi = lo + 1;
    while (hi < J && sorted[hi] - sorted[lo] <= epsilon) ++hi;
    pairs += static_cast<std::int64_t>(hi - lo - 1);
  }
  return static_cast<std::int64_t>(J) + 2 * pairs;
}

std::int64_t self_intersection_count(const Trajectory& traj, Index t, double epsilon) {
  check_time(traj, t);
  return self_intersection_count(row_span(traj, t), epsilon);
}

std::int64_t self_intersection_count_bruteforce(std::span<const double> values, double epsilon) {
  check_epsilon(epsilon);
  std::int64_t count = 0;
  for (double x : values) {
    for (double y : values) {
      if (std::abs(x - y) <= epsilon) ++count;
    }
  }
  return count;
}

std::int64_t OccupancyHistogram::total() const {
  std::int64_t s = 0;
  for (const auto& [z, l] : counts) s += l;
  return s;
}

std::int64_t OccupancyHistogram::sum_of_squares() const {
  std::int64_t s = 0;
  for (const auto& [z, l] : counts) s += l * l;
  return s;
}

std::int64_t OccupancyHistogram::at(std::int64_t z) const {
  const auto it = counts.find(z);
  return it == counts.end() ? 0 : it->second;
}

std::int64_t occupancy_bin(double value, double epsilon, double alpha) {
  check_epsilon(epsilon);
  check_alpha(alpha);
  if (!std::isfinite(value)) throw InvalidParameter("cannot bin a non-finite value");
  // z < value/eps + alpha <= z + 1, then repair rounding against the exact interval test.
  auto z = static_cast<std::int64_t>(std::ceil(value / epsilon + alpha)) - 1;
  while (!in_bin(value, z, epsilon, alpha)) {
    const double zd = static_cast<double>(z);
    z += value <= zd * epsilon - alpha * epsilon ? -1 : 1;
  }
  return z;
}

OccupancyHistogram occupancy_histogram(std::span<const double> values, double epsilon, double alpha) {
  OccupancyHistogram hist;
  hist.epsilon = epsilon;
  hist.alpha = alpha;
  for (double v : values) ++hist.counts[occupancy_bin(v, epsilon, alpha)];
  return hist;
}

OccupancyHistogram occupancy_histogram(const Trajectory& traj, Index t, double epsilon, double alpha) {
  check_time(traj, t);
  return occupancy_histogram(row_span(traj, t), epsilon, alpha);
}

LocalInequalityReport local_inequality_check(std::span<const double> values, double epsilon, double alpha,
                                             std::int64_t z_lo, std::int64_t z_hi) {
  if (z_hi <= z_lo) throw InvalidParameter("bin window [z_lo, z_hi) is empty");
  const OccupancyHistogram hist = occupancy_histogram(values, epsilon, alpha);
  LocalInequalityReport rep;
  rep.lhs = self_intersection_count(values, epsilon);
  rep.rhs = hist.sum_of_squares();
  rep.holds = rep.lhs >= rep.rhs;
  rep.z_lo = z_lo;
  rep.z_hi = z_hi;
  for (const auto& [z, l] : hist.counts) {
    if (z >= z_lo && z < z_hi) {
      rep.window_sum_sq += l * l;
      rep.window_count += l;
    }
  }
  rep.window_cs_bound = static_cast<double>(rep.window_count) * static_cast<double>(rep.window_count) /
                        static_cast<double>(z_hi - z_lo);
  rep.chain_holds = rep.holds && rep.rhs >= rep.window_sum_sq &&
                    static_cast<double>(rep.window_sum_sq) >= rep.window_cs_bound;
  return rep;
}

LocalInequalityReport local_inequality_check(const Trajectory& traj, Index t, double epsilon, double alpha,
                                             std::int64_t z_lo, std::int64_t z_hi) {
  check_time(traj, t);
  return local_inequality_check(row_span(traj, t), epsilon, alpha, z_lo, z_hi);
}

LocalInequalityReport local_inequality_check(const Trajectory& traj, Index t, double epsilon, double alpha) {
  check_time(traj, t);
  // Default window: every occupied bin.
  const OccupancyHistogram hist = occupancy_histogram(row_span(traj, t), epsilon, alpha);
  return local_inequality_check(row_span(traj, t), epsilon, alpha, hist.counts.begin()->first,
                                hist.counts.rbegin()->first + 1);
}

ObservableRecord observe(const Trajectory& traj, double epsilon) {
  check_epsilon(epsilon);
  ObservableRecord rec;
  rec.seed = traj.seed;
  rec.J = traj.J;
  rec.T = traj.T;
  rec.epsilon = epsilon;
  rec.center_of_mass.resize(static_cast<std::size_t>(traj.T + 1));
  rec.intersections.resize(static_cast<std::size_t>(traj.T + 1));
  for (Index t = 0; t <= traj.T; ++t) {
    rec.center_of_mass[static_cast<std::size_t>(t)] = traj.u.row(t).mean();
    rec.intersections[static_cast<std::size_t>(t)] = self_intersection_count(row_span(traj, t), epsilon);
  }
  rec.R = traj.T >= 1 ? radius_of_gyration(traj) : 0.0;
  return rec;
}

}  // namespace polymer
