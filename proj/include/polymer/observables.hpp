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

#ifndef POLYMER_OBSERVABLES_HPP
#define POLYMER_OBSERVABLES_HPP

#include <Eigen/Core>

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "polymer/dynamics.hpp"

namespace polymer {

/// Per-trajectory summary used by the Gibbs layer and the reports.
struct ObservableRecord {
  std::uint64_t seed = 0;
  Index J = 0;
  Index T = 0;
  double epsilon = 0.0;
  std::vector<double> center_of_mass;      // t = 0..T
  std::vector<std::int64_t> intersections; // N_eps(t), t = 0..T
  double R = 0.0;

  /// sum_{t=1}^{T} N_eps(t)
  std::int64_t N_total() const;
};

double center_of_mass(const Trajectory& traj, Index t);

/// sqrt( (1/(TJ)) sum_{t=1}^{T} sum_n (u(t,n) - ubar(t))^2 ); row 0 is excluded.
double radius_of_gyration(const Trajectory& traj);

/// Ordered pairs (i, j), diagonal included, with |u_i - u_j| <= epsilon. O(J log J).
std::int64_t self_intersection_count(std::span<const double> values, double epsilon);
std::int64_t self_intersection_count(const Trajectory& traj, Index t, double epsilon);

/// O(J^2) double loop; kept as the reference for the sorted version.
std::int64_t self_intersection_count_bruteforce(std::span<const double> values, double epsilon);

/// Counts l(z) = #{n : u(t,n) in (z eps - alpha eps, z eps + (1 - alpha) eps]}.
struct OccupancyHistogram {
  double epsilon = 0.0;
  double alpha = 0.0;
  std::map<std::int64_t, std::int64_t> counts;

  std::int64_t total() const;
  std::int64_t sum_of_squares() const;
  std::int64_t at(std::int64_t z) const;
};

/// Bin index of a single value, honoring the left-open right-closed bins exactly.
std::int64_t occupancy_bin(double value, double epsilon, double alpha);

OccupancyHistogram occupancy_histogram(std::span<const double> values, double epsilon, double alpha = 0.0);
OccupancyHistogram occupancy_histogram(const Trajectory& traj, Index t, double epsilon, double alpha = 0.0);

/// Both sides of N_eps(t) >= sum_z l(z)^2 plus the Cauchy-Schwarz chain over a bin window
/// [z_lo, z_hi):
///   sum_z l^2  >=  sum_{window} l^2  >=  (sum_{window} l)^2 / (z_hi - z_lo).
struct LocalInequalityReport {
  std::int64_t lhs = 0;           // N_eps(t)
  std::int64_t rhs = 0;           // sum_z l^2
  bool holds = false;             // lhs >= rhs
  std::int64_t z_lo = 0;
  std::int64_t z_hi = 0;
  std::int64_t window_sum_sq = 0; // sum_{window} l^2
  std::int64_t window_count = 0;  // sum_{window} l
  double window_cs_bound = 0.0;   // window_count^2 / (z_hi - z_lo)
  bool chain_holds = false;       // lhs >= rhs >= window_sum_sq >= window_cs_bound
};

LocalInequalityReport local_inequality_check(std::span<const double> values, double epsilon, double alpha,
                                             std::int64_t z_lo, std::int64_t z_hi);
LocalInequalityReport local_inequality_check(const Trajectory& traj, Index t, double epsilon,
                                             double alpha = 0.0);
LocalInequalityReport local_inequality_check(const Trajectory& traj, Index t, double epsilon, double alpha,
                                             std::int64_t z_lo, std::int64_t z_hi);

/// Center of mass, N_eps for every row, and R in one pass.
ObservableRecord observe(const Trajectory& traj, double epsilon);

}  // namespace polymer

#endif  // POLYMER_OBSERVABLES_HPP
