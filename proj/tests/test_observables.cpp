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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "polymer/observables.hpp"
#include "polymer/rng.hpp"

using namespace polymer;

namespace {

Trajectory from_rows(const std::vector<std::vector<double>>& rows) {
  Trajectory traj;
  traj.T = static_cast<Index>(rows.size()) - 1;
  traj.J = static_cast<Index>(rows.front().size());
  traj.u.resize(traj.T + 1, traj.J);
  for (Index t = 0; t <= traj.T; ++t) {
    for (Index n = 0; n < traj.J; ++n) traj.u(t, n) = rows[static_cast<std::size_t>(t)][static_cast<std::size_t>(n)];
  }
  return traj;
}

// Bin by scanning candidate z and testing the half-open interval directly.
std::map<std::int64_t, std::int64_t> brute_bins(const std::vector<double>& v, double eps, double alpha) {
  std::map<std::int64_t, std::int64_t> out;
  for (double x : v) {
    int hits = 0;
    for (std::int64_t z = -1000; z <= 1000; ++z) {
      const double zd = static_cast<double>(z);
      if (zd * eps - alpha * eps < x && x <= zd * eps + (1.0 - alpha) * eps) {
        ++out[z];
        ++hits;
      }
    }
    EXPECT_EQ(hits, 1) << x;
  }
  return out;
}

}  // namespace

TEST(CenterOfMass, BasicValues) {
  const Trajectory traj = from_rows({{3.0, 3.0}, {0.0, 1.0}});
  EXPECT_DOUBLE_EQ(center_of_mass(traj, 0), 3.0);
  EXPECT_DOUBLE_EQ(center_of_mass(traj, 1), 0.5);
  EXPECT_THROW(center_of_mass(traj, 2), InvalidParameter);
  EXPECT_THROW(center_of_mass(traj, -1), InvalidParameter);
}

TEST(CenterOfMass, Linear) {
  const Trajectory a = from_rows({{1.0, 2.0, 4.0}});
  const Trajectory b = from_rows({{-1.0, 0.5, 7.0}});
  Trajectory sum = a;
  sum.u += b.u;
  EXPECT_NEAR(center_of_mass(sum, 0), center_of_mass(a, 0) + center_of_mass(b, 0), 1e-15);
}

TEST(Gyration, KnownValues) {
  EXPECT_DOUBLE_EQ(radius_of_gyration(from_rows({{9.0, 9.0}, {-1.0, 1.0}, {-1.0, 1.0}})), 1.0);
  EXPECT_DOUBLE_EQ(radius_of_gyration(from_rows({{0.0, 5.0}, {2.0, 2.0}})), 0.0);  // row 0 excluded
  EXPECT_THROW(radius_of_gyration(from_rows({{1.0, 2.0}})), InvalidParameter);
}

TEST(Gyration, InvariantUnderShiftsAndSignFlip) {
  RngStream rng(4);
  Trajectory traj = from_rows(std::vector<std::vector<double>>(6, std::vector<double>(5, 0.0)));
  for (Index i = 0; i < traj.u.size(); ++i) traj.u.data()[i] = rng.normal();
  const double R = radius_of_gyration(traj);
  Trajectory shifted = traj;
  for (Index t = 0; t <= traj.T; ++t) shifted.u.row(t).array() += 3.0 * static_cast<double>(t) - 1.0;
  Trajectory flipped = traj;
  flipped.u = -traj.u;
  EXPECT_NEAR(radius_of_gyration(shifted), R, 1e-12);
  EXPECT_NEAR(radius_of_gyration(flipped), R, 1e-15);
  EXPECT_GE(R, 0.0);
}

TEST(Intersections, Examples) {
  const double eps = 0.25;
  const std::vector<double> equal(6, 1.5);
  EXPECT_EQ(self_intersection_count(equal, eps), 36);
  std::vector<double> spread(6);
  for (std::size_t n = 0; n < spread.size(); ++n) spread[n] = 2.0 * eps * static_cast<double>(n);
  EXPECT_EQ(self_intersection_count(spread, eps), 6);
  const std::vector<double> three{0.0, eps, 3.0 * eps};
  EXPECT_EQ(self_intersection_count(three, eps), 5);
  EXPECT_EQ(self_intersection_count_bruteforce(three, eps), 5);
  EXPECT_THROW(self_intersection_count(three, 0.0), InvalidParameter);
  EXPECT_THROW(self_intersection_count(three, -1.0), InvalidParameter);
}

TEST(Intersections, SortedWindowMatchesBruteForce) {
  RngStream rng(99);
  for (int rep = 0; rep < 3000; ++rep) {
    const auto J = static_cast<std::size_t>(1 + rep % 40);
    std::vector<double> v(J);
    // Round to a coarse grid so that exact ties at distance epsilon occur.
    for (double& x : v) x = std::round(4.0 * rng.normal()) * 0.25;
    const double eps = 0.25 * static_cast<double>(1 + rep % 5);
    const std::int64_t N = self_intersection_count(v, eps);
    ASSERT_EQ(N, self_intersection_count_bruteforce(v, eps));
    ASSERT_GE(N, static_cast<std::int64_t>(J));
    ASSERT_LE(N, static_cast<std::int64_t>(J * J));
  }
}

TEST(Intersections, NondecreasingInEpsilon) {
  RngStream rng(7);
  std::vector<double> v(20);
  for (double& x : v) x = rng.normal();
  std::int64_t prev = 0;
  for (double eps = 0.01; eps < 10.0; eps *= 1.3) {
    const std::int64_t N = self_intersection_count(v, eps);
    EXPECT_GE(N, prev);
    prev = N;
  }
}

TEST(Occupancy, Examples) {
  const std::vector<double> two{0.1, 0.3};
  const OccupancyHistogram h = occupancy_histogram(two, 0.5);
  EXPECT_EQ(h.at(0), 2);
  EXPECT_EQ(h.total(), 2);

  // Bins are left-open: 0 sits in (-0.5, 0], i.e. z = -1.
  const std::vector<double> four{0.0, 0.2, 0.6, 1.3};
  const OccupancyHistogram g = occupancy_histogram(four, 0.5);
  EXPECT_EQ(g.counts, brute_bins(four, 0.5, 0.0));
  EXPECT_EQ(g.at(-1), 1);
  EXPECT_EQ(g.at(0), 1);
  EXPECT_EQ(g.at(1), 1);
  EXPECT_EQ(g.at(2), 1);
  EXPECT_EQ(g.sum_of_squares(), 4);
}

TEST(Occupancy, BoundaryTiesAreRightClosed) {
  EXPECT_EQ(occupancy_bin(0.5, 0.5, 0.0), 0);
  EXPECT_EQ(occupancy_bin(0.5000000001, 0.5, 0.0), 1);
  EXPECT_EQ(occupancy_bin(0.0, 0.5, 0.0), -1);
  EXPECT_EQ(occupancy_bin(0.25, 0.5, 0.5), 0);  // (-0.25, 0.25]
  EXPECT_EQ(occupancy_bin(-0.25, 0.5, 0.5), -1);
  EXPECT_THROW(occupancy_bin(1.0, 0.5, 1.5), InvalidParameter);
  EXPECT_THROW(occupancy_bin(1.0, 0.0, 0.0), InvalidParameter);
}

TEST(Occupancy, MatchesBruteForceAndShifts) {
  RngStream rng(13);
  for (int rep = 0; rep < 500; ++rep) {
    std::vector<double> v(12);
    for (double& x : v) x = std::round(8.0 * rng.normal()) * 0.125;
    const double eps = 0.125 * static_cast<double>(1 + rep % 4);
    const double alpha = (rep % 5) * 0.25;
    const OccupancyHistogram h = occupancy_histogram(v, eps, alpha);
    ASSERT_EQ(h.counts, brute_bins(v, eps, alpha));
    ASSERT_EQ(h.total(), 12);
    std::vector<double> moved(v);
    for (double& x : moved) x += eps;
    const OccupancyHistogram m = occupancy_histogram(moved, eps, alpha);
    for (const auto& [z, c] : h.counts) ASSERT_EQ(m.at(z + 1), c);
  }
}

TEST(LocalInequality, EqualityCases) {
  const std::vector<double> clump(5, 0.3);
  const auto a = local_inequality_check(clump, 0.5, 0.0, -10, 10);
  EXPECT_EQ(a.lhs, 25);
  EXPECT_EQ(a.rhs, 25);
  EXPECT_TRUE(a.holds);
  const std::vector<double> spaced{0.1, 1.1, 2.1, 3.1};
  const auto b = local_inequality_check(spaced, 0.5, 0.0, -10, 10);
  EXPECT_EQ(b.lhs, 4);
  EXPECT_EQ(b.rhs, 4);
  EXPECT_TRUE(b.chain_holds);
}

TEST(LocalInequality, ChainQuantities) {
  const std::vector<double> v{0.1, 0.2, 0.7, 0.8, 0.9, 3.0};
  const auto r = local_inequality_check(v, 0.5, 0.0, 0, 2);
  EXPECT_EQ(r.window_count, 5);
  EXPECT_EQ(r.window_sum_sq, 4 + 9);
  EXPECT_DOUBLE_EQ(r.window_cs_bound, 25.0 / 2.0);
  EXPECT_TRUE(r.chain_holds);
  EXPECT_GE(r.lhs, r.rhs);
}

TEST(LocalInequality, RandomSweepJ16) {
  RngStream rng(2024);
  int violations = 0;
  for (int rep = 0; rep < 20000; ++rep) {
    std::vector<double> v(16);
    const double scale = 0.1 + 3.0 * rng.uniform();
    for (double& x : v) x = scale * rng.normal();
    const double eps = 0.05 + rng.uniform();
    const double alpha = std::min(1.0, rng.uniform());
    const auto r = local_inequality_check(v, eps, alpha, -100000, 100000);
    if (!r.holds || !r.chain_holds) ++violations;
  }
  EXPECT_EQ(violations, 0);
}

TEST(Observe, RecordFields) {
  const Trajectory traj = from_rows({{0.0, 0.0, 0.0}, {0.0, 0.1, 5.0}, {1.0, 1.0, 1.0}});
  const ObservableRecord rec = observe(traj, 0.2);
  EXPECT_EQ(rec.J, 3);
  EXPECT_EQ(rec.T, 2);
  ASSERT_EQ(rec.intersections.size(), 3u);
  EXPECT_EQ(rec.intersections[0], 9);
  EXPECT_EQ(rec.intersections[1], 5);
  EXPECT_EQ(rec.intersections[2], 9);
  EXPECT_EQ(rec.N_total(), 14);
  EXPECT_DOUBLE_EQ(rec.center_of_mass[2], 1.0);
  EXPECT_DOUBLE_EQ(rec.R, radius_of_gyration(traj));
}
