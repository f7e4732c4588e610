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

#ifndef POLYMER_DYNAMICS_HPP
#define POLYMER_DYNAMICS_HPP

#include <Eigen/Core>

#include <cstdint>
#include <iosfwd>

#include "polymer/rng.hpp"
#include "polymer/spectral_basis.hpp"

namespace polymer {

/// Row-major space-time array; row t is the profile at time t.
using Field = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Profile = Eigen::VectorXd;

inline constexpr double kDefaultKappa = 0.5;

/// Gaussian forcing xi(t, n), t in {0..T-1}, iid Normal(drift, 1).
struct NoiseField {
  Index T = 0;
  Index J = 0;
  Field xi;
  std::uint64_t seed = 0;
  double drift = 0.0;
};

/// Polymer heights u(t, n) on {0..T} x {0..J-1}; row 0 is the initial profile.
struct Trajectory {
  Index T = 0;
  Index J = 0;
  Field u;
  Convention convention = Convention::Literal;
  double kappa = kDefaultKappa;
  std::uint64_t seed = 0;
};

/// Model-level parameters shared by the samplers.
struct ModelConfig {
  Index J = 8;
  Index T = 64;
  double kappa = kDefaultKappa;
  Convention convention = Convention::Literal;
  std::uint64_t seed = 1;
};

/// Entries are drawn t-major, n-ascending from a counter stream keyed by `seed`, so the field
/// is a pure function of (seed, T, J, drift).
NoiseField sample_noise(std::uint64_t seed, Index T, Index J, double drift = 0.0);

/// Forward recursion
///   u[t+1][n] = u[t][n] + kappa (u[t][n+1] - 2 u[t][n] + u[t][n-1]) + xi[t][n]
/// with Neumann ghosts u[t][-1] = u[t][0], u[t][J] = u[t][J-1].
Trajectory simulate_recursion(const Profile& u0, const NoiseField& noise, double kappa = kDefaultKappa);

/// Closed-form solution evaluated termwise in the eigenbasis.
///
/// Literal: u(t) = G_t u0 + sum_{s<t} G_{t-1-s} xi(s) with the a_m^2 kernel (equals the recursion).
/// Paper:   u(t) = G_t u0 + sum_{s<t} G_{t-s} xi(s) with the a_m kernel, as printed.
/// Row 0 always holds u0 itself.
Trajectory solution_formula(const Profile& u0, const NoiseField& noise, const SpectralBasisd& basis,
                            Convention conv = Convention::Literal);

/// Incremental time stepper for either convention. Literal steps in real space with the given
/// kappa; Paper steps the mode coefficients b_m(t+1) = rho_m b_m(t) + a_m rho_m <phi_m, xi(t)>.
class Propagator {
 public:
  Propagator(const SpectralBasisd& basis, Convention conv, double kappa = kDefaultKappa);

  /// Recomputes rows from_row+1..T of `u` from row `from_row` and the noise rows.
  void advance(const Field& xi, Field& u, Index from_row) const;

  /// One step out = F(in, xi). `initial_row` marks `in` as the supplied initial profile.
  void step(const double* in, const double* xi, double* out, bool initial_row) const;

  Convention convention() const noexcept { return conv_; }

 private:
  const SpectralBasisd* basis_;
  Convention conv_;
  double kappa_;
  Eigen::MatrixXd phi_;  // phi_m(n), rows m
};

/// Fast path: recursion for Literal, mode stepping for Paper. Matches solution_formula.
Trajectory simulate(const Profile& u0, const NoiseField& noise, const SpectralBasisd& basis,
                    Convention conv = Convention::Literal, double kappa = kDefaultKappa);

/// Draws noise for `seed` and simulates from the zero profile.
Trajectory sample_trajectory(const ModelConfig& config, const SpectralBasisd& basis, std::uint64_t seed,
                             double drift = 0.0);

/// Stationary pinned string on times t0..t0+T, anchored so that the value at (t0, n0) is 0.
struct PinnedString {
  Index t0 = 0;
  Index n0 = 0;
  Index depth = 0;  // past truncation S
  double truncation_bound = 0.0;
  Convention convention = Convention::Literal;
  Field field;  // row r is time t0 + r
};

inline constexpr Index kMaxPastDepth = Index{1} << 20;

/// Smallest S >= 1 with sum_{j>=1} 4 rho_j^{2(S+1)} / (1 - rho_j^2) <= tolerance.
/// Not capped; compare against kMaxPastDepth.
Index required_past_depth(const SpectralBasisd& basis, double tolerance);

/// Time-stepped pinned string whose infinite past is truncated at depth
/// required_past_depth(tolerance). The noise at absolute time s is the same for every window
/// drawn with one seed. Throws TruncationError past kMaxPastDepth.
PinnedString pinned_string(const SpectralBasisd& basis, Index t0, Index n0, Index T, double tolerance,
                           std::uint64_t seed, Convention conv = Convention::Literal);

/// sum_{s>S} sum_{j=1}^{J-1} [rho_j^{dt+s} phi_j(n) - rho_j^s phi_j(n0)]^2, in closed form.
double truncation_error_bound(const SpectralBasisd& basis, Index S, Index n, Index n0, Index dt);

/// Exact draw of the stationary pinned-string profile at a single time: each mode m >= 1 gets an
/// independent normal coefficient with its stationary variance, and the profile is shifted so
/// that site n0 reads 0. The tilt drift only moves mode 0, which the anchoring removes.
Profile sample_stationary_profile(const SpectralBasisd& basis, Convention conv, Index n0, RngStream& rng);

/// CSV with header `t,n,u`, one row per lattice point, values at 17 significant digits.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

/// Binary dump, all fields little-endian:
///   char[8] magic "PLMRTRJ\0", u32 version (=1), u32 J, u32 T, u64 seed, u8 convention,
///   u8[7] reserved (zero), f64 kappa, then (T+1)*J f64 values, row-major in t.
void write_trajectory_binary(std::ostream& out, const Trajectory& traj);
Trajectory read_trajectory_binary(std::istream& in);

inline constexpr std::uint32_t kTrajectoryFormatVersion = 1;

}  // namespace polymer

#endif  // POLYMER_DYNAMICS_HPP
