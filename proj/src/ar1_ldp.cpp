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

#include "polymer/ar1_ldp.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "polymer/observables.hpp"
#include "polymer/parallel.hpp"

namespace polymer {

std::vector<ModeProcess> mode_decompose(const Trajectory& traj, const SpectralBasisd& basis) {
  if (traj.T < 1) throw InvalidParameter("mode decomposition needs T >= 1");
  if (basis.size() != traj.J) throw DimensionMismatch("basis size differs from trajectory width");
  if (!traj.u.row(0).isZero(0.0)) throw PreconditionError("mode decomposition assumes u0 == 0");
  const Index J = traj.J;
  const Eigen::MatrixXd e = basis.orthonormal_table();
  std::vector<ModeProcess> modes(static_cast<std::size_t>(J > 1 ? J - 1 : 0));
  for (Index m = 1; m < J; ++m) {
    auto& mode = modes[static_cast<std::size_t>(m - 1)];
    mode.m = m;
    mode.X.resize(static_cast<std::size_t>(traj.T));
  }
  Eigen::VectorXd centered(J);
  for (Index t = 1; t <= traj.T; ++t) {
    centered = traj.u.row(t).transpose();
    centered.array() -= centered.mean();
    for (Index m = 1; m < J; ++m) {
      modes[static_cast<std::size_t>(m - 1)].X[static_cast<std::size_t>(t - 1)] = e.row(m).dot(centered);
    }
  }
  for (auto& mode : modes) {
    double s = 0.0;
    for (double x : mode.X) s += x * x;
    mode.time_average = s / static_cast<double>(traj.T);
  }
  return modes;
}

Field mode_resynthesize(const std::vector<ModeProcess>& modes, const SpectralBasisd& basis) {
  const Index J = basis.size();
  const Index T = modes.empty() ? 0 : static_cast<Index>(modes.front().X.size());
  const Eigen::MatrixXd e = basis.orthonormal_table();
  Field out = Field::Zero(T, J);
  for (const auto& mode : modes) {
    for (Index t = 0; t < T; ++t) {
      out.row(t) += mode.X[static_cast<std::size_t>(t)] * e.row(mode.m);
    }
  }
  return out;
}

AR1Params mode_params(const SpectralBasisd& basis, Index m, Convention conv) {
  if (m < 1 || m >= basis.size()) throw InvalidParameter("mode index must lie in [1, J-1]");
  const double rho = basis.rho(m);
  if (conv == Convention::Literal) return {rho, 1.0};
  return {rho, static_cast<double>(basis.size()) * rho * rho / 2.0};
}

GyrationIdentity gyration_spectral_identity(const Trajectory& traj, const SpectralBasisd& basis) {
  const auto modes = mode_decompose(traj, basis);
  double sum = 0.0;
  for (const auto& mode : modes) sum += mode.time_average;
  GyrationIdentity id;
  const double R = radius_of_gyration(traj);
  id.R2_direct = R * R;
  id.constant = 1.0 / static_cast<double>(traj.J);
  id.R2_spectral = id.constant * sum;
  id.fitted_constant = sum > 0.0 ? id.R2_direct / sum : std::numeric_limits<double>::quiet_NaN();
  return id;
}

namespace {

void check_ar1(const AR1Params& params) {
  if (!(std::abs(params.rho) < 1.0)) throw InvalidParameter("AR(1) coefficient must satisfy |rho| < 1");
  if (params.sigma2 < 0.0) throw InvalidParameter("innovation variance must be nonnegative");
  if (params.sigma2 == 0.0) throw PreconditionError("degenerate AR(1) process: innovation variance is 0");
}

double unit_rate(double rho, double x) {
  if (!(x > 0.0)) return std::numeric_limits<double>::infinity();
  const double root = std::sqrt(4.0 * rho * rho * x * x + 1.0);
  return -0.5 * std::log(2.0 * x / (1.0 + root)) + 0.5 * ((rho * rho + 1.0) * x - root);
}

}  // namespace

double rate_function(const AR1Params& params, double x) {
  check_ar1(params);
  return unit_rate(params.rho, x / params.sigma2);
}

double rate_function_as_printed(const AR1Params& params, double x) {
  check_ar1(params);
  if (!(x > 0.0)) return std::numeric_limits<double>::infinity();
  const double rho2 = params.rho * params.rho;
  const double root = std::sqrt(4.0 * rho2 * x * x + 1.0);
  return -0.5 * std::log(2.0 * x / (1.0 + root)) + ((rho2 + 1.0) * x - root) / (2.0 * params.sigma2);
}

double explosion_threshold(const AR1Params& params) {
  check_ar1(params);
  const double gap = 1.0 - std::abs(params.rho);
  return gap * gap / (2.0 * params.sigma2);
}

CumulantResult cumulant_fixed_point(const AR1Params& params, double y) {
  check_ar1(params);
  const double rho2 = params.rho * params.rho;
  const double pole = 1.0 / (2.0 * params.sigma2);
  constexpr std::int64_t kMaxIterations = 100000;
  constexpr double kTolerance = 1e-12;
  if (y >= pole) throw DomainError("cumulant recursion starts beyond 1/(2 sigma2)", y);
  double lambda = y;
  for (std::int64_t k = 1; k <= kMaxIterations; ++k) {
    const double next = rho2 * lambda / (1.0 - 2.0 * params.sigma2 * lambda) + y;
    if (!(next < pole) || !std::isfinite(next)) {
      throw DomainError("cumulant recursion diverged above threshold at y=" + std::to_string(y), lambda);
    }
    if (std::abs(next - lambda) < kTolerance) {
      return {next, -0.5 * std::log(1.0 - 2.0 * params.sigma2 * next), k};
    }
    lambda = next;
  }
  throw DomainError("cumulant recursion did not settle at y=" + std::to_string(y), lambda);
}

TailProbeResult tail_probe(const AR1Params& params, Index T, double K, std::int64_t samples, std::uint64_t seed) {
  check_ar1(params);
  if (T < 1 || samples < 1) throw InvalidParameter("tail probe needs T >= 1 and samples >= 1");
  const double stationary_mean = params.sigma2 / (1.0 - params.rho * params.rho);
  if (!(K > stationary_mean)) {
    throw PreconditionError("tail threshold K=" + std::to_string(K) + " must exceed the stationary mean " +
                            std::to_string(stationary_mean));
  }
  const double sigma = std::sqrt(params.sigma2);
  const double threshold = K * static_cast<double>(T);
  std::vector<unsigned char> hit(static_cast<std::size_t>(samples), 0);
  parallel_for(static_cast<std::size_t>(samples), [&](std::size_t k) {
    RngStream rng(derive_seed(seed, k));
    double x = 0.0;
    double sum = 0.0;
    for (Index t = 0; t < T; ++t) {
      x = params.rho * x + sigma * rng.normal();
      sum += x * x;
    }
    hit[k] = sum > threshold ? 1 : 0;
  });
  TailProbeResult res;
  res.T = T;
  res.K = K;
  res.samples = samples;
  for (unsigned char h : hit) res.exceedances += h;
  res.probability = static_cast<double>(res.exceedances) / static_cast<double>(samples);
  res.empirical_rate = res.exceedances > 0 ? -std::log(res.probability) / static_cast<double>(T)
                                           : std::numeric_limits<double>::infinity();
  res.rate_at_K = rate_function(params, K);
  res.underpowered = res.exceedances < kMinTailExceedances;
  return res;
}

double tail_slope_rate(const TailProbeResult& shorter, const TailProbeResult& longer) {
  if (longer.T <= shorter.T) throw InvalidParameter("slope rate needs T2 > T1");
  if (shorter.exceedances == 0 || longer.exceedances == 0) return std::numeric_limits<double>::quiet_NaN();
  return -(std::log(longer.probability) - std::log(shorter.probability)) /
         static_cast<double>(longer.T - shorter.T);
}

}  // namespace polymer
