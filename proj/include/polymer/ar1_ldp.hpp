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

#ifndef POLYMER_AR1_LDP_HPP
#define POLYMER_AR1_LDP_HPP

#include <cstdint>
#include <vector>

#include "polymer/dynamics.hpp"

namespace polymer {

/// X_{t+1} = rho X_t + innovation, innovation ~ Normal(0, sigma2).
struct AR1Params {
  double rho = 0.0;
  double sigma2 = 1.0;
};

/// One spectral mode of the centered field: X_t = <e_m, u(t) - ubar(t)>, t = 1..T.
struct ModeProcess {
  Index m = 0;
  std::vector<double> X;  // X[t-1] holds X_t
  double time_average = 0.0;  // S_T = (1/T) sum X_t^2
};

/// Projects the centered field onto the orthonormal modes e_m = a_m phi_m, m = 1..J-1.
/// Requires u(0, .) == 0.
std::vector<ModeProcess> mode_decompose(const Trajectory& traj, const SpectralBasisd& basis);

/// sum_m X_t^{(m)} e_m(n) for t = 1..T; row t-1 of the result is time t.
Field mode_resynthesize(const std::vector<ModeProcess>& modes, const SpectralBasisd& basis);

/// Per-mode AR(1) parameters of the orthonormal mode coefficients under the given convention:
/// Literal gives (rho_m, 1); Paper gives (rho_m, J rho_m^2 / 2).
AR1Params mode_params(const SpectralBasisd& basis, Index m, Convention conv);

struct GyrationIdentity {
  double R2_direct = 0.0;
  double R2_spectral = 0.0;      // constant * sum_m S_T^{(m)}
  double constant = 0.0;         // 1/J for the orthonormal decomposition
  double fitted_constant = 0.0;  // R2_direct / sum_m S_T^{(m)}, NaN when the sum is 0
};

GyrationIdentity gyration_spectral_identity(const Trajectory& traj, const SpectralBasisd& basis);

/// Rate function of S_T for unit innovation variance, rescaled as I_sigma(x) = I_1(x / sigma2):
///   I_1(x) = -1/2 ln(2x / (1 + sqrt(4 rho^2 x^2 + 1))) + 1/2 [(rho^2 + 1) x - sqrt(4 rho^2 x^2 + 1)]
/// for x > 0, +inf otherwise.
double rate_function(const AR1Params& params, double x);

/// The same display with the 1/(2 sigma2) prefactor on the bracket and no rescaling of x.
/// Agrees with rate_function only at sigma2 = 1.
double rate_function_as_printed(const AR1Params& params, double x);

/// y_c = (1 - |rho|)^2 / (2 sigma2): the cumulant recursion has a fixed point iff y <= y_c.
double explosion_threshold(const AR1Params& params);

struct CumulantResult {
  double lambda_star = 0.0;
  double cumulant = 0.0;  // -1/2 ln(1 - 2 sigma2 lambda*)
  std::int64_t iterations = 0;
};

/// Iterates lambda_{k+1} = rho^2 lambda_k / (1 - 2 sigma2 lambda_k) + y from lambda_0 = y until
/// |lambda_{k+1} - lambda_k| < 1e-12 (at most 1e5 steps). Throws DomainError, carrying the last
/// iterate, when the iteration crosses 1/(2 sigma2) or fails to settle.
CumulantResult cumulant_fixed_point(const AR1Params& params, double y);

struct TailProbeResult {
  Index T = 0;
  double K = 0.0;
  std::int64_t samples = 0;
  std::int64_t exceedances = 0;
  double probability = 0.0;
  double empirical_rate = 0.0;  // -(1/T) log P(S_T > K); +inf when no exceedance
  double rate_at_K = 0.0;
  bool underpowered = false;    // fewer than 20 exceedances
};

inline constexpr std::int64_t kMinTailExceedances = 20;

/// Monte Carlo estimate of P(S_T > K) for the AR(1) chain started at X_0 = 0.
/// Requires K above the stationary mean sigma2 / (1 - rho^2).
TailProbeResult tail_probe(const AR1Params& params, Index T, double K, std::int64_t samples,
                           std::uint64_t seed);

/// -(log P_{T2} - log P_{T1}) / (T2 - T1): the decay rate with the prefactor cancelled.
double tail_slope_rate(const TailProbeResult& shorter, const TailProbeResult& longer);

}  // namespace polymer

#endif  // POLYMER_AR1_LDP_HPP
