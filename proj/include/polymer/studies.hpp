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

#ifndef POLYMER_STUDIES_HPP
#define POLYMER_STUDIES_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "polymer/config.hpp"
#include "polymer/gibbs.hpp"
#include "polymer/report.hpp"
#include "polymer/stats.hpp"

namespace polymer {

/// Exact E[R^2] for the field started at zero with beta = 0 and no drift:
///   (1/(T J)) sum_{t=1}^{T} sum_{m=1}^{J-1} Var X_t^{(m)},
/// Var X_t = sum_{k<t} lambda_m^{2k} (Literal, lambda_m = 1 - 2 kappa (1 - cos(m pi / J)))
/// or (J/2) rho_m^2 sum_{k<t} rho_m^{2k} (Paper).
double exact_mean_R2(Index J, Index T, Convention conv, double kappa = kDefaultKappa);

/// Draws of (R, N_total) for one (J, T) cell from the configured sampler.
struct CellDraws {
  std::vector<double> R;
  std::vector<double> N_total;
  std::vector<double> weights;  // normalized; uniform for direct and Metropolis draws
  std::string sampler;          // "direct", "importance" or "metropolis"
  double ess = 0.0;             // importance ESS, or Metropolis sample count / tau(R)
  double acceptance = 0.0;      // Metropolis only
  bool correlated = false;      // Metropolis chain: standard errors use the autocorrelation time
  bool degenerate = false;      // importance ESS below the floor and no fallback allowed
  MetropolisDiagnostics diagnostics;
};

/// beta = 0 and no drift: direct draws. Otherwise IMPORTANCE weighs drifted free draws,
/// METROPOLIS runs the chain, AUTO tries importance and switches to the chain below the ESS floor.
/// Draws run in parallel; results depend only on (config, J, T, seed).
CellDraws draw_cell(const StudyConfig& config, const SpectralBasisd& basis, Index T, std::uint64_t seed);

struct WeightedStat {
  double mean = 0.0;
  double se = 0.0;
};
/// Weighted mean of f over the draws with a standard error (inflated by the integrated
/// autocorrelation time of f for chain output).
WeightedStat cell_mean(const CellDraws& draws, const std::vector<double>& f);

/// Weighted type-7-like quantile (step at cumulative weight q; plain type 7 for uniform weights).
double weighted_quantile(const std::vector<double>& values, const std::vector<double>& weights, double q);

struct ScalingRow {
  Index J = 0;
  double beta = 0.0;
  double R_mean = 0.0;
  double R_se = 0.0;
  double R2_mean = 0.0;
  double R2_se = 0.0;
  double R_q05 = 0.0;
  double R_q95 = 0.0;
  double ess_or_acceptance = 0.0;
  std::string sampler;
  bool flagged = false;
  double exact_R2 = 0.0;  // NaN unless beta = 0 and drift = 0
};

struct ScalingReport {
  Convention convention = Convention::Literal;
  Index T = 0;
  double beta = 0.0;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  std::int64_t replicates = 0;
  std::vector<ScalingRow> rows;
  std::size_t usable_rows = 0;
  bool fit_ok = false;  // at least three unflagged rows
  stats::LinearFit fit;  // log R_mean against log J over unflagged rows
  double exact_exponent = 0.0;  // same fit on sqrt(exact E R^2); NaN when not available

  ReportTable table() const;
  nlohmann::ordered_json summary() const;
};

/// R(T, J) statistics for every J in config.J_list and the log-log slope.
/// Throws ConfigError when J_list has fewer than three entries.
ScalingReport run_scaling_study(const StudyConfig& config);

struct TailCell {
  Index J = 0;
  Index T = 0;
  double lower = 0.0;  // Q_T[R < K1 J]
  double lower_se = 0.0;
  double upper = 0.0;  // Q_T[R > K2 J]
  double upper_se = 0.0;
  bool lower_underpowered = false;
  bool upper_underpowered = false;
  std::string sampler;
  double ess_or_acceptance = 0.0;
  double ess = 0.0;
  bool flagged = false;  // sampler degenerate
};

struct TailReport {
  double K1 = 0.0;
  double K2 = 0.0;
  double beta = 0.0;
  double epsilon = 0.0;
  Convention convention = Convention::Literal;
  std::vector<TailCell> cells;  // J-major, T ascending
  bool lower_nonincreasing = true;
  bool upper_nonincreasing = true;

  ReportTable table() const;
  nlohmann::ordered_json summary() const;
};

/// Fewer than this many expected hits (p * ESS) flags a tail cell as underpowered.
inline constexpr double kMinTailHits = 5.0;

/// Both tail probabilities at every T in config.T_list (sorted ascending) for every J, with the
/// check that each is nonincreasing in T within 3 combined standard errors.
TailReport run_tail_probes(const StudyConfig& config, double K1, double K2);

/// seed, J, T, beta, epsilon, R, N_total, log_weight per item.
ReportTable ensemble_table(const WeightedEnsemble& ensemble, std::uint64_t seed);

/// One row per chain with the sampler diagnostics.
ReportTable chain_diagnostics_table(const ModelConfig& config, double beta, const MetropolisDiagnostics& diag);

}  // namespace polymer

#endif  // POLYMER_STUDIES_HPP
