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

#ifndef POLYMER_GIBBS_HPP
#define POLYMER_GIBBS_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "polymer/dynamics.hpp"
#include "polymer/observables.hpp"

namespace polymer {

/// Law the ensemble items were drawn from.
enum class BaseMeasure : std::uint8_t {
  Free,    // P_T: Gaussian noise, log_weight = Boltzmann log weight
  Tilted,  // P_T^(a): Normal(a, 1) noise, log_weight also carries the Radon-Nikodym correction
  Target,  // already distributed as Q_T (Metropolis output), unit weights
};

struct WeightedItem {
  ObservableRecord record;
  double log_weight = 0.0;
  double log_correction = 0.0;  // sum_{t,n} (Lambda(a) - a xi(t,n)); 0 unless Tilted
};

struct WeightedEnsemble {
  std::vector<WeightedItem> items;
  double beta = 0.0;
  double epsilon = 1.0;
  BaseMeasure base = BaseMeasure::Free;
  double drift = 0.0;
  Index T = 0;
  Index J = 0;

  /// Self-normalized weights (sum to 1).
  std::vector<double> normalized_weights() const;
  /// (sum w)^2 / sum w^2, in [1, size()].
  double effective_sample_size() const;
};

/// Gaussian log-moment generating function Lambda(a) = a^2 / 2.
struct TiltedMeasure {
  double a = 0.0;
  static constexpr double log_mgf(double x) noexcept { return 0.5 * x * x; }
  double log_mgf() const noexcept { return log_mgf(a); }
};

/// -beta sum_{t=1}^{T} N_eps(t); lies in [-beta T J^2, -beta T J].
double boltzmann_log_weight(const Trajectory& traj, double beta, double epsilon);
double boltzmann_log_weight(const ObservableRecord& record, double beta);

/// -beta T J: every configuration pays at least the diagonal pairs.
double log_weight_floor(double beta, Index T, Index J);

using ObservableSelector = std::function<double(const ObservableRecord&)>;

struct MeasureEstimate {
  double log_Z = 0.0;        // NaN for Target ensembles
  double log_Z_se = 0.0;     // delta-method standard error of log Z
  double Q_expectation = 0.0;
  double Q_se = 0.0;
  double ess = 0.0;
  std::size_t count = 0;
};

inline constexpr double kDefaultEssFloor = 50.0;

/// log Z by log-sum-exp after factoring out the floor -beta T J (clamped to the attainable
/// interval for Free ensembles); Q-expectation by self-normalized importance weights.
/// Throws DegeneracyError when ESS < ess_floor.
MeasureEstimate estimate_measure(const WeightedEnsemble& ensemble, const ObservableSelector& selector,
                                 double ess_floor = kDefaultEssFloor);

/// `count` trajectories from P_T weighted by the Boltzmann factor. Item k uses noise seed
/// derive_seed(config.seed, k).
WeightedEnsemble free_ensemble(const ModelConfig& config, const SpectralBasisd& basis, double beta,
                               double epsilon, std::int64_t count);

/// Trajectories driven by Normal(a, 1) noise. Each item's log weight is the Boltzmann log
/// weight plus sum_{t,n} (Lambda(a) - a xi(t,n)), so reweighted averages target P_T / Q_T.
WeightedEnsemble tilted_ensemble(const ModelConfig& config, const SpectralBasisd& basis, double beta,
                                 double epsilon, double a, std::int64_t count);

struct JensenResult {
  double bound = 0.0;            // -(beta/T) E^[sum_t N_eps(t)] - a^2 J / 2
  double bound_se = 0.0;
  double logZ_over_T = 0.0;
  double logZ_se = 0.0;          // standard error of logZ_over_T
  double mean_intersections = 0.0;  // E^[N_eps(0)] under the stationary pinned string
  bool holds = false;            // logZ_over_T >= bound - 3 combined SE
  bool adequate_precision = false;  // both SE below 10% of |bound| (trivially true if bound == 0 and SE == 0)
};

/// E^[sum_t N_eps(t)] = T E^[N_eps(0)] by stationarity, estimated from exact stationary mode
/// draws; log Z from importance sampling of P_T started at u0 = 0.
JensenResult jensen_lower_bound(const ModelConfig& config, const SpectralBasisd& basis, double a, double beta,
                                double epsilon, std::int64_t samples);

/// Metropolis accept test: true iff uniform <= exp(min(0, log_ratio)).
inline bool metropolis_accept(double log_ratio, double uniform) {
  return log_ratio >= 0.0 || uniform <= std::exp(log_ratio);
}

struct MetropolisOptions {
  std::int64_t sweeps = 1000;      // recorded sweeps after burn-in
  std::int64_t burn_in = 100;
  std::int64_t thin = 1;           // emit one sample every `thin` sweeps
  double proposal_scale = 0.5;     // pCN step s in (0, 1]: xi' = sqrt(1 - s^2) xi + s z
  std::int64_t entry_updates = -1; // single-entry proposals per sweep; -1 means J
};

struct MetropolisDiagnostics {
  std::int64_t row_proposals = 0;
  std::int64_t row_accepts = 0;
  std::int64_t entry_proposals = 0;
  std::int64_t entry_accepts = 0;
  double acceptance_rate = 0.0;
  double autocorrelation_time = 1.0;  // of sum_t N_eps(t), in emitted samples
  double ess = 0.0;
  bool tuning_warning = false;        // acceptance outside [0.05, 0.95]
};

struct MetropolisRun {
  WeightedEnsemble ensemble;  // unit weights, BaseMeasure::Target
  MetropolisDiagnostics diagnostics;
};

/// Chain on the noise field xi whose stationary law is Q_T. Proposals are preconditioned
/// Crank-Nicolson moves (one per time row, plus single entries) that leave the Gaussian base
/// law invariant, so the acceptance ratio is exp(-beta (sum N' - sum N)).
MetropolisRun metropolis_sampler(const ModelConfig& config, const SpectralBasisd& basis, double beta,
                                 double epsilon, const MetropolisOptions& options);

/// J + sum_{d=1}^{J-1} 2 (J - d) (2 Phi(eps / sigma_d) - 1), sigma_d^2 the smallest closed-form
/// increment variance at separation d. Upper-bounds E[N_eps(0)] for the stationary pinned string.
double pair_proximity_bound(const SpectralBasisd& basis, double epsilon, Convention conv = Convention::Literal);

}  // namespace polymer

#endif  // POLYMER_GIBBS_HPP
