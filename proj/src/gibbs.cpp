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

#include "polymer/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "polymer/increment_stats.hpp"
#include "polymer/parallel.hpp"
#include "polymer/rng.hpp"
#include "polymer/stats.hpp"

namespace polymer {
namespace {

constexpr std::uint64_t kStationaryStream = 0x5754A7104A4EULL;
constexpr std::uint64_t kChainStream = 0xC4A1AULL;
constexpr std::uint64_t kChainInitStream = 0xC4A1B0ULL;

void check_beta_epsilon(double beta, double epsilon) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw InvalidParameter("beta must be finite and >= 0");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw InvalidParameter("epsilon must be finite and > 0");
}

void check_count(std::int64_t count) {
  if (count < 1) throw InvalidParameter("ensemble size must be >= 1");
}

}  // namespace

std::vector<double> WeightedEnsemble::normalized_weights() const {
  std::vector<double> w(items.size());
  if (items.empty()) return w;
  double peak = -std::numeric_limits<double>::infinity();
  for (const auto& it : items) peak = std::max(peak, it.log_weight);
  double total = 0.0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    w[i] = std::exp(items[i].log_weight - peak);
    total += w[i];
  }
  for (double& x : w) x /= total;
  return w;
}

double WeightedEnsemble::effective_sample_size() const {
  const auto w = normalized_weights();
  double sq = 0.0;
  for (double x : w) sq += x * x;
  return sq > 0.0 ? 1.0 / sq : 0.0;
}

double boltzmann_log_weight(const Trajectory& traj, double beta, double epsilon) {
  check_beta_epsilon(beta, epsilon);
  if (beta == 0.0) return 0.0;
  std::int64_t total = 0;
  for (Index t = 1; t <= traj.T; ++t) total += self_intersection_count(traj, t, epsilon);
  return -beta * static_cast<double>(total);
}

double boltzmann_log_weight(const ObservableRecord& record, double beta) {
  if (beta == 0.0) return 0.0;
  return -beta * static_cast<double>(record.N_total());
}

double log_weight_floor(double beta, Index T, Index J) {
  return -beta * static_cast<double>(T * J);
}

MeasureEstimate estimate_measure(const WeightedEnsemble& ensemble, const ObservableSelector& selector,
                                 double ess_floor) {
  if (ensemble.items.empty()) throw InvalidParameter("cannot estimate from an empty ensemble");
  const std::size_t n = ensemble.items.size();
  MeasureEstimate est;
  est.count = n;

  std::vector<double> shifted(n);
  const double floor = ensemble.base == BaseMeasure::Free ? log_weight_floor(ensemble.beta, ensemble.T, ensemble.J) : 0.0;
  for (std::size_t i = 0; i < n; ++i) shifted[i] = ensemble.items[i].log_weight - floor;
  const double log_mean = stats::log_sum_exp(shifted) - std::log(static_cast<double>(n));

  const auto w = ensemble.normalized_weights();
  double sq = 0.0;
  for (double x : w) sq += x * x;
  est.ess = 1.0 / sq;
  if (est.ess < ess_floor) {
    throw DegeneracyError(ensemble.beta, static_cast<std::int64_t>(ensemble.T), static_cast<std::int64_t>(ensemble.J),
                          est.ess, ess_floor);
  }

  switch (ensemble.base) {
    case BaseMeasure::Free: {
      const double J = static_cast<double>(ensemble.J);
      const double lower = -ensemble.beta * static_cast<double>(ensemble.T) * J * J;
      est.log_Z = std::clamp(floor + log_mean, lower, floor);
      break;
    }
    case BaseMeasure::Tilted:
      est.log_Z = log_mean;
      break;
    case BaseMeasure::Target:
      est.log_Z = std::numeric_limits<double>::quiet_NaN();
      break;
  }
  // Relative standard error of the mean weight: sd(w)/(mean(w) sqrt(n)) = sqrt(n sum (w - 1/n)^2 / (n - 1))
  // for normalized w. Summing deviations keeps equal weights at exactly zero.
  if (ensemble.base != BaseMeasure::Target && n > 1) {
    const double nn = static_cast<double>(n);
    double dev = 0.0;
    for (double x : w) dev += (x - 1.0 / nn) * (x - 1.0 / nn);
    est.log_Z_se = std::sqrt(nn * dev / (nn - 1.0));
  }

  double q = 0.0;
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) {
    f[i] = selector(ensemble.items[i].record);
    q += w[i] * f[i];
  }
  double var = 0.0;
  for (std::size_t i = 0; i < n; ++i) var += w[i] * w[i] * (f[i] - q) * (f[i] - q);
  est.Q_expectation = n == 1 ? f[0] : q;
  est.Q_se = std::sqrt(var);
  return est;
}

WeightedEnsemble free_ensemble(const ModelConfig& config, const SpectralBasisd& basis, double beta, double epsilon,
                               std::int64_t count) {
  return tilted_ensemble(config, basis, beta, epsilon, 0.0, count);
}

WeightedEnsemble tilted_ensemble(const ModelConfig& config, const SpectralBasisd& basis, double beta, double epsilon,
                                 double a, std::int64_t count) {
  check_beta_epsilon(beta, epsilon);
  check_count(count);
  WeightedEnsemble ens;
  ens.beta = beta;
  ens.epsilon = epsilon;
  ens.base = a == 0.0 ? BaseMeasure::Free : BaseMeasure::Tilted;
  ens.drift = a;
  ens.T = config.T;
  ens.J = config.J;
  ens.items.resize(static_cast<std::size_t>(count));
  const double lambda = TiltedMeasure::log_mgf(a);
  parallel_for(static_cast<std::size_t>(count), [&](std::size_t k) {
    const std::uint64_t seed = derive_seed(config.seed, k);
    const NoiseField noise = sample_noise(seed, config.T, config.J, a);
    const Trajectory traj = simulate(Profile::Zero(config.J), noise, basis, config.convention, config.kappa);
    WeightedItem& item = ens.items[k];
    item.record = observe(traj, epsilon);
    if (a != 0.0) {
      double corr = 0.0;
      for (Index i = 0; i < noise.xi.size(); ++i) corr += lambda - a * noise.xi.data()[i];
      item.log_correction = corr;
    }
    item.log_weight = boltzmann_log_weight(item.record, beta) + item.log_correction;
  });
  return ens;
}

JensenResult jensen_lower_bound(const ModelConfig& config, const SpectralBasisd& basis, double a, double beta,
                                double epsilon, std::int64_t samples) {
  check_beta_epsilon(beta, epsilon);
  check_count(samples);
  const Index J = config.J;
  const auto n = static_cast<std::size_t>(samples);

  std::vector<double> counts(n);
  const std::uint64_t stat_seed = derive_seed(config.seed, kStationaryStream);
  parallel_for(n, [&](std::size_t k) {
    RngStream rng(derive_seed(stat_seed, k));
    const Profile profile = sample_stationary_profile(basis, config.convention, 0, rng);
    counts[k] = static_cast<double>(self_intersection_count({profile.data(), static_cast<std::size_t>(J)}, epsilon));
  });
  stats::Accumulator acc;
  for (double c : counts) acc.add(c);

  JensenResult res;
  res.mean_intersections = acc.mean();
  res.bound = -beta * acc.mean() - 0.5 * a * a * static_cast<double>(J);
  res.bound_se = beta * acc.standard_error();

  const WeightedEnsemble ens = free_ensemble(config, basis, beta, epsilon, samples);
  const MeasureEstimate est = estimate_measure(ens, [](const ObservableRecord& r) { return r.R; });
  const double T = static_cast<double>(config.T);
  const double floor = log_weight_floor(beta, config.T, J);
  res.logZ_over_T = -beta * static_cast<double>(J) + (est.log_Z - floor) / T;
  res.logZ_se = est.log_Z_se / T;

  const double combined = std::sqrt(res.bound_se * res.bound_se + res.logZ_se * res.logZ_se);
  res.holds = res.logZ_over_T >= res.bound - 3.0 * combined;
  const double scale = std::abs(res.bound);
  res.adequate_precision = scale == 0.0 ? combined == 0.0 : (res.bound_se < 0.1 * scale && res.logZ_se < 0.1 * scale);
  return res;
}

MetropolisRun metropolis_sampler(const ModelConfig& config, const SpectralBasisd& basis, double beta, double epsilon,
                                 const MetropolisOptions& options) {
  check_beta_epsilon(beta, epsilon);
  if (options.sweeps < 1 || options.burn_in < 0 || options.thin < 1) {
    throw InvalidParameter("metropolis needs sweeps >= 1, burn_in >= 0, thin >= 1");
  }
  if (!(options.proposal_scale > 0.0 && options.proposal_scale <= 1.0)) {
    throw InvalidParameter("proposal scale must lie in (0, 1]");
  }
  const Index T = config.T;
  const Index J = config.J;
  const double s = options.proposal_scale;
  const double keep = std::sqrt(1.0 - s * s);
  const std::int64_t entry_updates = options.entry_updates < 0 ? J : options.entry_updates;

  const Propagator prop(basis, config.convention, config.kappa);
  RngStream rng(derive_seed(config.seed, kChainStream));
  NoiseField noise = sample_noise(derive_seed(config.seed, kChainInitStream), T, J);
  Field& xi = noise.xi;
  Field u = Field::Zero(T + 1, J);
  prop.advance(xi, u, 0);
  Field trial = u;

  std::vector<std::int64_t> N(static_cast<std::size_t>(T + 1), 0);
  std::vector<std::int64_t> N_trial(N.size(), 0);
  const bool penalized = beta > 0.0;
  const auto count_row = [&](const Field& f, Index t) {
    return self_intersection_count({f.row(t).data(), static_cast<std::size_t>(J)}, epsilon);
  };
  if (penalized) {
    for (Index t = 1; t <= T; ++t) N[static_cast<std::size_t>(t)] = count_row(u, t);
  }

  MetropolisRun run;
  auto& diag = run.diagnostics;
  Eigen::RowVectorXd saved(J);

  // Proposal already written into xi rows/entries at time t; decide and commit or roll back.
  const auto resolve = [&](Index t, const auto& restore) {
    for (Index k = t; k < T; ++k) {
      prop.step(trial.row(k).data(), xi.row(k).data(), trial.row(k + 1).data(), k == 0);
    }
    std::int64_t delta = 0;
    if (penalized) {
      for (Index k = t + 1; k <= T; ++k) {
        const auto idx = static_cast<std::size_t>(k);
        N_trial[idx] = count_row(trial, k);
        delta += N_trial[idx] - N[idx];
      }
    }
    const double log_ratio = -beta * static_cast<double>(delta);
    const bool accepted = metropolis_accept(log_ratio, rng.uniform());
    if (accepted) {
      u.bottomRows(T - t) = trial.bottomRows(T - t);
      if (penalized) {
        for (Index k = t + 1; k <= T; ++k) N[static_cast<std::size_t>(k)] = N_trial[static_cast<std::size_t>(k)];
      }
    } else {
      restore();
      trial.bottomRows(T - t) = u.bottomRows(T - t);
    }
    return accepted;
  };

  std::vector<double> trace;
  const std::int64_t total_sweeps = options.burn_in + options.sweeps;
  for (std::int64_t sweep = 0; sweep < total_sweeps; ++sweep) {
    for (Index t = 0; t < T; ++t) {
      saved = xi.row(t);
      for (Index n = 0; n < J; ++n) xi(t, n) = keep * xi(t, n) + s * rng.normal();
      ++diag.row_proposals;
      if (resolve(t, [&] { xi.row(t) = saved; })) ++diag.row_accepts;
    }
    for (std::int64_t e = 0; e < entry_updates; ++e) {
      const auto t = static_cast<Index>(rng() % static_cast<std::uint64_t>(T));
      const auto n = static_cast<Index>(rng() % static_cast<std::uint64_t>(J));
      const double old = xi(t, n);
      xi(t, n) = keep * old + s * rng.normal();
      ++diag.entry_proposals;
      if (resolve(t, [&] { xi(t, n) = old; })) ++diag.entry_accepts;
    }
    const std::int64_t recorded = sweep - options.burn_in;
    if (recorded >= 0 && recorded % options.thin == 0) {
      Trajectory traj;
      traj.T = T;
      traj.J = J;
      traj.u = u;
      traj.convention = config.convention;
      traj.kappa = config.kappa;
      traj.seed = config.seed;
      WeightedItem item;
      item.record = observe(traj, epsilon);
      trace.push_back(static_cast<double>(item.record.N_total()));
      run.ensemble.items.push_back(std::move(item));
    }
  }

  run.ensemble.beta = beta;
  run.ensemble.epsilon = epsilon;
  run.ensemble.base = BaseMeasure::Target;
  run.ensemble.T = T;
  run.ensemble.J = J;
  const auto proposals = diag.row_proposals + diag.entry_proposals;
  diag.acceptance_rate = proposals > 0 ? static_cast<double>(diag.row_accepts + diag.entry_accepts) /
                                             static_cast<double>(proposals)
                                       : 0.0;
  diag.autocorrelation_time = stats::integrated_autocorrelation_time(trace);
  diag.ess = static_cast<double>(trace.size()) / diag.autocorrelation_time;
  diag.tuning_warning = diag.acceptance_rate < 0.05 || diag.acceptance_rate > 0.95;
  return run;
}

double pair_proximity_bound(const SpectralBasisd& basis, double epsilon, Convention conv) {
  const Index J = basis.size();
  if (J < 2) throw InvalidParameter("pair proximity bound needs J >= 2");
  if (!(epsilon > 0.0)) throw InvalidParameter("epsilon must be > 0");
  double bound = static_cast<double>(J);
  for (Index d = 1; d < J; ++d) {
    const double var = min_increment_variance_at_distance(basis, d, conv);
    const double prob = var > 0.0 ? 2.0 * stats::normal_cdf(epsilon / std::sqrt(var)) - 1.0 : 1.0;
    bound += 2.0 * static_cast<double>(J - d) * prob;
  }
  return bound;
}

}  // namespace polymer
