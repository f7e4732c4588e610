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

#include "polymer/studies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "polymer/parallel.hpp"
#include "polymer/rng.hpp"

namespace polymer {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

MetropolisOptions chain_options(const StudyConfig& config) {
  MetropolisOptions opt;
  opt.sweeps = config.sweeps;
  opt.burn_in = config.burn_in;
  opt.thin = config.thin;
  opt.proposal_scale = config.proposal_scale;
  return opt;
}

void fill_uniform_weights(CellDraws& d) {
  d.weights.assign(d.R.size(), d.R.empty() ? 0.0 : 1.0 / static_cast<double>(d.R.size()));
}

CellDraws run_chain(const StudyConfig& config, const SpectralBasisd& basis, Index T, std::uint64_t seed,
                    double epsilon) {
  ModelConfig model = config.model(basis.size(), T);
  model.seed = seed;
  MetropolisRun run = metropolis_sampler(model, basis, config.beta, epsilon, chain_options(config));
  CellDraws d;
  d.sampler = "metropolis";
  d.correlated = true;
  d.diagnostics = run.diagnostics;
  d.acceptance = run.diagnostics.acceptance_rate;
  for (const auto& item : run.ensemble.items) {
    d.R.push_back(item.record.R);
    d.N_total.push_back(static_cast<double>(item.record.N_total()));
  }
  fill_uniform_weights(d);
  d.ess = static_cast<double>(d.R.size()) / stats::integrated_autocorrelation_time(d.R);
  return d;
}

std::int64_t total_intersections(const Trajectory& traj, double epsilon) {
  std::int64_t total = 0;
  for (Index t = 1; t <= traj.T; ++t) total += self_intersection_count(traj, t, epsilon);
  return total;
}

}  // namespace

double exact_mean_R2(Index J, Index T, Convention conv, double kappa) {
  if (J < 1 || T < 1) throw InvalidParameter("exact E[R^2] needs J >= 1 and T >= 1");
  if (conv == Convention::Paper && kappa != kDefaultKappa) {
    throw InvalidParameter("the paper convention is defined for kappa = 1/2 only");
  }
  const double len = static_cast<double>(J);
  double total = 0.0;
  for (Index m = 1; m < J; ++m) {
    const double c = std::cos(static_cast<double>(m) * std::numbers::pi / len);
    const double lambda = conv == Convention::Literal ? 1.0 - 2.0 * kappa * (1.0 - c) : c;
    const double scale = conv == Convention::Literal ? 1.0 : 0.5 * len * lambda * lambda;
    const double l2 = lambda * lambda;
    // sum_{t=1}^{T} sum_{k<t} l2^k, accumulated incrementally.
    double partial = 0.0;
    double power = 1.0;
    double mode_sum = 0.0;
    for (Index t = 1; t <= T; ++t) {
      partial += power;
      power *= l2;
      mode_sum += partial;
    }
    total += scale * mode_sum;
  }
  return total / (static_cast<double>(T) * len);
}

CellDraws draw_cell(const StudyConfig& config, const SpectralBasisd& basis, Index T, std::uint64_t seed) {
  const double epsilon = config.require_epsilon();
  const Index J = basis.size();
  const bool free_field = config.beta == 0.0 && config.drift == 0.0;
  if (!free_field && config.sampler == SamplerChoice::Metropolis) return run_chain(config, basis, T, seed, epsilon);

  const auto n = static_cast<std::size_t>(config.replicates);
  CellDraws d;
  d.R.resize(n);
  d.N_total.resize(n);
  std::vector<double> log_w(n, 0.0);
  const double a = config.drift;
  const double lambda = TiltedMeasure::log_mgf(a);
  parallel_for(n, [&](std::size_t k) {
    const NoiseField noise = sample_noise(derive_seed(seed, k), T, J, a);
    const Trajectory traj = simulate(Profile::Zero(J), noise, basis, config.convention, config.kappa);
    d.R[k] = radius_of_gyration(traj);
    d.N_total[k] = static_cast<double>(total_intersections(traj, epsilon));
    double lw = -config.beta * d.N_total[k];
    if (a != 0.0) {
      for (Index i = 0; i < noise.xi.size(); ++i) lw += lambda - a * noise.xi.data()[i];
    }
    log_w[k] = lw;
  });

  if (free_field) {
    d.sampler = "direct";
    fill_uniform_weights(d);
    d.ess = static_cast<double>(n);
    return d;
  }

  d.sampler = "importance";
  const double peak = *std::max_element(log_w.begin(), log_w.end());
  d.weights.resize(n);
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) sum += d.weights[k] = std::exp(log_w[k] - peak);
  double sq = 0.0;
  for (double& w : d.weights) {
    w /= sum;
    sq += w * w;
  }
  d.ess = 1.0 / sq;
  if (d.ess < config.ess_floor) {
    if (config.sampler == SamplerChoice::Auto) return run_chain(config, basis, T, seed, epsilon);
    d.degenerate = true;
  }
  return d;
}

WeightedStat cell_mean(const CellDraws& draws, const std::vector<double>& f) {
  if (f.size() != draws.weights.size()) throw DimensionMismatch("observable length differs from the draw count");
  WeightedStat out;
  const std::size_t n = f.size();
  if (n == 0) return {kNaN, kNaN};
  for (std::size_t k = 0; k < n; ++k) out.mean += draws.weights[k] * f[k];
  if (draws.sampler == "importance") {
    double v = 0.0;
    for (std::size_t k = 0; k < n; ++k) v += draws.weights[k] * draws.weights[k] * (f[k] - out.mean) * (f[k] - out.mean);
    out.se = std::sqrt(v);
    return out;
  }
  if (n < 2) return {out.mean, kNaN};
  const double se = stats::standard_error(f);
  const double tau = draws.correlated ? stats::integrated_autocorrelation_time(f) : 1.0;
  out.se = se * std::sqrt(tau);
  return out;
}

double weighted_quantile(const std::vector<double>& values, const std::vector<double>& weights, double q) {
  if (values.size() != weights.size() || values.empty()) throw InvalidParameter("weighted quantile needs matching, non-empty inputs");
  const double w0 = weights.front();
  const bool uniform = std::all_of(weights.begin(), weights.end(), [&](double w) { return w == w0; });
  if (uniform) return stats::quantile(values, q);
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
  double cum = 0.0;
  for (std::size_t i : order) {
    cum += weights[i];
    if (cum >= q) return values[i];
  }
  return values[order.back()];
}

ReportTable ScalingReport::table() const {
  ReportTable t;
  t.columns = {"J", "beta", "R_mean", "R_se", "R2_mean", "R2_se", "R_q05", "R_q95", "ESS_or_acceptance", "sampler",
               "flagged", "exact_R2"};
  for (const auto& r : rows) {
    t.add_row({std::int64_t{r.J}, r.beta, r.R_mean, r.R_se, r.R2_mean, r.R2_se, r.R_q05, r.R_q95, r.ess_or_acceptance,
               r.sampler, r.flagged, r.exact_R2});
  }
  return t;
}

nlohmann::ordered_json ScalingReport::summary() const {
  nlohmann::ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["study"] = "scaling";
  j["convention"] = std::string(to_string(convention));
  j["T"] = T;
  j["beta"] = beta;
  j["epsilon"] = epsilon;
  j["seed"] = seed;
  j["replicates"] = replicates;
  j["usable_rows"] = usable_rows;
  j["fit_ok"] = fit_ok;
  j["fitted_exponent"] = fit.slope;
  j["exponent_se"] = fit.slope_se;
  j["exact_exponent"] = exact_exponent;
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    list.push_back({{"J", r.J}, {"R_mean", r.R_mean}, {"R2_mean", r.R2_mean}, {"exact_R2", r.exact_R2},
                    {"sampler", r.sampler}, {"flagged", r.flagged}});
  }
  j["rows"] = std::move(list);
  return j;
}

ScalingReport run_scaling_study(const StudyConfig& config) {
  config.validate();
  const double epsilon = config.require_epsilon();
  if (config.J_list.size() < 3) throw ConfigError("the scaling fit needs at least three values of J");

  ScalingReport rep;
  rep.convention = config.convention;
  rep.T = config.T;
  rep.beta = config.beta;
  rep.epsilon = epsilon;
  rep.seed = config.seed;
  rep.replicates = config.replicates;
  const bool exact_available = config.beta == 0.0 && config.drift == 0.0;

  for (Index J : config.J_list) {
    const SpectralBasisd basis(J);
    const CellDraws d = draw_cell(config, basis, config.T, derive_seed(config.seed, static_cast<std::uint64_t>(J)));
    ScalingRow row;
    row.J = J;
    row.beta = config.beta;
    row.sampler = d.sampler;
    row.flagged = d.degenerate;
    row.ess_or_acceptance = d.sampler == "metropolis" ? d.acceptance : d.ess;
    const WeightedStat r = cell_mean(d, d.R);
    std::vector<double> r2(d.R.size());
    std::transform(d.R.begin(), d.R.end(), r2.begin(), [](double x) { return x * x; });
    const WeightedStat s2 = cell_mean(d, r2);
    row.R_mean = r.mean;
    row.R_se = r.se;
    row.R2_mean = s2.mean;
    row.R2_se = s2.se;
    row.R_q05 = weighted_quantile(d.R, d.weights, 0.05);
    row.R_q95 = weighted_quantile(d.R, d.weights, 0.95);
    row.exact_R2 = exact_available ? exact_mean_R2(J, config.T, config.convention, config.kappa) : kNaN;
    rep.rows.push_back(std::move(row));
  }

  std::vector<double> x, y, y_exact;
  for (const auto& row : rep.rows) {
    if (row.flagged || !(row.R_mean > 0.0)) continue;
    x.push_back(std::log(static_cast<double>(row.J)));
    y.push_back(std::log(row.R_mean));
    y_exact.push_back(0.5 * std::log(row.exact_R2));
  }
  rep.usable_rows = x.size();
  rep.fit_ok = x.size() >= 3;
  if (rep.fit_ok) {
    rep.fit = stats::fit_line(x, y);
    rep.exact_exponent = exact_available ? stats::fit_line(x, y_exact).slope : kNaN;
  } else {
    rep.fit = {kNaN, kNaN, kNaN};
    rep.exact_exponent = kNaN;
  }
  return rep;
}

ReportTable TailReport::table() const {
  ReportTable t;
  t.columns = {"J", "T", "K1", "K2", "lower", "lower_se", "lower_underpowered", "upper", "upper_se",
               "upper_underpowered", "sampler", "ESS_or_acceptance", "flagged"};
  for (const auto& c : cells) {
    t.add_row({std::int64_t{c.J}, std::int64_t{c.T}, K1, K2, c.lower, c.lower_se, c.lower_underpowered, c.upper,
               c.upper_se, c.upper_underpowered, c.sampler, c.ess_or_acceptance, c.flagged});
  }
  return t;
}

nlohmann::ordered_json TailReport::summary() const {
  nlohmann::ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["study"] = "tails";
  j["convention"] = std::string(to_string(convention));
  j["beta"] = beta;
  j["epsilon"] = epsilon;
  j["K1"] = K1;
  j["K2"] = K2;
  j["lower_nonincreasing"] = lower_nonincreasing;
  j["upper_nonincreasing"] = upper_nonincreasing;
  j["cells"] = cells.size();
  return j;
}

TailReport run_tail_probes(const StudyConfig& config, double K1, double K2) {
  config.validate();
  if (!(K1 >= 0.0) || !(K2 > K1)) throw ConfigError("tail probes need 0 <= K1 < K2");
  std::vector<Index> horizons = config.T_list;
  std::sort(horizons.begin(), horizons.end());
  horizons.erase(std::unique(horizons.begin(), horizons.end()), horizons.end());
  if (horizons.size() < 2) throw ConfigError("tail probes need at least two distinct values of T");

  TailReport rep;
  rep.K1 = K1;
  rep.K2 = K2;
  rep.beta = config.beta;
  rep.epsilon = config.require_epsilon();
  rep.convention = config.convention;

  for (Index J : config.J_list) {
    const SpectralBasisd basis(J);
    const std::uint64_t j_seed = derive_seed(config.seed, static_cast<std::uint64_t>(J));
    const std::size_t first = rep.cells.size();
    for (Index T : horizons) {
      const CellDraws d = draw_cell(config, basis, T, derive_seed(j_seed, static_cast<std::uint64_t>(T)));
      TailCell cell;
      cell.J = J;
      cell.T = T;
      cell.sampler = d.sampler;
      cell.flagged = d.degenerate;
      cell.ess = d.ess;
      cell.ess_or_acceptance = d.sampler == "metropolis" ? d.acceptance : d.ess;
      const double lo_cut = K1 * static_cast<double>(J);
      const double hi_cut = K2 * static_cast<double>(J);
      std::vector<double> lo(d.R.size()), hi(d.R.size());
      for (std::size_t k = 0; k < d.R.size(); ++k) {
        lo[k] = d.R[k] < lo_cut ? 1.0 : 0.0;
        hi[k] = d.R[k] > hi_cut ? 1.0 : 0.0;
      }
      const WeightedStat l = cell_mean(d, lo);
      const WeightedStat h = cell_mean(d, hi);
      cell.lower = l.mean;
      cell.lower_se = l.se;
      cell.upper = h.mean;
      cell.upper_se = h.se;
      // R >= 0, so the lower tail at K1 = 0 is empty by construction.
      cell.lower_underpowered = K1 > 0.0 && cell.lower * d.ess < kMinTailHits;
      cell.upper_underpowered = cell.upper * d.ess < kMinTailHits;
      rep.cells.push_back(std::move(cell));
    }
    for (std::size_t i = first + 1; i < rep.cells.size(); ++i) {
      const TailCell& prev = rep.cells[i - 1];
      const TailCell& next = rep.cells[i];
      const double lo_tol = 3.0 * std::hypot(prev.lower_se, next.lower_se);
      const double hi_tol = 3.0 * std::hypot(prev.upper_se, next.upper_se);
      if (next.lower > prev.lower + lo_tol) rep.lower_nonincreasing = false;
      if (next.upper > prev.upper + hi_tol) rep.upper_nonincreasing = false;
    }
  }
  return rep;
}

ReportTable ensemble_table(const WeightedEnsemble& ensemble, std::uint64_t seed) {
  ReportTable t;
  t.columns = {"seed", "J", "T", "beta", "epsilon", "R", "N_total", "log_weight"};
  for (std::size_t k = 0; k < ensemble.items.size(); ++k) {
    const auto& item = ensemble.items[k];
    const std::uint64_t s = ensemble.base == BaseMeasure::Target ? seed : derive_seed(seed, k);
    t.add_row({s, std::int64_t{ensemble.J}, std::int64_t{ensemble.T}, ensemble.beta,
               ensemble.epsilon, item.record.R, item.record.N_total(), item.log_weight});
  }
  return t;
}

ReportTable chain_diagnostics_table(const ModelConfig& config, double beta, const MetropolisDiagnostics& diag) {
  ReportTable t;
  t.columns = {"J", "T", "beta", "row_proposals", "row_accepts", "entry_proposals", "entry_accepts",
               "acceptance_rate", "autocorrelation_time", "ess", "tuning_warning"};
  t.add_row({std::int64_t{config.J}, std::int64_t{config.T}, beta, diag.row_proposals, diag.row_accepts,
             diag.entry_proposals, diag.entry_accepts, diag.acceptance_rate, diag.autocorrelation_time, diag.ess,
             diag.tuning_warning});
  return t;
}

}  // namespace polymer
