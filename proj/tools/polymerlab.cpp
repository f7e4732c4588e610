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

// polymerlab: command-line driver for the polymer experiments.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "polymer/ar1_ldp.hpp"
#include "polymer/config.hpp"
#include "polymer/dynamics.hpp"
#include "polymer/gibbs.hpp"
#include "polymer/increment_stats.hpp"
#include "polymer/observables.hpp"
#include "polymer/report.hpp"
#include "polymer/studies.hpp"
#include "polymer/validation.hpp"

namespace fs = std::filesystem;
using namespace polymer;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvariant = 1;
constexpr int kExitConfig = 2;
constexpr int kExitDegenerate = 3;

struct CommonFlags {
  std::string config_path;
  std::optional<std::string> seed, out, convention, sampler, J, T, beta, epsilon, drift;
  std::vector<std::string> sets;  // key=value
};

void add_common(CLI::App* sub, CommonFlags& f) {
  sub->add_option("--config", f.config_path, "flat key = value configuration file");
  sub->add_option("--seed", f.seed, "base seed");
  sub->add_option("--out", f.out, "output directory (default: print the main table to stdout)");
  sub->add_option("--convention", f.convention, "kernel convention: literal or paper");
  sub->add_option("--sampler", f.sampler, "importance, metropolis or auto");
  sub->add_option("--J", f.J, "chain length, or a comma-separated list");
  sub->add_option("--T", f.T, "time horizon");
  sub->add_option("--beta", f.beta, "penalty strength");
  sub->add_option("--epsilon", f.epsilon, "intersection radius");
  sub->add_option("--drift", f.drift, "noise drift a");
  sub->add_option("--set", f.sets, "any other configuration key, as key=value (repeatable)");
}

StudyConfig resolve(const CommonFlags& f) {
  StudyConfig cfg;
  if (!f.config_path.empty()) cfg = load_config_file(f.config_path);
  const std::pair<const char*, const std::optional<std::string>*> overrides[] = {
      {"seed", &f.seed}, {"output_dir", &f.out}, {"convention", &f.convention}, {"sampler", &f.sampler},
      {"J", &f.J},       {"T", &f.T},           {"beta", &f.beta},             {"epsilon", &f.epsilon},
      {"drift", &f.drift}};
  for (const auto& [key, value] : overrides) {
    if (*value) cfg.set(key, **value);
  }
  for (const auto& kv : f.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

/// Writes `table` to out_dir/name, or to stdout when no directory is configured.
void emit(const StudyConfig& cfg, const ReportTable& table, const std::string& name, ReportFormat format) {
  if (cfg.output_dir.empty()) {
    emit_report(table, format, std::cout);
  } else {
    emit_report(table, format, cfg.output_dir / name);
  }
}

void emit_summary(const StudyConfig& cfg, const nlohmann::ordered_json& summary, const std::string& name) {
  if (cfg.output_dir.empty()) {
    write_json(summary, std::cerr);
  } else {
    write_json(summary, cfg.output_dir / name);
  }
}

nlohmann::ordered_json summary_header(const StudyConfig& cfg, const char* command) {
  nlohmann::ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  j["convention"] = std::string(to_string(cfg.convention));
  j["seed"] = cfg.seed;
  return j;
}

int cmd_spectra(const StudyConfig& cfg) {
  ReportTable t;
  t.columns = {"J", "m", "rho", "a", "csc2", "stationary_variance"};
  nlohmann::ordered_json summary = summary_header(cfg, "spectra");
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (Index J : cfg.J_list) {
    const SpectralBasisd basis(J);
    for (Index m = 0; m < J; ++m) {
      const double s = std::sin(static_cast<double>(m) * std::numbers::pi / static_cast<double>(J));
      const double rho = basis.rho(m);
      t.add_row({std::int64_t{J}, std::int64_t{m}, rho, basis.a(m), m == 0 ? std::nan("") : 1.0 / (s * s),
                 m == 0 ? std::nan("") : 1.0 / (1.0 - rho * rho)});
    }
    list.push_back({{"J", J}, {"csc2_sum", csc2_sum(J)}, {"closed_form", (static_cast<double>(J * J) - 1.0) / 3.0},
                    {"c0", normalizing_constant_c0(J)}});
  }
  summary["chains"] = std::move(list);
  emit(cfg, t, "spectra.csv", ReportFormat::Csv);
  emit_summary(cfg, summary, "spectra_summary.json");
  return kExitOk;
}

int cmd_simulate(const StudyConfig& cfg) {
  const Index J = cfg.J_list.front();
  const SpectralBasisd basis(J);
  const Trajectory traj = sample_trajectory(cfg.model(J, cfg.T), basis, cfg.seed, cfg.drift);
  nlohmann::ordered_json summary = summary_header(cfg, "simulate");
  summary["J"] = J;
  summary["T"] = cfg.T;
  summary["drift"] = cfg.drift;
  summary["R"] = radius_of_gyration(traj);
  if (cfg.output_dir.empty()) {
    write_trajectory_csv(std::cout, traj);
  } else {
    fs::create_directories(cfg.output_dir);
    std::ofstream csv(cfg.output_dir / "trajectory.csv", std::ios::binary);
    std::ofstream bin(cfg.output_dir / "trajectory.bin", std::ios::binary);
    if (!csv || !bin) throw Error("cannot write to " + cfg.output_dir.string());
    write_trajectory_csv(csv, traj);
    write_trajectory_binary(bin, traj);
  }
  if (cfg.epsilon) {
    const ObservableRecord rec = observe(traj, *cfg.epsilon);
    ReportTable t;
    t.columns = {"t", "center_of_mass", "N_eps"};
    for (Index s = 0; s <= cfg.T; ++s) {
      t.add_row({std::int64_t{s}, rec.center_of_mass[static_cast<std::size_t>(s)], rec.intersections[static_cast<std::size_t>(s)]});
    }
    if (!cfg.output_dir.empty()) emit_report(t, ReportFormat::Jsonl, cfg.output_dir / "observables.jsonl");
    summary["epsilon"] = *cfg.epsilon;
    summary["N_total"] = rec.N_total();
  }
  emit_summary(cfg, summary, "simulate_summary.json");
  return kExitOk;
}

int cmd_variance_scan(const StudyConfig& cfg) {
  const VarianceScan scan = variance_scaling_scan(cfg.J_list, cfg.convention);
  ReportTable t;
  t.columns = {"J", "i", "j", "d", "convention", "variance", "ratio", "reduced_domain"};
  for (const auto& r : scan.rows) {
    t.add_row({std::int64_t{r.J}, std::int64_t{r.i}, std::int64_t{r.j}, std::int64_t{r.d},
               std::string(to_string(r.convention)), r.variance, r.ratio, r.reduced_domain});
  }
  nlohmann::ordered_json summary = summary_header(cfg, "variance-scan");
  summary["ratio_min"] = scan.ratio_min;
  summary["ratio_max"] = scan.ratio_max;
  summary["band"] = scan.band();
  summary["ratio_min_all"] = scan.ratio_min_all;
  summary["ratio_max_all"] = scan.ratio_max_all;
  emit(cfg, t, "variance_scan.csv", ReportFormat::Csv);
  emit_summary(cfg, summary, "variance_scan_summary.json");
  return kExitOk;
}

int cmd_gibbs(const StudyConfig& cfg) {
  const double epsilon = cfg.require_epsilon();
  const Index J = cfg.J_list.front();
  const SpectralBasisd basis(J);
  const ModelConfig model = cfg.model(J, cfg.T);
  nlohmann::ordered_json summary = summary_header(cfg, "gibbs");
  summary["J"] = J;
  summary["T"] = cfg.T;
  summary["beta"] = cfg.beta;
  summary["epsilon"] = epsilon;
  summary["drift"] = cfg.drift;

  const auto R_of = [](const ObservableRecord& r) { return r.R; };
  const auto run_chain = [&]() {
    MetropolisOptions opt;
    opt.sweeps = cfg.sweeps;
    opt.burn_in = cfg.burn_in;
    opt.thin = cfg.thin;
    opt.proposal_scale = cfg.proposal_scale;
    const MetropolisRun run = metropolis_sampler(model, basis, cfg.beta, epsilon, opt);
    const MeasureEstimate est = estimate_measure(run.ensemble, R_of, 1.0);
    summary["sampler"] = "metropolis";
    summary["Q_R"] = est.Q_expectation;
    summary["acceptance_rate"] = run.diagnostics.acceptance_rate;
    summary["autocorrelation_time"] = run.diagnostics.autocorrelation_time;
    summary["ess"] = run.diagnostics.ess;
    summary["tuning_warning"] = run.diagnostics.tuning_warning;
    if (!cfg.output_dir.empty()) {
      emit_report(chain_diagnostics_table(model, cfg.beta, run.diagnostics), ReportFormat::Csv,
                  cfg.output_dir / "chain_diagnostics.csv");
    }
    emit(cfg, ensemble_table(run.ensemble, cfg.seed), "ensemble.jsonl", ReportFormat::Jsonl);
  };

  if (cfg.sampler == SamplerChoice::Metropolis) {
    run_chain();
  } else {
    const WeightedEnsemble ens = tilted_ensemble(model, basis, cfg.beta, epsilon, cfg.drift, cfg.replicates);
    try {
      const MeasureEstimate est = estimate_measure(ens, R_of, cfg.ess_floor);
      summary["sampler"] = "importance";
      summary["log_Z"] = est.log_Z;
      summary["log_Z_se"] = est.log_Z_se;
      summary["Q_R"] = est.Q_expectation;
      summary["Q_R_se"] = est.Q_se;
      summary["ess"] = est.ess;
      emit(cfg, ensemble_table(ens, cfg.seed), "ensemble.jsonl", ReportFormat::Jsonl);
    } catch (const DegeneracyError&) {
      if (cfg.sampler != SamplerChoice::Auto) throw;
      summary["importance_ess"] = ens.effective_sample_size();
      run_chain();
    }
  }
  emit_summary(cfg, summary, "gibbs_summary.json");
  return kExitOk;
}

int cmd_ldp(const StudyConfig& cfg) {
  const AR1Params p{cfg.rho, cfg.sigma2};
  const double mean = cfg.sigma2 / (1.0 - cfg.rho * cfg.rho);
  ReportTable t;
  t.columns = {"x", "rate", "rate_as_printed"};
  for (int k = 1; k <= 200; ++k) {
    const double x = mean * 4.0 * k / 200.0;
    t.add_row({x, rate_function(p, x), rate_function_as_printed(p, x)});
  }
  nlohmann::ordered_json summary = summary_header(cfg, "ldp");
  summary["rho"] = cfg.rho;
  summary["sigma2"] = cfg.sigma2;
  summary["stationary_mean"] = mean;
  summary["explosion_threshold"] = explosion_threshold(p);
  if (cfg.K > mean) {
    const TailProbeResult r = tail_probe(p, cfg.T, cfg.K, cfg.samples, cfg.seed);
    summary["T"] = r.T;
    summary["K"] = r.K;
    summary["samples"] = r.samples;
    summary["exceedances"] = r.exceedances;
    summary["probability"] = r.probability;
    summary["empirical_rate"] = r.empirical_rate;
    summary["rate_at_K"] = r.rate_at_K;
    summary["underpowered"] = r.underpowered;
  }
  emit(cfg, t, "rate_function.csv", ReportFormat::Csv);
  emit_summary(cfg, summary, "ldp_summary.json");
  return kExitOk;
}

int cmd_scaling(const StudyConfig& cfg) {
  const ScalingReport rep = run_scaling_study(cfg);
  emit(cfg, rep.table(), "scaling.csv", ReportFormat::Csv);
  emit_summary(cfg, rep.summary(), "scaling_summary.json");
  if (!rep.fit_ok) {
    std::cerr << "polymerlab: only " << rep.usable_rows << " usable rows, the exponent fit needs 3\n";
    return kExitDegenerate;
  }
  return kExitOk;
}

int cmd_tails(const StudyConfig& cfg) {
  const TailReport rep = run_tail_probes(cfg, cfg.K1, cfg.K2);
  emit(cfg, rep.table(), "tails.csv", ReportFormat::Csv);
  emit_summary(cfg, rep.summary(), "tails_summary.json");
  return kExitOk;
}

int cmd_validate(const StudyConfig& cfg, bool manifest, const std::string& filter, std::int64_t offset) {
  if (manifest) {
    emit(cfg, validation_manifest(), "validation_manifest.csv", ReportFormat::Csv);
    return kExitOk;
  }
  ValidationOptions opt;
  opt.seed = cfg.seed;
  opt.filter = filter;
  opt.kernel_exponent_offset = offset;
  const ValidationReport rep = run_validation_suite(opt);
  emit(cfg, rep.table(), "validation.jsonl", ReportFormat::Jsonl);
  const auto failed = rep.failures();
  if (failed.empty()) return kExitOk;
  std::cerr << "polymerlab: " << failed.size() << " invariant check(s) failed:";
  for (const auto& name : failed) std::cerr << ' ' << name;
  std::cerr << '\n';
  return kExitInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete stochastic heat equation polymer experiments"};
  app.require_subcommand(1);
  CommonFlags flags;

  auto* spectra = app.add_subcommand("spectra", "eigenvalues, normalizations and the csc^2 identity");
  auto* simulate = app.add_subcommand("simulate", "one trajectory as CSV and binary");
  auto* vscan = app.add_subcommand("variance-scan", "stationary increment variances against separation");
  auto* gibbs = app.add_subcommand("gibbs", "weighted or Metropolis ensemble under the penalized measure");
  auto* ldp = app.add_subcommand("ldp", "AR(1) rate function and a Monte Carlo tail probe");
  auto* scaling = app.add_subcommand("scaling", "radius of gyration against chain length");
  auto* tails = app.add_subcommand("tails", "lower and upper tail probabilities of R against T");
  auto* validate = app.add_subcommand("validate", "run every invariant check");
  for (auto* sub : {spectra, simulate, vscan, gibbs, ldp, scaling, tails, validate}) add_common(sub, flags);

  bool manifest = false;
  std::string filter;
  std::int64_t offset = 0;
  validate->add_flag("--manifest", manifest, "list the registered checks and exit");
  validate->add_option("--filter", filter, "run only checks whose name contains this text");
  validate->add_option("--kernel-exponent-offset", offset, "test fixture: corrupt the kernel time in the oracle check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    const StudyConfig cfg = resolve(flags);
    if (*spectra) return cmd_spectra(cfg);
    if (*simulate) return cmd_simulate(cfg);
    if (*vscan) return cmd_variance_scan(cfg);
    if (*gibbs) return cmd_gibbs(cfg);
    if (*ldp) return cmd_ldp(cfg);
    if (*scaling) return cmd_scaling(cfg);
    if (*tails) return cmd_tails(cfg);
    if (*validate) return cmd_validate(cfg, manifest, filter, offset);
  } catch (const ConfigError& e) {
    std::cerr << "polymerlab: configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidParameter& e) {
    std::cerr << "polymerlab: invalid parameter: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DegeneracyError& e) {
    std::cerr << "polymerlab: sampler degeneracy: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const std::exception& e) {
    std::cerr << "polymerlab: " << e.what() << '\n';
    return kExitInvariant;
  }
  return kExitOk;
}
