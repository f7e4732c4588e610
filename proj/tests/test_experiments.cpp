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

#include <filesystem>
#include <set>
#include <sstream>

#include "polymer/config.hpp"
#include "polymer/report.hpp"
#include "polymer/rng.hpp"
#include "polymer/studies.hpp"
#include "polymer/validation.hpp"

using namespace polymer;

namespace {

StudyConfig parse(const std::string& text) {
  std::istringstream in(text);
  return load_config(in);
}

std::string csv_of(const ReportTable& t) {
  std::ostringstream out;
  emit_report(t, ReportFormat::Csv, out);
  return out.str();
}

// E[R^2] by propagating the covariance matrix of the zero-started field.
double covariance_R2(Index J, Index T, Convention conv, double kappa) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(J, J);
  for (Index n = 0; n < J; ++n) {
    A(n, n) -= 2.0 * kappa;
    A(n, n > 0 ? n - 1 : 0) += kappa;
    A(n, n + 1 < J ? n + 1 : J - 1) += kappa;
  }
  Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(J, J);
  if (conv == Convention::Paper) {
    const Eigen::MatrixXd G = green_matrix(SpectralBasisd(J), 1, Convention::Paper);
    Q = G * G.transpose();
  }
  const Eigen::MatrixXd center =
      Eigen::MatrixXd::Identity(J, J) - Eigen::MatrixXd::Constant(J, J, 1.0 / static_cast<double>(J));
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(J, J);
  double total = 0.0;
  for (Index t = 1; t <= T; ++t) {
    C = A * C * A.transpose() + Q;
    total += (center * C * center).trace();
  }
  return total / static_cast<double>(T * J);
}

}  // namespace

TEST(Config, ParsesFlatFile) {
  const StudyConfig c = parse(
      "# scaling study\n"
      "J = 8, 16,32\n"
      "T=128\n"
      "\n"
      "beta = 0.25   # inline comment\n"
      "epsilon = 0.5\n"
      "convention = paper\n"
      "sampler = metropolis\n"
      "seed = 18446744073709551615\n"
      "output_dir = out/run1\n");
  EXPECT_EQ(c.J_list, (std::vector<Index>{8, 16, 32}));
  EXPECT_EQ(c.T, 128);
  EXPECT_EQ(c.beta, 0.25);
  ASSERT_TRUE(c.epsilon.has_value());
  EXPECT_EQ(*c.epsilon, 0.5);
  EXPECT_EQ(c.convention, Convention::Paper);
  EXPECT_EQ(c.sampler, SamplerChoice::Metropolis);
  EXPECT_EQ(c.seed, 18446744073709551615ULL);
  EXPECT_EQ(c.output_dir, std::filesystem::path("out/run1"));
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, UnknownKeysAndBadValuesAreErrors) {
  EXPECT_THROW(parse("bta = 0.1\n"), ConfigError);
  EXPECT_THROW(parse("beta = 0.1x\n"), ConfigError);
  EXPECT_THROW(parse("T = 12.5\n"), ConfigError);
  EXPECT_THROW(parse("J = 8,,16\n"), ConfigError);
  EXPECT_THROW(parse("just some text\n"), ConfigError);
  EXPECT_THROW(parse("convention = physics\n"), ConfigError);
  EXPECT_THROW(parse("sampler = gibbs\n"), ConfigError);
  try {
    parse("T = 5\nepsilon = 1\nfoo = 2\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(Config, ValidationRanges) {
  const auto invalid = [](const std::string& text) { return [text] { parse(text).validate(); }; };
  EXPECT_THROW(invalid("J = 1\n")(), ConfigError);
  EXPECT_THROW(invalid("kappa = 0.6\n")(), ConfigError);
  EXPECT_THROW(invalid("kappa = 0.3\nconvention = paper\n")(), ConfigError);
  EXPECT_THROW(invalid("beta = -0.1\n")(), ConfigError);
  EXPECT_THROW(invalid("epsilon = 0\n")(), ConfigError);
  EXPECT_THROW(invalid("K1 = 0.5\nK2 = 0.5\n")(), ConfigError);
  EXPECT_THROW(invalid("replicates = 0\n")(), ConfigError);
  EXPECT_NO_THROW(invalid("kappa = 0.3\n")());
  StudyConfig c;
  EXPECT_THROW(c.require_epsilon(), ConfigError);
  c.set("epsilon", "0.7");
  EXPECT_EQ(c.require_epsilon(), 0.7);
}

TEST(Config, KnownKeysAllAccepted) {
  const std::map<std::string, std::string> sample = {
      {"J", "8"}, {"T", "4"}, {"T_list", "4,8"}, {"kappa", "0.5"}, {"beta", "0"}, {"epsilon", "1"}, {"drift", "0"},
      {"convention", "literal"}, {"sampler", "auto"}, {"seed", "3"}, {"replicates", "5"}, {"output_dir", "x"},
      {"ess_floor", "10"}, {"sweeps", "3"}, {"burn_in", "0"}, {"thin", "1"}, {"proposal_scale", "0.3"},
      {"K1", "0.1"}, {"K2", "0.2"}, {"rho", "0.1"}, {"sigma2", "2"}, {"K", "3"}, {"samples", "7"}};
  StudyConfig c;
  for (const auto& key : StudyConfig::known_keys()) {
    ASSERT_TRUE(sample.count(key)) << key;
    EXPECT_NO_THROW(c.set(key, sample.at(key))) << key;
  }
  EXPECT_NO_THROW(c.validate());
}

TEST(Report, DeterministicAndHeaderOnlyWhenEmpty) {
  ReportTable t;
  t.columns = {"J", "R", "sampler", "flag", "seed"};
  EXPECT_EQ(csv_of(t), "J,R,sampler,flag,seed\n");
  t.add_row({std::int64_t{8}, 1.0 / 3.0, std::string("direct"), true, std::uint64_t{18446744073709551615ULL}});
  EXPECT_EQ(csv_of(t), csv_of(t));
  EXPECT_EQ(csv_of(t), "J,R,sampler,flag,seed\n8,0.333333333333,direct,true,18446744073709551615\n");
  EXPECT_THROW(t.add_row({std::int64_t{1}}), DimensionMismatch);
}

TEST(Report, JsonlFieldOrderAndNonFinite) {
  ReportTable t;
  t.columns = {"z", "a", "m"};
  t.add_row({std::nan(""), 2.0 / 3.0, std::string("q\"x")});
  std::ostringstream out;
  emit_report(t, ReportFormat::Jsonl, out);
  EXPECT_EQ(out.str(), "{\"z\":null,\"a\":0.666666666667,\"m\":\"q\\\"x\"}\n");
}

TEST(Report, CsvRoundTrip) {
  RngStream rng(5);
  ReportTable t;
  t.columns = {"x", "y", "label"};
  for (int k = 0; k < 200; ++k) {
    const double x = rng.normal() * std::pow(10.0, static_cast<double>(k % 30) - 15.0);
    t.add_row({x, static_cast<std::int64_t>(k), std::string(k % 3 ? "a,b" : "plain")});
  }
  std::istringstream in(csv_of(t));
  const CsvTable back = parse_csv(in);
  ASSERT_EQ(back.columns, t.columns);
  ASSERT_EQ(back.rows.size(), 200u);
  for (std::size_t r = 0; r < 200; ++r) {
    // The table is emitted at 12 significant digits; parse-back reproduces those values.
    const double x = round_significant(std::get<double>(t.rows[r][0]));
    EXPECT_LE(std::abs(back.number(r, back.column("x")) - x), 1e-12 * std::abs(x));
    EXPECT_EQ(back.number(r, 1), static_cast<double>(r));
    EXPECT_EQ(back.rows[r][2], r % 3 ? "a,b" : "plain");
  }
  EXPECT_THROW(back.column("missing"), Error);
}

TEST(Report, UnwritablePathThrows) {
  ReportTable t;
  t.columns = {"a"};
  EXPECT_THROW(emit_report(t, ReportFormat::Csv, std::filesystem::path("/proc/definitely/not/here.csv")), Error);
  EXPECT_THROW(parse_format("xml"), InvalidParameter);
  EXPECT_EQ(parse_format("jsonl"), ReportFormat::Jsonl);
}

TEST(Report, CanonicalJsonRoundsFloats) {
  nlohmann::ordered_json j = {{"a", 0.1 + 0.2}, {"b", {1.0 / 3.0, INFINITY}}, {"n", 4}};
  const auto c = canonical_json(j);
  EXPECT_EQ(c.dump(), "{\"a\":0.3,\"b\":[0.333333333333,null],\"n\":4}");
  EXPECT_EQ(format_double(-INFINITY), "-inf");
  EXPECT_EQ(format_double(1e-20), "1e-20");
}

TEST(ExactR2, MatchesCovariancePropagation) {
  for (Index J : {2, 5, 9}) {
    for (Index T : {1, 7, 40}) {
      EXPECT_NEAR(exact_mean_R2(J, T, Convention::Literal), covariance_R2(J, T, Convention::Literal, 0.5), 1e-10);
      EXPECT_NEAR(exact_mean_R2(J, T, Convention::Literal, 0.3), covariance_R2(J, T, Convention::Literal, 0.3), 1e-10);
      EXPECT_NEAR(exact_mean_R2(J, T, Convention::Paper), covariance_R2(J, T, Convention::Paper, 0.5), 1e-10);
    }
  }
  EXPECT_THROW(exact_mean_R2(4, 4, Convention::Paper, 0.3), InvalidParameter);
}

TEST(ExactR2, MonteCarloWithinTwoPercent) {
  StudyConfig cfg;
  cfg.epsilon = 0.5;
  cfg.replicates = 20000;
  for (Convention c : {Convention::Literal, Convention::Paper}) {
    cfg.convention = c;
    const CellDraws d = draw_cell(cfg, SpectralBasisd(8), 64, 3);
    EXPECT_EQ(d.sampler, "direct");
    std::vector<double> r2;
    for (double r : d.R) r2.push_back(r * r);
    EXPECT_NEAR(cell_mean(d, r2).mean / exact_mean_R2(8, 64, c), 1.0, 0.02);
  }
}

TEST(Studies, WeightedQuantile) {
  const std::vector<double> v{3.0, 1.0, 2.0, 4.0};
  EXPECT_EQ(weighted_quantile(v, std::vector<double>(4, 0.25), 0.5), 2.5);
  EXPECT_EQ(weighted_quantile(v, {0.1, 0.1, 0.1, 0.7}, 0.5), 4.0);
  EXPECT_EQ(weighted_quantile(v, {0.1, 0.6, 0.2, 0.1}, 0.05), 1.0);
  EXPECT_THROW(weighted_quantile({}, {}, 0.5), InvalidParameter);
}

TEST(Studies, AutoFallsBackToMetropolis) {
  StudyConfig cfg;
  cfg.epsilon = 0.5;
  cfg.beta = 3.0;
  cfg.replicates = 100;
  cfg.sweeps = 50;
  cfg.burn_in = 10;
  cfg.thin = 1;
  cfg.ess_floor = 50;
  const SpectralBasisd basis(8);
  const CellDraws d = draw_cell(cfg, basis, 32, 1);
  EXPECT_EQ(d.sampler, "metropolis");
  EXPECT_EQ(d.R.size(), 50u);
  cfg.sampler = SamplerChoice::Importance;
  const CellDraws e = draw_cell(cfg, basis, 32, 1);
  EXPECT_EQ(e.sampler, "importance");
  EXPECT_TRUE(e.degenerate);
}

TEST(Scaling, SmallStudy) {
  StudyConfig cfg;
  cfg.J_list = {4, 8, 16};
  cfg.T = 32;
  cfg.epsilon = 0.5;
  cfg.replicates = 2000;
  const ScalingReport rep = run_scaling_study(cfg);
  ASSERT_EQ(rep.rows.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    const auto& row = rep.rows[k];
    EXPECT_EQ(row.J, cfg.J_list[k]);
    EXPECT_EQ(row.sampler, "direct");
    EXPECT_LE(row.R_q05, row.R_mean);
    EXPECT_GE(row.R_q95, row.R_mean);
    EXPECT_NEAR(row.R2_mean / row.exact_R2, 1.0, 0.05);
  }
  EXPECT_TRUE(rep.fit_ok);
  EXPECT_NEAR(rep.fit.slope, rep.exact_exponent, 0.05);
  EXPECT_EQ(csv_of(rep.table()), csv_of(run_scaling_study(cfg).table()));
  EXPECT_EQ(rep.summary()["schema_version"], kSchemaVersion);
}

TEST(Scaling, FlaggedRowsAndConfigErrors) {
  StudyConfig cfg;
  cfg.J_list = {4, 8};
  cfg.epsilon = 0.5;
  EXPECT_THROW(run_scaling_study(cfg), ConfigError);
  cfg.J_list = {4, 8, 16};
  cfg.epsilon.reset();
  EXPECT_THROW(run_scaling_study(cfg), ConfigError);
  cfg.epsilon = 0.5;
  cfg.T = 16;
  cfg.beta = 5.0;
  cfg.replicates = 60;
  cfg.sampler = SamplerChoice::Importance;
  const ScalingReport rep = run_scaling_study(cfg);
  EXPECT_FALSE(rep.fit_ok);
  for (const auto& row : rep.rows) EXPECT_TRUE(row.flagged);
  EXPECT_TRUE(std::isnan(rep.rows.front().exact_R2));
}

TEST(Tails, TrivialCellsAndErrors) {
  StudyConfig cfg;
  cfg.J_list = {8};
  cfg.T_list = {16, 64};
  cfg.epsilon = 0.5;
  cfg.replicates = 2000;
  const TailReport rep = run_tail_probes(cfg, 0.0, 5.0);
  ASSERT_EQ(rep.cells.size(), 2u);
  for (const auto& c : rep.cells) {
    EXPECT_EQ(c.lower, 0.0);
    EXPECT_EQ(c.lower_se, 0.0);
    EXPECT_FALSE(c.lower_underpowered);
    EXPECT_EQ(c.upper, 0.0);
    EXPECT_TRUE(c.upper_underpowered);
  }
  EXPECT_TRUE(rep.lower_nonincreasing);
  EXPECT_TRUE(rep.upper_nonincreasing);
  EXPECT_THROW(run_tail_probes(cfg, 0.3, 0.2), ConfigError);
  cfg.T_list = {16};
  EXPECT_THROW(run_tail_probes(cfg, 0.1, 0.2), ConfigError);
}

TEST(Tails, FreeFieldTrend) {
  StudyConfig cfg;
  cfg.J_list = {8};
  cfg.T_list = {64, 16};
  cfg.epsilon = 0.5;
  cfg.replicates = 4000;
  const TailReport rep = run_tail_probes(cfg, 0.16, 0.24);
  ASSERT_EQ(rep.cells.size(), 2u);
  EXPECT_EQ(rep.cells[0].T, 16);
  EXPECT_GT(rep.cells[0].lower, rep.cells[1].lower);
  EXPECT_TRUE(rep.lower_nonincreasing);
  EXPECT_TRUE(rep.upper_nonincreasing);
  EXPECT_EQ(rep.table().rows.size(), 2u);
}

TEST(Tables, EnsembleAndChainColumns) {
  const SpectralBasisd basis(3);
  const ModelConfig model{3, 4, 0.5, Convention::Literal, 9};
  const auto ens = free_ensemble(model, basis, 0.1, 0.5, 3);
  const ReportTable t = ensemble_table(ens, 9);
  EXPECT_EQ(t.columns, (std::vector<std::string>{"seed", "J", "T", "beta", "epsilon", "R", "N_total", "log_weight"}));
  EXPECT_EQ(std::get<std::uint64_t>(t.rows[1][0]), derive_seed(9, 1));
  const ReportTable c = chain_diagnostics_table(model, 0.1, MetropolisDiagnostics{});
  EXPECT_EQ(c.rows.size(), 1u);
}

TEST(Validation, ManifestIsGeneratedFromRegistry) {
  const ReportTable m = validation_manifest();
  EXPECT_EQ(m.rows.size(), validation_registry().size());
  std::set<std::string> names, modules;
  for (const auto& c : validation_registry()) {
    EXPECT_TRUE(names.insert(c.name).second) << c.name;
    modules.insert(c.module);
  }
  EXPECT_EQ(modules, (std::set<std::string>{"spectral_basis", "dynamics", "observables", "gibbs", "increment_stats",
                                            "ar1_ldp", "experiments_cli"}));
}

TEST(Validation, CorruptedKernelExponentIsCaught) {
  ValidationOptions opt;
  opt.filter = "kernel_oracle";
  const ValidationReport good = run_validation_suite(opt);
  ASSERT_EQ(good.results.size(), 1u);
  EXPECT_TRUE(good.all_passed());
  opt.kernel_exponent_offset = 1;
  const ValidationReport bad = run_validation_suite(opt);
  EXPECT_FALSE(bad.all_passed());
  EXPECT_EQ(bad.failures(), std::vector<std::string>{"basis.kernel_oracle"});
}

TEST(Validation, DefaultSuitePasses) {
  StudyConfig cfg;
  const ValidationReport rep = run_validation_suite(cfg);
  EXPECT_EQ(rep.results.size(), validation_registry().size());
  for (const auto& r : rep.results) {
    EXPECT_TRUE(r.passed || r.known_discrepancy) << r.name << ": " << r.detail;
  }
  EXPECT_TRUE(rep.all_passed());
}
