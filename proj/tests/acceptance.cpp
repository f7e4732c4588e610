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

// Acceptance driver: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "polymer/ar1_ldp.hpp"
#include "polymer/config.hpp"
#include "polymer/gibbs.hpp"
#include "polymer/increment_stats.hpp"
#include "polymer/observables.hpp"
#include "polymer/parallel.hpp"
#include "polymer/rng.hpp"
#include "polymer/spectral_basis.hpp"
#include "polymer/stats.hpp"
#include "polymer/studies.hpp"

using namespace polymer;

namespace {

// Pinned tolerances.
constexpr double kCsc2Tol = 1e-9;
constexpr double kKernelTol = 1e-10;
constexpr double kFormulaTol = 1e-9;
constexpr double kIncrementMeanSigmas = 4.0;
constexpr double kIncrementVarRel = 0.05;
constexpr double kPaperBand = 20.0;
constexpr double kJensenSigmas = 3.0;
constexpr double kKsAlpha = 0.01;
constexpr double kRateZeroTol = 1e-12;
constexpr double kLegendreTol = 1e-4;
constexpr double kChiSquareRateRel = 0.30;
constexpr double kChiSquareRate = 0.15343;
constexpr double kExponentTol = 0.1;
constexpr double kExactR2Rel = 0.02;

constexpr std::uint64_t kSeed = 20260101;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

Outcome csc2_identity() {
  double worst = 0.0;
  for (Index J = 2; J <= 128; ++J) {
    worst = std::max(worst, std::abs(csc2_sum(J) - (static_cast<double>(J * J) - 1.0) / 3.0));
  }
  return {worst < kCsc2Tol, "max abs error " + num(worst) + " over J = 2..128"};
}

Outcome kernel_oracle() {
  double worst_kernel = 0.0;
  for (Index J = 1; J <= 64; ++J) {
    const SpectralBasisd basis(J);
    const Eigen::MatrixXd P = one_step_propagator<double>(J);
    Eigen::MatrixXd Pt = Eigen::MatrixXd::Identity(J, J);
    for (std::int64_t t = 0; t <= 128; ++t) {
      if (t > 0) Pt = Pt * P;
      for (Index n = 0; n < J; ++n) {
        for (Index k = 0; k < J; ++k) {
          worst_kernel = std::max(worst_kernel, std::abs(green_function(basis, t, n, k) - Pt(n, k)));
        }
      }
      if (t == 0 || t == 1 || t == 17 || t == 128) {
        worst_kernel = std::max(worst_kernel, (transition_matrix_power<double>(J, t) - Pt).cwiseAbs().maxCoeff());
      }
    }
  }
  const SpectralBasisd basis(16);
  double worst_formula = 0.0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const std::uint64_t seed = derive_seed(kSeed, s);
    RngStream rng(derive_seed(seed, 1));
    Profile u0(16);
    for (Index n = 0; n < 16; ++n) u0(n) = rng.normal();
    const NoiseField noise = sample_noise(seed, 64, 16);
    const Trajectory a = solution_formula(u0, noise, basis, Convention::Literal);
    const Trajectory b = simulate_recursion(u0, noise);
    worst_formula = std::max(worst_formula, (a.u - b.u).cwiseAbs().maxCoeff());
  }
  return {worst_kernel < kKernelTol && worst_formula < kFormulaTol,
          "kernel max error " + num(worst_kernel) + " (J <= 64, t <= 128); formula vs recursion " +
              num(worst_formula) + " (J = 16, T = 64, 100 seeds)"};
}

Outcome increment_statistics() {
  const SpectralBasisd basis(8);
  const std::size_t n = 100000;
  bool ok = true;
  std::string detail;
  for (const auto [i, j] : {std::pair<Index, Index>{6, 1}, {3, 2}, {7, 0}}) {
    std::vector<double> inc(n);
    parallel_for(n, [&](std::size_t k) {
      const PinnedString ps = pinned_string(basis, 0, 0, 0, 1e-10, derive_seed(kSeed, k));
      inc[k] = ps.field(0, i) - ps.field(0, j);
    });
    const double exact = increment_mean_and_variance(basis, i, j, Convention::Literal).variance;
    const double z = stats::mean(inc) / stats::standard_error(inc);
    const double rel = std::abs(stats::variance(inc) / exact - 1.0);
    ok = ok && std::abs(z) <= kIncrementMeanSigmas && rel < kIncrementVarRel;
    detail += "(" + std::to_string(i) + "," + std::to_string(j) + ") mean/SE " + num(z) + " var rel " + num(rel) + "; ";
  }
  const std::vector<Index> Js{8, 16, 32, 64};
  const VarianceScan scan = variance_scaling_scan(Js, Convention::Paper);
  ok = ok && scan.band() < kPaperBand;
  detail += "paper Var/(J d) band " + num(scan.band()) + " (min " + num(scan.ratio_min) + ", max " +
            num(scan.ratio_max) + ", limit " + num(kPaperBand) + ")";
  return {ok, detail};
}

Outcome gibbs_layer() {
  bool ok = true;
  std::string detail;
  {
    const SpectralBasisd basis(1);
    const ModelConfig cfg{1, 8, kDefaultKappa, Convention::Literal, kSeed};
    const double beta = 0.37;
    const auto est = estimate_measure(free_ensemble(cfg, basis, beta, 0.5, 100), [](const ObservableRecord& r) {
      return r.R;
    });
    ok = ok && est.log_Z == -beta * 8.0;
    detail += "J=1 log Z + beta T = " + num(est.log_Z + beta * 8.0) + "; ";
  }
  {
    const SpectralBasisd basis(4);
    const ModelConfig cfg{4, 8, kDefaultKappa, Convention::Literal, kSeed};
    for (double a : {0.0, 0.5, 1.0}) {
      const JensenResult r = jensen_lower_bound(cfg, basis, a, 0.1, 0.5, 100000);
      const double slack = kJensenSigmas * std::hypot(r.logZ_se, r.bound_se);
      ok = ok && r.logZ_over_T >= r.bound - slack;
      detail += "a=" + num(a) + " logZ/T " + num(r.logZ_over_T) + " >= " + num(r.bound) + "; ";
    }
  }
  {
    const Index J = 4, T = 8;
    const SpectralBasisd basis(J);
    const ModelConfig cfg{J, T, kDefaultKappa, Convention::Literal, kSeed};
    MetropolisOptions mo;
    mo.sweeps = 40000;
    mo.burn_in = 500;
    mo.thin = 20;
    const MetropolisRun run = metropolis_sampler(cfg, basis, 0.0, 0.5, mo);
    std::vector<double> chain, direct;
    for (const auto& it : run.ensemble.items) chain.push_back(it.record.R);
    ModelConfig dcfg = cfg;
    dcfg.seed = derive_seed(kSeed, 99);
    for (const auto& it : free_ensemble(dcfg, basis, 0.0, 0.5, static_cast<std::int64_t>(chain.size())).items) {
      direct.push_back(it.record.R);
    }
    const auto ks = stats::ks_two_sample(chain, direct);
    ok = ok && ks.p_value > kKsAlpha;
    detail += "KS p " + num(ks.p_value) + " (n = " + std::to_string(chain.size()) + ")";
  }
  return {ok, detail};
}

Outcome observables_sweep() {
  const std::int64_t J = 16;
  const std::size_t configs = 100000;
  std::vector<char> bad(configs, 0);
  parallel_for(configs, [&](std::size_t k) {
    RngStream rng(derive_seed(kSeed, k));
    std::vector<double> v(J);
    const double spread = 0.05 + 5.0 * rng.uniform();
    for (double& x : v) x = spread * rng.normal();
    const double eps = 0.02 + 2.0 * rng.uniform();
    const double alpha = rng.uniform();
    const std::int64_t N = self_intersection_count(v, eps);
    const auto rep = local_inequality_check(v, eps, alpha, -(1 << 30), 1 << 30);
    bad[k] = !(N >= J && N <= J * J && rep.holds && rep.lhs == N);
  });
  const auto violations = std::count(bad.begin(), bad.end(), 1);
  return {violations == 0, std::to_string(violations) + " violations on 1e5 configurations, J = 16"};
}

Outcome ldp_layer() {
  bool ok = true;
  std::string detail;
  double worst_zero = 0.0;
  for (double rho : {0.0, 0.3, 0.9}) {
    worst_zero = std::max(worst_zero, std::abs(rate_function({rho, 1.0}, 1.0 / (1.0 - rho * rho))));
  }
  ok = ok && worst_zero < kRateZeroTol;
  detail += "I at stationary mean " + num(worst_zero) + "; ";

  const AR1Params p{0.5, 1.0};
  const double hi = explosion_threshold(p) - 1e-9;
  double worst_legendre = 0.0;
  for (double x = 0.5; x <= 5.0 + 1e-12; x += 0.125) {
    double lo = -60.0, up = hi;
    const auto f = [&](double y) { return x * y - cumulant_fixed_point(p, y).cumulant; };
    for (int it = 0; it < 300; ++it) {
      const double m1 = lo + (up - lo) / 3.0, m2 = up - (up - lo) / 3.0;
      if (f(m1) < f(m2)) lo = m1;
      else up = m2;
    }
    worst_legendre = std::max(worst_legendre, std::abs(f(0.5 * (lo + up)) - rate_function(p, x)));
  }
  ok = ok && worst_legendre < kLegendreTol;
  detail += "Legendre max error " + num(worst_legendre) + "; ";

  const AR1Params white{0.0, 1.0};
  const auto t50 = tail_probe(white, 50, 2.0, 1000000, kSeed);
  const double rel = std::abs(t50.empirical_rate / kChiSquareRate - 1.0);
  ok = ok && rel < kChiSquareRateRel && std::abs(rate_function(white, 2.0) - kChiSquareRate) < 1e-5;
  const auto t60 = tail_probe(white, 60, 2.0, 1000000, derive_seed(kSeed, 1));
  detail += "T=50 rate " + num(t50.empirical_rate) + " vs I(2) " + num(rate_function(white, 2.0)) + " (rel " +
            num(rel) + "); info: T=50->60 slope rate " + num(tail_slope_rate(t50, t60));
  return {ok, detail};
}

Outcome scaling_study() {
  bool ok = true;
  std::string detail;
  for (const auto& [conv, target] : {std::pair{Convention::Literal, 0.5}, std::pair{Convention::Paper, 1.0}}) {
    StudyConfig cfg;
    cfg.J_list = {8, 16, 32, 64};
    cfg.T = 512;
    cfg.epsilon = 0.5;
    cfg.convention = conv;
    cfg.replicates = 4000;
    cfg.seed = kSeed;
    const ScalingReport rep = run_scaling_study(cfg);
    double worst = 0.0;
    for (const auto& row : rep.rows) worst = std::max(worst, std::abs(row.R2_mean / row.exact_R2 - 1.0));
    const bool exp_ok = rep.fit_ok && std::abs(rep.fit.slope - target) <= kExponentTol;
    ok = ok && exp_ok && worst < kExactR2Rel;
    detail += std::string(to_string(conv)) + ": exponent " + num(rep.fit.slope) + " (target " + num(target) +
              ", exact finite-T " + num(rep.exact_exponent) + ") " + (exp_ok ? "ok" : "MISS") +
              ", MC vs exact E[R^2] max rel " + num(worst) + "; ";
  }
  return {ok, detail};
}

Outcome tail_trend() {
  StudyConfig cfg;
  cfg.J_list = {8};
  cfg.T_list = {64, 256};
  cfg.beta = 0.01;
  cfg.epsilon = 0.5;
  cfg.replicates = 40000;
  cfg.seed = kSeed;
  const double R_stat = std::sqrt(csc2_sum(8) / 8.0);
  const double K1 = 0.75 * R_stat / 8.0, K2 = 1.3 * R_stat / 8.0;
  const TailReport rep = run_tail_probes(cfg, K1, K2);
  std::string detail = "K1 " + num(K1) + " K2 " + num(K2) + "; ";
  bool powered = true;
  for (const auto& c : rep.cells) {
    detail += "T=" + std::to_string(c.T) + " lower " + num(c.lower) + "+-" + num(c.lower_se) + " upper " +
              num(c.upper) + "+-" + num(c.upper_se) + " [" + c.sampler + ", ess " + num(c.ess) + "]; ";
    powered = powered && !c.flagged;
  }
  return {rep.lower_nonincreasing && rep.upper_nonincreasing && powered, detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 spectral identity", csc2_identity},    {"2 kernel oracle", kernel_oracle},
      {"3 increment statistics", increment_statistics}, {"4 gibbs layer", gibbs_layer},
      {"5 observables", observables_sweep},      {"6 ldp layer", ldp_layer},
      {"7 scaling study", scaling_study},        {"8 tail trend", tail_trend},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = fn();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %s (%.1f s): %s\n", out.pass ? "PASS" : "FAIL", name.c_str(), secs, out.detail.c_str());
    std::fflush(stdout);
    failures += out.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
