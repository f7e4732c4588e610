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

#include "polymer/validation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "polymer/ar1_ldp.hpp"
#include "polymer/dynamics.hpp"
#include "polymer/gibbs.hpp"
#include "polymer/increment_stats.hpp"
#include "polymer/observables.hpp"
#include "polymer/parallel.hpp"
#include "polymer/rng.hpp"
#include "polymer/stats.hpp"
#include "polymer/studies.hpp"

namespace polymer {
namespace {

CheckResult verdict(bool passed, double value, double tolerance, std::string detail) {
  CheckResult r;
  r.passed = passed;
  r.value = value;
  r.tolerance = tolerance;
  r.detail = std::move(detail);
  return r;
}

std::string fmt(double x) { return format_double(x); }

// ---- spectral_basis ----

CheckResult check_orthonormality(const ValidationOptions&) {
  double worst = 0.0;
  for (Index J : {1, 2, 3, 8, 33, 64}) {
    const SpectralBasisd basis(J);
    const Eigen::MatrixXd E = basis.orthonormal_table();
    worst = std::max(worst, (E * E.transpose() - Eigen::MatrixXd::Identity(J, J)).cwiseAbs().maxCoeff());
    for (Index m = 1; m < J; ++m) {
      worst = std::max(worst, std::abs(basis.phi_table().row(m).sum()));
      if (std::abs(basis.rho(m)) > 1.0) worst = INFINITY;
    }
  }
  return verdict(worst < 1e-12, worst, 1e-12, "max deviation from orthonormality and zero row sums");
}

CheckResult check_csc2_identity(const ValidationOptions&) {
  double worst = 0.0;
  for (Index J = 2; J <= 128; ++J) {
    const double exact = (static_cast<double>(J * J) - 1.0) / 3.0;
    worst = std::max(worst, std::abs(csc2_sum(J) - exact));
    worst = std::max(worst, std::abs(normalizing_constant_c0(J) * csc2_sum(J) - 1.0));
  }
  return verdict(worst < 1e-9, worst, 1e-9, "J = 2..128");
}

CheckResult check_kernel_oracle(const ValidationOptions& opt) {
  double worst = 0.0;
  for (Index J : {1, 2, 3, 4, 5, 8, 13, 16, 31, 64}) {
    const SpectralBasisd basis(J);
    for (std::int64_t t : {0, 1, 2, 3, 7, 16, 33, 64, 127, 128}) {
      const Eigen::MatrixXd G = green_matrix(basis, t + opt.kernel_exponent_offset, Convention::Literal);
      const Eigen::MatrixXd P = transition_matrix_power<double>(J, t);
      worst = std::max(worst, (G - P).cwiseAbs().maxCoeff());
    }
  }
  return verdict(worst < 1e-10, worst, 1e-10, "eigen-expansion kernel against repeated squaring of the one-step matrix");
}

CheckResult check_semigroup(const ValidationOptions&) {
  double worst = 0.0;
  for (Index J : {2, 7, 16}) {
    const SpectralBasisd basis(J);
    for (std::int64_t s : {0, 1, 4}) {
      for (std::int64_t t : {0, 3, 9}) {
        const Eigen::MatrixXd lhs = green_matrix(basis, s) * green_matrix(basis, t);
        worst = std::max(worst, (lhs - green_matrix(basis, s + t)).cwiseAbs().maxCoeff());
      }
      const Eigen::MatrixXd G = green_matrix(basis, s);
      worst = std::max(worst, (G.rowwise().sum().array() - 1.0).abs().maxCoeff());
      worst = std::max(worst, (G - G.transpose()).cwiseAbs().maxCoeff());
      if (G.minCoeff() < -1e-12) worst = INFINITY;
    }
  }
  return verdict(worst < 1e-12, worst, 1e-12, "G_s G_t = G_{s+t}, unit row sums, symmetry, positivity");
}

// ---- dynamics ----

CheckResult check_formula_vs_recursion(const ValidationOptions& opt) {
  const SpectralBasisd basis(16);
  double worst = 0.0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const NoiseField noise = sample_noise(derive_seed(opt.seed, k), 64, 16);
    RngStream rng(derive_seed(opt.seed, 1000 + k));
    Profile u0(16);
    for (Index n = 0; n < 16; ++n) u0(n) = rng.normal();
    const Trajectory a = simulate_recursion(u0, noise);
    const Trajectory b = solution_formula(u0, noise, basis, Convention::Literal);
    worst = std::max(worst, (a.u - b.u).cwiseAbs().maxCoeff());
  }
  return verdict(worst < 1e-9, worst, 1e-9, "J = 16, T = 64, 100 seeds");
}

CheckResult check_paper_stepper(const ValidationOptions& opt) {
  const SpectralBasisd basis(8);
  double worst = 0.0;
  for (std::uint64_t k = 0; k < 10; ++k) {
    const NoiseField noise = sample_noise(derive_seed(opt.seed, k), 32, 8);
    Profile u0 = Profile::LinSpaced(8, -1.0, 2.0);
    const Trajectory a = simulate(u0, noise, basis, Convention::Paper);
    const Trajectory b = solution_formula(u0, noise, basis, Convention::Paper);
    worst = std::max(worst, (a.u - b.u).cwiseAbs().maxCoeff());
  }
  return verdict(worst < 1e-9, worst, 1e-9, "mode stepping against the closed form, paper kernel");
}

CheckResult check_noise_determinism(const ValidationOptions& opt) {
  const NoiseField a = sample_noise(opt.seed, 16, 8);
  const NoiseField b = sample_noise(opt.seed, 16, 8);
  const NoiseField c = sample_noise(opt.seed + 1, 16, 8);
  const CounterRng rng(opt.seed);
  bool ok = a.xi == b.xi && a.xi != c.xi;
  for (Index t = 0; t < 16; ++t) {
    for (Index n = 0; n < 8; ++n) ok = ok && a.xi(t, n) == rng.normal(static_cast<std::uint64_t>(t * 8 + n));
  }
  return verdict(ok, ok ? 0.0 : 1.0, 0.0, "noise is a pure function of (seed, t, n)");
}

CheckResult check_mean_decomposition(const ValidationOptions& opt) {
  const Index J = 16, T = 40;
  double worst = 0.0;
  for (std::uint64_t k = 0; k < 20; ++k) {
    const NoiseField noise = sample_noise(derive_seed(opt.seed, k), T, J);
    Profile u0 = Profile::LinSpaced(J, 0.0, 3.0).array().sin();
    const Trajectory traj = simulate_recursion(u0, noise);
    double cumulative = 0.0;
    for (Index t = 0; t <= T; ++t) {
      const double predicted = u0.mean() + cumulative / static_cast<double>(J);
      worst = std::max(worst, std::abs(center_of_mass(traj, t) - predicted));
      if (t < T) cumulative += noise.xi.row(t).sum();
    }
  }
  return verdict(worst < 1e-10, worst, 1e-10, "center of mass = initial mean + (1/J) cumulative noise");
}

CheckResult check_random_walk_variance(const ValidationOptions& opt) {
  const Index J = 4, T = 8;
  const std::size_t n = 100000;
  const SpectralBasisd basis(J);
  std::vector<std::vector<double>> drift(static_cast<std::size_t>(T), std::vector<double>(n));
  parallel_for(n, [&](std::size_t k) {
    const NoiseField noise = sample_noise(derive_seed(opt.seed, k), T, J);
    const Trajectory traj = simulate(Profile::Zero(J), noise, basis, Convention::Literal);
    for (Index t = 1; t <= T; ++t) drift[static_cast<std::size_t>(t - 1)][k] = center_of_mass(traj, t);
  });
  double worst = 0.0;
  for (Index t = 1; t <= T; ++t) {
    const double expected = static_cast<double>(t) / static_cast<double>(J);
    worst = std::max(worst, std::abs(stats::variance(drift[static_cast<std::size_t>(t - 1)]) / expected - 1.0));
  }
  return verdict(worst < 0.05, worst, 0.05, "relative error of Var[ubar(t) - ubar(0)] against t/J, 1e5 samples");
}

CheckResult check_binary_roundtrip(const ValidationOptions& opt) {
  const SpectralBasisd basis(5);
  const Trajectory traj = sample_trajectory(ModelConfig{5, 7, kDefaultKappa, Convention::Literal, opt.seed}, basis, opt.seed);
  std::stringstream buf;
  write_trajectory_binary(buf, traj);
  const Trajectory back = read_trajectory_binary(buf);
  const bool ok = back.u == traj.u && back.seed == traj.seed && back.T == traj.T && back.J == traj.J;
  return verdict(ok, ok ? 0.0 : 1.0, 0.0, "binary trajectory write/read is lossless");
}

// ---- observables ----

CheckResult check_intersection_sweep(const ValidationOptions& opt) {
  const std::int64_t J = 16;
  const std::size_t configs = 10000;
  std::vector<int> violations(configs, 0);
  parallel_for(configs, [&](std::size_t k) {
    RngStream rng(derive_seed(opt.seed, k));
    std::vector<double> v(J);
    const double spread = 0.1 + 4.0 * rng.uniform();
    for (double& x : v) x = spread * rng.normal();
    const double eps = 0.05 + 2.0 * rng.uniform();
    const double alpha = rng.uniform() - 1e-17;
    const std::int64_t N = self_intersection_count(v, eps);
    const auto rep = local_inequality_check(v, eps, std::max(0.0, alpha), -1000000, 1000000);
    const bool ok = N >= J && N <= J * J && N == self_intersection_count_bruteforce(v, eps) && rep.holds &&
                    rep.chain_holds && occupancy_histogram(v, eps, std::max(0.0, alpha)).total() == J;
    violations[k] = ok ? 0 : 1;
  });
  const double bad = static_cast<double>(std::count(violations.begin(), violations.end(), 1));
  return verdict(bad == 0.0, bad, 0.0, "J <= N <= J^2, N >= sum l^2 and the window chain on 1e4 configurations, J = 16");
}

CheckResult check_epsilon_monotone(const ValidationOptions& opt) {
  RngStream rng(opt.seed);
  bool ok = true;
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> v(12);
    for (double& x : v) x = rng.normal();
    std::int64_t prev = 0;
    for (double eps : {0.01, 0.1, 0.3, 1.0, 3.0, 100.0}) {
      const std::int64_t N = self_intersection_count(v, eps);
      ok = ok && N >= prev;
      prev = N;
    }
    ok = ok && prev == 144;
  }
  return verdict(ok, ok ? 0.0 : 1.0, 0.0, "N is nondecreasing in epsilon and saturates at J^2");
}

CheckResult check_gyration_invariance(const ValidationOptions& opt) {
  const SpectralBasisd basis(9);
  const Trajectory traj = sample_trajectory(ModelConfig{9, 20, kDefaultKappa, Convention::Literal, opt.seed}, basis, opt.seed);
  const double R = radius_of_gyration(traj);
  Trajectory shifted = traj;
  shifted.u.array() += 17.5;
  Trajectory scaled = traj;
  scaled.u *= -3.0;
  Trajectory mirrored = traj;
  mirrored.u = traj.u.rowwise().reverse();
  const double worst = std::max({std::abs(radius_of_gyration(shifted) - R), std::abs(radius_of_gyration(scaled) - 3.0 * R),
                                 std::abs(radius_of_gyration(mirrored) - R)});
  return verdict(worst < 1e-10, worst, 1e-10, "R under translation, scaling and site reversal");
}

// ---- gibbs ----

CheckResult check_single_site_partition(const ValidationOptions& opt) {
  const SpectralBasisd basis(1);
  double worst = 0.0;
  for (double beta : {0.0, 0.3, 2.0}) {
    const ModelConfig cfg{1, 10, kDefaultKappa, Convention::Literal, opt.seed};
    const auto ens = free_ensemble(cfg, basis, beta, 0.5, 50);
    const auto est = estimate_measure(ens, [](const ObservableRecord& r) { return r.R; }, 1.0);
    worst = std::max(worst, std::abs(est.log_Z + beta * 10.0));
  }
  return verdict(worst == 0.0, worst, 0.0, "J = 1 gives log Z = -beta T exactly");
}

CheckResult check_weight_bounds(const ValidationOptions& opt) {
  const SpectralBasisd basis(6);
  const ModelConfig cfg{6, 12, kDefaultKappa, Convention::Literal, opt.seed};
  const double beta = 0.05;
  const auto ens = free_ensemble(cfg, basis, beta, 0.4, 500);
  const double lo = -beta * 12 * 36, hi = -beta * 12 * 6;
  bool ok = true;
  for (const auto& it : ens.items) ok = ok && it.log_weight >= lo && it.log_weight <= hi;
  const auto w = ens.normalized_weights();
  double sum = 0.0;
  for (double x : w) sum += x;
  const auto est = estimate_measure(ens, [](const ObservableRecord& r) { return r.R; }, 1.0);
  ok = ok && std::abs(sum - 1.0) < 1e-12 && est.log_Z >= lo && est.log_Z <= hi;
  return verdict(ok, est.log_Z, 0.0, "log weights and log Z inside [-beta T J^2, -beta T J]");
}

CheckResult check_jensen(const ValidationOptions& opt) {
  const SpectralBasisd basis(4);
  const ModelConfig cfg{4, 8, kDefaultKappa, Convention::Literal, opt.seed};
  bool ok = true;
  double margin = INFINITY;
  std::string detail;
  for (double a : {0.0, 0.5, 1.0}) {
    const JensenResult r = jensen_lower_bound(cfg, basis, a, 0.1, 0.5, 20000);
    ok = ok && r.holds;
    margin = std::min(margin, r.logZ_over_T - r.bound);
    detail += "a=" + fmt(a) + ": logZ/T=" + fmt(r.logZ_over_T) + " bound=" + fmt(r.bound) + "; ";
  }
  return verdict(ok, margin, 0.0, detail);
}

CheckResult check_metropolis_free(const ValidationOptions& opt) {
  const Index J = 4, T = 8;
  const SpectralBasisd basis(J);
  const ModelConfig cfg{J, T, kDefaultKappa, Convention::Literal, opt.seed};
  MetropolisOptions mo;
  mo.sweeps = 20000;
  mo.burn_in = 200;
  mo.thin = 20;
  const MetropolisRun run = metropolis_sampler(cfg, basis, 0.0, 0.5, mo);
  std::vector<double> chain, direct;
  for (const auto& it : run.ensemble.items) chain.push_back(it.record.R);
  ModelConfig dcfg = cfg;
  dcfg.seed = derive_seed(opt.seed, 77);
  for (const auto& it : free_ensemble(dcfg, basis, 0.0, 0.5, static_cast<std::int64_t>(chain.size())).items) {
    direct.push_back(it.record.R);
  }
  const auto ks = stats::ks_two_sample(chain, direct);
  return verdict(ks.p_value > 0.01, ks.p_value, 0.01, "KS p-value, chain at beta = 0 against direct draws of R");
}

CheckResult check_pair_bound(const ValidationOptions& opt) {
  const SpectralBasisd basis(8);
  const double eps = 0.5;
  stats::Accumulator acc;
  RngStream rng(opt.seed);
  for (int k = 0; k < 20000; ++k) {
    const Profile p = sample_stationary_profile(basis, Convention::Literal, 0, rng);
    acc.add(static_cast<double>(self_intersection_count({p.data(), 8}, eps)));
  }
  const double bound = pair_proximity_bound(basis, eps);
  return verdict(acc.mean() <= bound + 3.0 * acc.standard_error(), acc.mean(), bound,
                 "stationary E[N(0)] against the pair-proximity bound");
}

// ---- increment_stats ----

CheckResult check_increment_symmetry(const ValidationOptions&) {
  double worst = 0.0;
  for (Index J : {2, 5, 16}) {
    const SpectralBasisd basis(J);
    for (Convention c : {Convention::Literal, Convention::Paper}) {
      for (Index i = 0; i < J; ++i) {
        worst = std::max(worst, increment_mean_and_variance(basis, i, i, c).variance);
        for (Index j = 0; j < J; ++j) {
          const auto a = increment_mean_and_variance(basis, i, j, c);
          const auto b = increment_mean_and_variance(basis, j, i, c);
          worst = std::max({worst, std::abs(a.variance - b.variance), std::abs(a.mean)});
          if (a.variance < 0.0) worst = INFINITY;
        }
      }
    }
  }
  return verdict(worst < 1e-12, worst, 1e-12, "zero mean, symmetric, nonnegative, zero on the diagonal");
}

CheckResult check_pinned_string_moments(const ValidationOptions& opt) {
  const SpectralBasisd basis(8);
  const std::size_t n = 100000;
  const Index i = 6, j = 1;
  bool ok = true;
  double worst = 0.0;
  std::string detail;
  for (Convention c : {Convention::Literal, Convention::Paper}) {
    for (Index t0 : {0, 500}) {
      std::vector<double> inc(n);
      parallel_for(n, [&](std::size_t k) {
        const PinnedString ps = pinned_string(basis, t0, 0, 0, 1e-8, derive_seed(opt.seed, k), c);
        inc[k] = ps.field(0, i) - ps.field(0, j);
      });
      const double exact = increment_mean_and_variance(basis, i, j, c).variance;
      const double mean = stats::mean(inc);
      const double se = stats::standard_error(inc);
      const double rel = std::abs(stats::variance(inc) / exact - 1.0);
      worst = std::max(worst, rel);
      ok = ok && std::abs(mean) <= 4.0 * se && rel < 0.05;
      detail += std::string(to_string(c)) + " t0=" + std::to_string(t0) + ": mean/se=" + fmt(mean / se) +
                " var rel err=" + fmt(rel) + "; ";
    }
  }
  return verdict(ok, worst, 0.05, detail);
}

CheckResult check_paper_ratio_band(const ValidationOptions&) {
  const std::vector<Index> Js{8, 16, 32, 64};
  const VarianceScan scan = variance_scaling_scan(Js, Convention::Paper);
  return verdict(scan.band() < 20.0, scan.band(), 20.0,
                 "max/min of Var/(J d) over i + j < J - 1, d = 1, 2, 4, ...; min " + fmt(scan.ratio_min) + " max " +
                     fmt(scan.ratio_max));
}

CheckResult check_paper_doubling(const ValidationOptions&) {
  double worst = 0.0;
  const SpectralBasisd b16(16), b32(32);
  for (Index d : {1, 2, 4}) {
    const double r = increment_mean_and_variance(b32, d, 0, Convention::Paper).variance /
                     increment_mean_and_variance(b16, d, 0, Convention::Paper).variance;
    worst = std::max(worst, std::abs(r / 2.0 - 1.0));
  }
  return verdict(worst < 0.25, worst, 0.25, "variance ratio between J = 32 and J = 16 at fixed d, relative to 2");
}

// ---- ar1_ldp ----

CheckResult check_rate_zero(const ValidationOptions&) {
  double worst = 0.0;
  for (double rho : {0.0, 0.3, 0.9}) {
    for (double s2 : {1.0, 0.5, 3.0}) {
      const AR1Params p{rho, s2};
      worst = std::max(worst, std::abs(rate_function(p, s2 / (1.0 - rho * rho))));
    }
  }
  return verdict(worst < 1e-12, worst, 1e-12, "rate vanishes at the stationary mean");
}

CheckResult check_rate_shape(const ValidationOptions&) {
  bool ok = true;
  for (double rho : {0.0, 0.5, 0.95}) {
    const AR1Params p{rho, 1.0};
    const double h = 1e-3;
    for (double x = 0.05; x < 10.0; x += 0.05) {
      const double c2 = rate_function(p, x + h) - 2.0 * rate_function(p, x) + rate_function(p, x - h);
      ok = ok && rate_function(p, x) >= -1e-14 && c2 >= -1e-12;
    }
  }
  return verdict(ok, ok ? 0.0 : 1.0, 0.0, "nonnegative and convex on (0, 10)");
}

CheckResult check_legendre(const ValidationOptions&) {
  const AR1Params p{0.5, 1.0};
  const double hi = explosion_threshold(p) - 2e-3;
  double worst = 0.0;
  for (double x = 0.5; x <= 5.0 + 1e-12; x += 0.25) {
    double lo = -50.0, up = hi;
    const auto f = [&](double y) { return x * y - cumulant_fixed_point(p, y).cumulant; };
    for (int it = 0; it < 200; ++it) {
      const double m1 = lo + (up - lo) / 3.0, m2 = up - (up - lo) / 3.0;
      if (f(m1) < f(m2)) lo = m1;
      else up = m2;
    }
    worst = std::max(worst, std::abs(f(0.5 * (lo + up)) - rate_function(p, x)));
  }
  return verdict(worst < 1e-4, worst, 1e-4, "Legendre transform of the fixed-point cumulant, rho = 0.5, x in [0.5, 5]");
}

CheckResult check_cumulant_shape(const ValidationOptions&) {
  const AR1Params p{0.6, 1.0};
  const double yc = explosion_threshold(p);
  bool ok = std::abs(cumulant_fixed_point(p, 0.0).cumulant) < 1e-15;
  double prev = -INFINITY;
  double prev_slope = -INFINITY;
  const double h = 0.01;
  for (double y = -2.0; y < yc - 2 * h; y += h) {
    const double c0 = cumulant_fixed_point(p, y).cumulant;
    const double c1 = cumulant_fixed_point(p, y + h).cumulant;
    const double slope = (c1 - c0) / h;
    ok = ok && c0 > prev && slope >= prev_slope - 1e-9;
    prev = c0;
    prev_slope = slope;
  }
  bool threw = false;
  try {
    cumulant_fixed_point(p, yc * 1.5);
  } catch (const DomainError&) {
    threw = true;
  }
  return verdict(ok && threw, ok && threw ? 0.0 : 1.0, 0.0, "cumulant increasing, convex, explodes past y_c");
}

CheckResult check_mode_reconstruction(const ValidationOptions& opt) {
  double worst = 0.0;
  for (Convention c : {Convention::Literal, Convention::Paper}) {
    const SpectralBasisd basis(10);
    const Trajectory traj = sample_trajectory(ModelConfig{10, 30, kDefaultKappa, c, opt.seed}, basis, opt.seed);
    const auto modes = mode_decompose(traj, basis);
    const Field back = mode_resynthesize(modes, basis);
    for (Index t = 1; t <= traj.T; ++t) {
      const auto row = traj.u.row(t);
      worst = std::max(worst, ((row.array() - row.mean()).matrix() - back.row(t - 1)).cwiseAbs().maxCoeff());
    }
    const GyrationIdentity g = gyration_spectral_identity(traj, basis);
    worst = std::max(worst, std::abs(g.R2_direct - g.R2_spectral));
    worst = std::max(worst, std::abs(g.constant - 0.1));
  }
  return verdict(worst < 1e-10, worst, 1e-10, "modes resynthesize the centered field; R^2 = (1/J) sum_m S_T");
}

CheckResult check_stationary_variance_sum(const ValidationOptions&) {
  double worst = 0.0;
  for (Index J = 2; J <= 64; ++J) {
    const SpectralBasisd basis(J);
    double s = 0.0;
    for (Index m = 1; m < J; ++m) s += 1.0 / (1.0 - basis.rho(m) * basis.rho(m));
    worst = std::max(worst, std::abs(s - csc2_sum(J)) / csc2_sum(J));
  }
  return verdict(worst < 1e-12, worst, 1e-12, "sum of stationary AR(1) mode variances equals the csc^2 sum");
}

// ---- experiments ----

CheckResult check_report_roundtrip(const ValidationOptions&) {
  ReportTable t;
  t.columns = {"a", "b", "name"};
  t.add_row({std::int64_t{3}, 0.1 + 0.2, std::string("x,\"y\"")});
  t.add_row({std::int64_t{-7}, 1.0 / 3.0, std::string("plain")});
  std::ostringstream a, b;
  emit_report(t, ReportFormat::Csv, a);
  emit_report(t, ReportFormat::Csv, b);
  std::istringstream in(a.str());
  const CsvTable back = parse_csv(in);
  bool ok = a.str() == b.str() && back.rows.size() == 2 && back.rows[0][2] == "x,\"y\"";
  double worst = 0.0;
  if (ok) {
    worst = std::max(std::abs(back.number(0, 1) - 0.3), std::abs(back.number(1, 1) - 1.0 / 3.0));
  }
  ok = ok && worst < 1e-12;
  return verdict(ok, worst, 1e-12, "deterministic CSV and numeric round trip");
}

CheckResult check_exact_R2(const ValidationOptions& opt) {
  StudyConfig cfg;
  cfg.epsilon = 0.5;
  cfg.T = 64;
  cfg.replicates = 20000;
  cfg.seed = opt.seed;
  double worst = 0.0;
  for (Convention c : {Convention::Literal, Convention::Paper}) {
    cfg.convention = c;
    const SpectralBasisd basis(8);
    const CellDraws d = draw_cell(cfg, basis, cfg.T, derive_seed(opt.seed, 8));
    std::vector<double> r2(d.R.size());
    std::transform(d.R.begin(), d.R.end(), r2.begin(), [](double x) { return x * x; });
    worst = std::max(worst, std::abs(stats::mean(r2) / exact_mean_R2(8, 64, c) - 1.0));
  }
  return verdict(worst < 0.02, worst, 0.02, "Monte Carlo E[R^2] against the exact mode-variance sum, J = 8, T = 64");
}

std::vector<ValidationCheck> build_registry() {
  return {
      {"basis.orthonormality", "spectral_basis", "eigenvectors orthonormal, |rho| <= 1, non-constant modes sum to 0", false, check_orthonormality},
      {"basis.csc2_identity", "spectral_basis", "csc^2 sum equals (J^2 - 1)/3 and c0 is its reciprocal", false, check_csc2_identity},
      {"basis.kernel_oracle", "spectral_basis", "eigen-expansion kernel equals powers of the one-step matrix", false, check_kernel_oracle},
      {"basis.semigroup", "spectral_basis", "semigroup law, mass conservation, symmetry, positivity", false, check_semigroup},
      {"dynamics.formula_vs_recursion", "dynamics", "closed-form solution equals the recursion", false, check_formula_vs_recursion},
      {"dynamics.paper_stepper", "dynamics", "paper-kernel stepper equals the paper-kernel closed form", false, check_paper_stepper},
      {"dynamics.noise_determinism", "dynamics", "noise depends only on seed and lattice position", false, check_noise_determinism},
      {"dynamics.mean_decomposition", "dynamics", "center of mass moves by the averaged noise only", false, check_mean_decomposition},
      {"dynamics.random_walk_variance", "dynamics", "Var[ubar(t) - ubar(0)] = t/J within 5%", false, check_random_walk_variance},
      {"dynamics.binary_roundtrip", "dynamics", "binary trajectory format round trip", false, check_binary_roundtrip},
      {"observables.intersection_sweep", "observables", "N bounds and the local occupancy inequality", false, check_intersection_sweep},
      {"observables.epsilon_monotone", "observables", "N nondecreasing in epsilon", false, check_epsilon_monotone},
      {"observables.gyration_invariance", "observables", "R invariances", false, check_gyration_invariance},
      {"gibbs.single_site_partition", "gibbs", "log Z = -beta T at J = 1", false, check_single_site_partition},
      {"gibbs.weight_bounds", "gibbs", "log weights and log Z inside the attainable interval", false, check_weight_bounds},
      {"gibbs.jensen_bound", "gibbs", "tilted Jensen lower bound on log Z / T", false, check_jensen},
      {"gibbs.metropolis_free_ks", "gibbs", "chain at beta = 0 matches direct sampling (KS)", false, check_metropolis_free},
      {"gibbs.pair_bound", "gibbs", "stationary E[N(0)] below the pair-proximity bound", false, check_pair_bound},
      {"increments.symmetry", "increment_stats", "increment moments symmetric with zero mean", false, check_increment_symmetry},
      {"increments.pinned_string_moments", "increment_stats", "pinned-string increment moments match the closed form", false, check_pinned_string_moments},
      {"increments.paper_ratio_band", "increment_stats", "paper-kernel Var/(J d) within a factor-20 band", true, check_paper_ratio_band},
      {"increments.paper_doubling", "increment_stats", "paper-kernel variance doubles with J at fixed separation", false, check_paper_doubling},
      {"ldp.rate_zero", "ar1_ldp", "rate function vanishes at the stationary mean", false, check_rate_zero},
      {"ldp.rate_shape", "ar1_ldp", "rate function nonnegative and convex", false, check_rate_shape},
      {"ldp.legendre", "ar1_ldp", "rate function is the Legendre transform of the cumulant", false, check_legendre},
      {"ldp.cumulant_shape", "ar1_ldp", "cumulant increasing, convex, explosion threshold", false, check_cumulant_shape},
      {"ldp.mode_reconstruction", "ar1_ldp", "mode decomposition and the gyration identity", false, check_mode_reconstruction},
      {"ldp.stationary_variance_sum", "ar1_ldp", "stationary mode variances sum to the csc^2 sum", false, check_stationary_variance_sum},
      {"experiments.report_roundtrip", "experiments_cli", "deterministic report emission and CSV parse-back", false, check_report_roundtrip},
      {"experiments.exact_R2", "experiments_cli", "Monte Carlo E[R^2] against the exact finite-T formula", false, check_exact_R2},
  };
}

}  // namespace

const std::vector<ValidationCheck>& validation_registry() {
  static const std::vector<ValidationCheck> registry = build_registry();
  return registry;
}

ReportTable validation_manifest() {
  ReportTable t;
  t.columns = {"name", "module", "description", "known_discrepancy"};
  for (const auto& c : validation_registry()) t.add_row({c.name, c.module, c.description, c.known_discrepancy});
  return t;
}

bool ValidationReport::all_passed() const {
  return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.passed || r.known_discrepancy; });
}

std::vector<std::string> ValidationReport::failures() const {
  std::vector<std::string> out;
  for (const auto& r : results) {
    if (!r.passed && !r.known_discrepancy) out.push_back(r.name);
  }
  return out;
}

ReportTable ValidationReport::table() const {
  ReportTable t;
  t.columns = {"schema_version", "check", "module", "status", "value", "tolerance", "detail"};
  for (const auto& r : results) {
    const std::string status = r.passed ? "pass" : (r.known_discrepancy ? "discrepancy" : "fail");
    t.add_row({std::int64_t{kSchemaVersion}, r.name, r.module, status, r.value, r.tolerance, r.detail});
  }
  return t;
}

ValidationReport run_validation_suite(const ValidationOptions& options) {
  ValidationReport rep;
  for (const auto& check : validation_registry()) {
    if (!options.filter.empty() && check.name.find(options.filter) == std::string::npos) continue;
    CheckResult r;
    try {
      r = check.run(options);
    } catch (const std::exception& e) {
      r = verdict(false, std::nan(""), 0.0, std::string("exception: ") + e.what());
    }
    r.name = check.name;
    r.module = check.module;
    r.known_discrepancy = check.known_discrepancy && !r.passed;
    rep.results.push_back(std::move(r));
  }
  return rep;
}

ValidationReport run_validation_suite(const StudyConfig& config) {
  ValidationOptions opt;
  opt.seed = config.seed;
  return run_validation_suite(opt);
}

}  // namespace polymer
