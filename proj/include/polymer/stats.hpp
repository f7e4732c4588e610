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

#ifndef POLYMER_STATS_HPP
#define POLYMER_STATS_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace polymer::stats {

/// Running mean/variance (Welford). Order of `add` calls fixes the result bit-for-bit.
class Accumulator {
 public:
  void add(double x) noexcept;
  std::size_t count() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  double variance() const noexcept;  // unbiased
  double standard_error() const noexcept;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

double mean(std::span<const double> xs);
double variance(std::span<const double> xs);
double standard_error(std::span<const double> xs);

/// Linear-interpolated sample quantile (type 7).
double quantile(std::vector<double> xs, double q);

/// Standard normal CDF.
double normal_cdf(double x);

/// log(sum exp(x_i)), shifted by the maximum.
double log_sum_exp(std::span<const double> xs);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic Kolmogorov p-value.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Kolmogorov survival function Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_survival(double lambda);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
};

/// Ordinary least squares y = intercept + slope x. Needs >= 2 points (slope_se needs >= 3).
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// Integrated autocorrelation time with Sokal's self-consistent window (c = 5).
double integrated_autocorrelation_time(std::span<const double> series);

}  // namespace polymer::stats

#endif  // POLYMER_STATS_HPP
