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

#ifndef POLYMER_INCREMENT_STATS_HPP
#define POLYMER_INCREMENT_STATS_HPP

#include <span>
#include <vector>

#include "polymer/spectral_basis.hpp"

namespace polymer {

/// Stationary law of u(0,i) - u(0,j) for the pinned string.
struct IncrementStat {
  Index i = 0;
  Index j = 0;
  double mean = 0.0;
  double variance = 0.0;
  Convention convention = Convention::Literal;
};

/// Closed forms (the geometric series in s is summed as rho^2/(1-rho^2) or 1/(1-rho^2)):
///   Paper:   sum_{m>=1} rho_m^2 / (1 - rho_m^2) [phi_m(i) - phi_m(j)]^2
///   Literal: sum_{m>=1} a_m^2 / (1 - rho_m^2) [phi_m(i) - phi_m(j)]^2
/// The mean is zero because sum_n phi_m(n) = 0 for m >= 1.
IncrementStat increment_mean_and_variance(const SpectralBasisd& basis, Index i, Index j,
                                          Convention conv = Convention::Literal);

/// Smallest closed-form increment variance over all pairs at separation d.
double min_increment_variance_at_distance(const SpectralBasisd& basis, Index d, Convention conv);

struct VarianceScanRow {
  Index J = 0;
  Index i = 0;
  Index j = 0;
  Index d = 0;
  Convention convention = Convention::Literal;
  double variance = 0.0;
  double ratio = 0.0;          // variance/(J d) for Paper, variance/d for Literal
  bool reduced_domain = false; // i + j < J - 1
};

struct VarianceScan {
  Convention convention = Convention::Literal;
  std::vector<VarianceScanRow> rows;
  // Over rows with i + j < J - 1.
  double ratio_min = 0.0;
  double ratio_max = 0.0;
  // Over every row, including the pairs outside the reduced domain.
  double ratio_min_all = 0.0;
  double ratio_max_all = 0.0;

  double band() const { return ratio_max / ratio_min; }
};

/// For each J, every pair i = j + d with d on the grid 1, 2, 4, ... < J.
VarianceScan variance_scaling_scan(std::span<const Index> J_list, Convention conv);

}  // namespace polymer

#endif  // POLYMER_INCREMENT_STATS_HPP
