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

#include "polymer/increment_stats.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace polymer {

IncrementStat increment_mean_and_variance(const SpectralBasisd& basis, Index i, Index j, Convention conv) {
  if (basis.size() < 2) throw InvalidParameter("increment statistics need J >= 2");
  basis.check_site(i);
  basis.check_site(j);
  IncrementStat stat{i, j, 0.0, 0.0, conv};
  if (i == j) return stat;
  for (Index m = 1; m < basis.size(); ++m) {
    const double rho2 = basis.rho(m) * basis.rho(m);
    const double gain = conv == Convention::Paper ? rho2 / (1.0 - rho2) : basis.a(m) * basis.a(m) / (1.0 - rho2);
    const double diff = basis.phi(m, i) - basis.phi(m, j);
    stat.variance += gain * diff * diff;
  }
  return stat;
}

double min_increment_variance_at_distance(const SpectralBasisd& basis, Index d, Convention conv) {
  if (d < 1 || d >= basis.size()) throw InvalidParameter("separation must lie in [1, J-1]");
  double best = std::numeric_limits<double>::infinity();
  for (Index j = 0; j + d < basis.size(); ++j) {
    best = std::min(best, increment_mean_and_variance(basis, j + d, j, conv).variance);
  }
  return best;
}

VarianceScan variance_scaling_scan(std::span<const Index> J_list, Convention conv) {
  VarianceScan scan;
  scan.convention = conv;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double lo_all = lo;
  double hi_all = hi;
  for (const Index J : J_list) {
    if (J < 4) throw InvalidParameter("variance scan needs J >= 4, got " + std::to_string(J));
    const SpectralBasisd basis(J);
    for (Index d = 1; d < J; d *= 2) {
      for (Index j = 0; j + d < J; ++j) {
        const Index i = j + d;
        VarianceScanRow row;
        row.J = J;
        row.i = i;
        row.j = j;
        row.d = d;
        row.convention = conv;
        row.variance = increment_mean_and_variance(basis, i, j, conv).variance;
        const double scale = conv == Convention::Paper ? static_cast<double>(J * d) : static_cast<double>(d);
        row.ratio = row.variance / scale;
        row.reduced_domain = i + j < J - 1;
        if (row.reduced_domain) {
          lo = std::min(lo, row.ratio);
          hi = std::max(hi, row.ratio);
        }
        lo_all = std::min(lo_all, row.ratio);
        hi_all = std::max(hi_all, row.ratio);
        scan.rows.push_back(row);
      }
    }
  }
  scan.ratio_min = lo;
  scan.ratio_max = hi;
  scan.ratio_min_all = lo_all;
  scan.ratio_max_all = hi_all;
  return scan;
}

}  // namespace polymer
