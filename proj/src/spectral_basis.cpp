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

#include "polymer/spectral_basis.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace polymer {

Convention parse_convention(std::string_view text) {
  if (text == "literal" || text == "LITERAL") return Convention::Literal;
  if (text == "paper" || text == "PAPER") return Convention::Paper;
  throw InvalidParameter("unknown convention '" + std::string(text) + "' (expected literal or paper)");
}

double csc2_sum(Index J) {
  if (J < 2) throw InvalidParameter("csc^2 sum needs J >= 2, got " + std::to_string(J));
  double sum = 0.0;
  for (Index m = 1; m < J; ++m) {
    const double s = std::sin(static_cast<double>(m) * std::numbers::pi / static_cast<double>(J));
    sum += 1.0 / (s * s);
  }
  return sum;
}

double normalizing_constant_c0(Index J) {
  if (J < 2) throw InvalidParameter("c0 needs J >= 2, got " + std::to_string(J));
  const double len = static_cast<double>(J);
  return 3.0 / (len * len - 1.0);
}

}  // namespace polymer
