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

#ifndef POLYMER_ERRORS_HPP
#define POLYMER_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace polymer {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter is outside the documented domain (J = 0, site out of range, ...).
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// Input shapes disagree (noise field vs. initial profile, ...).
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// An operation's precondition on the data does not hold (e.g. nonzero u0 for mode analysis).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Importance weights collapsed below the configured effective sample size floor.
class DegeneracyError : public Error {
 public:
  DegeneracyError(double beta, std::int64_t T, std::int64_t J, double ess, double floor)
      : Error("importance weights degenerate at beta=" + std::to_string(beta) +
              ", T=" + std::to_string(T) + ", J=" + std::to_string(J) +
              " (ESS " + std::to_string(ess) + " < floor " + std::to_string(floor) + ")"),
        beta_(beta), T_(T), J_(J), ess_(ess) {}

  double beta() const noexcept { return beta_; }
  std::int64_t T() const noexcept { return T_; }
  std::int64_t J() const noexcept { return J_; }
  double ess() const noexcept { return ess_; }

 private:
  double beta_;
  std::int64_t T_;
  std::int64_t J_;
  double ess_;
};

/// Fixed-point iteration left its domain; carries the last finite iterate.
class DomainError : public Error {
 public:
  DomainError(const std::string& what, double last_iterate)
      : Error(what), last_iterate_(last_iterate) {}
  double last_iterate() const noexcept { return last_iterate_; }

 private:
  double last_iterate_;
};

/// Truncated pinned-string past cannot reach the requested tolerance under the depth cap.
class TruncationError : public Error {
 public:
  TruncationError(std::int64_t required_depth, std::int64_t cap)
      : Error("pinned string needs past depth S=" + std::to_string(required_depth) +
              " which exceeds the cap " + std::to_string(cap)),
        required_depth_(required_depth) {}
  std::int64_t required_depth() const noexcept { return required_depth_; }

 private:
  std::int64_t required_depth_;
};

}  // namespace polymer

#endif  // POLYMER_ERRORS_HPP
