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

#ifndef POLYMER_CONFIG_HPP
#define POLYMER_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "polymer/dynamics.hpp"

namespace polymer {

/// Bad or unknown configuration entry (CLI exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class SamplerChoice : std::uint8_t { Importance, Metropolis, Auto };

std::string_view to_string(SamplerChoice s) noexcept;
SamplerChoice parse_sampler(std::string_view text);

/// Experiment description. Loaded from a flat `key = value` file, then overridden from the
/// command line. Every key must be known.
struct StudyConfig {
  std::vector<Index> J_list{8, 16, 32, 64};
  Index T = 512;
  std::vector<Index> T_list{64, 256};
  double kappa = kDefaultKappa;
  double beta = 0.0;
  std::optional<double> epsilon;  // no default
  double drift = 0.0;
  Convention convention = Convention::Literal;
  SamplerChoice sampler = SamplerChoice::Auto;
  std::uint64_t seed = 1;
  std::int64_t replicates = 200;
  std::filesystem::path output_dir;

  // Sampler tuning.
  double ess_floor = 50.0;
  std::int64_t sweeps = 2000;
  std::int64_t burn_in = 200;
  std::int64_t thin = 2;
  double proposal_scale = 0.5;

  // Tail probes.
  double K1 = 0.1;
  double K2 = 0.5;

  // AR(1) / LDP subcommand.
  double rho = 0.5;
  double sigma2 = 1.0;
  double K = 2.0;
  std::int64_t samples = 100000;

  /// Applies `key = value` (already split). Throws ConfigError for unknown keys or bad values.
  void set(std::string_view key, std::string_view value);

  /// Checks ranges of every field; throws ConfigError.
  void validate() const;

  /// Throws ConfigError when epsilon was never supplied.
  double require_epsilon() const;

  ModelConfig model(Index J, Index T) const;

  static const std::vector<std::string>& known_keys();
};

/// Parses `key = value` lines; `#` starts a comment; blank lines are ignored.
StudyConfig load_config(std::istream& in, StudyConfig base = {});
StudyConfig load_config_file(const std::filesystem::path& path, StudyConfig base = {});

std::vector<Index> parse_index_list(std::string_view text);

}  // namespace polymer

#endif  // POLYMER_CONFIG_HPP
