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

#include "polymer/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace polymer {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view text) {
  const std::string buf(trim(text));
  try {
    std::size_t used = 0;
    const double v = std::stod(buf, &used);
    if (used != buf.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad number for '" + std::string(key) + "': '" + buf + "'");
  }
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view text) {
  const auto t = trim(text);
  Int v{};
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size()) {
    throw ConfigError("bad integer for '" + std::string(key) + "': '" + std::string(t) + "'");
  }
  return v;
}

}  // namespace

std::string_view to_string(SamplerChoice s) noexcept {
  switch (s) {
    case SamplerChoice::Importance: return "importance";
    case SamplerChoice::Metropolis: return "metropolis";
    case SamplerChoice::Auto: return "auto";
  }
  return "auto";
}

SamplerChoice parse_sampler(std::string_view text) {
  if (text == "importance") return SamplerChoice::Importance;
  if (text == "metropolis") return SamplerChoice::Metropolis;
  if (text == "auto") return SamplerChoice::Auto;
  throw ConfigError("unknown sampler '" + std::string(text) + "' (expected importance, metropolis or auto)");
}

std::vector<Index> parse_index_list(std::string_view text) {
  std::vector<Index> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto piece = trim(text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    if (piece.empty()) throw ConfigError("empty entry in list '" + std::string(text) + "'");
    out.push_back(parse_int<Index>("list", piece));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

const std::vector<std::string>& StudyConfig::known_keys() {
  static const std::vector<std::string> keys = {
      "J", "T", "T_list", "kappa", "beta", "epsilon", "drift", "convention", "sampler", "seed", "replicates",
      "output_dir", "ess_floor", "sweeps", "burn_in", "thin", "proposal_scale", "K1", "K2", "rho", "sigma2", "K",
      "samples"};
  return keys;
}

void StudyConfig::set(std::string_view key, std::string_view value) {
  value = trim(value);
  try {
    if (key == "J") J_list = parse_index_list(value);
    else if (key == "T") T = parse_int<Index>(key, value);
    else if (key == "T_list") T_list = parse_index_list(value);
    else if (key == "kappa") kappa = parse_double(key, value);
    else if (key == "beta") beta = parse_double(key, value);
    else if (key == "epsilon") epsilon = parse_double(key, value);
    else if (key == "drift") drift = parse_double(key, value);
    else if (key == "convention") convention = parse_convention(value);
    else if (key == "sampler") sampler = parse_sampler(value);
    else if (key == "seed") seed = parse_int<std::uint64_t>(key, value);
    else if (key == "replicates") replicates = parse_int<std::int64_t>(key, value);
    else if (key == "output_dir") output_dir = std::string(value);
    else if (key == "ess_floor") ess_floor = parse_double(key, value);
    else if (key == "sweeps") sweeps = parse_int<std::int64_t>(key, value);
    else if (key == "burn_in") burn_in = parse_int<std::int64_t>(key, value);
    else if (key == "thin") thin = parse_int<std::int64_t>(key, value);
    else if (key == "proposal_scale") proposal_scale = parse_double(key, value);
    else if (key == "K1") K1 = parse_double(key, value);
    else if (key == "K2") K2 = parse_double(key, value);
    else if (key == "rho") rho = parse_double(key, value);
    else if (key == "sigma2") sigma2 = parse_double(key, value);
    else if (key == "K") K = parse_double(key, value);
    else if (key == "samples") samples = parse_int<std::int64_t>(key, value);
    else throw ConfigError("unknown configuration key '" + std::string(key) + "'");
  } catch (const InvalidParameter& e) {
    throw ConfigError(e.what());
  }
}

void StudyConfig::validate() const {
  const auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (J_list.empty()) fail("J list is empty");
  for (Index J : J_list) {
    if (J < 2 || J > kMaxChainLength) fail("each J must lie in [2, " + std::to_string(kMaxChainLength) + "]");
  }
  if (T < 1) fail("T must be >= 1");
  if (T_list.empty()) fail("T_list is empty");
  for (Index t : T_list) {
    if (t < 1) fail("each entry of T_list must be >= 1");
  }
  if (!(kappa > 0.0 && kappa <= 0.5)) fail("kappa must lie in (0, 1/2]");
  if (convention == Convention::Paper && kappa != kDefaultKappa) fail("the paper convention requires kappa = 1/2");
  if (!(beta >= 0.0) || !std::isfinite(beta)) fail("beta must be finite and >= 0");
  if (epsilon && (!(*epsilon > 0.0) || !std::isfinite(*epsilon))) fail("epsilon must be finite and > 0");
  if (!std::isfinite(drift)) fail("drift must be finite");
  if (replicates < 1) fail("replicates must be >= 1");
  if (!(ess_floor >= 1.0)) fail("ess_floor must be >= 1");
  if (sweeps < 1 || burn_in < 0 || thin < 1) fail("need sweeps >= 1, burn_in >= 0, thin >= 1");
  if (!(proposal_scale > 0.0 && proposal_scale <= 1.0)) fail("proposal_scale must lie in (0, 1]");
  if (!(K1 >= 0.0) || !(K2 > K1)) fail("tail thresholds need 0 <= K1 < K2");
  if (!(std::abs(rho) < 1.0)) fail("rho must satisfy |rho| < 1");
  if (!(sigma2 > 0.0)) fail("sigma2 must be > 0");
  if (samples < 1) fail("samples must be >= 1");
}

double StudyConfig::require_epsilon() const {
  if (!epsilon) throw ConfigError("epsilon is required for this experiment (set epsilon = ... or --epsilon)");
  return *epsilon;
}

ModelConfig StudyConfig::model(Index J, Index horizon) const {
  return ModelConfig{J, horizon, kappa, convention, seed};
}

StudyConfig load_config(std::istream& in, StudyConfig base) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const auto key = trim(view.substr(0, eq));
    try {
      base.set(key, view.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return base;
}

StudyConfig load_config_file(const std::filesystem::path& path, StudyConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return load_config(in, std::move(base));
}

}  // namespace polymer
