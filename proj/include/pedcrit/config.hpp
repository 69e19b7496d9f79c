// Copyright 2026 The pedcrit Authors
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

#ifndef PEDCRIT__CONFIG_HPP_
#define PEDCRIT__CONFIG_HPP_

#include "pedcrit/criticality.hpp"
#include "pedcrit/evaluation.hpp"
#include "pedcrit/loss.hpp"
#include "pedcrit/reachability.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace pedcrit
{

enum class ConfigSource { kDefault, kFile, kFlag };

std::string_view to_string(ConfigSource source);

/// Partial settings from one source. Keys match the config-file keys.
struct ConfigOverrides
{
  std::optional<double> dt;
  std::optional<double> horizon;
  std::optional<double> a_max;
  std::optional<bool> av_swept;
  std::optional<double> d_max;
  std::optional<double> ttc_max;
  std::optional<double> ttc_crit;
  std::optional<double> d_crit;
  std::optional<std::string> mode;
  std::optional<std::string> distance_ref;
  std::optional<double> alpha;
  std::optional<double> gamma;
  std::optional<double> eps;
  std::optional<double> iou_threshold;
};

/// Fully resolved settings; flag > file > default.
struct RunConfig
{
  ReachabilityConfig reach;
  CriticalityConfig crit;
  LossParams loss;
  EvalConfig eval;
  std::map<std::string, ConfigSource> provenance;

  /// Stable key order; embedded in every output file.
  nlohmann::ordered_json to_json() const;
  /// One "key = value (source)" line per key.
  std::string explain() const;
};

/// Reads a JSON object of config keys. Unknown keys throw ConfigError.
ConfigOverrides parse_config_text(std::string_view text);
ConfigOverrides load_config_file(const std::filesystem::path & path);

/// Merges and validates. The horizon follows ttc_max unless set explicitly.
/// Throws ConfigError.
RunConfig resolve_config(const ConfigOverrides & file, const ConfigOverrides & flags);

}  // namespace pedcrit

#endif  // PEDCRIT__CONFIG_HPP_
