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

#include "pedcrit/config.hpp"

#include "pedcrit/error.hpp"
#include "pedcrit/scene.hpp"

#include <set>

namespace pedcrit
{

namespace
{

using json = nlohmann::json;

template <typename T>
void read_key(const json & j, const char * key, std::optional<T> & out)
{
  const auto it = j.find(key);
  if (it == j.end()) {
    return;
  }
  try {
    out = it->get<T>();
  } catch (const json::exception &) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
  }
}

template <typename T>
void merge(
  std::map<std::string, ConfigSource> & provenance, const char * key, T & target,
  const std::optional<T> & file, const std::optional<T> & flag)
{
  if (flag) {
    target = *flag;
    provenance[key] = ConfigSource::kFlag;
  } else if (file) {
    target = *file;
    provenance[key] = ConfigSource::kFile;
  } else {
    provenance[key] = ConfigSource::kDefault;
  }
}

}  // namespace

std::string_view to_string(ConfigSource source)
{
  switch (source) {
    case ConfigSource::kDefault:
      return "default";
    case ConfigSource::kFile:
      return "file";
    case ConfigSource::kFlag:
      return "flag";
  }
  return "?";
}

ConfigOverrides parse_config_text(std::string_view text)
{
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error & e) {
    throw ConfigError(std::string("config file: ") + e.what());
  }
  if (!j.is_object()) {
    throw ConfigError("config file must hold a JSON object");
  }
  static const std::set<std::string> known{
    "dt",      "horizon",      "a_max", "av_swept", "d_max", "ttc_max", "ttc_crit",
    "d_crit",  "mode",         "distance_ref", "alpha", "gamma", "eps", "iou_threshold"};
  for (const auto & [key, value] : j.items()) {
    if (known.count(key) == 0) {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  ConfigOverrides o;
  read_key(j, "dt", o.dt);
  read_key(j, "horizon", o.horizon);
  read_key(j, "a_max", o.a_max);
  read_key(j, "av_swept", o.av_swept);
  read_key(j, "d_max", o.d_max);
  read_key(j, "ttc_max", o.ttc_max);
  read_key(j, "ttc_crit", o.ttc_crit);
  read_key(j, "d_crit", o.d_crit);
  read_key(j, "mode", o.mode);
  read_key(j, "distance_ref", o.distance_ref);
  read_key(j, "alpha", o.alpha);
  read_key(j, "gamma", o.gamma);
  read_key(j, "eps", o.eps);
  read_key(j, "iou_threshold", o.iou_threshold);
  return o;
}

ConfigOverrides load_config_file(const std::filesystem::path & path)
{
  try {
    return parse_config_text(read_text_file(path));
  } catch (const ConfigError &) {
    throw;
  } catch (const Error & e) {
    throw ConfigError(e.what());
  }
}

RunConfig resolve_config(const ConfigOverrides & file, const ConfigOverrides & flags)
{
  RunConfig c;
  auto & p = c.provenance;
  merge(p, "dt", c.reach.dt, file.dt, flags.dt);
  merge(p, "a_max", c.reach.a_max, file.a_max, flags.a_max);
  merge(p, "av_swept", c.reach.av_swept, file.av_swept, flags.av_swept);
  merge(p, "d_max", c.crit.d_max, file.d_max, flags.d_max);
  merge(p, "ttc_max", c.crit.ttc_max, file.ttc_max, flags.ttc_max);
  merge(p, "ttc_crit", c.crit.ttc_crit, file.ttc_crit, flags.ttc_crit);
  merge(p, "d_crit", c.crit.d_crit, file.d_crit, flags.d_crit);
  c.reach.horizon = c.crit.ttc_max;
  merge(p, "horizon", c.reach.horizon, file.horizon, flags.horizon);

  std::string mode{to_string(c.crit.mode)};
  merge(p, "mode", mode, file.mode, flags.mode);
  const auto parsed_mode = parse_mode(mode);
  if (!parsed_mode) {
    throw ConfigError("unknown mode '" + mode + "'");
  }
  c.crit.mode = *parsed_mode;

  std::string ref{to_string(c.crit.distance_ref)};
  merge(p, "distance_ref", ref, file.distance_ref, flags.distance_ref);
  const auto parsed_ref = parse_distance_ref(ref);
  if (!parsed_ref) {
    throw ConfigError("unknown distance_ref '" + ref + "'");
  }
  c.crit.distance_ref = *parsed_ref;

  merge(p, "alpha", c.loss.alpha, file.alpha, flags.alpha);
  merge(p, "gamma", c.loss.gamma, file.gamma, flags.gamma);
  merge(p, "eps", c.loss.eps, file.eps, flags.eps);
  merge(p, "iou_threshold", c.eval.iou_threshold, file.iou_threshold, flags.iou_threshold);

  c.reach.validate();
  c.crit.validate();
  try {
    c.loss.validate();
  } catch (const DomainError & e) {
    throw ConfigError(e.what());
  }
  if (!(c.eval.iou_threshold > 0.0 && c.eval.iou_threshold <= 1.0)) {
    throw ConfigError("iou_threshold must lie in (0, 1]");
  }
  return c;
}

nlohmann::ordered_json RunConfig::to_json() const
{
  nlohmann::ordered_json j;
  j["dt"] = reach.dt;
  j["horizon"] = reach.horizon;
  j["a_max"] = reach.a_max;
  j["av_swept"] = reach.av_swept;
  j["d_max"] = crit.d_max;
  j["ttc_max"] = crit.ttc_max;
  j["ttc_crit"] = crit.ttc_crit;
  j["d_crit"] = crit.d_crit;
  j["mode"] = std::string(to_string(crit.mode));
  j["distance_ref"] = std::string(to_string(crit.distance_ref));
  j["alpha"] = loss.alpha;
  j["gamma"] = loss.gamma;
  j["eps"] = loss.eps;
  j["iou_threshold"] = eval.iou_threshold;
  return j;
}

std::string RunConfig::explain() const
{
  std::string out;
  const auto j = to_json();
  for (const auto & [key, value] : j.items()) {
    const auto it = provenance.find(key);
    const auto source = it == provenance.end() ? ConfigSource::kDefault : it->second;
    out += key + " = " + value.dump() + " (" + std::string(to_string(source)) + ")\n";
  }
  return out;
}

}  // namespace pedcrit
