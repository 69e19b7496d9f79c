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

#ifndef PEDCRIT__SCENARIO_HPP_
#define PEDCRIT__SCENARIO_HPP_

#include "pedcrit/scene.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pedcrit
{

/// 30 mph, m/s.
inline constexpr double kUrbanSpeedLimit = 13.4;

enum class ScenarioTemplate { kCrossing, kStaticNear, kFarCrowd, kRandom };

std::string_view to_string(ScenarioTemplate t);
std::optional<ScenarioTemplate> parse_template(std::string_view s);

struct ScenarioSpec
{
  ScenarioTemplate kind = ScenarioTemplate::kRandom;
  int n_pedestrians = 4;
  double av_speed = 10.0;
  bool urban_bound = true;
  std::uint64_t seed = 0;
  int n_frames = 1;
  double frame_interval = 0.5;
  /// Bend the successor centerline (90 degree left turn). Straight otherwise.
  bool curved_road = false;

  void validate() const;
};

/// Per-instance analytic ground truth.
struct PedestrianTruth
{
  std::string frame_id;
  std::string pedestrian_id;
  /// Earliest contact between the body disc and the footprint when both keep
  /// their current velocity on a straight road; +inf if they never touch.
  /// nullopt on curved roads.
  std::optional<double> straight_line_ttc;
  /// Euclidean distance from the pedestrian center to the footprint.
  double footprint_distance;
};

/// Population-wide bounds that the generator guarantees.
struct ScenarioBounds
{
  double av_speed_max;
  double ped_speed_max;
  double body_radius_max;
  double min_clearance;
  bool straight_road;
};

struct GeneratedScene
{
  std::vector<SceneFrame> frames;
  std::vector<PedestrianTruth> truth;
  ScenarioBounds bounds;
};

/// Deterministic in the spec (including the seed). Frames are valid scene
/// frames with timestamps k * frame_interval.
GeneratedScene generate(const ScenarioSpec & spec);

/// Earliest t >= 0 at which a disc of `radius` moving from `rel_position`
/// with `rel_velocity` touches the axis-aligned box [-hl, hl] x [-hw, hw].
double straight_line_contact_time(
  const Vec2 & rel_position, const Vec2 & rel_velocity, double radius, double half_length,
  double half_width);

}  // namespace pedcrit

#endif  // PEDCRIT__SCENARIO_HPP_
