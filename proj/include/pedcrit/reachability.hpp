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

#ifndef PEDCRIT__REACHABILITY_HPP_
#define PEDCRIT__REACHABILITY_HPP_

#include "pedcrit/geometry.hpp"
#include "pedcrit/scene.hpp"

#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace pedcrit
{

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct ReachabilityConfig
{
  double dt = 0.1;
  double horizon = 6.0;
  /// Bound on the pedestrian acceleration norm.
  double a_max = 2.0;
  /// Enclose each step interval (tau - dt, tau]: the AV occupies the footprint
  /// swept over it and the pedestrian the hull of its discs. Off, both sets
  /// are taken at the instant tau only, and contacts shorter than dt can fall
  /// between grid points.
  bool av_swept = true;

  /// Throws ConfigError.
  void validate() const;
  /// dt, 2 dt, ..., up to and including the horizon.
  std::vector<double> tau_grid() const;
};

/// Union of footprints along the corridor; used by the swept AV variant.
struct Corridor
{
  std::vector<OrientedRect> rects;
};

using Occupancy = std::variant<Disc, OrientedRect, Corridor>;

struct ReachSample
{
  double tau;
  Occupancy shape;
};

struct ReachableSet
{
  std::string agent_id;
  std::vector<ReachSample> samples;
  /// AV only: some sample was held at the end of the map.
  bool clamped = false;
};

struct TtcResult
{
  std::string pedestrian_id;
  double ttc = kInfinity;
  std::optional<double> first_hit_tau;
};

bool intersects(const Occupancy & a, const Occupancy & b);

/// Disc(position + velocity * tau, body_radius + a_max * tau^2 / 2) per grid tau:
/// the exact position reach of |acceleration| <= a_max from a fixed initial
/// velocity, inflated by the body radius. With `av_swept` the disc is widened
/// to cover every instant of (tau - dt, tau].
ReachableSet pedestrian_reachable_set(const PedestrianState & ped, const ReachabilityConfig & cfg);

/// Lane-bound constant-velocity footprint. Beyond the path end the pose is held
/// at the last point and `clamped` is set. Throws OutOfPathError when the
/// arc offset is outside the path.
ReachableSet av_reachable_set(
  const AvState & av, const Polyline & path, const ReachabilityConfig & cfg);

/// Smallest grid tau at which the two sets intersect. Throws ConfigError when
/// the grids differ.
TtcResult compute_ttc_rsb(const ReachableSet & av_set, const ReachableSet & ped_set);

/// One result per pedestrian, sorted by pedestrian id.
std::vector<TtcResult> annotate_frame_ttc(const SceneFrame & frame, const ReachabilityConfig & cfg);

}  // namespace pedcrit

#endif  // PEDCRIT__REACHABILITY_HPP_
