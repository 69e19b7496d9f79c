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

#ifndef PEDCRIT__ORACLE_HPP_
#define PEDCRIT__ORACLE_HPP_

#include "pedcrit/geometry.hpp"
#include "pedcrit/reachability.hpp"
#include "pedcrit/scene.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pedcrit
{

/// Brute-force verifiers that share no code path with the reachable-set
/// computation beyond the polyline and distance primitives.
struct SampledTrajectoryConfig
{
  int n_directions = 256;
  int n_magnitudes = 8;
  double dt_fine = 0.01;
  std::uint64_t seed = 0;

  void validate(double reachability_dt) const;
};

/// Earliest fine-grid time at which some sampled constant-acceleration
/// trajectory (|a| <= a_max, plus a = 0) brings the pedestrian body disc into
/// contact with the constant-velocity AV footprint; +inf if none within the
/// horizon. Directions carry a seed-dependent phase.
double sampled_ttc(
  const AvState & av, const Polyline & path, const PedestrianState & ped, double a_max,
  double horizon, const SampledTrajectoryConfig & cfg);

/// Minimum distance from `p` to a grid of points covering the rectangle with
/// spacing at most `spacing`. Over-estimates the true distance by at most the
/// grid cell diagonal.
double rect_distance_sampling(const Vec2 & p, const OrientedRect & rect, double spacing);

struct AuditRow
{
  std::string frame_id;
  std::string pedestrian_id;
  double ttc_rsb;
  double sampled_ttc;
  /// sampled_ttc + dt - ttc_rsb; negative means the soundness check failed.
  double margin;
  bool sound;
};

/// Soundness audit: ttc_rsb <= sampled_ttc + dt for each pedestrian, sorted by id.
std::vector<AuditRow> audit_frame(
  const SceneFrame & frame, const ReachabilityConfig & rcfg, const SampledTrajectoryConfig & scfg);

}  // namespace pedcrit

#endif  // PEDCRIT__ORACLE_HPP_
