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

#ifndef PEDCRIT__CRITICALITY_HPP_
#define PEDCRIT__CRITICALITY_HPP_

#include "pedcrit/reachability.hpp"
#include "pedcrit/scene.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pedcrit
{

enum class CriticalityMode { kComposed, kCollisionOnly, kDistanceOnly };

/// Reference on the AV used when measuring pedestrian distance.
enum class DistanceReference { kFootprint, kCenter };

enum class Zone { kC, kPC, kNC };

struct CriticalityConfig
{
  double d_max = 40.0;
  double ttc_max = 6.0;
  double ttc_crit = 1.7;
  double d_crit = 20.0;
  CriticalityMode mode = CriticalityMode::kComposed;
  DistanceReference distance_ref = DistanceReference::kFootprint;

  void validate() const;
};

struct CriticalityRecord
{
  std::string pedestrian_id;
  double ttc = kInfinity;
  double distance = 0.0;
  double kappa_c = 0.0;
  double kappa_d = 0.0;
  double kappa = 0.0;
  Zone zone = Zone::kNC;
};

std::string_view to_string(CriticalityMode mode);
std::string_view to_string(DistanceReference ref);
std::string_view to_string(Zone zone);
std::optional<CriticalityMode> parse_mode(std::string_view s);
std::optional<DistanceReference> parse_distance_ref(std::string_view s);
std::optional<Zone> parse_zone(std::string_view s);

/// Downward parabola through (0, 1) and (d_max, 0), clamped to [0, 1].
double distance_criticality(double d, const CriticalityConfig & cfg);

/// Same parabola over time with ttc_max; +inf maps to 0.
double collision_criticality(double ttc, const CriticalityConfig & cfg);

/// composed: (2 kappa_c + kappa_d) / 3.
double compose_kappa(double kappa_c, double kappa_d, CriticalityMode mode);

/// Boundary ties resolve toward the more critical zone.
Zone assign_zone(double ttc, double d, const CriticalityConfig & cfg);

double pedestrian_distance(
  const PedestrianState & ped, const AvState & av, DistanceReference ref);

/// One record per pedestrian, sorted by pedestrian id.
std::vector<CriticalityRecord> annotate_frame(
  const SceneFrame & frame, const ReachabilityConfig & rcfg, const CriticalityConfig & ccfg);

}  // namespace pedcrit

#endif  // PEDCRIT__CRITICALITY_HPP_
