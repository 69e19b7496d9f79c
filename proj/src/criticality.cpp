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

#include "pedcrit/criticality.hpp"

#include "pedcrit/error.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace pedcrit
{

namespace
{

double parabola(double x, double x_max)
{
  return std::clamp(-(x * x) / (x_max * x_max) + 1.0, 0.0, 1.0);
}

void require_unit(double v, const char * name)
{
  if (!(v >= 0.0 && v <= 1.0)) {
    throw DomainError(std::string(name) + " must lie in [0, 1], got " + std::to_string(v));
  }
}

}  // namespace

void CriticalityConfig::validate() const
{
  if (!(d_max > 0.0 && ttc_max > 0.0 && ttc_crit > 0.0 && d_crit > 0.0)) {
    throw ConfigError("criticality thresholds must be > 0");
  }
  if (!(d_crit <= d_max)) {
    throw ConfigError("d_crit must be <= d_max");
  }
  if (!(ttc_crit <= ttc_max)) {
    throw ConfigError("ttc_crit must be <= ttc_max");
  }
}

std::string_view to_string(CriticalityMode mode)
{
  switch (mode) {
    case CriticalityMode::kComposed:
      return "composed";
    case CriticalityMode::kCollisionOnly:
      return "collision_only";
    case CriticalityMode::kDistanceOnly:
      return "distance_only";
  }
  return "?";
}

std::string_view to_string(DistanceReference ref)
{
  return ref == DistanceReference::kFootprint ? "footprint" : "center";
}

std::string_view to_string(Zone zone)
{
  switch (zone) {
    case Zone::kC:
      return "C";
    case Zone::kPC:
      return "PC";
    case Zone::kNC:
      return "NC";
  }
  return "?";
}

std::optional<CriticalityMode> parse_mode(std::string_view s)
{
  for (auto m : {CriticalityMode::kComposed, CriticalityMode::kCollisionOnly,
                 CriticalityMode::kDistanceOnly}) {
    if (s == to_string(m)) {
      return m;
    }
  }
  return std::nullopt;
}

std::optional<DistanceReference> parse_distance_ref(std::string_view s)
{
  for (auto r : {DistanceReference::kFootprint, DistanceReference::kCenter}) {
    if (s == to_string(r)) {
      return r;
    }
  }
  return std::nullopt;
}

std::optional<Zone> parse_zone(std::string_view s)
{
  for (auto z : {Zone::kC, Zone::kPC, Zone::kNC}) {
    if (s == to_string(z)) {
      return z;
    }
  }
  return std::nullopt;
}

double distance_criticality(double d, const CriticalityConfig & cfg)
{
  if (!(d >= 0.0)) {
    throw DomainError("distance must be >= 0, got " + std::to_string(d));
  }
  return parabola(d, cfg.d_max);
}

double collision_criticality(double ttc, const CriticalityConfig & cfg)
{
  if (!(ttc >= 0.0)) {
    throw DomainError("ttc must be >= 0, got " + std::to_string(ttc));
  }
  if (std::isinf(ttc)) {
    return 0.0;
  }
  return parabola(ttc, cfg.ttc_max);
}

double compose_kappa(double kappa_c, double kappa_d, CriticalityMode mode)
{
  require_unit(kappa_c, "kappa_c");
  require_unit(kappa_d, "kappa_d");
  switch (mode) {
    case CriticalityMode::kCollisionOnly:
      return kappa_c;
    case CriticalityMode::kDistanceOnly:
      return kappa_d;
    case CriticalityMode::kComposed:
      break;
  }
  // fixed point of the blend, kept exact
  if (kappa_c == kappa_d) {
    return kappa_c;
  }
  return std::clamp((2.0 * kappa_c + kappa_d) / 3.0, 0.0, 1.0);
}

Zone assign_zone(double ttc, double d, const CriticalityConfig & cfg)
{
  if (d > cfg.d_crit) {
    return Zone::kNC;
  }
  return ttc <= cfg.ttc_crit ? Zone::kC : Zone::kPC;
}

double pedestrian_distance(const PedestrianState & ped, const AvState & av, DistanceReference ref)
{
  if (ref == DistanceReference::kCenter) {
    return (ped.position - av.position).norm();
  }
  return distance_point_to_rect(ped.position, av_footprint(av));
}

std::vector<CriticalityRecord> annotate_frame(
  const SceneFrame & frame, const ReachabilityConfig & rcfg, const CriticalityConfig & ccfg)
{
  ccfg.validate();
  const auto ttcs = annotate_frame_ttc(frame, rcfg);
  std::unordered_map<std::string, const PedestrianState *> by_id;
  for (const auto & p : frame.pedestrians) {
    by_id.emplace(p.id, &p);
  }
  std::vector<CriticalityRecord> records;
  records.reserve(ttcs.size());
  for (const auto & t : ttcs) {
    const auto & ped = *by_id.at(t.pedestrian_id);
    CriticalityRecord r;
    r.pedestrian_id = t.pedestrian_id;
    r.ttc = t.ttc;
    r.distance = pedestrian_distance(ped, frame.av, ccfg.distance_ref);
    r.kappa_c = collision_criticality(r.ttc, ccfg);
    r.kappa_d = distance_criticality(r.distance, ccfg);
    r.kappa = compose_kappa(r.kappa_c, r.kappa_d, ccfg.mode);
    r.zone = assign_zone(r.ttc, r.distance, ccfg);
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace pedcrit
