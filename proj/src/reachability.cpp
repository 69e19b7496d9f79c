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

#include "pedcrit/reachability.hpp"

#include "pedcrit/error.hpp"

#include <algorithm>
#include <cmath>

namespace pedcrit
{

namespace
{

// Max arc spacing between consecutive footprints of a swept corridor.
constexpr double kCorridorSpacing = 0.25;

struct ArcPose
{
  OrientedRect rect;
  bool clamped;
};

ArcPose footprint_at(const AvState & av, const Polyline & path, double s)
{
  const bool clamped = s > path.length();
  const auto pose = point_at_arclength(path, std::min(s, path.length()));
  return {{pose.point, 0.5 * av.footprint_length, 0.5 * av.footprint_width, pose.heading}, clamped};
}

bool disc_hits(const Disc & d, const Occupancy & other)
{
  return std::visit(
    [&d](const auto & o) -> bool {
      using T = std::decay_t<decltype(o)>;
      if constexpr (std::is_same_v<T, Disc>) {
        return disc_disc_intersects(d, o);
      } else if constexpr (std::is_same_v<T, OrientedRect>) {
        return disc_rect_intersects(d, o);
      } else {
        return std::any_of(o.rects.begin(), o.rects.end(), [&d](const OrientedRect & r) {
          return disc_rect_intersects(d, r);
        });
      }
    },
    other);
}

}  // namespace

void ReachabilityConfig::validate() const
{
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ConfigError("dt must be > 0");
  }
  if (!(horizon >= dt) || !std::isfinite(horizon)) {
    throw ConfigError("horizon must be >= dt");
  }
  if (!(a_max >= 0.0) || !std::isfinite(a_max)) {
    throw ConfigError("a_max must be >= 0");
  }
}

std::vector<double> ReachabilityConfig::tau_grid() const
{
  validate();
  // tolerate horizons that are an exact multiple of dt up to rounding
  const auto steps = static_cast<std::size_t>(std::floor(horizon / dt + 1e-9));
  // k / (1/dt) when 1/dt is integral keeps decimal steps exact (17 * 0.1 != 1.7)
  const double per_second = std::round(1.0 / dt);
  const bool integral = std::abs(per_second * dt - 1.0) < 1e-12;
  std::vector<double> taus;
  taus.reserve(steps);
  for (std::size_t k = 1; k <= steps; ++k) {
    const auto kd = static_cast<double>(k);
    taus.push_back(integral ? kd / per_second : kd * dt);
  }
  return taus;
}

bool intersects(const Occupancy & a, const Occupancy & b)
{
  if (const auto * d = std::get_if<Disc>(&a)) {
    return disc_hits(*d, b);
  }
  if (const auto * d = std::get_if<Disc>(&b)) {
    return disc_hits(*d, a);
  }
  throw DomainError("intersection test needs at least one disc occupancy");
}

ReachableSet pedestrian_reachable_set(const PedestrianState & ped, const ReachabilityConfig & cfg)
{
  ReachableSet set{ped.id, {}, false};
  const double speed = ped.velocity.norm();
  for (const double tau : cfg.tau_grid()) {
    const double radius = ped.body_radius + 0.5 * cfg.a_max * tau * tau;
    if (!cfg.av_swept) {
      set.samples.push_back({tau, Disc{ped.position + ped.velocity * tau, radius}});
      continue;
    }
    // hull of the discs over (tau - dt, tau]
    const double mid = tau - 0.5 * cfg.dt;
    set.samples.push_back(
      {tau, Disc{ped.position + ped.velocity * mid, radius + 0.5 * cfg.dt * speed}});
  }
  return set;
}

ReachableSet av_reachable_set(
  const AvState & av, const Polyline & path, const ReachabilityConfig & cfg)
{
  if (!(av.arc_offset >= 0.0 && av.arc_offset <= path.length())) {
    throw OutOfPathError(
      "AV arc offset " + std::to_string(av.arc_offset) + " outside path of length " +
      std::to_string(path.length()));
  }
  ReachableSet set{"av", {}, false};
  for (const double tau : cfg.tau_grid()) {
    const double s_end = av.arc_offset + av.speed * tau;
    if (!cfg.av_swept) {
      const auto fp = footprint_at(av, path, s_end);
      set.clamped = set.clamped || fp.clamped;
      set.samples.push_back({tau, fp.rect});
      continue;
    }
    const double s_begin = av.arc_offset + av.speed * (tau - cfg.dt);
    const double span = s_end - s_begin;
    const auto pieces = static_cast<std::size_t>(std::ceil(span / kCorridorSpacing));
    Corridor corridor;
    for (std::size_t k = 0; k <= pieces; ++k) {
      const double s =
        pieces == 0 ? s_end : s_begin + span * static_cast<double>(k) / static_cast<double>(pieces);
      const auto fp = footprint_at(av, path, s);
      set.clamped = set.clamped || fp.clamped;
      corridor.rects.push_back(fp.rect);
    }
    // the pose arriving at a vertex still has the incoming heading
    const auto & cum = path.cumulative_lengths();
    const auto & pts = path.points();
    for (std::size_t v = 1; v + 1 < pts.size(); ++v) {
      if (cum[v] > s_begin && cum[v] < std::min(s_end, path.length())) {
        const Vec2 dir = pts[v] - pts[v - 1];
        corridor.rects.push_back(
          {pts[v], 0.5 * av.footprint_length, 0.5 * av.footprint_width, std::atan2(dir.y(), dir.x())});
      }
    }
    set.samples.push_back({tau, std::move(corridor)});
  }
  return set;
}

TtcResult compute_ttc_rsb(const ReachableSet & av_set, const ReachableSet & ped_set)
{
  if (av_set.samples.size() != ped_set.samples.size()) {
    throw ConfigError("reachable sets use different tau grids");
  }
  TtcResult result{ped_set.agent_id, kInfinity, std::nullopt};
  for (std::size_t k = 0; k < av_set.samples.size(); ++k) {
    const auto & a = av_set.samples[k];
    const auto & p = ped_set.samples[k];
    if (a.tau != p.tau) {
      throw ConfigError("reachable sets use different tau grids");
    }
    if (intersects(a.shape, p.shape)) {
      result.ttc = a.tau;
      result.first_hit_tau = a.tau;
      break;
    }
  }
  return result;
}

std::vector<TtcResult> annotate_frame_ttc(const SceneFrame & frame, const ReachabilityConfig & cfg)
{
  cfg.validate();
  if (frame.pedestrians.empty()) {
    return {};
  }
  const auto path = frame_path(frame);
  const auto av_set = av_reachable_set(frame.av, path, cfg);
  std::vector<TtcResult> results;
  results.reserve(frame.pedestrians.size());
  for (const auto & ped : frame.pedestrians) {
    results.push_back(compute_ttc_rsb(av_set, pedestrian_reachable_set(ped, cfg)));
  }
  std::sort(results.begin(), results.end(), [](const auto & a, const auto & b) {
    return a.pedestrian_id < b.pedestrian_id;
  });
  return results;
}

}  // namespace pedcrit
