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

#include "pedcrit/oracle.hpp"

#include "pedcrit/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace pedcrit
{

void SampledTrajectoryConfig::validate(double reachability_dt) const
{
  if (n_directions <= 0 || n_magnitudes <= 0) {
    throw ConfigError("sample counts must be > 0");
  }
  if (!(dt_fine > 0.0 && dt_fine <= reachability_dt)) {
    throw ConfigError("dt_fine must lie in (0, reachability dt]");
  }
}

double sampled_ttc(
  const AvState & av, const Polyline & path, const PedestrianState & ped, double a_max,
  double horizon, const SampledTrajectoryConfig & cfg)
{
  std::mt19937_64 rng(cfg.seed);
  const double sector = 2.0 * std::numbers::pi / cfg.n_directions;
  const double phase = std::uniform_real_distribution<double>(0.0, sector)(rng);

  std::vector<Vec2> accels{Vec2::Zero()};
  if (a_max > 0.0) {
    for (int m = 1; m <= cfg.n_magnitudes; ++m) {
      const double mag = a_max * m / cfg.n_magnitudes;
      for (int k = 0; k < cfg.n_directions; ++k) {
        const double theta = phase + sector * k;
        accels.emplace_back(mag * std::cos(theta), mag * std::sin(theta));
      }
    }
  }

  const auto steps = static_cast<long>(std::floor(horizon / cfg.dt_fine + 1e-9));
  for (long k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * cfg.dt_fine;
    const double s = std::min(av.arc_offset + av.speed * t, path.length());
    const auto pose = point_at_arclength(path, s);
    const OrientedRect footprint{
      pose.point, 0.5 * av.footprint_length, 0.5 * av.footprint_width, pose.heading};
    const Vec2 drift = ped.position + ped.velocity * t;
    for (const auto & a : accels) {
      const Vec2 pos = drift + 0.5 * t * t * a;
      if (distance_point_to_rect(pos, footprint) <= ped.body_radius) {
        return t;
      }
    }
  }
  return kInfinity;
}

double rect_distance_sampling(const Vec2 & p, const OrientedRect & rect, double spacing)
{
  const auto nx = static_cast<long>(std::ceil(2.0 * rect.half_length / spacing));
  const auto ny = static_cast<long>(std::ceil(2.0 * rect.half_width / spacing));
  const Vec2 ax(std::cos(rect.heading), std::sin(rect.heading));
  const Vec2 ay(-ax.y(), ax.x());
  double best = std::numeric_limits<double>::infinity();
  for (long i = 0; i <= nx; ++i) {
    const double lx = -rect.half_length + 2.0 * rect.half_length * static_cast<double>(i) / nx;
    for (long j = 0; j <= ny; ++j) {
      const double ly = -rect.half_width + 2.0 * rect.half_width * static_cast<double>(j) / ny;
      const Vec2 q = rect.center + lx * ax + ly * ay;
      best = std::min(best, (q - p).squaredNorm());
    }
  }
  return std::sqrt(best);
}

std::vector<AuditRow> audit_frame(
  const SceneFrame & frame, const ReachabilityConfig & rcfg, const SampledTrajectoryConfig & scfg)
{
  scfg.validate(rcfg.dt);
  const auto ttcs = annotate_frame_ttc(frame, rcfg);
  if (ttcs.empty()) {
    return {};
  }
  const auto path = frame_path(frame);
  std::vector<AuditRow> rows;
  rows.reserve(ttcs.size());
  for (const auto & t : ttcs) {
    const auto ped = std::find_if(frame.pedestrians.begin(), frame.pedestrians.end(), [&t](const auto & p) {
      return p.id == t.pedestrian_id;
    });
    const double sampled = sampled_ttc(frame.av, path, *ped, rcfg.a_max, rcfg.horizon, scfg);
    AuditRow row{frame.frame_id, t.pedestrian_id, t.ttc, sampled, 0.0, true};
    if (std::isinf(sampled)) {
      row.margin = kInfinity;
    } else {
      row.margin = sampled + rcfg.dt - t.ttc;
      row.sound = t.ttc <= sampled + rcfg.dt;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace pedcrit
