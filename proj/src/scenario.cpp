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

#include "pedcrit/scenario.hpp"

#include "pedcrit/criticality.hpp"
#include "pedcrit/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

namespace pedcrit
{

namespace
{

constexpr double kFootprintLength = 4.5;
constexpr double kFootprintWidth = 1.9;
constexpr double kCameraHeight = 1.5;
constexpr double kStartArc = 20.0;
constexpr double kMinClearance = 0.5;
constexpr double kPedSpeedMax = 2.5;
constexpr double kBodyRadiusMin = 0.25;
constexpr double kBodyRadiusMax = 0.35;
constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Road
{
  Centerline current;
  Centerline successor;
};

Road make_road(bool curved)
{
  Road road;
  road.current = {{Vec2(-kStartArc, 0.0), Vec2(60.0, 0.0)}, CenterlineRole::kCurrent, 0};
  road.successor.role = CenterlineRole::kSuccessor;
  road.successor.order_index = 1;
  if (!curved) {
    road.successor.points = {Vec2(60.0, 0.0), Vec2(200.0, 0.0)};
    return road;
  }
  // quarter circle of radius 30 to the left, then straight north
  constexpr double radius = 30.0;
  constexpr int segments = 48;
  for (int i = 0; i <= segments; ++i) {
    const double a = 0.5 * std::numbers::pi * i / segments;
    road.successor.points.emplace_back(60.0 + radius * std::sin(a), radius * (1.0 - std::cos(a)));
  }
  road.successor.points.emplace_back(60.0 + radius, radius + 100.0);
  return road;
}

CameraCalibration front_camera(const Vec2 & position, double heading)
{
  CameraCalibration cam;
  cam.intrinsics << 1266.0, 0.0, 800.0, 0.0, 1266.0, 450.0, 0.0, 0.0, 1.0;
  cam.image_width = 1600;
  cam.image_height = 900;
  const double c = std::cos(heading);
  const double s = std::sin(heading);
  Eigen::Matrix3d r;
  r << s, -c, 0.0,  // right
    0.0, 0.0, -1.0,  // down
    c, s, 0.0;       // forward
  Eigen::Isometry3d t = Eigen::Isometry3d::Identity();
  t.linear() = r;
  t.translation() = -r * Vec3(position.x(), position.y(), kCameraHeight);
  cam.world_to_camera = t;
  return cam;
}

std::string pedestrian_id(int i)
{
  char buf[16];
  std::snprintf(buf, sizeof(buf), "ped-%03d", i);
  return buf;
}

std::string frame_id(const ScenarioSpec & spec, int k)
{
  char buf[64];
  std::snprintf(
    buf, sizeof(buf), "%s-%llu-%03d", std::string(to_string(spec.kind)).c_str(),
    static_cast<unsigned long long>(spec.seed), k);
  return buf;
}

double ray_box_entry(const Vec2 & q, const Vec2 & u, double ex, double ey)
{
  double t_enter = -kInfinity;
  double t_exit = kInfinity;
  const std::array<double, 2> ext{ex, ey};
  for (int i = 0; i < 2; ++i) {
    if (u[i] == 0.0) {
      if (std::abs(q[i]) > ext[static_cast<std::size_t>(i)]) {
        return kInfinity;
      }
      continue;
    }
    double t0 = (-ext[static_cast<std::size_t>(i)] - q[i]) / u[i];
    double t1 = (ext[static_cast<std::size_t>(i)] - q[i]) / u[i];
    if (t0 > t1) {
      std::swap(t0, t1);
    }
    t_enter = std::max(t_enter, t0);
    t_exit = std::min(t_exit, t1);
  }
  if (t_enter > t_exit || t_exit < 0.0) {
    return kInfinity;
  }
  return std::max(t_enter, 0.0);
}

double ray_circle_entry(const Vec2 & q, const Vec2 & u, const Vec2 & c, double r)
{
  const Vec2 d = q - c;
  const double a = u.squaredNorm();
  const double b = u.dot(d);
  const double cc = d.squaredNorm() - r * r;
  if (cc <= 0.0) {
    return 0.0;
  }
  if (a == 0.0) {
    return kInfinity;
  }
  const double disc = b * b - a * cc;
  if (disc < 0.0) {
    return kInfinity;
  }
  const double t = (-b - std::sqrt(disc)) / a;
  return t >= 0.0 ? t : kInfinity;
}

}  // namespace

std::string_view to_string(ScenarioTemplate t)
{
  switch (t) {
    case ScenarioTemplate::kCrossing:
      return "crossing";
    case ScenarioTemplate::kStaticNear:
      return "static_near";
    case ScenarioTemplate::kFarCrowd:
      return "far_crowd";
    case ScenarioTemplate::kRandom:
      return "random";
  }
  return "?";
}

std::optional<ScenarioTemplate> parse_template(std::string_view s)
{
  for (auto t : {ScenarioTemplate::kCrossing, ScenarioTemplate::kStaticNear,
                 ScenarioTemplate::kFarCrowd, ScenarioTemplate::kRandom}) {
    if (s == to_string(t)) {
      return t;
    }
  }
  return std::nullopt;
}

void ScenarioSpec::validate() const
{
  if (n_pedestrians < 0 || n_pedestrians > 999) {
    throw DomainError("n_pedestrians must lie in [0, 999]");
  }
  if (!(av_speed >= 0.0)) {
    throw DomainError("av_speed must be >= 0");
  }
  if (urban_bound && av_speed > kUrbanSpeedLimit) {
    throw DomainError("av_speed exceeds the urban speed limit");
  }
  if (kind == ScenarioTemplate::kCrossing && !(av_speed > 0.0)) {
    throw DomainError("crossing scenarios need a moving AV");
  }
  if (n_frames < 1 || !(frame_interval > 0.0)) {
    throw DomainError("need n_frames >= 1 and frame_interval > 0");
  }
}

double straight_line_contact_time(
  const Vec2 & rel_position, const Vec2 & rel_velocity, double radius, double half_length,
  double half_width)
{
  double best = std::min(
    ray_box_entry(rel_position, rel_velocity, half_length + radius, half_width),
    ray_box_entry(rel_position, rel_velocity, half_length, half_width + radius));
  for (const double sx : {-1.0, 1.0}) {
    for (const double sy : {-1.0, 1.0}) {
      best = std::min(
        best, ray_circle_entry(
                rel_position, rel_velocity, Vec2(sx * half_length, sy * half_width), radius));
    }
  }
  return best;
}

GeneratedScene generate(const ScenarioSpec & spec)
{
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  auto uniform = [&rng](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };

  const Road road = make_road(spec.curved_road);
  const std::array<Centerline, 1> successors{road.successor};
  const Polyline path = concat_centerlines(road.current, successors);
  const double hl = 0.5 * kFootprintLength;
  const double hw = 0.5 * kFootprintWidth;

  const double av_speed =
    spec.kind == ScenarioTemplate::kRandom ? uniform(0.0, spec.av_speed) : spec.av_speed;

  AvState av0;
  av0.speed = av_speed;
  av0.footprint_length = kFootprintLength;
  av0.footprint_width = kFootprintWidth;
  av0.arc_offset = kStartArc;
  const auto pose0 = point_at_arclength(path, av0.arc_offset);
  av0.position = pose0.point;
  av0.heading = pose0.heading;
  const OrientedRect footprint0 = av_footprint(av0);

  std::vector<PedestrianState> peds0;
  std::vector<int> visibility;
  for (int i = 0; i < spec.n_pedestrians; ++i) {
    PedestrianState p;
    p.id = pedestrian_id(i);
    p.body_radius = uniform(kBodyRadiusMin, kBodyRadiusMax);
    switch (spec.kind) {
      case ScenarioTemplate::kCrossing: {
        // walks laterally into the lane and meets the front face at t_c
        const double t_c = uniform(1.0, 5.0);
        const double walk = uniform(0.8, 1.8);
        const double side = uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0;
        const Vec2 local(hl + p.body_radius + av_speed * t_c, -side * walk * t_c);
        p.position = av0.position + local;
        p.velocity = Vec2(0.0, side * walk);
        break;
      }
      case ScenarioTemplate::kStaticNear: {
        const double side = uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0;
        p.position = av0.position + Vec2(uniform(-hl, hl), side * (hw + uniform(1.0, 3.0)));
        p.velocity = Vec2::Zero();
        break;
      }
      case ScenarioTemplate::kFarCrowd: {
        const double range = uniform(50.0, 100.0);
        const double bearing = uniform(-std::numbers::pi, std::numbers::pi);
        p.position = av0.position + range * Vec2(std::cos(bearing), std::sin(bearing));
        const double speed = uniform(0.0, kPedSpeedMax);
        const double dir = uniform(-std::numbers::pi, std::numbers::pi);
        p.velocity = speed * Vec2(std::cos(dir), std::sin(dir));
        break;
      }
      case ScenarioTemplate::kRandom: {
        do {
          p.position = av0.position + Vec2(uniform(-20.0, 60.0), uniform(-15.0, 15.0));
        } while (distance_point_to_rect(p.position, footprint0) < kMinClearance + p.body_radius);
        const double speed = uniform(0.0, kPedSpeedMax);
        const double dir = uniform(-std::numbers::pi, std::numbers::pi);
        p.velocity = speed * Vec2(std::cos(dir), std::sin(dir));
        break;
      }
    }
    visibility.push_back(std::uniform_int_distribution<int>(1, 4)(rng));
    peds0.push_back(std::move(p));
  }

  GeneratedScene out;
  out.bounds = {
    spec.kind == ScenarioTemplate::kRandom ? spec.av_speed : av_speed, kPedSpeedMax, kBodyRadiusMax,
    kMinClearance, !spec.curved_road};
  for (int k = 0; k < spec.n_frames; ++k) {
    const double t = spec.frame_interval * k;
    SceneFrame f;
    f.frame_id = frame_id(spec, k);
    f.timestamp = t;
    f.centerlines = {road.current, road.successor};
    f.av = av0;
    f.av.arc_offset = std::min(av0.arc_offset + av_speed * t, path.length());
    const auto pose = point_at_arclength(path, f.av.arc_offset);
    f.av.position = pose.point;
    f.av.heading = pose.heading;
    f.camera = front_camera(f.av.position, f.av.heading);
    for (std::size_t i = 0; i < peds0.size(); ++i) {
      PedestrianState p = peds0[i];
      p.position += p.velocity * t;
      GroundTruthCuboid c;
      c.pedestrian_id = p.id;
      c.center = Vec3(p.position.x(), p.position.y(), 0.875);
      c.dimensions = Vec3(0.7, 0.6, 1.75);
      c.yaw = p.velocity.norm() > 0.0 ? std::atan2(p.velocity.y(), p.velocity.x()) : 0.0;
      c.visibility_bin = visibility[i];
      f.cuboids.push_back(c);

      PedestrianTruth truth;
      truth.frame_id = f.frame_id;
      truth.pedestrian_id = p.id;
      truth.footprint_distance = distance_point_to_rect(p.position, av_footprint(f.av));
      if (!spec.curved_road) {
        // road runs along +x, so the footprint is axis aligned
        const Vec2 rel = p.position - f.av.position;
        const Vec2 rel_v = p.velocity - Vec2(av_speed, 0.0);
        truth.straight_line_ttc = straight_line_contact_time(rel, rel_v, p.body_radius, hl, hw);
      }
      out.truth.push_back(std::move(truth));
      f.pedestrians.push_back(std::move(p));
    }
    validate(f);
    out.frames.push_back(std::move(f));
  }
  return out;
}

}  // namespace pedcrit
