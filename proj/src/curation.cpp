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

#include "pedcrit/curation.hpp"

#include "pedcrit/error.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace pedcrit
{

namespace
{

// Slack on the inclusive FOV boundary so a center placed at exactly the
// half-angle survives trigonometric round-off.
constexpr double kBearingTolerance = 1e-9;

}  // namespace

std::string_view to_string(DiscardReason reason)
{
  return reason == DiscardReason::kOutsideFov ? "outside_fov" : "not_projectable";
}

std::optional<DiscardReason> parse_discard_reason(std::string_view s)
{
  if (s == "outside_fov") {
    return DiscardReason::kOutsideFov;
  }
  if (s == "not_projectable") {
    return DiscardReason::kNotProjectable;
  }
  return std::nullopt;
}

std::vector<Vec3> cuboid_corners(const GroundTruthCuboid & cuboid)
{
  const Eigen::AngleAxisd rot(cuboid.yaw, Vec3::UnitZ());
  const Vec3 half = 0.5 * cuboid.dimensions;
  std::vector<Vec3> corners;
  corners.reserve(8);
  for (const double sx : {-1.0, 1.0}) {
    for (const double sy : {-1.0, 1.0}) {
      for (const double sz : {-1.0, 1.0}) {
        corners.push_back(cuboid.center + rot * Vec3(sx * half.x(), sy * half.y(), sz * half.z()));
      }
    }
  }
  return corners;
}

std::optional<Box2D> project_cuboid(const GroundTruthCuboid & cuboid, const CameraCalibration & cam)
{
  const auto & k = cam.intrinsics;
  if (!(k(0, 0) > 0.0 && k(1, 1) > 0.0) || std::abs(k.determinant()) < 1e-12) {
    throw CalibrationError("singular camera intrinsics");
  }
  double x_min = std::numeric_limits<double>::infinity();
  double y_min = x_min;
  double x_max = -x_min;
  double y_max = -x_min;
  bool any = false;
  for (const auto & corner : cuboid_corners(cuboid)) {
    const Vec3 pc = cam.world_to_camera * corner;
    if (pc.z() <= 0.0) {
      continue;
    }
    const Vec3 uvw = k * pc;
    const double u = uvw.x() / uvw.z();
    const double v = uvw.y() / uvw.z();
    x_min = std::min(x_min, u);
    x_max = std::max(x_max, u);
    y_min = std::min(y_min, v);
    y_max = std::max(y_max, v);
    any = true;
  }
  if (!any) {
    return std::nullopt;
  }
  const double w = cam.image_width;
  const double h = cam.image_height;
  Box2D box{
    std::clamp(x_min, 0.0, w), std::clamp(y_min, 0.0, h), std::clamp(x_max, 0.0, w),
    std::clamp(y_max, 0.0, h)};
  if (!(box.x_min < box.x_max && box.y_min < box.y_max)) {
    return std::nullopt;
  }
  return box;
}

double horizontal_bearing(const GroundTruthCuboid & cuboid, const CameraCalibration & cam)
{
  const Vec3 pc = cam.world_to_camera * cuboid.center;
  return std::atan2(std::abs(pc.x()), pc.z());
}

bool fov_filter(const GroundTruthCuboid & cuboid, const CameraCalibration & cam)
{
  return horizontal_bearing(cuboid, cam) <= cam.fov_half_angle + kBearingTolerance;
}

CurationResult curate_frame(const SceneFrame & frame, const std::vector<CriticalityRecord> & records)
{
  std::unordered_map<std::string, const CriticalityRecord *> by_id;
  for (const auto & r : records) {
    by_id.emplace(r.pedestrian_id, &r);
  }
  CurationResult out;
  for (const auto & cuboid : frame.cuboids) {
    const auto it = by_id.find(cuboid.pedestrian_id);
    if (it == by_id.end()) {
      throw MissingAnnotationError(
        "frame '" + frame.frame_id + "': no criticality record for pedestrian '" +
        cuboid.pedestrian_id + "'");
    }
    if (!fov_filter(cuboid, frame.camera)) {
      out.discards.push_back({frame.frame_id, cuboid.pedestrian_id, DiscardReason::kOutsideFov});
      continue;
    }
    const auto box = project_cuboid(cuboid, frame.camera);
    if (!box) {
      out.discards.push_back({frame.frame_id, cuboid.pedestrian_id, DiscardReason::kNotProjectable});
      continue;
    }
    const auto & rec = *it->second;
    Curated2DBox c;
    c.pedestrian_id = cuboid.pedestrian_id;
    c.frame_id = frame.frame_id;
    c.box = *box;
    c.diagonal_px = std::hypot(box->width(), box->height());
    c.visibility_bin = cuboid.visibility_bin;
    c.kappa = rec.kappa;
    c.zone = rec.zone;
    c.ttc = rec.ttc;
    c.distance = rec.distance;
    out.boxes.push_back(std::move(c));
  }
  const auto by_ped = [](const auto & a, const auto & b) { return a.pedestrian_id < b.pedestrian_id; };
  std::stable_sort(out.boxes.begin(), out.boxes.end(), by_ped);
  std::stable_sort(out.discards.begin(), out.discards.end(), by_ped);
  return out;
}

}  // namespace pedcrit
