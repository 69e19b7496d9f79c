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

#ifndef PEDCRIT__CURATION_HPP_
#define PEDCRIT__CURATION_HPP_

#include "pedcrit/criticality.hpp"
#include "pedcrit/scene.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pedcrit
{

struct Curated2DBox
{
  std::string pedestrian_id;
  std::string frame_id;
  Box2D box;
  double diagonal_px = 0.0;
  int visibility_bin = 4;
  double kappa = 0.0;
  Zone zone = Zone::kNC;
  // carried along for heatmaps
  double ttc = kInfinity;
  double distance = 0.0;
};

enum class DiscardReason { kOutsideFov, kNotProjectable };

struct Discard
{
  std::string frame_id;
  std::string pedestrian_id;
  DiscardReason reason;
};

struct CurationResult
{
  std::vector<Curated2DBox> boxes;
  std::vector<Discard> discards;
};

std::string_view to_string(DiscardReason reason);
std::optional<DiscardReason> parse_discard_reason(std::string_view s);

/// The 8 cuboid corners in world coordinates.
std::vector<Vec3> cuboid_corners(const GroundTruthCuboid & cuboid);

/// Axis-aligned hull of the projected corners in front of the camera, clipped
/// to the image. nullopt when no corner has positive depth or the clipped box
/// has zero area. Throws CalibrationError on singular intrinsics.
std::optional<Box2D> project_cuboid(const GroundTruthCuboid & cuboid, const CameraCalibration & cam);

/// Horizontal bearing of the cuboid center from the optical axis, radians in [0, pi].
double horizontal_bearing(const GroundTruthCuboid & cuboid, const CameraCalibration & cam);

/// True iff the horizontal bearing is within the half-angle (boundary inclusive).
bool fov_filter(const GroundTruthCuboid & cuboid, const CameraCalibration & cam);

/// FOV filter then projection. Every cuboid ends up either in `boxes` or in
/// `discards`. Throws MissingAnnotationError if a cuboid has no record.
CurationResult curate_frame(const SceneFrame & frame, const std::vector<CriticalityRecord> & records);

}  // namespace pedcrit

#endif  // PEDCRIT__CURATION_HPP_
