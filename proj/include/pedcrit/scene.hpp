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

#ifndef PEDCRIT__SCENE_HPP_
#define PEDCRIT__SCENE_HPP_

#include "pedcrit/geometry.hpp"

#include <Eigen/Geometry>

#include <array>
#include <filesystem>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pedcrit
{

inline constexpr double kDefaultBodyRadius = 0.3;
inline constexpr double kDefaultFovHalfAngle = 35.0 * std::numbers::pi / 180.0;
inline constexpr std::string_view kPedestrianClass = "pedestrian";

// All BEV quantities are SI (m, s, rad); image quantities are pixels.

struct AvState
{
  Vec2 position = Vec2::Zero();
  double speed = 0.0;
  double heading = 0.0;
  double footprint_length = 4.5;
  double footprint_width = 1.9;
  /// Position of the reference point (footprint center) along the joined centerlines.
  double arc_offset = 0.0;
};

struct PedestrianState
{
  std::string id;
  Vec2 position = Vec2::Zero();
  Vec2 velocity = Vec2::Zero();
  double body_radius = kDefaultBodyRadius;
};

enum class CenterlineRole { kCurrent, kSuccessor };

struct Centerline
{
  std::vector<Vec2> points;
  CenterlineRole role = CenterlineRole::kCurrent;
  int order_index = 0;
};

/// Pinhole camera. Camera frame: x right, y down, z along the optical axis.
struct CameraCalibration
{
  Eigen::Matrix3d intrinsics = Eigen::Matrix3d::Identity();
  /// p_camera = world_to_camera * p_world
  Eigen::Isometry3d world_to_camera = Eigen::Isometry3d::Identity();
  int image_width = 1600;
  int image_height = 900;
  double fov_half_angle = kDefaultFovHalfAngle;
};

struct GroundTruthCuboid
{
  std::string pedestrian_id;
  Vec3 center = Vec3::Zero();
  /// (length, width, height); length along yaw, height along world z.
  Vec3 dimensions = Vec3::Ones();
  double yaw = 0.0;
  int visibility_bin = 4;
};

struct SceneFrame
{
  std::string frame_id;
  double timestamp = 0.0;
  AvState av;
  std::vector<Centerline> centerlines;
  std::vector<PedestrianState> pedestrians;
  CameraCalibration camera;
  std::vector<GroundTruthCuboid> cuboids;
};

struct Box2D
{
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }
  bool operator==(const Box2D &) const = default;
};

struct Detection
{
  std::string frame_id;
  Box2D box;
  double confidence = 0.0;
  std::string class_name{kPedestrianClass};
};

std::string_view to_string(CenterlineRole role);

/// Throws InvariantError naming the frame and the offending field.
void validate(const SceneFrame & frame);
void validate(const Detection & det, std::size_t index);

/// Current centerline followed by successors in order_index order.
Polyline concat_centerlines(const Centerline & current, std::span<const Centerline> successors);

/// The driving corridor of a validated frame.
Polyline frame_path(const SceneFrame & frame);

/// AV footprint at its current pose.
OrientedRect av_footprint(const AvState & av);

/// Parses and validates a scene file. Frames come back sorted by timestamp.
/// Throws ParseError (line or field locus) or InvariantError.
std::vector<SceneFrame> load_scene(const std::filesystem::path & path);
std::vector<SceneFrame> parse_scene(std::string_view text);
std::string serialize_scene(std::span<const SceneFrame> frames);

std::vector<Detection> load_detections(const std::filesystem::path & path);
std::vector<Detection> parse_detections(std::string_view text);
std::string serialize_detections(std::span<const Detection> dets);

std::string read_text_file(const std::filesystem::path & path);
void write_text_file(const std::filesystem::path & path, std::string_view text);

}  // namespace pedcrit

#endif  // PEDCRIT__SCENE_HPP_
