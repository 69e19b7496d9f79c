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

#include "pedcrit/scene.hpp"

#include "pedcrit/error.hpp"

#include "json_util.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace pedcrit
{

namespace
{

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;
using namespace detail;

AvState parse_av(const json & j, const std::string & path)
{
  AvState av;
  av.position = vector_n<2>(field(j, "position", path), child(path, "position"));
  av.speed = number(field(j, "speed", path), child(path, "speed"));
  av.heading = number(field(j, "heading", path), child(path, "heading"));
  av.footprint_length = number(field(j, "footprint_length", path), child(path, "footprint_length"));
  av.footprint_width = number(field(j, "footprint_width", path), child(path, "footprint_width"));
  av.arc_offset = number(field(j, "arc_offset", path), child(path, "arc_offset"));
  return av;
}

Centerline parse_centerline(const json & j, const std::string & path)
{
  Centerline c;
  const auto pts_path = child(path, "points");
  const auto & pts = array(field(j, "points", path), pts_path);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    c.points.push_back(vector_n<2>(pts[i], child(pts_path, i)));
  }
  const auto role = string(field(j, "role", path), child(path, "role"));
  if (role == "current") {
    c.role = CenterlineRole::kCurrent;
  } else if (role == "successor") {
    c.role = CenterlineRole::kSuccessor;
  } else {
    throw ParseError(child(path, "role"), "expected 'current' or 'successor', got '" + role + "'");
  }
  c.order_index = integer(field(j, "order_index", path), child(path, "order_index"));
  return c;
}

PedestrianState parse_pedestrian(const json & j, const std::string & path)
{
  PedestrianState p;
  p.id = string(field(j, "id", path), child(path, "id"));
  p.position = vector_n<2>(field(j, "position", path), child(path, "position"));
  p.velocity = vector_n<2>(field(j, "velocity", path), child(path, "velocity"));
  if (j.contains("body_radius")) {
    p.body_radius = number(j["body_radius"], child(path, "body_radius"));
  }
  return p;
}

CameraCalibration parse_camera(const json & j, const std::string & path)
{
  CameraCalibration cam;
  cam.intrinsics = matrix3(field(j, "intrinsics", path), child(path, "intrinsics"));
  const auto ext_path = child(path, "extrinsics");
  const auto & ext = field(j, "extrinsics", path);
  Eigen::Isometry3d t = Eigen::Isometry3d::Identity();
  t.linear() = matrix3(field(ext, "rotation", ext_path), child(ext_path, "rotation"));
  t.translation() = vector_n<3>(field(ext, "translation", ext_path), child(ext_path, "translation"));
  cam.world_to_camera = t;
  cam.image_width = integer(field(j, "image_width", path), child(path, "image_width"));
  cam.image_height = integer(field(j, "image_height", path), child(path, "image_height"));
  if (j.contains("fov_half_angle")) {
    cam.fov_half_angle = number(j["fov_half_angle"], child(path, "fov_half_angle"));
  }
  return cam;
}

GroundTruthCuboid parse_cuboid(const json & j, const std::string & path)
{
  GroundTruthCuboid c;
  c.pedestrian_id = string(field(j, "pedestrian_id", path), child(path, "pedestrian_id"));
  c.center = vector_n<3>(field(j, "center", path), child(path, "center"));
  c.dimensions = vector_n<3>(field(j, "dimensions", path), child(path, "dimensions"));
  c.yaw = number(field(j, "yaw", path), child(path, "yaw"));
  c.visibility_bin = integer(field(j, "visibility_bin", path), child(path, "visibility_bin"));
  return c;
}

SceneFrame parse_frame(const json & j, const std::string & path)
{
  SceneFrame f;
  f.frame_id = string(field(j, "frame_id", path), child(path, "frame_id"));
  f.timestamp = number(field(j, "timestamp", path), child(path, "timestamp"));
  f.av = parse_av(field(j, "av", path), child(path, "av"));
  const auto cl_path = child(path, "centerlines");
  const auto & cls = array(field(j, "centerlines", path), cl_path);
  for (std::size_t i = 0; i < cls.size(); ++i) {
    f.centerlines.push_back(parse_centerline(cls[i], child(cl_path, i)));
  }
  const auto ped_path = child(path, "pedestrians");
  const auto & peds = array(field(j, "pedestrians", path), ped_path);
  for (std::size_t i = 0; i < peds.size(); ++i) {
    f.pedestrians.push_back(parse_pedestrian(peds[i], child(ped_path, i)));
  }
  f.camera = parse_camera(field(j, "camera", path), child(path, "camera"));
  const auto cub_path = child(path, "cuboids");
  const auto & cubs = array(field(j, "cuboids", path), cub_path);
  for (std::size_t i = 0; i < cubs.size(); ++i) {
    f.cuboids.push_back(parse_cuboid(cubs[i], child(cub_path, i)));
  }
  return f;
}

ordered_json to_json(const Vec2 & v) { return ordered_json::array({v.x(), v.y()}); }
ordered_json to_json(const Vec3 & v) { return ordered_json::array({v.x(), v.y(), v.z()}); }

ordered_json to_json(const Eigen::Matrix3d & m)
{
  auto out = ordered_json::array();
  for (int r = 0; r < 3; ++r) {
    out.push_back(ordered_json::array({m(r, 0), m(r, 1), m(r, 2)}));
  }
  return out;
}

ordered_json to_json(const SceneFrame & f)
{
  ordered_json j;
  j["frame_id"] = f.frame_id;
  j["timestamp"] = f.timestamp;
  j["av"] = {
    {"position", to_json(f.av.position)},
    {"speed", f.av.speed},
    {"heading", f.av.heading},
    {"footprint_length", f.av.footprint_length},
    {"footprint_width", f.av.footprint_width},
    {"arc_offset", f.av.arc_offset}};
  auto cls = ordered_json::array();
  for (const auto & c : f.centerlines) {
    auto pts = ordered_json::array();
    for (const auto & p : c.points) {
      pts.push_back(to_json(p));
    }
    cls.push_back(
      {{"points", pts}, {"role", std::string(to_string(c.role))}, {"order_index", c.order_index}});
  }
  j["centerlines"] = cls;
  auto peds = ordered_json::array();
  for (const auto & p : f.pedestrians) {
    peds.push_back(
      {{"id", p.id},
       {"position", to_json(p.position)},
       {"velocity", to_json(p.velocity)},
       {"body_radius", p.body_radius}});
  }
  j["pedestrians"] = peds;
  const Vec3 translation = f.camera.world_to_camera.translation();
  j["camera"] = {
    {"intrinsics", to_json(f.camera.intrinsics)},
    {"extrinsics",
     {{"rotation", to_json(Eigen::Matrix3d(f.camera.world_to_camera.linear()))},
      {"translation", to_json(translation)}}},
    {"image_width", f.camera.image_width},
    {"image_height", f.camera.image_height},
    {"fov_half_angle", f.camera.fov_half_angle}};
  auto cubs = ordered_json::array();
  for (const auto & c : f.cuboids) {
    cubs.push_back(
      {{"pedestrian_id", c.pedestrian_id},
       {"center", to_json(c.center)},
       {"dimensions", to_json(c.dimensions)},
       {"yaw", c.yaw},
       {"visibility_bin", c.visibility_bin}});
  }
  j["cuboids"] = cubs;
  return j;
}

bool finite(const Vec2 & v) { return std::isfinite(v.x()) && std::isfinite(v.y()); }

}  // namespace

std::string_view to_string(CenterlineRole role)
{
  return role == CenterlineRole::kCurrent ? "current" : "successor";
}

void validate(const SceneFrame & f)
{
  const auto fail = [&f](const std::string & field, const std::string & what) {
    throw InvariantError(f.frame_id, field, what);
  };
  if (f.frame_id.empty()) {
    fail("frame_id", "must be non-empty");
  }
  if (!std::isfinite(f.timestamp)) {
    fail("timestamp", "must be finite");
  }
  const auto & av = f.av;
  if (!finite(av.position)) {
    fail("av.position", "must be finite");
  }
  if (!(av.speed >= 0.0) || !std::isfinite(av.speed)) {
    fail("av.speed", "must be finite and >= 0");
  }
  if (!(av.heading >= -std::numbers::pi && av.heading <= std::numbers::pi)) {
    fail("av.heading", "must lie in [-pi, pi]");
  }
  if (!(av.footprint_length > 0.0)) {
    fail("av.footprint_length", "must be > 0");
  }
  if (!(av.footprint_width > 0.0)) {
    fail("av.footprint_width", "must be > 0");
  }
  if (!std::isfinite(av.arc_offset)) {
    fail("av.arc_offset", "must be finite");
  }

  int current = 0;
  int expected_successor = -1;
  for (std::size_t i = 0; i < f.centerlines.size(); ++i) {
    const auto & c = f.centerlines[i];
    const auto name = "centerlines[" + std::to_string(i) + "]";
    if (c.points.size() < 2) {
      fail(name + ".points", "needs at least 2 points");
    }
    for (std::size_t k = 0; k < c.points.size(); ++k) {
      if (!finite(c.points[k])) {
        fail(name + ".points", "must be finite");
      }
      if (k > 0 && c.points[k] == c.points[k - 1]) {
        fail(name + ".points", "consecutive points must be distinct");
      }
    }
    if (c.role == CenterlineRole::kCurrent) {
      ++current;
    } else {
      if (expected_successor >= 0 && c.order_index != expected_successor) {
        fail(
          name + ".order_index",
          "successor order indices must be strictly increasing and contiguous");
      }
      expected_successor = c.order_index + 1;
    }
  }
  if (current != 1) {
    fail("centerlines", "exactly one centerline must have role 'current'");
  }

  std::set<std::string> ids;
  for (std::size_t i = 0; i < f.pedestrians.size(); ++i) {
    const auto & p = f.pedestrians[i];
    const auto name = "pedestrians[" + std::to_string(i) + "]";
    if (p.id.empty()) {
      fail(name + ".id", "must be non-empty");
    }
    if (!ids.insert(p.id).second) {
      fail(name + ".id", "duplicate pedestrian id '" + p.id + "'");
    }
    if (!finite(p.position)) {
      fail(name + ".position", "must be finite");
    }
    if (!finite(p.velocity)) {
      fail(name + ".velocity", "must be finite");
    }
    if (!(p.body_radius > 0.0)) {
      fail(name + ".body_radius", "must be > 0");
    }
  }

  const auto & cam = f.camera;
  if (!(cam.intrinsics(0, 0) > 0.0) || !(cam.intrinsics(1, 1) > 0.0)) {
    fail("camera.intrinsics", "focal lengths must be > 0");
  }
  if (cam.image_width <= 0 || cam.image_height <= 0) {
    fail("camera.image_width", "image dimensions must be > 0");
  }
  if (!(cam.fov_half_angle > 0.0 && cam.fov_half_angle < std::numbers::pi / 2.0)) {
    fail("camera.fov_half_angle", "must lie in (0, pi/2)");
  }
  const Eigen::Matrix3d r = cam.world_to_camera.linear();
  if (!(r.transpose() * r).isIdentity(1e-6) || std::abs(r.determinant() - 1.0) > 1e-6) {
    fail("camera.extrinsics.rotation", "must be a proper rotation");
  }

  for (std::size_t i = 0; i < f.cuboids.size(); ++i) {
    const auto & c = f.cuboids[i];
    const auto name = "cuboids[" + std::to_string(i) + "]";
    if (!(c.dimensions.minCoeff() > 0.0)) {
      fail(name + ".dimensions", "must be > 0");
    }
    if (c.visibility_bin < 1 || c.visibility_bin > 4) {
      fail(name + ".visibility_bin", "must be in {1,2,3,4}");
    }
    if (ids.count(c.pedestrian_id) == 0) {
      fail(name + ".pedestrian_id", "unknown pedestrian id '" + c.pedestrian_id + "'");
    }
  }
}

void validate(const Detection & d, std::size_t index)
{
  const auto name = "detections[" + std::to_string(index) + "]";
  const auto fail = [&](const std::string & field, const std::string & what) {
    throw InvariantError(d.frame_id, name + "." + field, what);
  };
  if (!(d.box.x_min < d.box.x_max)) {
    fail("box", "x_min must be < x_max");
  }
  if (!(d.box.y_min < d.box.y_max)) {
    fail("box", "y_min must be < y_max");
  }
  if (!(d.confidence >= 0.0 && d.confidence <= 1.0)) {
    fail("confidence", "must lie in [0, 1]");
  }
}

Polyline concat_centerlines(const Centerline & current, std::span<const Centerline> successors)
{
  std::vector<const Centerline *> ordered;
  for (const auto & s : successors) {
    ordered.push_back(&s);
  }
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto * a, const auto * b) {
    return a->order_index < b->order_index;
  });
  std::vector<std::vector<Vec2>> pieces{current.points};
  for (const auto * s : ordered) {
    pieces.push_back(s->points);
  }
  return concat_polylines(pieces);
}

Polyline frame_path(const SceneFrame & frame)
{
  const Centerline * current = nullptr;
  std::vector<Centerline> successors;
  for (const auto & c : frame.centerlines) {
    if (c.role == CenterlineRole::kCurrent) {
      current = &c;
    } else {
      successors.push_back(c);
    }
  }
  if (current == nullptr) {
    throw InvariantError(frame.frame_id, "centerlines", "no current centerline");
  }
  return concat_centerlines(*current, successors);
}

OrientedRect av_footprint(const AvState & av)
{
  return {av.position, 0.5 * av.footprint_length, 0.5 * av.footprint_width, av.heading};
}

std::vector<SceneFrame> parse_scene(std::string_view text)
{
  const json root = parse_json(text);
  const auto & frames_json = array(field(root, "frames", ""), "frames");
  std::vector<SceneFrame> frames;
  frames.reserve(frames_json.size());
  std::set<std::string> ids;
  for (std::size_t i = 0; i < frames_json.size(); ++i) {
    auto f = parse_frame(frames_json[i], child("frames", i));
    validate(f);
    if (!ids.insert(f.frame_id).second) {
      throw InvariantError(f.frame_id, "frame_id", "duplicate frame id");
    }
    frames.push_back(std::move(f));
  }
  std::stable_sort(frames.begin(), frames.end(), [](const auto & a, const auto & b) {
    return a.timestamp < b.timestamp;
  });
  return frames;
}

std::vector<SceneFrame> load_scene(const std::filesystem::path & path)
{
  return parse_scene(read_text_file(path));
}

std::string serialize_scene(std::span<const SceneFrame> frames)
{
  ordered_json root;
  root["frames"] = ordered_json::array();
  for (const auto & f : frames) {
    root["frames"].push_back(to_json(f));
  }
  return root.dump(2) + "\n";
}

std::vector<Detection> parse_detections(std::string_view text)
{
  const json root = parse_json(text);
  const auto & arr = array(root, "detections");
  std::vector<Detection> dets;
  dets.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto path = child("detections", i);
    const auto & j = arr[i];
    Detection d;
    d.frame_id = string(field(j, "frame_id", path), child(path, "frame_id"));
    const auto b = vector_n<4>(field(j, "box", path), child(path, "box"));
    d.box = {b[0], b[1], b[2], b[3]};
    d.confidence = number(field(j, "confidence", path), child(path, "confidence"));
    d.class_name = string(field(j, "class", path), child(path, "class"));
    validate(d, i);
    dets.push_back(std::move(d));
  }
  return dets;
}

std::vector<Detection> load_detections(const std::filesystem::path & path)
{
  return parse_detections(read_text_file(path));
}

std::string serialize_detections(std::span<const Detection> dets)
{
  auto root = ordered_json::array();
  for (const auto & d : dets) {
    root.push_back(
      {{"frame_id", d.frame_id},
       {"box", {d.box.x_min, d.box.y_min, d.box.x_max, d.box.y_max}},
       {"confidence", d.confidence},
       {"class", d.class_name}});
  }
  return root.dump(2) + "\n";
}

std::string read_text_file(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open '" + path.string() + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path & path, std::string_view text)
{
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot write '" + path.string() + "'");
  }
  out << text;
}

}  // namespace pedcrit
