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

#ifndef PEDCRIT__GEOMETRY_HPP_
#define PEDCRIT__GEOMETRY_HPP_

#include <Eigen/Core>

#include <span>
#include <vector>

namespace pedcrit
{

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

/// Maximum gap between consecutive centerline pieces that is bridged silently.
inline constexpr double kCenterlineJointTolerance = 0.5;

/// Ordered 2D polyline parametrized by arc length.
class Polyline
{
public:
  /// Throws DomainError on fewer than two points or repeated consecutive points.
  explicit Polyline(std::vector<Vec2> points);

  const std::vector<Vec2> & points() const { return points_; }
  const std::vector<double> & cumulative_lengths() const { return cumulative_; }
  double length() const { return cumulative_.back(); }

private:
  std::vector<Vec2> points_;
  std::vector<double> cumulative_;
};

struct PathPoint
{
  Vec2 point;
  double heading;
};

struct OrientedRect
{
  Vec2 center;
  double half_length;
  double half_width;
  double heading;
};

struct Disc
{
  Vec2 center;
  double radius;
};

/// Joins pieces end to start. Gaps up to kCenterlineJointTolerance become a
/// connecting segment; larger gaps throw DiscontinuousMapError.
Polyline concat_polylines(std::span<const std::vector<Vec2>> pieces);

/// Point and segment heading at arc length `s`. Throws OutOfPathError when
/// `s` is outside [0, length]. A vertex belongs to the segment it starts,
/// except the final vertex.
PathPoint point_at_arclength(const Polyline & path, double s);

/// Euclidean distance from `p` to the closed rectangle; 0 inside.
double distance_point_to_rect(const Vec2 & p, const OrientedRect & rect);

/// Closed-region test; tangency counts as intersecting.
bool disc_rect_intersects(const Disc & disc, const OrientedRect & rect);

bool disc_disc_intersects(const Disc & a, const Disc & b);

/// The four corners, counter-clockwise starting at front-left.
std::vector<Vec2> rect_corners(const OrientedRect & rect);

/// Wraps an angle to [-pi, pi].
double wrap_angle(double angle);

}  // namespace pedcrit

#endif  // PEDCRIT__GEOMETRY_HPP_
