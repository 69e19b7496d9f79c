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

#include "pedcrit/geometry.hpp"

#include "pedcrit/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace pedcrit
{

Polyline::Polyline(std::vector<Vec2> points) : points_(std::move(points))
{
  if (points_.size() < 2) {
    throw DomainError("polyline needs at least 2 points, got " + std::to_string(points_.size()));
  }
  cumulative_.reserve(points_.size());
  cumulative_.push_back(0.0);
  for (std::size_t i = 1; i < points_.size(); ++i) {
    const double seg = (points_[i] - points_[i - 1]).norm();
    if (!(seg > 0.0)) {
      throw DomainError("polyline points " + std::to_string(i - 1) + " and " + std::to_string(i) +
                        " coincide");
    }
    cumulative_.push_back(cumulative_.back() + seg);
  }
}

Polyline concat_polylines(std::span<const std::vector<Vec2>> pieces)
{
  if (pieces.empty()) {
    throw DomainError("no centerline pieces to concatenate");
  }
  std::vector<Vec2> joined = pieces.front();
  for (std::size_t k = 1; k < pieces.size(); ++k) {
    const auto & next = pieces[k];
    if (next.empty()) {
      throw DomainError("empty centerline piece " + std::to_string(k));
    }
    const double gap = (next.front() - joined.back()).norm();
    if (gap > kCenterlineJointTolerance) {
      throw DiscontinuousMapError(
        "gap of " + std::to_string(gap) + " m between centerline pieces " + std::to_string(k - 1) +
        " and " + std::to_string(k));
    }
    // a zero gap shares the joint vertex; a small gap keeps both and is bridged
    const auto first = gap > 0.0 ? next.begin() : next.begin() + 1;
    joined.insert(joined.end(), first, next.end());
  }
  return Polyline(std::move(joined));
}

PathPoint point_at_arclength(const Polyline & path, double s)
{
  if (!(s >= 0.0 && s <= path.length())) {
    throw OutOfPathError(
      "arc length " + std::to_string(s) + " outside path [0, " + std::to_string(path.length()) +
      "]");
  }
  const auto & cum = path.cumulative_lengths();
  const auto & pts = path.points();
  auto it = std::upper_bound(cum.begin(), cum.end(), s);
  std::size_t seg = static_cast<std::size_t>(std::distance(cum.begin(), it));
  // seg is the index of the segment end; clamp for s == length
  seg = std::clamp<std::size_t>(seg, 1, pts.size() - 1);
  const Vec2 & a = pts[seg - 1];
  const Vec2 & b = pts[seg];
  const double seg_len = cum[seg] - cum[seg - 1];
  const double t = std::clamp((s - cum[seg - 1]) / seg_len, 0.0, 1.0);
  const Vec2 dir = b - a;
  return {a + t * dir, std::atan2(dir.y(), dir.x())};
}

double distance_point_to_rect(const Vec2 & p, const OrientedRect & rect)
{
  const double c = std::cos(rect.heading);
  const double s = std::sin(rect.heading);
  const Vec2 d = p - rect.center;
  const double local_x = c * d.x() + s * d.y();
  const double local_y = -s * d.x() + c * d.y();
  const double dx = std::max(std::abs(local_x) - rect.half_length, 0.0);
  const double dy = std::max(std::abs(local_y) - rect.half_width, 0.0);
  return std::hypot(dx, dy);
}

bool disc_rect_intersects(const Disc & disc, const OrientedRect & rect)
{
  return distance_point_to_rect(disc.center, rect) <= disc.radius;
}

bool disc_disc_intersects(const Disc & a, const Disc & b)
{
  return (a.center - b.center).norm() <= a.radius + b.radius;
}

std::vector<Vec2> rect_corners(const OrientedRect & rect)
{
  const Vec2 ax(std::cos(rect.heading), std::sin(rect.heading));
  const Vec2 ay(-ax.y(), ax.x());
  const Vec2 l = rect.half_length * ax;
  const Vec2 w = rect.half_width * ay;
  return {rect.center + l + w, rect.center - l + w, rect.center - l - w, rect.center + l - w};
}

double wrap_angle(double angle)
{
  constexpr double pi = std::numbers::pi;
  double a = std::fmod(angle + pi, 2.0 * pi);
  if (a < 0.0) {
    a += 2.0 * pi;
  }
  return a - pi;
}

}  // namespace pedcrit
