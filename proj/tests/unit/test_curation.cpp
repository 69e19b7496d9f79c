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
#include "pedcrit/curation.hpp"
#include "pedcrit/error.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace pedcrit;
using pedcrit::testing::cuboid_at_bearing;
using pedcrit::testing::deg;
using pedcrit::testing::ped;
using pedcrit::testing::straight_frame;

namespace
{

CameraCalibration identity_camera()
{
  CameraCalibration cam;
  cam.intrinsics << 1000.0, 0.0, 800.0, 0.0, 1000.0, 450.0, 0.0, 0.0, 1.0;
  return cam;
}

std::vector<CriticalityRecord> records_for(const SceneFrame & f)
{
  return annotate_frame(f, {}, {});
}

}  // namespace

TEST(ProjectCuboid, UnitCubeOnAxis)
{
  GroundTruthCuboid c;
  c.center = Vec3(0, 0, 10);
  c.dimensions = Vec3(1, 1, 1);
  const auto box = project_cuboid(c, identity_camera());
  ASSERT_TRUE(box.has_value());
  const double half = 1000.0 * 0.5 / 9.5;
  EXPECT_NEAR(box->x_min, 800 - half, 1e-9);
  EXPECT_NEAR(box->x_max, 800 + half, 1e-9);
  EXPECT_NEAR(box->y_min, 450 - half, 1e-9);
  EXPECT_NEAR(box->y_max, 450 + half, 1e-9);
  EXPECT_NEAR(box->width(), 105.263157894737, 1e-9);
}

TEST(ProjectCuboid, BehindCameraIsNone)
{
  GroundTruthCuboid c;
  c.center = Vec3(0, 0, -10);
  EXPECT_FALSE(project_cuboid(c, identity_camera()).has_value());
}

TEST(ProjectCuboid, ClippedToImage)
{
  GroundTruthCuboid c;
  c.center = Vec3(8, 0, 10);
  c.dimensions = Vec3(2, 2, 2);
  const auto box = project_cuboid(c, identity_camera());
  ASSERT_TRUE(box.has_value());
  EXPECT_EQ(box->x_max, 1600.0);
  EXPECT_LT(box->x_min, 1600.0);
}

TEST(ProjectCuboid, StraddlingImagePlaneCullsBehindCorners)
{
  GroundTruthCuboid c;
  c.center = Vec3(0, 0, 0.2);
  c.dimensions = Vec3(0.2, 0.2, 1.0);
  const auto box = project_cuboid(c, identity_camera());
  ASSERT_TRUE(box.has_value());
  EXPECT_GE(box->x_min, 0.0);
  EXPECT_LE(box->x_max, 1600.0);
}

TEST(ProjectCuboid, SingularIntrinsics)
{
  auto cam = identity_camera();
  cam.intrinsics.row(2) = cam.intrinsics.row(0);
  GroundTruthCuboid c;
  c.center = Vec3(0, 0, 10);
  EXPECT_THROW(project_cuboid(c, cam), CalibrationError);
}

// Property: every projected box lies inside the image and has positive area.
TEST(ProjectCuboid, BoxesInsideImage)
{
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto f = straight_frame(0.0);
  for (int i = 0; i < 2000; ++i) {
    GroundTruthCuboid c;
    c.center = Vec3(30 * u(rng), 30 * u(rng), 0.9 + 0.5 * u(rng));
    c.dimensions = Vec3(0.3 + std::abs(u(rng)), 0.3 + std::abs(u(rng)), 1.0 + std::abs(u(rng)));
    c.yaw = std::numbers::pi * u(rng);
    const auto box = project_cuboid(c, f.camera);
    if (!box) continue;
    EXPECT_GE(box->x_min, 0.0);
    EXPECT_GE(box->y_min, 0.0);
    EXPECT_LE(box->x_max, 1600.0);
    EXPECT_LE(box->y_max, 900.0);
    EXPECT_GT(box->area(), 0.0);
  }
}

TEST(FovFilter, Bearings)
{
  const auto f = straight_frame(0.0);
  EXPECT_TRUE(fov_filter(cuboid_at_bearing("a", 0.0, 15.0), f.camera));
  EXPECT_TRUE(fov_filter(cuboid_at_bearing("b", deg(35.0), 15.0), f.camera));
  EXPECT_TRUE(fov_filter(cuboid_at_bearing("c", deg(-35.0), 15.0), f.camera));
  EXPECT_FALSE(fov_filter(cuboid_at_bearing("d", deg(40.0), 15.0), f.camera));
  EXPECT_FALSE(fov_filter(cuboid_at_bearing("e", deg(180.0), 15.0), f.camera));
}

TEST(FovFilter, BearingIsHorizontal)
{
  const auto f = straight_frame(0.0);
  auto c = cuboid_at_bearing("a", deg(20.0), 15.0);
  const double b0 = horizontal_bearing(c, f.camera);
  c.center.z() += 5.0;
  EXPECT_NEAR(horizontal_bearing(c, f.camera), b0, 1e-12);
  EXPECT_NEAR(b0, deg(20.0), 1e-12);
}

TEST(CurateFrame, SideCameraArtifactDiscarded)
{
  const auto frames = load_scene(PEDCRIT_TEST_DATA "/side_camera.json");
  ASSERT_EQ(frames.size(), 1u);
  const auto r = curate_frame(frames[0], records_for(frames[0]));
  ASSERT_EQ(r.boxes.size(), 2u);
  ASSERT_EQ(r.discards.size(), 1u);
  EXPECT_EQ(r.discards[0].pedestrian_id, "ped-002");
  EXPECT_EQ(r.discards[0].reason, DiscardReason::kOutsideFov);
  // hand projection of the on-axis pedestrian: near face at 14.7 m depth
  const auto & b = r.boxes[0].box;
  EXPECT_NEAR(b.x_min, 800 - 1266 * 0.3 / 14.7, 1e-9);
  EXPECT_NEAR(b.y_min, 450 - 1266 * 0.25 / 14.7, 1e-9);
  EXPECT_NEAR(b.y_max, 450 + 1266 * 1.5 / 14.7, 1e-9);
}

TEST(CurateFrame, AllBehindCamera)
{
  auto f = straight_frame(0.0, {ped("a", Vec2(-10, 0)), ped("b", Vec2(-12, 3))});
  for (const auto & p : f.pedestrians) {
    GroundTruthCuboid c;
    c.pedestrian_id = p.id;
    c.center = Vec3(p.position.x(), p.position.y(), 0.9);
    c.dimensions = Vec3(0.6, 0.6, 1.8);
    f.cuboids.push_back(c);
  }
  const auto r = curate_frame(f, records_for(f));
  EXPECT_TRUE(r.boxes.empty());
  EXPECT_EQ(r.discards.size(), 2u);
}

TEST(CurateFrame, PassThroughCarriesRecord)
{
  auto f = straight_frame(5.0, {ped("b", Vec2(15, 1)), ped("a", Vec2(25, -2))});
  for (const auto & p : f.pedestrians) {
    GroundTruthCuboid c;
    c.pedestrian_id = p.id;
    c.center = Vec3(p.position.x(), p.position.y(), 0.9);
    c.dimensions = Vec3(0.6, 0.6, 1.8);
    c.visibility_bin = 2;
    f.cuboids.push_back(c);
  }
  const auto recs = records_for(f);
  const auto r = curate_frame(f, recs);
  ASSERT_EQ(r.boxes.size(), f.cuboids.size());
  EXPECT_EQ(r.boxes[0].pedestrian_id, "a");
  EXPECT_EQ(r.boxes[0].kappa, recs[0].kappa);
  EXPECT_EQ(r.boxes[0].zone, recs[0].zone);
  EXPECT_EQ(r.boxes[0].visibility_bin, 2);
  EXPECT_DOUBLE_EQ(r.boxes[0].diagonal_px, std::hypot(r.boxes[0].box.width(), r.boxes[0].box.height()));
}

TEST(CurateFrame, MissingRecord)
{
  auto f = straight_frame(5.0, {ped("a", Vec2(15, 1))});
  GroundTruthCuboid c;
  c.pedestrian_id = "a";
  c.center = Vec3(15, 1, 0.9);
  f.cuboids.push_back(c);
  EXPECT_THROW(curate_frame(f, {}), MissingAnnotationError);
}
