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

#include "pedcrit/error.hpp"
#include "pedcrit/oracle.hpp"
#include "pedcrit/reachability.hpp"
#include "pedcrit/scenario.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace pedcrit;
using pedcrit::testing::ped;
using pedcrit::testing::straight_frame;

TEST(TauGrid, EndpointIncluded)
{
  ReachabilityConfig cfg;
  cfg.dt = 0.5;
  cfg.horizon = 2.0;
  const auto taus = cfg.tau_grid();
  ASSERT_EQ(taus.size(), 4u);
  EXPECT_DOUBLE_EQ(taus[0], 0.5);
  EXPECT_DOUBLE_EQ(taus[3], 2.0);
  EXPECT_EQ(ReachabilityConfig{}.tau_grid().size(), 60u);
}

TEST(TauGrid, DecimalStepsAreExact)
{
  const auto taus = ReachabilityConfig{}.tau_grid();
  EXPECT_EQ(taus[16], 1.7);
  EXPECT_EQ(taus[2], 0.3);
  EXPECT_EQ(taus[59], 6.0);
}

TEST(ReachabilityConfig, Validation)
{
  ReachabilityConfig cfg;
  cfg.dt = 0.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.a_max = -1.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.horizon = 0.05;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(PedestrianReachableSet, StaticDiscGrowth)
{
  ReachabilityConfig cfg;
  cfg.dt = 1.0;
  cfg.horizon = 1.0;
  const auto set = pedestrian_reachable_set(ped("p", Vec2(3, 4)), cfg);
  ASSERT_EQ(set.samples.size(), 1u);
  const auto & d = std::get<Disc>(set.samples[0].shape);
  EXPECT_TRUE(d.center.isApprox(Vec2(3, 4)));
  EXPECT_DOUBLE_EQ(d.radius, 1.3);
}

// Property: the disc contains every sampled constant-acceleration endpoint.
TEST(PedestrianReachableSet, ContainsSampledTrajectories)
{
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ReachabilityConfig cfg;
  for (int i = 0; i < 50; ++i) {
    const PedestrianState p = ped("p", Vec2(5 * u(rng), 5 * u(rng)), Vec2(2 * u(rng), 2 * u(rng)));
    const auto set = pedestrian_reachable_set(p, cfg);
    for (const auto & s : set.samples) {
      const auto & d = std::get<Disc>(s.shape);
      for (int k = 0; k < 16; ++k) {
        const double ang = 2.0 * std::numbers::pi * k / 16.0;
        const Vec2 a = cfg.a_max * std::abs(u(rng)) * Vec2(std::cos(ang), std::sin(ang));
        const Vec2 x = p.position + p.velocity * s.tau + 0.5 * a * s.tau * s.tau;
        EXPECT_LE((x - d.center).norm() + p.body_radius, d.radius + 1e-9);
      }
    }
  }
}

TEST(PedestrianReachableSet, PureTranslation)
{
  ReachabilityConfig cfg;
  cfg.a_max = 0.0;
  cfg.dt = 1.0;
  cfg.horizon = 2.0;
  cfg.av_swept = false;
  const auto set = pedestrian_reachable_set(ped("p", Vec2(0, 0), Vec2(1, 0)), cfg);
  const auto & d = std::get<Disc>(set.samples[1].shape);
  EXPECT_TRUE(d.center.isApprox(Vec2(2, 0)));
  EXPECT_DOUBLE_EQ(d.radius, 0.3);
}

TEST(PedestrianReachableSet, IntervalHullCoversStep)
{
  ReachabilityConfig cfg;
  const auto p = ped("p", Vec2(1, 2), Vec2(1.5, -0.5));
  const auto set = pedestrian_reachable_set(p, cfg);
  for (const auto & s : set.samples) {
    const auto & hull = std::get<Disc>(s.shape);
    for (int k = 0; k <= 20; ++k) {
      const double t = s.tau - cfg.dt + cfg.dt * k / 20.0;
      const Disc d{p.position + p.velocity * t, p.body_radius + 0.5 * cfg.a_max * t * t};
      EXPECT_LE((d.center - hull.center).norm() + d.radius, hull.radius + 1e-12) << s.tau;
    }
  }
}

TEST(AvReachableSet, StaticAvIsConstant)
{
  const auto f = straight_frame(0.0);
  ReachabilityConfig cfg;
  cfg.av_swept = false;
  const auto set = av_reachable_set(f.av, frame_path(f), cfg);
  for (const auto & s : set.samples) {
    const auto & r = std::get<OrientedRect>(s.shape);
    EXPECT_TRUE(r.center.isApprox(Vec2(0, 0)));
    EXPECT_DOUBLE_EQ(r.half_length, 2.25);
    EXPECT_DOUBLE_EQ(r.half_width, 0.95);
  }
  EXPECT_FALSE(set.clamped);
}

TEST(AvReachableSet, DownstreamOffset)
{
  AvState av;
  av.speed = 10.0;
  av.arc_offset = 0.0;
  const Polyline path({Vec2(0, 0), Vec2(100, 0)});
  ReachabilityConfig cfg;
  cfg.av_swept = false;
  const auto set = av_reachable_set(av, path, cfg);
  // tau = 1.7 is grid point 17
  const auto & s = set.samples[16];
  EXPECT_NEAR(s.tau, 1.7, 1e-12);
  EXPECT_NEAR(std::get<OrientedRect>(s.shape).center.x(), 17.0, 1e-9);
}

TEST(AvReachableSet, ClampedAtPathEnd)
{
  AvState av;
  av.speed = 10.0;
  const Polyline path({Vec2(0, 0), Vec2(5, 0)});
  ReachabilityConfig cfg;
  cfg.dt = 1.0;
  cfg.horizon = 1.0;
  cfg.av_swept = false;
  const auto set = av_reachable_set(av, path, cfg);
  EXPECT_TRUE(set.clamped);
  EXPECT_TRUE(std::get<OrientedRect>(set.samples[0].shape).center.isApprox(Vec2(5, 0)));
  cfg.av_swept = true;
  const auto swept = av_reachable_set(av, path, cfg);
  EXPECT_TRUE(swept.clamped);
  EXPECT_TRUE(std::get<Corridor>(swept.samples[0].shape).rects.back().center.isApprox(Vec2(5, 0)));
}

TEST(AvReachableSet, OffsetOutsidePathThrows)
{
  AvState av;
  av.arc_offset = 6.0;
  EXPECT_THROW(av_reachable_set(av, Polyline({Vec2(0, 0), Vec2(5, 0)}), {}), OutOfPathError);
}

TEST(AvReachableSet, SweptCorridorCoversStep)
{
  AvState av;
  av.speed = 10.0;
  const Polyline path({Vec2(0, 0), Vec2(100, 0)});
  ReachabilityConfig cfg;
  cfg.av_swept = true;
  const auto set = av_reachable_set(av, path, cfg);
  const auto & c = std::get<Corridor>(set.samples[9].shape);
  EXPECT_NEAR(c.rects.front().center.x(), 9.0, 1e-9);
  EXPECT_NEAR(c.rects.back().center.x(), 10.0, 1e-9);
  for (std::size_t k = 1; k < c.rects.size(); ++k) {
    EXPECT_LE((c.rects[k].center - c.rects[k - 1].center).norm(), 0.25 + 1e-12);
  }
}

TEST(AvReachableSet, SweptCorridorKeepsIncomingHeadingAtVertex)
{
  AvState av;
  av.speed = 10.0;
  const Polyline path({Vec2(0, 0), Vec2(9.5, 0), Vec2(9.5, 50)});
  const auto set = av_reachable_set(av, path, {});
  const auto & c = std::get<Corridor>(set.samples[9].shape);
  const bool has_incoming = std::any_of(c.rects.begin(), c.rects.end(), [](const auto & r) {
    return r.center.isApprox(Vec2(9.5, 0)) && r.heading == 0.0;
  });
  EXPECT_TRUE(has_incoming);
}

// A pedestrian grazing the AV rear between grid points: the point model
// misses the contact entirely, the interval enclosure catches it.
TEST(ComputeTtcRsb, ContactBetweenGridPoints)
{
  auto f = straight_frame(10.0704, {});
  f.av.arc_offset = 20.0;
  f.pedestrians.push_back(ped("p", Vec2(13.1373, -2.53707), Vec2(-0.222022, -0.639275), 0.253514));
  const auto path = frame_path(f);
  SampledTrajectoryConfig scfg;
  const double hit = sampled_ttc(f.av, path, f.pedestrians[0], 2.0, 6.0, scfg);
  ASSERT_TRUE(std::isfinite(hit));
  ReachabilityConfig point;
  point.av_swept = false;
  EXPECT_TRUE(std::isinf(annotate_frame_ttc(f, point)[0].ttc));
  const double ttc = annotate_frame_ttc(f, {})[0].ttc;
  EXPECT_LE(ttc, hit + 0.1);
}

TEST(ComputeTtcRsb, FarPedestrianIsInfinite)
{
  const auto f = straight_frame(10.0, {ped("p", Vec2(0, 500))});
  const auto r = annotate_frame_ttc(f, {});
  ASSERT_EQ(r.size(), 1u);
  EXPECT_TRUE(std::isinf(r[0].ttc));
  EXPECT_FALSE(r[0].first_hit_tau.has_value());
}

TEST(ComputeTtcRsb, HeadOnMatchesScalarInequality)
{
  const auto f = straight_frame(10.0, {ped("p", Vec2(20, 0))});
  ReachabilityConfig cfg;
  double expected = kInfinity;
  for (double tau : cfg.tau_grid()) {
    if (10.0 * tau + 2.25 + 0.3 + tau * tau >= 20.0) {
      expected = tau;
      break;
    }
  }
  const auto r = annotate_frame_ttc(f, cfg);
  EXPECT_EQ(r[0].ttc, expected);
  EXPECT_NEAR(expected, 1.6, 1e-12);

  // and bounds the sampled collision times from below, up to one step
  const auto path = frame_path(f);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SampledTrajectoryConfig scfg;
    scfg.seed = seed;
    const double sampled = sampled_ttc(f.av, path, f.pedestrians[0], cfg.a_max, cfg.horizon, scfg);
    EXPECT_LE(r[0].ttc, sampled + cfg.dt);
  }
}

// A static AV never approaches, so TTC_RSB is set by the pedestrian's own
// reach alone: 0.3 + tau^2 >= gap.
TEST(ComputeTtcRsb, StaticAvTtcFollowsPedestrianReach)
{
  ReachabilityConfig cfg;
  for (double gap : {3.0, 5.0, 12.0}) {
    const auto f = straight_frame(0.0, {ped("p", Vec2(0, 0.95 + gap))});
    double expected = kInfinity;
    for (double tau : cfg.tau_grid()) {
      if (0.3 + tau * tau >= gap) {
        expected = tau;
        break;
      }
    }
    EXPECT_EQ(annotate_frame_ttc(f, cfg)[0].ttc, expected) << "gap " << gap;
  }
  // 3 m: first hit at 1.7 s, so the pedestrian is not invisible to TTC_RSB
  const auto f = straight_frame(0.0, {ped("p", Vec2(0, 3.95))});
  EXPECT_NEAR(annotate_frame_ttc(f, cfg)[0].ttc, 1.7, 1e-12);
}

TEST(ComputeTtcRsb, StaticAvInfiniteOnlyWithoutPedestrianReach)
{
  ReachabilityConfig cfg;
  cfg.a_max = 0.0;
  const auto f = straight_frame(0.0, {ped("p", Vec2(0, 3.95))});
  EXPECT_TRUE(std::isinf(annotate_frame_ttc(f, cfg)[0].ttc));
}

TEST(ComputeTtcRsb, GridMismatchIsConfigError)
{
  const auto f = straight_frame(1.0);
  ReachabilityConfig a;
  ReachabilityConfig b;
  b.dt = 0.2;
  const auto av = av_reachable_set(f.av, frame_path(f), a);
  const auto p = pedestrian_reachable_set(ped("p", Vec2(1, 1)), b);
  EXPECT_THROW(compute_ttc_rsb(av, p), ConfigError);
}

TEST(ComputeTtcRsb, IntersectsNeedsADisc)
{
  const OrientedRect r{Vec2(0, 0), 1, 1, 0};
  EXPECT_THROW(intersects(r, r), DomainError);
}

TEST(AnnotateFrameTtc, EmptyAndSortedIds)
{
  EXPECT_TRUE(annotate_frame_ttc(straight_frame(1.0), {}).empty());
  const auto f = straight_frame(5.0, {ped("b", Vec2(30, 5)), ped("a", Vec2(10, -4))});
  const auto r = annotate_frame_ttc(f, {});
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].pedestrian_id, "a");
  EXPECT_EQ(r[1].pedestrian_id, "b");
}

TEST(AnnotateFrameTtc, FixtureEqualsPerPedestrianCalls)
{
  const auto frames = load_scene(PEDCRIT_TEST_DATA "/crossing.json");
  ReachabilityConfig cfg;
  for (const auto & f : frames) {
    const auto all = annotate_frame_ttc(f, cfg);
    const auto av = av_reachable_set(f.av, frame_path(f), cfg);
    for (const auto & p : f.pedestrians) {
      const auto one = compute_ttc_rsb(av, pedestrian_reachable_set(p, cfg));
      const auto it = std::find_if(all.begin(), all.end(), [&](const TtcResult & t) {
        return t.pedestrian_id == p.id;
      });
      ASSERT_NE(it, all.end());
      EXPECT_EQ(it->ttc, one.ttc);
    }
  }
}

TEST(ReachabilityProperties, RadiusStrictlyIncreasing)
{
  const auto set = pedestrian_reachable_set(ped("p", Vec2(1, 2), Vec2(1, 0)), {});
  for (std::size_t k = 1; k < set.samples.size(); ++k) {
    EXPECT_GT(std::get<Disc>(set.samples[k].shape).radius, std::get<Disc>(set.samples[k - 1].shape).radius);
  }
}

namespace
{

SceneFrame random_frame(std::mt19937_64 & rng)
{
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<PedestrianState> peds;
  for (int i = 0; i < 4; ++i) {
    peds.push_back(ped(
      "p" + std::to_string(i), Vec2(20 + 25 * u(rng), 15 * u(rng)), Vec2(1.5 * u(rng), 1.5 * u(rng))));
  }
  return straight_frame(6.0 + 6.0 * u(rng), std::move(peds));
}

}  // namespace

TEST(ReachabilityProperties, MonotoneInAccelerationBound)
{
  std::mt19937_64 rng(21);
  for (int i = 0; i < 60; ++i) {
    const auto f = random_frame(rng);
    ReachabilityConfig lo;
    lo.a_max = 0.5;
    ReachabilityConfig hi;
    hi.a_max = 2.5;
    const auto a = annotate_frame_ttc(f, lo);
    const auto b = annotate_frame_ttc(f, hi);
    for (std::size_t k = 0; k < a.size(); ++k) {
      EXPECT_LE(b[k].ttc, a[k].ttc);
    }
  }
}

TEST(ReachabilityProperties, MonotoneInHorizon)
{
  std::mt19937_64 rng(22);
  for (int i = 0; i < 60; ++i) {
    const auto f = random_frame(rng);
    ReachabilityConfig shorter;
    shorter.horizon = 3.0;
    ReachabilityConfig longer;
    longer.horizon = 8.0;
    const auto a = annotate_frame_ttc(f, shorter);
    const auto b = annotate_frame_ttc(f, longer);
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (std::isfinite(a[k].ttc)) {
        EXPECT_EQ(a[k].ttc, b[k].ttc);
      }
    }
  }
}

TEST(ReachabilityProperties, TranslationInvariance)
{
  std::mt19937_64 rng(23);
  for (int i = 0; i < 60; ++i) {
    const auto f = random_frame(rng);
    auto g = f;
    // power-of-two shift keeps coordinates exact
    const Vec2 shift(64.0, -32.0);
    g.av.position += shift;
    for (auto & c : g.centerlines) {
      for (auto & p : c.points) p += shift;
    }
    for (auto & p : g.pedestrians) p.position += shift;
    const auto a = annotate_frame_ttc(f, {});
    const auto b = annotate_frame_ttc(g, {});
    for (std::size_t k = 0; k < a.size(); ++k) {
      EXPECT_EQ(a[k].ttc, b[k].ttc);
    }
  }
}

// Property: over-approximation never trails the straight-line contact time.
TEST(AnnotateFrameTtc, NotLaterThanStraightLineContact)
{
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    ScenarioSpec spec;
    spec.kind = ScenarioTemplate::kCrossing;
    spec.seed = seed;
    spec.n_pedestrians = 3;
    const auto scene = generate(spec);
    const auto r = annotate_frame_ttc(scene.frames[0], {});
    for (const auto & t : scene.truth) {
      ASSERT_TRUE(t.straight_line_ttc.has_value());
      const auto it = std::find_if(r.begin(), r.end(), [&](const TtcResult & x) {
        return x.pedestrian_id == t.pedestrian_id;
      });
      ASSERT_NE(it, r.end());
      if (*t.straight_line_ttc <= 6.0) {
        EXPECT_LE(it->ttc, *t.straight_line_ttc + 0.1) << "seed " << seed;
      }
    }
  }
}
