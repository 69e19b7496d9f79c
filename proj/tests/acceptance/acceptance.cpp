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

// Acceptance runner. Prints one line per criterion:
//   criterion N: PASS|FAIL <measurements>
// Usage: pedcrit_acceptance [N ...]   (no arguments runs all eleven)
// Exit status is 0 only if every selected criterion passes.

#include "pedcrit/criticality.hpp"
#include "pedcrit/curation.hpp"
#include "pedcrit/evaluation.hpp"
#include "pedcrit/loss.hpp"
#include "pedcrit/oracle.hpp"
#include "pedcrit/pipeline.hpp"
#include "pedcrit/reachability.hpp"
#include "pedcrit/scenario.hpp"

#include "test_support.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace
{

using namespace pedcrit;
namespace fs = std::filesystem;

struct Outcome
{
  bool pass;
  std::string detail;
};

std::string fmt(const char * f, double v)
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

double rel_err(double a, double b)
{
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

// Independent high-precision reference (mpmath, 40 digits) at p = 0.5,
// alpha 0.25, gamma 2, for kappa = 1, 0.5, 0.
constexpr double kSpotKappa1 = 0.086643397569993164;
constexpr double kSpotKappaHalf = 0.061266133966784199;
constexpr double kSpotKappa0 = 0.043321698784996582;

Outcome loss_identity()
{
  std::size_t mismatches = 0;
  std::size_t n = 0;
  for (double gamma : {1.0, 2.0}) {
    LossParams params;
    params.gamma = gamma;
    for (int i = 0; i < 1000; ++i) {
      const double p = 0.0005 + 0.999 * i / 999.0;
      const auto a = focal_loss(p, params);
      const auto b = safety_focal_loss(p, 0.0, params);
      mismatches += a.value != b.value || a.d_dp != b.d_dp || a.d_dlogit != b.d_dlogit;
      ++n;
    }
  }
  return {mismatches == 0, std::to_string(n) + " points, " + std::to_string(mismatches) + " mismatches"};
}

Outcome loss_dominance()
{
  const LossParams params;
  std::size_t violations = 0;
  for (int i = 0; i <= 10000; ++i) {
    const double p = 0.1 + 0.899 * i / 10000.0;
    const double f0 = safety_focal_loss(p, 0.0, params).value;
    const double fh = safety_focal_loss(p, 0.5, params).value;
    const double f1 = safety_focal_loss(p, 1.0, params).value;
    violations += !(f1 >= fh && fh >= f0);
  }
  const double v1 = safety_focal_loss(0.5, 1.0, params).value;
  const double vh = safety_focal_loss(0.5, 0.5, params).value;
  const double v0 = safety_focal_loss(0.5, 0.0, params).value;
  constexpr double tol = 1e-6;
  const bool spots = std::abs(v1 - kSpotKappa1) < tol && std::abs(vh - kSpotKappaHalf) < tol &&
                     std::abs(v0 - kSpotKappa0) < tol;
  return {
    violations == 0 && spots, "ordering violations " + std::to_string(violations) +
                                "; p=0.5: " + fmt("%.9f", v1) + " / " + fmt("%.9f", vh) + " / " +
                                fmt("%.9f", v0)};
}

Outcome gradient_check()
{
  const LossParams params;
  double worst = 0.0;
  for (double kappa : {0.0, 0.5, 1.0, 2.0}) {
    for (int i = 0; i <= 980; ++i) {
      const double p = 0.01 + 0.001 * i;
      const auto f = [&](double q) { return safety_focal_loss(q, kappa, params).value; };
      const auto e = safety_focal_loss(p, kappa, params);
      const double h = 1e-6 * std::min(p, 1.0 - p);
      worst = std::max(worst, rel_err(e.d_dp, (f(p + h) - f(p - h)) / (2 * h)));
      const double z = std::log(p / (1 - p));
      const double hz = 1e-5;
      const auto g = [&](double zz) { return f(1.0 / (1.0 + std::exp(-zz))); };
      worst = std::max(worst, rel_err(e.d_dlogit, (g(z + hz) - g(z - hz)) / (2 * hz)));
    }
  }
  return {worst < 1e-6, "max relative error " + fmt("%.3e", worst)};
}

Outcome criticality_anchors()
{
  const CriticalityConfig cfg;
  const bool ok = distance_criticality(0.0, cfg) == 1.0 &&
                  distance_criticality(cfg.d_max, cfg) == 0.0 &&
                  distance_criticality(cfg.d_max / 2, cfg) == 0.75 &&
                  collision_criticality(0.0, cfg) == 1.0 &&
                  collision_criticality(cfg.ttc_max, cfg) == 0.0 &&
                  collision_criticality(cfg.ttc_max / 2, cfg) == 0.75 &&
                  compose_kappa(1.0, 0.0, CriticalityMode::kComposed) == 2.0 / 3.0;
  return {ok, "compose(1,0) = " + fmt("%.17g", compose_kappa(1.0, 0.0, CriticalityMode::kComposed))};
}

Outcome ttc_soundness()
{
  std::vector<SceneFrame> frames;
  const ScenarioTemplate kinds[] = {
    ScenarioTemplate::kRandom, ScenarioTemplate::kCrossing, ScenarioTemplate::kStaticNear,
    ScenarioTemplate::kFarCrowd};
  constexpr int kScenarios = 520;
  for (int i = 0; i < kScenarios; ++i) {
    ScenarioSpec spec;
    spec.kind = kinds[i % 4];
    spec.seed = 1000 + static_cast<std::uint64_t>(i);
    spec.n_pedestrians = 3;
    spec.av_speed = spec.kind == ScenarioTemplate::kCrossing ? 5.0 + (i % 9) : 13.4;
    spec.curved_road = i % 5 == 0;
    auto s = generate(spec);
    for (auto & f : s.frames) {
      f.frame_id = "s" + std::to_string(i) + "-" + f.frame_id;
      frames.push_back(std::move(f));
    }
  }
  const auto rows = audit_scene(frames, {}, {}, 0);
  std::size_t violations = 0;
  std::size_t finite = 0;
  for (const auto & r : rows) {
    violations += !r.sound;
    finite += std::isfinite(r.sampled_ttc);
  }
  return {
    violations == 0, std::to_string(kScenarios) + " scenarios, " + std::to_string(rows.size()) +
                       " pedestrians (" + std::to_string(finite) + " sampled hits), " +
                       std::to_string(violations) + " violations"};
}

Outcome blind_spot()
{
  // static AV, pedestrian 3 m to the side of the footprint
  const auto f = testing::straight_frame(0.0, {testing::ped("p", Vec2(0.0, 0.95 + 3.0))});
  const auto r = annotate_frame(f, {}, {});
  const double ttc = r.at(0).ttc;
  const bool ok = std::isinf(ttc) && r[0].kappa_c == 0.0 && r[0].kappa_d > 0.99;
  return {
    ok, "d = " + fmt("%.3f", r[0].distance) + ", ttc = " + fmt("%g", ttc) +
          ", kappa_c = " + fmt("%.4f", r[0].kappa_c) + ", kappa_d = " + fmt("%.4f", r[0].kappa_d) +
          ", zone " + std::string(to_string(r[0].zone))};
}

Outcome zone_partition()
{
  const CriticalityConfig cfg;
  bool ok = assign_zone(1.0, 10.0, cfg) == Zone::kC && assign_zone(5.0, 15.0, cfg) == Zone::kPC;
  for (double t : {0.0, 0.5, 1.7, 3.0, 6.0, kInfinity}) {
    ok = ok && assign_zone(t, 30.0, cfg) == Zone::kNC;
  }
  return {ok, "(1.0,10) C, (5.0,15) PC, (*,30) NC"};
}

Outcome fov_filter_check()
{
  const auto f = testing::straight_frame(0.0);
  const bool a = fov_filter(testing::cuboid_at_bearing("a", testing::deg(0.0), 15.0), f.camera);
  const bool b = fov_filter(testing::cuboid_at_bearing("b", testing::deg(35.0), 15.0), f.camera);
  const bool c = fov_filter(testing::cuboid_at_bearing("c", testing::deg(40.0), 15.0), f.camera);
  const auto word = [](bool keep) { return keep ? "keep" : "discard"; };
  return {
    a && b && !c, std::string("0/35/40 deg: ") + word(a) + ", " + word(b) + ", " + word(c)};
}

Outcome eval_oracle()
{
  std::mt19937_64 rng(2026);
  constexpr int kInstances = 1500;
  int mismatches = 0;
  for (int i = 0; i < kInstances; ++i) {
    const auto inst = testing::random_eval_instance(rng, 20);
    const auto frames = match_frames(inst.dets, inst.gts, inst.frame_ids);
    const auto ap = ap50_binned(frames);
    const bool same = ap.ap50 == testing::oracle_ap(inst, 0.5, -1) &&
                      ap.ap_small == testing::oracle_ap(inst, 0.5, 0) &&
                      ap.ap_mid == testing::oracle_ap(inst, 0.5, 1) &&
                      ap.ap_large == testing::oracle_ap(inst, 0.5, 2) &&
                      zone_recall(frames).recall == testing::oracle_zone_recall(inst, 0.5);
    mismatches += !same;
  }
  return {
    mismatches == 0,
    std::to_string(kInstances) + " instances, " + std::to_string(mismatches) + " mismatches"};
}

Outcome heatmap_structure()
{
  std::vector<CriticalityRecord> records;
  ScenarioBounds bounds{};
  const ScenarioTemplate kinds[] = {
    ScenarioTemplate::kRandom, ScenarioTemplate::kCrossing, ScenarioTemplate::kStaticNear,
    ScenarioTemplate::kFarCrowd};
  for (int i = 0; i < 400; ++i) {
    ScenarioSpec spec;
    spec.kind = kinds[i % 4];
    spec.seed = 5000 + static_cast<std::uint64_t>(i);
    spec.n_pedestrians = 6;
    spec.av_speed = kUrbanSpeedLimit;
    spec.urban_bound = true;
    const auto s = generate(spec);
    bounds = s.bounds;
    for (const auto & f : s.frames) {
      for (auto & r : annotate_frame(f, {}, {})) {
        records.push_back(std::move(r));
      }
    }
  }
  const ReachabilityConfig rcfg;
  // distance the two sets can close within t beyond what the AV covers
  const auto slack = [&](double t) {
    return bounds.body_radius_max + bounds.ped_speed_max * t + 0.5 * rcfg.a_max * t * t;
  };
  std::size_t record_violations = 0;
  for (const auto & r : records) {
    if (std::isfinite(r.ttc) && r.distance > kUrbanSpeedLimit * r.ttc + slack(r.ttc) + 1e-9) {
      ++record_violations;
    }
  }
  const auto grid = heatmap_counts(records, default_ttc_edges(), default_distance_edges());
  std::size_t empty_cells = 0;
  std::size_t nonzero = 0;
  for (std::size_t i = 0; i + 1 < grid.ttc_edges.size(); ++i) {
    const double t_hi = grid.ttc_edges[i + 1];
    for (std::size_t j = 0; j + 1 < grid.dist_edges.size(); ++j) {
      if (grid.dist_edges[j] > kUrbanSpeedLimit * t_hi + slack(t_hi)) {
        ++empty_cells;
        nonzero += grid.counts[i][j] != 0;
      }
    }
  }
  return {
    bounds.straight_road && record_violations == 0 && nonzero == 0 && empty_cells > 0,
    std::to_string(records.size()) + " pedestrians, " + std::to_string(empty_cells) +
      " cells required empty, " + std::to_string(nonzero) + " non-empty, " +
      std::to_string(record_violations) + " record violations"};
}

int run_cli(const std::string & args)
{
  const std::string cmd = std::string(PEDCRIT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome determinism()
{
  const fs::path root = fs::temp_directory_path() / "pedcrit_acceptance_e2e";
  fs::remove_all(root);
  const std::string scene = PEDCRIT_TEST_DATA "/ten_frames.json";
  const std::string dets = PEDCRIT_TEST_DATA "/ten_frames_detections.json";
  const std::vector<std::pair<std::string, int>> runs{{"a", 1}, {"b", 1}, {"c", 8}};
  for (const auto & [name, jobs] : runs) {
    const int code = run_cli(
      "--jobs " + std::to_string(jobs) + " end-to-end --scene " + scene + " --detections " +
      dets + " --work-dir " + (root / name).string());
    if (code != 0) {
      return {false, "end-to-end exited with " + std::to_string(code)};
    }
  }
  std::size_t files = 0;
  std::size_t differing = 0;
  for (const auto & entry : fs::directory_iterator(root / "a")) {
    const auto name = entry.path().filename();
    const auto a = read_text_file(entry.path());
    ++files;
    differing += a != read_text_file(root / "b" / name) || a != read_text_file(root / "c" / name);
  }
  fs::remove_all(root);
  return {
    files >= 7 && differing == 0,
    std::to_string(files) + " files x 3 runs (jobs 1, 1, 8), " + std::to_string(differing) +
      " differ"};
}

struct Criterion
{
  int id;
  double budget_s;
  std::function<Outcome()> fn;
};

}  // namespace

int main(int argc, char ** argv)
{
  const std::vector<Criterion> all{
    {1, 1.0, loss_identity},
    {2, 1.0, loss_dominance},
    {3, 5.0, gradient_check},
    {4, 0.0, criticality_anchors},
    {5, 120.0, ttc_soundness},
    {6, 0.0, blind_spot},
    {7, 0.0, zone_partition},
    {8, 0.0, fov_filter_check},
    {9, 30.0, eval_oracle},
    {10, 0.0, heatmap_structure},
    {11, 0.0, determinism},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    selected.push_back(std::atoi(argv[i]));
  }
  bool all_pass = true;
  for (const auto & c : all) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) {
      continue;
    }
    Outcome o{false, ""};
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = c.fn();
    } catch (const std::exception & e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string timing = fmt("%.2f s", secs);
    if (c.budget_s > 0.0) {
      timing += fmt(" (budget %.0f s)", c.budget_s);
      if (secs >= c.budget_s) {
        o.pass = false;
      }
    }
    all_pass = all_pass && o.pass;
    std::printf(
      "criterion %d: %s %s [%s]\n", c.id, o.pass ? "PASS" : "FAIL", o.detail.c_str(),
      timing.c_str());
    std::fflush(stdout);
  }
  return all_pass ? 0 : 1;
}
