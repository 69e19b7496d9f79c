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

// pedcrit: reachability-based pedestrian criticality, curation and
// zone-based evaluation.

#include "pedcrit/config.hpp"
#include "pedcrit/error.hpp"
#include "pedcrit/loss.hpp"
#include "pedcrit/pipeline.hpp"
#include "pedcrit/records.hpp"
#include "pedcrit/scenario.hpp"
#include "pedcrit/scene.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using namespace pedcrit;

namespace
{

constexpr int kExitError = 1;
constexpr int kExitUnsound = 2;

struct Globals
{
  std::string config_path;
  int jobs = 1;
  bool explain = false;
  bool stamp = false;
  ConfigOverrides flags;
};

void add_config_flags(CLI::App & app, ConfigOverrides & f)
{
  const std::string group = "Run configuration";
  app.add_option("--dt", f.dt, "Reachability time step [s]")->group(group);
  app.add_option("--horizon", f.horizon, "Reachability horizon [s]; defaults to ttc-max")
    ->group(group);
  app.add_option("--a-max", f.a_max, "Pedestrian acceleration bound [m/s^2]")->group(group);
  app.add_option("--av-swept", f.av_swept, "Enclose each time step interval; 0 samples instants only")
    ->group(group)
    ->expected(0, 1)
    ->default_str("true");
  app.add_option("--d-max", f.d_max, "Distance at which kappa_d reaches 0 [m]")->group(group);
  app.add_option("--ttc-max", f.ttc_max, "TTC at which kappa_c reaches 0 [s]")->group(group);
  app.add_option("--ttc-crit", f.ttc_crit, "Critical-zone TTC threshold [s]")->group(group);
  app.add_option("--d-crit", f.d_crit, "Critical-zone distance threshold [m]")->group(group);
  app.add_option("--mode", f.mode, "composed | collision_only | distance_only")->group(group);
  app.add_option("--distance-ref", f.distance_ref, "footprint | center")->group(group);
  app.add_option("--alpha", f.alpha, "Focal loss alpha")->group(group);
  app.add_option("--gamma", f.gamma, "Focal loss gamma")->group(group);
  app.add_option("--eps", f.eps, "Probability clamp")->group(group);
  app.add_option("--iou-threshold", f.iou_threshold, "Matching IoU threshold")->group(group);
}

RunConfig load_run_config(const Globals & g)
{
  ConfigOverrides file;
  if (!g.config_path.empty()) {
    file = load_config_file(g.config_path);
  }
  return resolve_config(file, g.flags);
}

int resolve_jobs(int jobs)
{
  if (jobs > 0) {
    return jobs;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::string utc_now()
{
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Adds a generation timestamp to a JSON report when --stamp is given.
std::string maybe_stamp(const std::string & text, bool stamp)
{
  if (!stamp) {
    return text;
  }
  auto j = nlohmann::ordered_json::parse(text);
  j["stamp"] = utc_now();
  return j.dump(2) + "\n";
}

void emit(const std::string & out_path, const std::string & text)
{
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    write_text_file(out_path, text);
  }
}

std::vector<double> parse_list(const std::string & s)
{
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) {
        throw std::invalid_argument(item);
      }
    } catch (const std::exception &) {
      throw ConfigError("not a number list: '" + s + "'");
    }
  }
  if (out.empty()) {
    throw ConfigError("empty number list");
  }
  return out;
}

std::vector<double> range_edges(const std::string & spec)
{
  // "lo:step:hi" or an explicit comma list.
  if (std::count(spec.begin(), spec.end(), ':') == 2) {
    std::string s = spec;
    std::replace(s.begin(), s.end(), ':', ',');
    const auto v = parse_list(s);
    if (!(v[1] > 0.0) || !(v[2] > v[0])) {
      throw ConfigError("bad edge range '" + spec + "'");
    }
    std::vector<double> edges;
    const auto n = static_cast<int>(std::floor((v[2] - v[0]) / v[1] + 1e-9));
    for (int k = 0; k <= n; ++k) {
      edges.push_back(v[0] + k * v[1]);
    }
    return edges;
  }
  return parse_list(spec);
}

struct AnnotateOpts
{
  std::string scene;
  std::string out;
};

int run_annotate(const Globals & g, const AnnotateOpts & o)
{
  const auto cfg = load_run_config(g);
  const auto frames = load_scene(o.scene);
  const auto annotated = annotate_scene(frames, cfg, resolve_jobs(g.jobs));
  emit(o.out, maybe_stamp(write_annotations(annotated, cfg), g.stamp));
  std::cerr << zone_summary(annotated);
  return 0;
}

struct CurateOpts
{
  std::string scene;
  std::string annotations;
  std::string out;
  std::string discards;
};

int run_curate(const Globals & g, const CurateOpts & o)
{
  const auto cfg = load_run_config(g);
  const auto frames = load_scene(o.scene);
  const auto jobs = resolve_jobs(g.jobs);
  const auto annotated = o.annotations.empty() ? annotate_scene(frames, cfg, jobs)
                                               : parse_annotations(read_text_file(o.annotations));
  const auto set = curate_scene(frames, annotated, jobs);
  emit(o.out, maybe_stamp(write_curated(set, cfg), g.stamp));
  if (!o.discards.empty()) {
    write_text_file(o.discards, maybe_stamp(write_discard_report(set), g.stamp));
  }
  std::cerr << "kept " << set.boxes.size() << ", discarded " << set.discards.size() << "\n";
  return 0;
}

struct EvaluateOpts
{
  std::string curated;
  std::string detections;
  std::string out;
  std::string heatmap_csv;
  std::string visibility_csv;
};

int run_evaluate(const Globals & g, const EvaluateOpts & o)
{
  const auto cfg = load_run_config(g);
  const auto curated = parse_curated(read_text_file(o.curated));
  const auto dets = load_detections(o.detections);
  const auto report = evaluate(dets, curated.boxes, curated.frame_ids, cfg.eval);
  write_text_file(o.out, maybe_stamp(write_eval_report(report, cfg), g.stamp));
  if (!o.heatmap_csv.empty()) {
    write_text_file(o.heatmap_csv, report.heatmap.to_csv());
  }
  if (!o.visibility_csv.empty()) {
    write_text_file(o.visibility_csv, report.visibility.to_csv());
  }
  std::cout << eval_table_row(report);
  return 0;
}

struct EndToEndOpts
{
  std::string scene;
  std::string detections;
  std::string work_dir;
};

int run_end_to_end(const Globals & g, const EndToEndOpts & o)
{
  const auto cfg = load_run_config(g);
  const auto jobs = resolve_jobs(g.jobs);
  const fs::path dir(o.work_dir);
  // Read both inputs up front so a missing file fails before anything is written.
  const auto frames = load_scene(o.scene);
  const auto dets = load_detections(o.detections);

  const auto annotated = annotate_scene(frames, cfg, jobs);
  write_text_file(dir / "annotations.json", maybe_stamp(write_annotations(annotated, cfg), g.stamp));
  std::cerr << zone_summary(annotated);

  const auto set = curate_scene(frames, annotated, jobs);
  write_text_file(dir / "curated.json", maybe_stamp(write_curated(set, cfg), g.stamp));
  write_text_file(dir / "discards.json", maybe_stamp(write_discard_report(set), g.stamp));

  const auto report = evaluate(dets, set.boxes, set.frame_ids, cfg.eval);
  write_text_file(dir / "eval.json", maybe_stamp(write_eval_report(report, cfg), g.stamp));
  write_text_file(dir / "heatmap.csv", report.heatmap.to_csv());
  write_text_file(dir / "visibility.csv", report.visibility.to_csv());
  const auto table = eval_table_row(report);
  write_text_file(dir / "table.txt", table);
  std::cout << table;
  return 0;
}

struct LossTableOpts
{
  std::string kappas = "0,0.5,1";
  double p_min = 0.1;
  double p_max = 0.999;
  int steps = 200;
  std::string out;
};

int run_loss_table(const Globals & g, const LossTableOpts & o)
{
  const auto cfg = load_run_config(g);
  const auto table = emit_loss_curves(cfg.loss, parse_list(o.kappas), o.p_min, o.p_max, o.steps);
  emit(o.out, table.to_csv());
  return 0;
}

struct HeatmapOpts
{
  std::string annotations;
  std::string scene;
  std::string ttc_edges;
  std::string dist_edges;
  std::string out;
};

int run_heatmap(const Globals & g, const HeatmapOpts & o)
{
  const auto cfg = load_run_config(g);
  if (o.annotations.empty() == o.scene.empty()) {
    throw ConfigError("heatmap needs exactly one of --annotations or --scene");
  }
  const auto annotated = o.annotations.empty()
                           ? annotate_scene(load_scene(o.scene), cfg, resolve_jobs(g.jobs))
                           : parse_annotations(read_text_file(o.annotations));
  std::vector<CriticalityRecord> records;
  for (const auto & f : annotated) {
    records.insert(records.end(), f.records.begin(), f.records.end());
  }
  const auto ttc_edges = o.ttc_edges.empty() ? cfg.eval.ttc_edges : range_edges(o.ttc_edges);
  const auto dist_edges = o.dist_edges.empty() ? cfg.eval.dist_edges : range_edges(o.dist_edges);
  const auto grid = heatmap_counts(records, ttc_edges, dist_edges);
  emit(o.out, grid.to_csv());
  std::cerr << "in grid " << grid.total_in_grid() << ", distance overflow "
            << grid.distance_overflow << ", underflow " << grid.underflow << "\n";
  return 0;
}

struct AuditOpts
{
  std::string scene;
  std::string out;
  SampledTrajectoryConfig sampling;
};

int run_audit(const Globals & g, const AuditOpts & o)
{
  const auto cfg = load_run_config(g);
  o.sampling.validate(cfg.reach.dt);
  const auto rows = audit_scene(load_scene(o.scene), cfg.reach, o.sampling, resolve_jobs(g.jobs));
  emit(o.out, write_audit_csv(rows));
  const auto bad = std::count_if(rows.begin(), rows.end(), [](const AuditRow & r) {
    return !r.sound;
  });
  std::cerr << "audited " << rows.size() << ", unsound " << bad << "\n";
  return bad == 0 ? 0 : kExitUnsound;
}

struct GenerateOpts
{
  std::string kind = "random";
  ScenarioSpec spec;
  bool no_urban_bound = false;
  std::string out;
  std::string truth_out;
  std::string detections_out;
  double miss_rate = 0.2;
  int false_positives = 1;
};

std::string serialize_truth(const GeneratedScene & scene)
{
  nlohmann::ordered_json root;
  root["bounds"] = {
    {"av_speed_max", scene.bounds.av_speed_max},
    {"ped_speed_max", scene.bounds.ped_speed_max},
    {"body_radius_max", scene.bounds.body_radius_max},
    {"min_clearance", scene.bounds.min_clearance},
    {"straight_road", scene.bounds.straight_road}};
  auto rows = nlohmann::ordered_json::array();
  for (const auto & t : scene.truth) {
    nlohmann::ordered_json ttc = nullptr;
    if (t.straight_line_ttc && std::isfinite(*t.straight_line_ttc)) {
      ttc = *t.straight_line_ttc;
    }
    rows.push_back(
      {{"frame_id", t.frame_id},
       {"pedestrian_id", t.pedestrian_id},
       {"straight_line_ttc", ttc},
       {"footprint_distance", t.footprint_distance}});
  }
  root["pedestrians"] = rows;
  return root.dump(2) + "\n";
}

// Noisy detector stand-in: drops some GTs, jitters the rest and adds false
// positives. Seeded from the scenario seed.
std::vector<Detection> synthesize_detections(
  const std::vector<SceneFrame> & frames, std::uint64_t seed, double miss_rate, int n_fp)
{
  const RunConfig cfg = resolve_config({}, {});
  const auto annotated = annotate_scene(frames, cfg);
  const auto set = curate_scene(frames, annotated);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Detection> dets;
  for (const auto & b : set.boxes) {
    if (u(rng) < miss_rate) {
      continue;
    }
    const double w = b.box.width();
    const double h = b.box.height();
    Box2D box{
      b.box.x_min + (u(rng) - 0.5) * 0.2 * w, b.box.y_min + (u(rng) - 0.5) * 0.2 * h,
      b.box.x_max + (u(rng) - 0.5) * 0.2 * w, b.box.y_max + (u(rng) - 0.5) * 0.2 * h};
    dets.push_back({b.frame_id, box, std::round((0.3 + 0.7 * u(rng)) * 1e4) / 1e4,
                    std::string(kPedestrianClass)});
  }
  for (const auto & f : frames) {
    for (int k = 0; k < n_fp; ++k) {
      const double x = u(rng) * (f.camera.image_width - 60);
      const double y = u(rng) * (f.camera.image_height - 120);
      dets.push_back({f.frame_id, Box2D{x, y, x + 30 + 30 * u(rng), y + 60 + 60 * u(rng)},
                      std::round(0.6 * u(rng) * 1e4) / 1e4, std::string(kPedestrianClass)});
    }
  }
  for (auto & d : dets) {
    d.box.x_min = std::round(d.box.x_min * 100) / 100;
    d.box.y_min = std::round(d.box.y_min * 100) / 100;
    d.box.x_max = std::round(d.box.x_max * 100) / 100;
    d.box.y_max = std::round(d.box.y_max * 100) / 100;
  }
  return dets;
}

int run_generate(const GenerateOpts & o)
{
  auto spec = o.spec;
  const auto kind = parse_template(o.kind);
  if (!kind) {
    throw ConfigError("unknown template '" + o.kind + "'");
  }
  spec.kind = *kind;
  spec.urban_bound = !o.no_urban_bound;
  spec.validate();
  const auto scene = generate(spec);
  emit(o.out, serialize_scene(scene.frames));
  if (!o.truth_out.empty()) {
    write_text_file(o.truth_out, serialize_truth(scene));
  }
  if (!o.detections_out.empty()) {
    write_text_file(
      o.detections_out,
      serialize_detections(
        synthesize_detections(scene.frames, spec.seed, o.miss_rate, o.false_positives)));
  }
  return 0;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Reachability-based pedestrian criticality, curation and zone-based evaluation"};
  app.name("pedcrit");
  app.require_subcommand(0, 1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--jobs,-j", g.jobs, "Worker threads; 0 uses all cores")->capture_default_str();
  app.add_flag("--explain-config", g.explain, "Print each setting and where it came from");
  app.add_flag("--stamp", g.stamp, "Embed a UTC timestamp in JSON reports");
  add_config_flags(app, g.flags);

  AnnotateOpts annotate_o;
  auto * annotate = app.add_subcommand("annotate", "Back-annotate criticality scores");
  annotate->add_option("--scene", annotate_o.scene, "Scene file")->required();
  annotate->add_option("--out,-o", annotate_o.out, "Record file (stdout if omitted)");

  CurateOpts curate_o;
  auto * curate = app.add_subcommand("curate", "Project cuboids to 2D boxes and filter by FOV");
  curate->add_option("--scene", curate_o.scene, "Scene file")->required();
  curate->add_option("--annotations", curate_o.annotations, "Record file; recomputed if omitted");
  curate->add_option("--out,-o", curate_o.out, "Curated-box file (stdout if omitted)");
  curate->add_option("--discards", curate_o.discards, "Discard report");

  EvaluateOpts eval_o;
  auto * evaluate_cmd = app.add_subcommand("evaluate", "Zone-based evaluation of detections");
  evaluate_cmd->add_option("--curated", eval_o.curated, "Curated-box file")->required();
  evaluate_cmd->add_option("--detections", eval_o.detections, "Detection file")->required();
  evaluate_cmd->add_option("--out,-o", eval_o.out, "Report file")->required();
  evaluate_cmd->add_option("--heatmap-csv", eval_o.heatmap_csv, "GT heatmap as CSV");
  evaluate_cmd->add_option("--visibility-csv", eval_o.visibility_csv, "Visibility recall CSV");

  EndToEndOpts e2e_o;
  auto * e2e = app.add_subcommand("end-to-end", "annotate, curate and evaluate");
  e2e->add_option("--scene", e2e_o.scene, "Scene file")->required();
  e2e->add_option("--detections", e2e_o.detections, "Detection file")->required();
  e2e->add_option("--work-dir", e2e_o.work_dir, "Output directory")->required();

  LossTableOpts loss_o;
  auto * loss = app.add_subcommand("loss-table", "FL and FL_kappa curves as CSV");
  loss->add_option("--kappas", loss_o.kappas, "Comma-separated kappa values")
    ->capture_default_str();
  loss->add_option("--p-min", loss_o.p_min)->capture_default_str();
  loss->add_option("--p-max", loss_o.p_max)->capture_default_str();
  loss->add_option("--steps", loss_o.steps)->capture_default_str();
  loss->add_option("--out,-o", loss_o.out, "CSV file (stdout if omitted)");

  HeatmapOpts heat_o;
  auto * heat = app.add_subcommand("heatmap", "Pedestrian counts over (TTC, distance) bins");
  heat->add_option("--annotations", heat_o.annotations, "Record file");
  heat->add_option("--scene", heat_o.scene, "Scene file (annotated on the fly)");
  heat->add_option("--ttc-edges", heat_o.ttc_edges, "lo:step:hi or comma list");
  heat->add_option("--dist-edges", heat_o.dist_edges, "lo:step:hi or comma list");
  heat->add_option("--out,-o", heat_o.out, "CSV file (stdout if omitted)");

  AuditOpts audit_o;
  auto * audit = app.add_subcommand("audit-ttc", "Check TTC_RSB against sampled trajectories");
  audit->add_option("--scene", audit_o.scene, "Scene file")->required();
  audit->add_option("--out,-o", audit_o.out, "CSV file (stdout if omitted)");
  audit->add_option("--directions", audit_o.sampling.n_directions)->capture_default_str();
  audit->add_option("--magnitudes", audit_o.sampling.n_magnitudes)->capture_default_str();
  audit->add_option("--dt-fine", audit_o.sampling.dt_fine)->capture_default_str();
  audit->add_option("--seed", audit_o.sampling.seed)->capture_default_str();

  GenerateOpts gen_o;
  auto * gen = app.add_subcommand("generate", "Synthetic scenes for fixtures");
  gen->group("");
  gen->add_option("--template", gen_o.kind)->capture_default_str();
  gen->add_option("--pedestrians", gen_o.spec.n_pedestrians)->capture_default_str();
  gen->add_option("--av-speed", gen_o.spec.av_speed)->capture_default_str();
  gen->add_option("--seed", gen_o.spec.seed)->capture_default_str();
  gen->add_option("--frames", gen_o.spec.n_frames)->capture_default_str();
  gen->add_option("--frame-interval", gen_o.spec.frame_interval)->capture_default_str();
  gen->add_flag("--curved", gen_o.spec.curved_road);
  gen->add_flag("--no-urban-bound", gen_o.no_urban_bound);
  gen->add_option("--out,-o", gen_o.out, "Scene file (stdout if omitted)");
  gen->add_option("--truth-out", gen_o.truth_out, "Analytic ground-truth file");
  gen->add_option("--detections-out", gen_o.detections_out, "Synthetic detection file");
  gen->add_option("--miss-rate", gen_o.miss_rate)->capture_default_str();
  gen->add_option("--false-positives", gen_o.false_positives)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (g.explain) {
      std::cout << load_run_config(g).explain();
    }
    if (*annotate) return run_annotate(g, annotate_o);
    if (*curate) return run_curate(g, curate_o);
    if (*evaluate_cmd) return run_evaluate(g, eval_o);
    if (*e2e) return run_end_to_end(g, e2e_o);
    if (*loss) return run_loss_table(g, loss_o);
    if (*heat) return run_heatmap(g, heat_o);
    if (*audit) return run_audit(g, audit_o);
    if (*gen) return run_generate(gen_o);
    if (!g.explain) {
      std::cout << app.help();
    }
    return 0;
  } catch (const Error & e) {
    std::cerr << "pedcrit: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception & e) {
    std::cerr << "pedcrit: " << e.what() << "\n";
    return kExitError;
  }
}
