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

#include "pedcrit/records.hpp"

#include "pedcrit/error.hpp"

#include "json_util.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <map>

namespace pedcrit
{

namespace
{

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;
using namespace detail;

ordered_json ttc_json(double ttc)
{
  return std::isinf(ttc) ? ordered_json(nullptr) : ordered_json(ttc);
}

double parse_ttc(const json & j, const std::string & path)
{
  return j.is_null() ? kInfinity : number(j, path);
}

ordered_json optional_json(const std::optional<double> & v)
{
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

Zone parse_zone_field(const json & j, const std::string & path)
{
  const auto z = parse_zone(string(j, path));
  if (!z) {
    throw ParseError(path, "expected one of C, PC, NC");
  }
  return *z;
}

std::string format_cell(const std::optional<double> & v)
{
  if (!v) {
    return "-";
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", *v);
  return buf;
}

std::string format_number(double v)
{
  if (std::isinf(v)) {
    return "inf";
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

std::string write_annotations(std::span<const AnnotatedFrame> frames, const RunConfig & cfg)
{
  ordered_json root;
  root["config"] = cfg.to_json();
  auto records = ordered_json::array();
  for (const auto & f : frames) {
    for (const auto & r : f.records) {
      records.push_back(
        {{"frame_id", f.frame_id},
         {"pedestrian_id", r.pedestrian_id},
         {"ttc", ttc_json(r.ttc)},
         {"distance", r.distance},
         {"kappa_c", r.kappa_c},
         {"kappa_d", r.kappa_d},
         {"kappa", r.kappa},
         {"zone", std::string(to_string(r.zone))}});
    }
  }
  root["frames"] = ordered_json::array();
  for (const auto & f : frames) {
    root["frames"].push_back(f.frame_id);
  }
  root["records"] = records;
  return root.dump(2) + "\n";
}

std::vector<AnnotatedFrame> parse_annotations(std::string_view text)
{
  const json root = parse_json(text);
  std::vector<AnnotatedFrame> frames;
  std::map<std::string, std::size_t> index;
  const auto & ids = array(field(root, "frames", ""), "frames");
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto id = string(ids[i], child("frames", i));
    index.emplace(id, frames.size());
    frames.push_back({id, {}});
  }
  const auto & recs = array(field(root, "records", ""), "records");
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const auto path = child("records", i);
    const auto & j = recs[i];
    const auto frame_id = string(field(j, "frame_id", path), child(path, "frame_id"));
    const auto it = index.find(frame_id);
    if (it == index.end()) {
      throw ParseError(child(path, "frame_id"), "frame '" + frame_id + "' not listed in frames");
    }
    CriticalityRecord r;
    r.pedestrian_id = string(field(j, "pedestrian_id", path), child(path, "pedestrian_id"));
    r.ttc = parse_ttc(field(j, "ttc", path), child(path, "ttc"));
    r.distance = number(field(j, "distance", path), child(path, "distance"));
    r.kappa_c = number(field(j, "kappa_c", path), child(path, "kappa_c"));
    r.kappa_d = number(field(j, "kappa_d", path), child(path, "kappa_d"));
    r.kappa = number(field(j, "kappa", path), child(path, "kappa"));
    r.zone = parse_zone_field(field(j, "zone", path), child(path, "zone"));
    frames[it->second].records.push_back(std::move(r));
  }
  return frames;
}

std::string write_curated(const CuratedSet & set, const RunConfig & cfg)
{
  ordered_json root;
  root["config"] = cfg.to_json();
  root["frames"] = set.frame_ids;
  auto boxes = ordered_json::array();
  for (const auto & b : set.boxes) {
    boxes.push_back(
      {{"frame_id", b.frame_id},
       {"pedestrian_id", b.pedestrian_id},
       {"box", {b.box.x_min, b.box.y_min, b.box.x_max, b.box.y_max}},
       {"diagonal_px", b.diagonal_px},
       {"visibility_bin", b.visibility_bin},
       {"kappa", b.kappa},
       {"zone", std::string(to_string(b.zone))},
       {"ttc", ttc_json(b.ttc)},
       {"distance", b.distance}});
  }
  root["boxes"] = boxes;
  return root.dump(2) + "\n";
}

CuratedSet parse_curated(std::string_view text)
{
  const json root = parse_json(text);
  CuratedSet set;
  const auto & ids = array(field(root, "frames", ""), "frames");
  for (std::size_t i = 0; i < ids.size(); ++i) {
    set.frame_ids.push_back(string(ids[i], child("frames", i)));
  }
  const auto & boxes = array(field(root, "boxes", ""), "boxes");
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const auto path = child("boxes", i);
    const auto & j = boxes[i];
    Curated2DBox b;
    b.frame_id = string(field(j, "frame_id", path), child(path, "frame_id"));
    b.pedestrian_id = string(field(j, "pedestrian_id", path), child(path, "pedestrian_id"));
    const auto v = vector_n<4>(field(j, "box", path), child(path, "box"));
    b.box = {v[0], v[1], v[2], v[3]};
    if (!(b.box.x_min < b.box.x_max && b.box.y_min < b.box.y_max)) {
      throw ParseError(child(path, "box"), "box must have positive area");
    }
    b.diagonal_px = number(field(j, "diagonal_px", path), child(path, "diagonal_px"));
    b.visibility_bin = integer(field(j, "visibility_bin", path), child(path, "visibility_bin"));
    if (b.visibility_bin < 1 || b.visibility_bin > 4) {
      throw ParseError(child(path, "visibility_bin"), "must be in {1,2,3,4}");
    }
    b.kappa = number(field(j, "kappa", path), child(path, "kappa"));
    b.zone = parse_zone_field(field(j, "zone", path), child(path, "zone"));
    b.ttc = parse_ttc(field(j, "ttc", path), child(path, "ttc"));
    b.distance = number(field(j, "distance", path), child(path, "distance"));
    set.boxes.push_back(std::move(b));
  }
  return set;
}

std::string write_discard_report(const CuratedSet & set)
{
  ordered_json root;
  root["summary"] = {
    {"cuboids", set.boxes.size() + set.discards.size()},
    {"kept", set.boxes.size()},
    {"discarded", set.discards.size()}};
  auto discards = ordered_json::array();
  for (const auto & d : set.discards) {
    discards.push_back(
      {{"frame_id", d.frame_id},
       {"pedestrian_id", d.pedestrian_id},
       {"reason", std::string(to_string(d.reason))}});
  }
  root["discards"] = discards;
  return root.dump(2) + "\n";
}

std::string write_eval_report(const EvalReport & r, const RunConfig & cfg)
{
  ordered_json root;
  root["config"] = cfg.to_json();
  root["table"] = {
    {"ap50", optional_json(r.ap.ap50)},
    {"ap_small", optional_json(r.ap.ap_small)},
    {"ap_mid", optional_json(r.ap.ap_mid)},
    {"ap_large", optional_json(r.ap.ap_large)},
    {"recall_c", optional_json(r.zones.c())},
    {"recall_pc", optional_json(r.zones.pc())},
    {"recall_nc", optional_json(r.zones.nc())},
    {"precision", optional_json(r.precision)}};
  root["counts"] = {
    {"gt", r.n_gt},
    {"detections", r.n_detections},
    {"true_positives", r.n_true_positives},
    {"gt_c", r.zones.gt_count[0]},
    {"gt_pc", r.zones.gt_count[1]},
    {"gt_nc", r.zones.gt_count[2]},
    {"matched_c", r.zones.matched[0]},
    {"matched_pc", r.zones.matched[1]},
    {"matched_nc", r.zones.matched[2]}};
  auto vis = ordered_json::array();
  for (std::size_t v = 0; v < 4; ++v) {
    for (std::size_t z = 0; z < 3; ++z) {
      vis.push_back(
        {{"visibility_bin", v + 1},
         {"zone", std::string(to_string(static_cast<Zone>(z)))},
         {"gt_count", r.visibility.gt_count[v][z]},
         {"matched", r.visibility.matched[v][z]},
         {"recall", optional_json(r.visibility.recall[v][z])}});
    }
  }
  root["visibility"] = vis;
  root["heatmap"] = {
    {"ttc_edges", r.heatmap.ttc_edges},
    {"dist_edges", r.heatmap.dist_edges},
    {"counts", r.heatmap.counts},
    {"distance_overflow", r.heatmap.distance_overflow},
    {"underflow", r.heatmap.underflow}};
  return root.dump(2) + "\n";
}

std::string eval_table_row(const EvalReport & r)
{
  std::string out = "AP50    AP^S    AP^M    AP^L    Rec^C   Rec^PC  Rec^NC  Prec\n";
  for (const auto & v :
       {r.ap.ap50, r.ap.ap_small, r.ap.ap_mid, r.ap.ap_large, r.zones.c(), r.zones.pc(),
        r.zones.nc(), r.precision}) {
    auto cell = format_cell(v);
    cell.resize(8, ' ');
    out += cell;
  }
  while (!out.empty() && out.back() == ' ') {
    out.pop_back();
  }
  return out + "\n";
}

std::string write_audit_csv(std::span<const AuditRow> rows)
{
  std::string out = "frame_id,pedestrian_id,ttc_rsb,sampled_ttc,margin,sound\n";
  for (const auto & r : rows) {
    out += r.frame_id + "," + r.pedestrian_id + "," + format_number(r.ttc_rsb) + "," +
           format_number(r.sampled_ttc) + "," + format_number(r.margin) + "," +
           (r.sound ? "true" : "false") + "\n";
  }
  return out;
}

std::string zone_summary(std::span<const AnnotatedFrame> frames)
{
  std::array<std::size_t, 3> counts{};
  std::size_t total = 0;
  for (const auto & f : frames) {
    for (const auto & r : f.records) {
      ++counts[static_cast<std::size_t>(r.zone)];
      ++total;
    }
  }
  return "pedestrians: " + std::to_string(total) + " (C: " + std::to_string(counts[0]) +
         ", PC: " + std::to_string(counts[1]) + ", NC: " + std::to_string(counts[2]) + ")\n";
}

}  // namespace pedcrit
