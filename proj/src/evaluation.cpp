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

#include "pedcrit/evaluation.hpp"

#include "pedcrit/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <set>

namespace pedcrit
{

namespace
{

std::string format_number(double v)
{
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string format_optional(const std::optional<double> & v)
{
  return v ? format_number(*v) : "";
}

std::optional<double> ratio(std::size_t num, std::size_t den)
{
  if (den == 0) {
    return std::nullopt;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

void check_edges(const std::vector<double> & edges, const char * name)
{
  if (edges.size() < 2) {
    throw ConfigError(std::string(name) + " needs at least 2 edges");
  }
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] > edges[i - 1]) || !std::isfinite(edges[i])) {
      throw ConfigError(std::string(name) + " must be finite and strictly increasing");
    }
  }
}

// Index of the half-open bin containing v, or nullopt below the first edge.
// Values at or above the last edge map to edges.size() - 1.
std::optional<std::size_t> bin_of(double v, const std::vector<double> & edges)
{
  if (v < edges.front()) {
    return std::nullopt;
  }
  const auto it = std::upper_bound(edges.begin(), edges.end(), v);
  return static_cast<std::size_t>(std::distance(edges.begin(), it)) - 1;
}

}  // namespace

SizeBin size_bin(double diagonal_px)
{
  if (diagonal_px <= kSmallDiagonalMax) {
    return SizeBin::kSmall;
  }
  if (diagonal_px <= kMidDiagonalMax) {
    return SizeBin::kMid;
  }
  return SizeBin::kLarge;
}

std::size_t zone_index(Zone zone)
{
  return static_cast<std::size_t>(zone);
}

double iou(const Box2D & a, const Box2D & b)
{
  const double iw = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double ih = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (iw <= 0.0 || ih <= 0.0) {
    return 0.0;
  }
  const double inter = iw * ih;
  return inter / (a.area() + b.area() - inter);
}

MatchResult match(
  std::span<const Detection> dets, std::span<const Curated2DBox> gts, double iou_threshold)
{
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&dets](std::size_t a, std::size_t b) {
    return dets[a].confidence > dets[b].confidence;
  });

  MatchResult out;
  std::vector<bool> gt_taken(gts.size(), false);
  for (const auto d : order) {
    std::optional<std::size_t> best;
    double best_iou = -1.0;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (gt_taken[g]) {
        continue;
      }
      const double v = iou(dets[d].box, gts[g].box);
      // strict > keeps the lower GT index on ties
      if (v >= iou_threshold && v > best_iou) {
        best = g;
        best_iou = v;
      }
    }
    if (best) {
      gt_taken[*best] = true;
      out.pairs.push_back({d, *best, best_iou});
    } else {
      out.unmatched_det.push_back(d);
    }
  }
  std::sort(out.unmatched_det.begin(), out.unmatched_det.end());
  for (std::size_t g = 0; g < gts.size(); ++g) {
    if (!gt_taken[g]) {
      out.unmatched_gt.push_back(g);
    }
  }
  return out;
}

std::vector<FrameMatch> match_frames(
  std::span<const Detection> dets, std::span<const Curated2DBox> gts,
  std::span<const std::string> frame_ids, double iou_threshold)
{
  std::map<std::string, FrameMatch> frames;
  for (const auto & id : frame_ids) {
    frames[id].frame_id = id;
  }
  for (const auto & g : gts) {
    const auto it = frames.find(g.frame_id);
    if (it == frames.end()) {
      throw ConfigError("ground-truth box references unknown frame '" + g.frame_id + "'");
    }
    it->second.gts.push_back(g);
  }
  for (const auto & d : dets) {
    const auto it = frames.find(d.frame_id);
    if (it == frames.end()) {
      throw ConfigError("detection references unknown frame '" + d.frame_id + "'");
    }
    it->second.dets.push_back(d);
  }
  std::vector<FrameMatch> out;
  out.reserve(frames.size());
  for (auto & [id, fm] : frames) {
    fm.result = match(fm.dets, fm.gts, iou_threshold);
    out.push_back(std::move(fm));
  }
  return out;
}

ZoneRecall zone_recall(std::span<const FrameMatch> frames)
{
  ZoneRecall out;
  for (const auto & f : frames) {
    for (const auto & g : f.gts) {
      ++out.gt_count[zone_index(g.zone)];
    }
    for (const auto & p : f.result.pairs) {
      ++out.matched[zone_index(f.gts[p.gt].zone)];
    }
  }
  for (std::size_t z = 0; z < 3; ++z) {
    out.recall[z] = ratio(out.matched[z], out.gt_count[z]);
  }
  return out;
}

std::optional<double> average_precision(std::vector<ScoredDetection> scored, std::size_t n_gt)
{
  if (n_gt == 0) {
    return std::nullopt;
  }
  std::stable_sort(scored.begin(), scored.end(), [](const auto & a, const auto & b) {
    return a.confidence > b.confidence;
  });
  std::vector<double> recall;
  std::vector<double> precision;
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (std::size_t i = 0; i < scored.size(); ++i) {
    if (scored[i].kind == ScoredDetection::Kind::kTruePositive) {
      ++tp;
    } else if (scored[i].kind == ScoredDetection::Kind::kFalsePositive) {
      ++fp;
    }
    const bool group_end = i + 1 == scored.size() || scored[i + 1].confidence != scored[i].confidence;
    if (group_end && tp + fp > 0) {
      recall.push_back(static_cast<double>(tp) / static_cast<double>(n_gt));
      precision.push_back(static_cast<double>(tp) / static_cast<double>(tp + fp));
    }
  }
  // precision envelope from the right
  for (std::size_t i = precision.size(); i-- > 1;) {
    precision[i - 1] = std::max(precision[i - 1], precision[i]);
  }
  double ap = 0.0;
  double prev_recall = 0.0;
  for (std::size_t i = 0; i < recall.size(); ++i) {
    if (recall[i] > prev_recall) {
      ap += (recall[i] - prev_recall) * precision[i];
      prev_recall = recall[i];
    }
  }
  return ap;
}

ApResult ap50_binned(std::span<const FrameMatch> frames)
{
  using Kind = ScoredDetection::Kind;
  std::array<std::vector<ScoredDetection>, 4> scored;  // overall, small, mid, large
  std::array<std::size_t, 4> n_gt{};
  for (const auto & f : frames) {
    n_gt[0] += f.gts.size();
    for (const auto & g : f.gts) {
      ++n_gt[1 + static_cast<std::size_t>(size_bin(g.diagonal_px))];
    }
    for (const auto & p : f.result.pairs) {
      const double conf = f.dets[p.det].confidence;
      const auto gt_bin = 1 + static_cast<std::size_t>(size_bin(f.gts[p.gt].diagonal_px));
      scored[0].push_back({conf, Kind::kTruePositive});
      for (std::size_t b = 1; b < 4; ++b) {
        scored[b].push_back({conf, b == gt_bin ? Kind::kTruePositive : Kind::kIgnored});
      }
    }
    for (const auto d : f.result.unmatched_det) {
      const auto & det = f.dets[d];
      const auto own_bin =
        1 + static_cast<std::size_t>(size_bin(std::hypot(det.box.width(), det.box.height())));
      scored[0].push_back({det.confidence, Kind::kFalsePositive});
      for (std::size_t b = 1; b < 4; ++b) {
        scored[b].push_back({det.confidence, b == own_bin ? Kind::kFalsePositive : Kind::kIgnored});
      }
    }
  }
  ApResult out;
  out.ap50 = average_precision(std::move(scored[0]), n_gt[0]);
  out.ap_small = average_precision(std::move(scored[1]), n_gt[1]);
  out.ap_mid = average_precision(std::move(scored[2]), n_gt[2]);
  out.ap_large = average_precision(std::move(scored[3]), n_gt[3]);
  return out;
}

VisibilityTable visibility_breakdown(std::span<const FrameMatch> frames)
{
  VisibilityTable t;
  for (const auto & f : frames) {
    std::vector<bool> matched(f.gts.size(), false);
    for (const auto & p : f.result.pairs) {
      matched[p.gt] = true;
    }
    for (std::size_t g = 0; g < f.gts.size(); ++g) {
      const auto & gt = f.gts[g];
      if (gt.visibility_bin < 1 || gt.visibility_bin > 4) {
        throw DomainError("visibility bin out of range for pedestrian '" + gt.pedestrian_id + "'");
      }
      const auto v = static_cast<std::size_t>(gt.visibility_bin - 1);
      const auto z = zone_index(gt.zone);
      ++t.gt_count[v][z];
      if (matched[g]) {
        ++t.matched[v][z];
      }
    }
  }
  for (std::size_t v = 0; v < 4; ++v) {
    for (std::size_t z = 0; z < 3; ++z) {
      t.recall[v][z] = ratio(t.matched[v][z], t.gt_count[v][z]);
    }
  }
  return t;
}

std::string VisibilityTable::to_csv() const
{
  std::string out = "visibility_bin,zone,gt_count,matched,recall\n";
  for (std::size_t v = 0; v < 4; ++v) {
    for (std::size_t z = 0; z < 3; ++z) {
      out += std::to_string(v + 1) + "," + std::string(to_string(static_cast<Zone>(z))) + "," +
             std::to_string(gt_count[v][z]) + "," + std::to_string(matched[v][z]) + "," +
             format_optional(recall[v][z]) + "\n";
    }
  }
  return out;
}

std::vector<double> default_ttc_edges()
{
  std::vector<double> e;
  for (int i = 0; i <= 12; ++i) {
    e.push_back(0.5 * i);
  }
  return e;
}

std::vector<double> default_distance_edges()
{
  std::vector<double> e;
  for (int i = 0; i <= 16; ++i) {
    e.push_back(2.5 * i);
  }
  return e;
}

HeatmapGrid heatmap_counts(
  std::span<const HeatmapSample> samples, const std::vector<double> & ttc_edges,
  const std::vector<double> & dist_edges)
{
  check_edges(ttc_edges, "ttc edges");
  check_edges(dist_edges, "distance edges");
  HeatmapGrid grid;
  grid.ttc_edges = ttc_edges;
  grid.dist_edges = dist_edges;
  grid.counts.assign(ttc_edges.size(), std::vector<std::size_t>(dist_edges.size() - 1, 0));
  for (const auto & s : samples) {
    const auto ti = bin_of(s.ttc, ttc_edges);
    const auto di = bin_of(s.distance, dist_edges);
    if (!ti || !di) {
      ++grid.underflow;
    } else if (*di == dist_edges.size() - 1) {
      ++grid.distance_overflow;
    } else {
      ++grid.counts[*ti][*di];
    }
  }
  return grid;
}

HeatmapGrid heatmap_counts(
  std::span<const CriticalityRecord> records, const std::vector<double> & ttc_edges,
  const std::vector<double> & dist_edges)
{
  std::vector<HeatmapSample> samples;
  samples.reserve(records.size());
  for (const auto & r : records) {
    samples.push_back({r.ttc, r.distance});
  }
  return heatmap_counts(samples, ttc_edges, dist_edges);
}

std::size_t HeatmapGrid::total_in_grid() const
{
  std::size_t n = 0;
  for (const auto & row : counts) {
    n = std::accumulate(row.begin(), row.end(), n);
  }
  return n;
}

std::string HeatmapGrid::to_csv() const
{
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::string out = "ttc_lo,ttc_hi,d_lo,d_hi,count\n";
  for (std::size_t t = 0; t < counts.size(); ++t) {
    const double t_hi = t + 1 < ttc_edges.size() ? ttc_edges[t + 1] : inf;
    for (std::size_t d = 0; d < counts[t].size(); ++d) {
      out += format_number(ttc_edges[t]) + "," + format_number(t_hi) + "," +
             format_number(dist_edges[d]) + "," + format_number(dist_edges[d + 1]) + "," +
             std::to_string(counts[t][d]) + "\n";
    }
  }
  out += format_number(ttc_edges.front()) + ",inf," + format_number(dist_edges.back()) + ",inf," +
         std::to_string(distance_overflow) + "\n";
  return out;
}

EvalReport evaluate(
  std::span<const Detection> dets, std::span<const Curated2DBox> gts,
  std::span<const std::string> frame_ids, const EvalConfig & cfg)
{
  check_edges(cfg.ttc_edges, "ttc edges");
  check_edges(cfg.dist_edges, "distance edges");
  if (!(cfg.iou_threshold > 0.0 && cfg.iou_threshold <= 1.0)) {
    throw ConfigError("iou threshold must lie in (0, 1]");
  }
  std::vector<Detection> kept;
  for (const auto & d : dets) {
    if (d.class_name == cfg.detection_class) {
      kept.push_back(d);
    }
  }
  const auto frames = match_frames(kept, gts, frame_ids, cfg.iou_threshold);

  EvalReport r;
  r.zones = zone_recall(frames);
  r.ap = ap50_binned(frames);
  r.visibility = visibility_breakdown(frames);
  r.n_gt = gts.size();
  r.n_detections = kept.size();
  for (const auto & f : frames) {
    r.n_true_positives += f.result.pairs.size();
  }
  r.precision = ratio(r.n_true_positives, r.n_detections);
  std::vector<HeatmapSample> samples;
  samples.reserve(gts.size());
  for (const auto & g : gts) {
    samples.push_back({g.ttc, g.distance});
  }
  r.heatmap = heatmap_counts(samples, cfg.ttc_edges, cfg.dist_edges);
  return r;
}

}  // namespace pedcrit
