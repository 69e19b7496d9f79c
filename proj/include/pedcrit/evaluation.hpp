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

#ifndef PEDCRIT__EVALUATION_HPP_
#define PEDCRIT__EVALUATION_HPP_

#include "pedcrit/criticality.hpp"
#include "pedcrit/curation.hpp"
#include "pedcrit/scene.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pedcrit
{

inline constexpr double kDefaultIouThreshold = 0.5;
/// Upper edges (inclusive) of the small and mid diagonal bins, pixels.
inline constexpr double kSmallDiagonalMax = 150.0;
inline constexpr double kMidDiagonalMax = 350.0;

enum class SizeBin { kSmall, kMid, kLarge };

SizeBin size_bin(double diagonal_px);
std::size_t zone_index(Zone zone);

double iou(const Box2D & a, const Box2D & b);

struct MatchPair
{
  std::size_t det;
  std::size_t gt;
  double iou;
};

struct MatchResult
{
  std::vector<MatchPair> pairs;
  std::vector<std::size_t> unmatched_gt;
  std::vector<std::size_t> unmatched_det;
};

/// Greedy one-to-one matching. Detections are visited by descending confidence
/// (lower index first on ties); each takes the unmatched GT with the highest
/// IoU >= iou_threshold, lower GT index on IoU ties.
MatchResult match(
  std::span<const Detection> dets, std::span<const Curated2DBox> gts,
  double iou_threshold = kDefaultIouThreshold);

struct FrameMatch
{
  std::string frame_id;
  std::vector<Detection> dets;
  std::vector<Curated2DBox> gts;
  MatchResult result;
};

/// Groups by frame and matches each frame independently. `frame_ids` lists
/// every curated frame, including those without boxes; a detection naming any
/// other frame throws ConfigError. Output is sorted by frame id.
std::vector<FrameMatch> match_frames(
  std::span<const Detection> dets, std::span<const Curated2DBox> gts,
  std::span<const std::string> frame_ids, double iou_threshold = kDefaultIouThreshold);

/// nullopt marks a zone without ground truth.
struct ZoneRecall
{
  std::array<std::optional<double>, 3> recall;
  std::array<std::size_t, 3> gt_count{};
  std::array<std::size_t, 3> matched{};

  std::optional<double> c() const { return recall[0]; }
  std::optional<double> pc() const { return recall[1]; }
  std::optional<double> nc() const { return recall[2]; }
};

ZoneRecall zone_recall(std::span<const FrameMatch> frames);

struct ApResult
{
  std::optional<double> ap50;
  std::optional<double> ap_small;
  std::optional<double> ap_mid;
  std::optional<double> ap_large;
};

/// One scored detection as seen by a single AP computation.
struct ScoredDetection
{
  double confidence;
  enum class Kind { kTruePositive, kFalsePositive, kIgnored } kind;
};

/// All-point interpolated area under the precision-recall curve. PR points
/// are taken after each group of equal confidence. nullopt when n_gt == 0.
std::optional<double> average_precision(std::vector<ScoredDetection> scored, std::size_t n_gt);

/// AP at the frames' IoU threshold, overall and per diagonal bin
/// ([0,150], (150,350], (350,inf) px). Within a bin, detections matched to an
/// out-of-bin GT are ignored and unmatched detections count as false
/// positives only in the bin of their own diagonal.
ApResult ap50_binned(std::span<const FrameMatch> frames);

/// Recall per (visibility bin 1..4, zone).
struct VisibilityTable
{
  std::array<std::array<std::optional<double>, 3>, 4> recall;
  std::array<std::array<std::size_t, 3>, 4> gt_count{};
  std::array<std::array<std::size_t, 3>, 4> matched{};

  std::string to_csv() const;
};

VisibilityTable visibility_breakdown(std::span<const FrameMatch> frames);

struct HeatmapSample
{
  double ttc;
  double distance;
};

/// Counts over half-open cells [edge_i, edge_i+1). The row after the last TTC
/// bin holds ttc >= last TTC edge (including +inf); distances at or beyond
/// the last distance edge go to `distance_overflow`.
struct HeatmapGrid
{
  std::vector<double> ttc_edges;
  std::vector<double> dist_edges;
  std::vector<std::vector<std::size_t>> counts;
  std::size_t distance_overflow = 0;
  /// Samples below the first edge of either axis.
  std::size_t underflow = 0;

  std::size_t total_in_grid() const;
  std::string to_csv() const;
};

std::vector<double> default_ttc_edges();
std::vector<double> default_distance_edges();

/// Throws ConfigError on non-monotone or too-short edges.
HeatmapGrid heatmap_counts(
  std::span<const HeatmapSample> samples, const std::vector<double> & ttc_edges,
  const std::vector<double> & dist_edges);
HeatmapGrid heatmap_counts(
  std::span<const CriticalityRecord> records, const std::vector<double> & ttc_edges,
  const std::vector<double> & dist_edges);

struct EvalConfig
{
  double iou_threshold = kDefaultIouThreshold;
  std::string detection_class{kPedestrianClass};
  std::vector<double> ttc_edges = default_ttc_edges();
  std::vector<double> dist_edges = default_distance_edges();
};

struct EvalReport
{
  ZoneRecall zones;
  /// Matched / total detections; nullopt without detections.
  std::optional<double> precision;
  ApResult ap;
  VisibilityTable visibility;
  HeatmapGrid heatmap;
  std::size_t n_gt = 0;
  std::size_t n_detections = 0;
  std::size_t n_true_positives = 0;
};

/// Detections of other classes than `cfg.detection_class` are dropped first.
EvalReport evaluate(
  std::span<const Detection> dets, std::span<const Curated2DBox> gts,
  std::span<const std::string> frame_ids, const EvalConfig & cfg = {});

}  // namespace pedcrit

#endif  // PEDCRIT__EVALUATION_HPP_
