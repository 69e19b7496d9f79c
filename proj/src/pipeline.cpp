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

#include "pedcrit/pipeline.hpp"

#include "pedcrit/error.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <numeric>
#include <thread>

namespace pedcrit
{

namespace
{

std::vector<std::size_t> order_by_frame_id(std::span<const SceneFrame> frames)
{
  std::vector<std::size_t> order(frames.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&frames](std::size_t a, std::size_t b) {
    return frames[a].frame_id < frames[b].frame_id;
  });
  return order;
}

}  // namespace

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)> & fn)
{
  const auto workers = static_cast<std::size_t>(std::max(1, jobs));
  if (workers == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      fn(i);
    }
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, n); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto & t : pool) {
    t.join();
  }
  for (const auto & e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
}

std::vector<AnnotatedFrame> annotate_scene(
  std::span<const SceneFrame> frames, const RunConfig & cfg, int jobs)
{
  const auto order = order_by_frame_id(frames);
  std::vector<AnnotatedFrame> out(frames.size());
  parallel_for(frames.size(), jobs, [&](std::size_t i) {
    const auto & f = frames[order[i]];
    out[i] = {f.frame_id, annotate_frame(f, cfg.reach, cfg.crit)};
  });
  return out;
}

CuratedSet curate_scene(
  std::span<const SceneFrame> frames, std::span<const AnnotatedFrame> annotations, int jobs)
{
  std::map<std::string, const AnnotatedFrame *> by_id;
  for (const auto & a : annotations) {
    by_id.emplace(a.frame_id, &a);
  }
  const auto order = order_by_frame_id(frames);
  std::vector<CurationResult> results(frames.size());
  parallel_for(frames.size(), jobs, [&](std::size_t i) {
    const auto & f = frames[order[i]];
    const auto it = by_id.find(f.frame_id);
    if (it == by_id.end()) {
      throw MissingAnnotationError("no criticality records for frame '" + f.frame_id + "'");
    }
    results[i] = curate_frame(f, it->second->records);
  });
  CuratedSet set;
  for (std::size_t i = 0; i < results.size(); ++i) {
    set.frame_ids.push_back(frames[order[i]].frame_id);
    auto & r = results[i];
    set.boxes.insert(set.boxes.end(), r.boxes.begin(), r.boxes.end());
    set.discards.insert(set.discards.end(), r.discards.begin(), r.discards.end());
  }
  return set;
}

std::vector<AuditRow> audit_scene(
  std::span<const SceneFrame> frames, const ReachabilityConfig & rcfg,
  const SampledTrajectoryConfig & scfg, int jobs)
{
  const auto order = order_by_frame_id(frames);
  std::vector<std::vector<AuditRow>> per_frame(frames.size());
  parallel_for(frames.size(), jobs, [&](std::size_t i) {
    per_frame[i] = audit_frame(frames[order[i]], rcfg, scfg);
  });
  std::vector<AuditRow> rows;
  for (auto & f : per_frame) {
    rows.insert(rows.end(), f.begin(), f.end());
  }
  return rows;
}

}  // namespace pedcrit
