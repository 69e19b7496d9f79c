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

#ifndef PEDCRIT__PIPELINE_HPP_
#define PEDCRIT__PIPELINE_HPP_

#include "pedcrit/config.hpp"
#include "pedcrit/oracle.hpp"
#include "pedcrit/records.hpp"
#include "pedcrit/scene.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace pedcrit
{

/// Runs fn(i) for i in [0, n) on up to `jobs` threads. Exceptions are
/// rethrown in index order after all workers join.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)> & fn);

// Frame-parallel drivers. Outputs are sorted by frame id regardless of `jobs`.

std::vector<AnnotatedFrame> annotate_scene(
  std::span<const SceneFrame> frames, const RunConfig & cfg, int jobs = 1);

/// `annotations` must cover every frame. Throws MissingAnnotationError otherwise.
CuratedSet curate_scene(
  std::span<const SceneFrame> frames, std::span<const AnnotatedFrame> annotations, int jobs = 1);

std::vector<AuditRow> audit_scene(
  std::span<const SceneFrame> frames, const ReachabilityConfig & rcfg,
  const SampledTrajectoryConfig & scfg, int jobs = 1);

}  // namespace pedcrit

#endif  // PEDCRIT__PIPELINE_HPP_
