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

#ifndef PEDCRIT__RECORDS_HPP_
#define PEDCRIT__RECORDS_HPP_

#include "pedcrit/config.hpp"
#include "pedcrit/criticality.hpp"
#include "pedcrit/curation.hpp"
#include "pedcrit/evaluation.hpp"
#include "pedcrit/oracle.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pedcrit
{

// Output file formats. Writers emit a fixed key order and embed the run
// configuration; +inf TTC is written as null.

struct AnnotatedFrame
{
  std::string frame_id;
  std::vector<CriticalityRecord> records;
};

struct CuratedSet
{
  /// Every curated frame, including frames whose boxes were all discarded.
  std::vector<std::string> frame_ids;
  std::vector<Curated2DBox> boxes;
  std::vector<Discard> discards;
};

std::string write_annotations(std::span<const AnnotatedFrame> frames, const RunConfig & cfg);
std::vector<AnnotatedFrame> parse_annotations(std::string_view text);

std::string write_curated(const CuratedSet & set, const RunConfig & cfg);
/// Discards are not part of the curated file; `discards` comes back empty.
CuratedSet parse_curated(std::string_view text);

std::string write_discard_report(const CuratedSet & set);

std::string write_eval_report(const EvalReport & report, const RunConfig & cfg);

/// Fixed-width header plus one row: AP50, AP^S/M/L, zone recalls, precision.
std::string eval_table_row(const EvalReport & report);

std::string write_audit_csv(std::span<const AuditRow> rows);

/// Pedestrians per zone, one line.
std::string zone_summary(std::span<const AnnotatedFrame> frames);

}  // namespace pedcrit

#endif  // PEDCRIT__RECORDS_HPP_
