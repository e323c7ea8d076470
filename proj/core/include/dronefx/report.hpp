// Copyright 2026 The dronefx Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dronefx/case_store.hpp"
#include "dronefx/catalog.hpp"
#include "dronefx/pipeline.hpp"
#include "dronefx/timeline.hpp"

namespace dronefx {

enum class Device { kDrone, kRC };
enum class Storage { kSD, kInternal };
std::string_view to_string(Device d);
std::string_view to_string(Storage s);

struct MatrixCell {
  Device device = Device::kDrone;
  Storage storage = Storage::kSD;
  /// False when no source with this label is registered ("--").
  bool present = false;
  bool media = false;
  bool flight_log = false;
  Flags flags;
  /// "media", "flight_log" or a flag letter -> "<source_id>:<path>" of the
  /// first artefact that justifies it.
  std::map<std::string, std::string> witnesses;

  /// Table cells: "Y"/"N"/"--" and the flag list, "N" or "--".
  std::string media_text() const;
  std::string flight_log_text() const;
  std::string other_text() const;
};

struct ArtefactMatrix {
  /// Drone before RC, SD before Internal; devices with no source are omitted.
  std::vector<MatrixCell> cells;

  const MatrixCell* find(Device d, Storage s) const;
};

ArtefactMatrix summarize(const CaseFile& c, const std::vector<ArtefactRecord>& artefacts);

struct VideoPair {
  std::string cached;  // "<source_id>:<path>"
  std::string full;
  std::uint64_t cached_size = 0;
  std::uint64_t full_size = 0;
  int ratio_percent = 0;

  bool operator==(const VideoPair&) const = default;
};

/// round(100 * cached / full); 0 when `full` is 0.
int size_ratio_percent(std::uint64_t cached, std::uint64_t full);

inline constexpr std::int64_t kVideoPairToleranceSeconds = 300;

/// Pairs each RC cached video with the original whose recording time is
/// nearest and within the tolerance.
std::vector<VideoPair> pair_cached_videos(const std::vector<ArtefactRecord>& artefacts,
                                          std::int64_t tolerance_s = kVideoPairToleranceSeconds);

struct ReportInput {
  const CaseFile* case_file = nullptr;
  const ScanResult* scan = nullptr;  // may be null before the first scan
  std::vector<Indicator> indicators;
  std::vector<CarveSummary> carved;
  std::string generated_at;
};

/// `format` is "json" or "markdown"; anything else throws kUnknownFormat.
std::string render_report(const ReportInput& input, std::string_view format);

}  // namespace dronefx
