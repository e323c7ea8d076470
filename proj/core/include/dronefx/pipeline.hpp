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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dronefx/carver.hpp"
#include "dronefx/case_store.hpp"
#include "dronefx/catalog.hpp"
#include "dronefx/flightlog.hpp"
#include "dronefx/geo.hpp"
#include "dronefx/timeline.hpp"

namespace dronefx {

struct PiiFinding {
  std::string source_id;
  std::string path;
  PiiHit hit;

  bool operator==(const PiiFinding&) const = default;
};

/// A flight track reconstructed from one telemetry or decoded-log file.
struct TrackRecord {
  std::string source_id;
  std::string path;
  FlightTrack track;
  TrackMetrics metrics;
  /// Messages read from the file, in file order.
  std::vector<std::string> messages;
};

struct ScanOptions {
  unsigned threads = 1;
  /// Defaults to the built-in table.
  const RuleTable* rules = nullptr;
  ColumnMap column_map;
  bool skip_verification = false;
  /// Content larger than this is classified by name only.
  std::uint64_t max_content_bytes = 256ull << 20;
};

struct ScanResult {
  std::vector<ArtefactRecord> artefacts;  // ordered by (source_id, path)
  std::vector<PiiFinding> pii;
  std::vector<TrackRecord> tracks;
  Timeline timeline;
  std::vector<std::string> warnings;
};

/// Analyses every registered source. Sources are opened
/// read-only and re-verified first unless `skip_verification` is set.
/// Output is identical for any thread count.
ScanResult scan_case(const CaseFile& c, const ScanOptions& options = {});

std::string scan_to_json(const ScanResult& r);
ScanResult scan_from_json(std::string_view text);

inline constexpr std::string_view kScanFile = "scan.json";

void save_scan(const ScanResult& r, const std::filesystem::path& case_dir);
/// nullopt when the case has not been scanned yet.
std::optional<ScanResult> load_scan(const std::filesystem::path& case_dir);

struct CarveSummary {
  std::string source_id;
  std::vector<CarvedFile> files;
  std::vector<TextBlock> blocks;
  std::vector<std::string> warnings;
  /// "walked" when regions came from the FAT, "whole-source" otherwise.
  std::string region_mode;
};

/// Carves the unallocated space of a raw image (the whole image when its
/// filesystem cannot be walked) into `<case_dir>/carved/<source_id>/`.
CarveSummary carve_source(const CaseFile& c, const std::string& source_id,
                          const std::filesystem::path& case_dir, unsigned threads = 1,
                          bool skip_verification = false);

/// Reads back `<case_dir>/carved/*/index.txt`.
std::vector<CarveSummary> load_carve_summaries(const std::filesystem::path& case_dir);

}  // namespace dronefx
