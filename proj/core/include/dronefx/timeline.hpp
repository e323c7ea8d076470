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
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dronefx/datetime.hpp"
#include "dronefx/imgfs.hpp"

namespace dronefx {

enum class EventKind { kCreated, kModified, kAccessed };
std::string_view to_string(EventKind k);
std::optional<EventKind> parse_event_kind(std::string_view text);

/// Timestamps are device-local with no known zone.
struct TimelineEvent {
  DateTime at;
  std::string path;
  EventKind kind = EventKind::kCreated;
  std::string source_id;

  bool operator==(const TimelineEvent&) const = default;
};

struct SourceEntries {
  std::string source_id;
  std::vector<FileEntry> entries;
};

struct Timeline {
  std::vector<TimelineEvent> events;
  /// Populated timestamps that are not real calendar instants.
  std::size_t excluded_undated = 0;
};

/// One event per valid timestamp per entry, ordered by (at, path, kind,
/// source_id).
Timeline build_timeline(const std::vector<SourceEntries>& sources);

enum class IndicatorKind { kFormatCluster, kBootMarker };
std::string_view to_string(IndicatorKind k);

struct Indicator {
  IndicatorKind kind = IndicatorKind::kFormatCluster;
  DateTime at;
  std::string source_id;  // empty when the cluster spans sources
  /// Indices into the event sequence the indicator was computed from.
  std::vector<std::size_t> evidence;
  std::string note;

  bool operator==(const Indicator&) const = default;
};

struct ClusterOptions {
  std::size_t min_count = 8;
  std::int64_t window_ms = 2000;
  /// Compare clocks across sources.
  bool shared_zone = false;
};

/// Depth-one paths, Android/LOST.DIR/System Volume Information subtrees and
/// dot-files.
bool is_system_path(std::string_view path);

/// Greedy windows over Created events on system paths; `events` must be
/// sorted as build_timeline returns them.
std::vector<Indicator> detect_format_clusters(const std::vector<TimelineEvent>& events,
                                              const ClusterOptions& options = {});

const std::set<std::string>& default_boot_markers();

/// Accessed events whose file name equals one of `markers`.
std::vector<Indicator> detect_boot_markers(const std::vector<TimelineEvent>& events,
                                           const std::set<std::string>& markers =
                                               default_boot_markers());

/// "at,source,path,kind" with a header line.
std::string export_timeline_csv(const std::vector<TimelineEvent>& events);

}  // namespace dronefx
