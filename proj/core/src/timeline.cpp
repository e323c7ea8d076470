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

#include "dronefx/timeline.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "dronefx/text.hpp"

namespace dronefx {

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::kCreated: return "Created";
    case EventKind::kModified: return "Modified";
    case EventKind::kAccessed: return "Accessed";
  }
  return "Created";
}

std::optional<EventKind> parse_event_kind(std::string_view text) {
  const std::string t = to_lower(text);
  if (t == "created") return EventKind::kCreated;
  if (t == "modified") return EventKind::kModified;
  if (t == "accessed") return EventKind::kAccessed;
  return std::nullopt;
}

std::string_view to_string(IndicatorKind k) {
  return k == IndicatorKind::kFormatCluster ? "FormatCluster" : "BootMarker";
}

Timeline build_timeline(const std::vector<SourceEntries>& sources) {
  Timeline tl;
  for (const auto& src : sources) {
    for (const auto& e : src.entries) {
      const std::pair<const std::optional<DateTime>*, EventKind> stamps[] = {
          {&e.created, EventKind::kCreated},
          {&e.modified, EventKind::kModified},
          {&e.accessed, EventKind::kAccessed}};
      for (const auto& [ts, kind] : stamps) {
        if (!*ts) continue;
        if (!(*ts)->valid()) {
          ++tl.excluded_undated;
          continue;
        }
        tl.events.push_back({**ts, e.path, kind, src.source_id});
      }
    }
  }
  std::sort(tl.events.begin(), tl.events.end(), [](const auto& a, const auto& b) {
    return std::tie(a.at, a.path, a.kind, a.source_id) <
           std::tie(b.at, b.path, b.kind, b.source_id);
  });
  return tl;
}

bool is_system_path(std::string_view path) {
  while (!path.empty() && path.front() == '/') path.remove_prefix(1);
  while (!path.empty() && path.back() == '/') path.remove_suffix(1);
  if (path.empty()) return false;
  const auto slash = path.find('/');
  if (slash == std::string_view::npos) return true;
  const std::string first = to_lower(path.substr(0, slash));
  if (first == "android" || first == "lost.dir" || first == "system volume information") {
    return true;
  }
  const auto last = path.find_last_of('/');
  return path.substr(last + 1).starts_with('.');
}

std::vector<Indicator> detect_format_clusters(const std::vector<TimelineEvent>& events,
                                              const ClusterOptions& options) {
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    if (e.kind != EventKind::kCreated || !is_system_path(e.path)) continue;
    groups[options.shared_zone ? std::string{} : e.source_id].push_back(i);
  }
  std::vector<Indicator> out;
  const std::size_t min_count = std::max<std::size_t>(1, options.min_count);
  for (const auto& [source, idx] : groups) {
    std::size_t i = 0;
    while (i < idx.size()) {
      const std::int64_t t0 = events[idx[i]].at.to_millis();
      std::size_t j = i;
      while (j + 1 < idx.size() && events[idx[j + 1]].at.to_millis() - t0 <= options.window_ms) {
        ++j;
      }
      const std::size_t n = j - i + 1;
      if (n < min_count) {
        ++i;
        continue;
      }
      Indicator ind;
      ind.kind = IndicatorKind::kFormatCluster;
      ind.at = events[idx[i]].at;
      ind.source_id = source;
      ind.evidence.assign(idx.begin() + static_cast<std::ptrdiff_t>(i),
                          idx.begin() + static_cast<std::ptrdiff_t>(j + 1));
      ind.note = std::to_string(n) + " top-level or system entries created within " +
                 std::to_string(options.window_ms) + " ms; consistent with formatting";
      out.push_back(std::move(ind));
      i = j + 1;
    }
  }
  std::sort(out.begin(), out.end(), [](const Indicator& a, const Indicator& b) {
    return std::tie(a.at, a.source_id) < std::tie(b.at, b.source_id);
  });
  return out;
}

const std::set<std::string>& default_boot_markers() {
  static const std::set<std::string> markers = {"music_sound_wave"};
  return markers;
}

std::vector<Indicator> detect_boot_markers(const std::vector<TimelineEvent>& events,
                                           const std::set<std::string>& markers) {
  std::set<std::string> lowered;
  for (const auto& m : markers) lowered.insert(to_lower(m));
  std::vector<Indicator> out;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    if (e.kind != EventKind::kAccessed) continue;
    const auto slash = e.path.find_last_of('/');
    const std::string name = to_lower(slash == std::string::npos ? e.path : e.path.substr(slash + 1));
    if (!lowered.count(name)) continue;
    Indicator ind;
    ind.kind = IndicatorKind::kBootMarker;
    ind.at = e.at;
    ind.source_id = e.source_id;
    ind.evidence = {i};
    ind.note = "power-on sound file accessed; consistent with device start-up";
    out.push_back(std::move(ind));
  }
  return out;
}

std::string export_timeline_csv(const std::vector<TimelineEvent>& events) {
  std::string out = "at,source,path,kind\n";
  for (const auto& e : events) {
    out += e.at.to_string() + "," + csv_field(e.source_id) + "," + csv_field(e.path) + "," +
           std::string(to_string(e.kind)) + "\n";
  }
  return out;
}

}  // namespace dronefx
