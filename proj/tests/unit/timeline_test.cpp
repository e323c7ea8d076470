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

#include <algorithm>
#include <string>

#include <gtest/gtest.h>

#include "dronefx/timeline.hpp"

namespace dronefx {
namespace {

const DateTime kFormatTime{2023, 1, 28, 14, 16, 8};

FileEntry entry(std::string path, std::optional<DateTime> c, std::optional<DateTime> m = {},
                std::optional<DateTime> a = {}) {
  FileEntry e;
  e.path = std::move(path);
  e.created = c;
  e.modified = m;
  e.accessed = a;
  return e;
}

std::vector<TimelineEvent> format_burst(const DateTime& at, const std::string& source = "rc") {
  std::vector<SourceEntries> src(1);
  src[0].source_id = source;
  for (const char* p : {"Podcasts", "Ringtones", "Alarms", "Notifications", "Pictures", "Movies",
                        "Download", "DCIM", "Android/data/dji.go.v5/cache",
                        "Android/data/dji.go.v5/files"}) {
    src[0].entries.push_back(entry(p, at));
  }
  return build_timeline(src).events;
}

TEST(BuildTimeline, ExpandsTimestamps) {
  std::vector<SourceEntries> src(1);
  src[0].source_id = "s";
  src[0].entries.push_back(entry("DCIM/a.jpg", kFormatTime, DateTime{2023, 1, 28, 15, 0, 0},
                                 DateTime{2023, 1, 28, 0, 0, 0}));
  const Timeline t = build_timeline(src);
  ASSERT_EQ(t.events.size(), 3u);
  EXPECT_EQ(t.events[0].kind, EventKind::kAccessed);
  EXPECT_EQ(t.events[1].kind, EventKind::kCreated);
  EXPECT_EQ(t.events[2].kind, EventKind::kModified);
  EXPECT_TRUE(build_timeline({}).events.empty());
}

TEST(BuildTimeline, InvalidTimestampsAreCounted) {
  std::vector<SourceEntries> src(1);
  src[0].source_id = "s";
  src[0].entries.push_back(entry("x", DateTime{2023, 2, 30, 0, 0, 0}, kFormatTime));
  const Timeline t = build_timeline(src);
  EXPECT_EQ(t.events.size(), 1u);
  EXPECT_EQ(t.excluded_undated, 1u);
}

TEST(BuildTimeline, CrossSourceOrderIsStable) {
  std::vector<SourceEntries> src(2);
  src[0].source_id = "b";
  src[1].source_id = "a";
  for (auto& s : src) {
    s.entries.push_back(entry("same/path", kFormatTime, kFormatTime));
    s.entries.push_back(entry("other", kFormatTime));
  }
  const Timeline one = build_timeline(src);
  std::swap(src[0], src[1]);
  const Timeline two = build_timeline(src);
  EXPECT_EQ(one.events, two.events);
  EXPECT_EQ(export_timeline_csv(one.events), export_timeline_csv(two.events));
  EXPECT_EQ(one.events[0].source_id, "a");
}

TEST(SystemPath, Definition) {
  EXPECT_TRUE(is_system_path("Podcasts"));
  EXPECT_TRUE(is_system_path("Android/data/dji.go.v5/cache"));
  EXPECT_TRUE(is_system_path("LOST.DIR/0001"));
  EXPECT_TRUE(is_system_path("System Volume Information/IndexerVolumeGuid"));
  EXPECT_TRUE(is_system_path("DCIM/.thumbnails"));
  EXPECT_FALSE(is_system_path("DCIM/100MEDIA/DJI_0001.JPG"));
}

TEST(FormatCluster, TenDirectoryBurst) {
  const auto events = format_burst(kFormatTime);
  const auto found = detect_format_clusters(events);
  ASSERT_EQ(found.size(), 1u);
  EXPECT_EQ(found[0].kind, IndicatorKind::kFormatCluster);
  EXPECT_EQ(found[0].at, kFormatTime);
  EXPECT_EQ(found[0].evidence.size(), 10u);
  EXPECT_EQ(found[0].source_id, "rc");
}

TEST(FormatCluster, BelowThreshold) {
  auto events = format_burst(kFormatTime);
  events.resize(3);
  EXPECT_TRUE(detect_format_clusters(events).empty());
  ClusterOptions loose;
  loose.min_count = 3;
  EXPECT_EQ(detect_format_clusters(events, loose).size(), 1u);
}

TEST(FormatCluster, TwoBurstsAnHourApart) {
  std::vector<SourceEntries> src(1);
  src[0].source_id = "rc";
  const DateTime later{2023, 1, 28, 15, 16, 8};
  for (const auto& at : {kFormatTime, later}) {
    for (int i = 0; i < 9; ++i) src[0].entries.push_back(entry("Dir" + std::to_string(i), at));
  }
  const auto found = detect_format_clusters(build_timeline(src).events);
  ASSERT_EQ(found.size(), 2u);
  EXPECT_EQ(found[0].at, kFormatTime);
  EXPECT_EQ(found[1].at, later);
}

TEST(FormatCluster, SourcesStaySeparateWithoutSharedZone) {
  std::vector<SourceEntries> src(2);
  src[0].source_id = "a";
  src[1].source_id = "b";
  for (int i = 0; i < 5; ++i) {
    src[0].entries.push_back(entry("A" + std::to_string(i), kFormatTime));
    src[1].entries.push_back(entry("B" + std::to_string(i), kFormatTime));
  }
  const auto events = build_timeline(src).events;
  EXPECT_TRUE(detect_format_clusters(events).empty());
  ClusterOptions shared;
  shared.shared_zone = true;
  const auto found = detect_format_clusters(events, shared);
  ASSERT_EQ(found.size(), 1u);
  EXPECT_TRUE(found[0].source_id.empty());
}

TEST(BootMarker, AccessedOnly) {
  const DateTime boot{2023, 1, 28, 18, 43, 26};
  const std::string path = "Android/data/dji.go.v5/files/Editor/music_sound_wave";
  std::vector<SourceEntries> src(1);
  src[0].source_id = "rc";
  src[0].entries.push_back(entry(path, {}, {}, boot));
  const auto found = detect_boot_markers(build_timeline(src).events);
  ASSERT_EQ(found.size(), 1u);
  EXPECT_EQ(found[0].kind, IndicatorKind::kBootMarker);
  EXPECT_EQ(found[0].at, boot);

  src[0].entries = {entry(path, {}, boot)};
  EXPECT_TRUE(detect_boot_markers(build_timeline(src).events).empty());
  EXPECT_TRUE(detect_boot_markers({}).empty());
  EXPECT_TRUE(detect_format_clusters({}).empty());
}

TEST(TimelineCsv, HeaderAndRows) {
  const auto events = format_burst(kFormatTime);
  const std::string csv = export_timeline_csv(events);
  EXPECT_EQ(csv.rfind("at,source,path,kind\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 11);
  EXPECT_EQ(export_timeline_csv({}), "at,source,path,kind\n");
}

TEST(Indicators, ArePure) {
  const auto events = format_burst(kFormatTime);
  EXPECT_EQ(detect_format_clusters(events), detect_format_clusters(events));
}

}  // namespace
}  // namespace dronefx
