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
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <gmock/gmock.h>
#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "dronefx/flightlog.hpp"
#include "dronefx/geo.hpp"
#include "dronefx/telemetry.hpp"
#include "fixtures.hpp"

namespace dronefx {
namespace {

namespace pt = boost::property_tree;
using ::testing::ElementsAre;
using ::testing::UnorderedElementsAreArray;

TelemetrySample sample(std::int64_t t, double lat, double lon, double alt = 10.0) {
  TelemetrySample s;
  s.t_start = t;
  s.t_end = t + 33;
  s.latitude = lat;
  s.longitude = lon;
  s.rel_alt = alt;
  return s;
}

FlightRecordRow row(std::int64_t t, double lat, double lon, std::vector<std::string> msgs) {
  FlightRecordRow r;
  r.t_ms = t;
  r.latitude = lat;
  r.longitude = lon;
  r.messages = std::move(msgs);
  return r;
}

std::vector<std::string> all_messages(const FlightTrack& t) {
  std::vector<std::string> out = t.unplaced_messages;
  for (const auto& p : t.points) out.insert(out.end(), p.messages.begin(), p.messages.end());
  return out;
}

TEST(BuildTrack, SortsByTime) {
  const FlightTrack t = build_track({sample(2000, 0, 2), sample(0, 0, 0), sample(1000, 0, 1)});
  ASSERT_EQ(t.points.size(), 3u);
  EXPECT_EQ(t.points[0].t, 0);
  EXPECT_EQ(t.points[1].t, 1000);
  EXPECT_EQ(t.points[2].t, 2000);
  EXPECT_TRUE(build_track({}).points.empty());
}

TEST(BuildTrack, FoldsDuplicatesKeepingMessages) {
  const FlightTrack t = build_track(
      {}, {row(0, -35.0, 149.0, {"a"}), row(0, -35.0, 149.0, {"b"}), row(100, -35.0, 149.001, {})});
  ASSERT_EQ(t.points.size(), 2u);
  EXPECT_THAT(t.points[0].messages, ElementsAre("a", "b"));
}

TEST(BuildTrack, MixedSourcesConserveMessages) {
  const auto rows = ingest_decoded_csv(testing::read_text(testing::data_dir() / "flight_record_coords.csv"));
  const auto srt = parse_srt(testing::read_text(testing::data_dir() / "camera_cue.srt"));
  std::vector<std::string> expected;
  for (const auto& r : rows) expected.insert(expected.end(), r.messages.begin(), r.messages.end());
  ASSERT_FALSE(expected.empty());
  const FlightTrack t = build_track(srt.samples, rows);
  EXPECT_THAT(all_messages(t), UnorderedElementsAreArray(expected));
  EXPECT_TRUE(std::is_sorted(t.points.begin(), t.points.end(),
                             [](const auto& a, const auto& b) { return a.t < b.t; }));
}

TEST(BuildTrack, MessagesWithoutCoordinatesAreKept) {
  FlightRecordRow r;
  r.messages = {"Motor start"};
  const FlightTrack t = build_track({}, {r});
  EXPECT_TRUE(t.points.empty());
  EXPECT_THAT(t.unplaced_messages, ElementsAre("Motor start"));
}

TEST(Haversine, KnownValues) {
  EXPECT_EQ(haversine({-35.28, 149.13}, {-35.28, 149.13}), 0.0);
  EXPECT_NEAR(haversine({0, 0}, {0, 1}), 111194.9, 0.5);
  EXPECT_NEAR(haversine({0, 0}, {0, 1}), haversine({0, 1}, {0, 0}), 1e-9);
}

TEST(Metrics, EmptyAndSinglePoint) {
  EXPECT_EQ(compute_metrics(FlightTrack{}), TrackMetrics{});
  const TrackMetrics one = compute_metrics(build_track({sample(500, 1, 1)}));
  EXPECT_EQ(one.duration, 0.0);
  EXPECT_EQ(one.path_length, 0.0);
  EXPECT_EQ(one.point_count, 1u);
}

TEST(Metrics, HundredMetersInTenSeconds) {
  const double dlat = 100.0 / kEarthRadiusMeters * 180.0 / std::numbers::pi;
  const TrackMetrics m = compute_metrics(build_track({sample(0, 0, 0, 5), sample(10000, dlat, 0, 25)}));
  EXPECT_NEAR(m.path_length, 100.0, 0.1);
  EXPECT_NEAR(m.max_speed, 10.0, 0.01);
  EXPECT_EQ(m.duration, 10.0);
  EXPECT_EQ(m.max_alt_rel, 25.0);
}

TEST(Metrics, SameTimeSegmentsDoNotDivideByZero) {
  const TrackMetrics m = compute_metrics(build_track({sample(0, 0, 0), sample(0, 0, 0.001)}));
  EXPECT_TRUE(std::isfinite(m.max_speed));
  EXPECT_EQ(m.max_speed, 0.0);
}

pt::ptree parse_xml(const std::string& text) {
  std::istringstream in(text);
  pt::ptree tree;
  pt::read_xml(in, tree, pt::xml_parser::trim_whitespace);
  return tree;
}

// Structural checks mirroring the KML 2.2 schema constraints this exporter relies on.
void expect_valid_kml(const pt::ptree& tree) {
  const auto& kml = tree.get_child("kml");
  EXPECT_EQ(kml.get<std::string>("<xmlattr>.xmlns"), "http://www.opengis.net/kml/2.2");
  const auto& doc = kml.get_child("Document");
  for (const auto& [tag, node] : doc) {
    EXPECT_TRUE(tag == "name" || tag == "description" || tag == "Placemark") << tag;
    if (tag != "Placemark") continue;
    const std::vector<std::string> order = {"name", "description", "ExtendedData", "LineString",
                                            "Point"};
    std::size_t last = 0;
    int geometries = 0;
    for (const auto& [child, sub] : node) {
      const auto pos = std::find(order.begin(), order.end(), child) - order.begin();
      ASSERT_LT(static_cast<std::size_t>(pos), order.size()) << child;
      EXPECT_GE(static_cast<std::size_t>(pos), last) << child;
      last = static_cast<std::size_t>(pos);
      if (child == "LineString" || child == "Point") {
        ++geometries;
        std::istringstream coords(sub.get<std::string>("coordinates", ""));
        std::string tuple;
        while (coords >> tuple) {
          double lon = 0, lat = 0, alt = 0;
          char c1 = 0, c2 = 0;
          std::istringstream ts(tuple);
          ts >> lon >> c1 >> lat >> c2 >> alt;
          EXPECT_FALSE(ts.fail()) << tuple;
          EXPECT_EQ(c1, ',');
          EXPECT_GE(lon, -180.0);
          EXPECT_LE(lon, 180.0);
          EXPECT_GE(lat, -90.0);
          EXPECT_LE(lat, 90.0);
        }
      }
      if (child == "ExtendedData") {
        for (const auto& [d, data] : sub) {
          EXPECT_EQ(d, "Data");
          EXPECT_FALSE(data.get<std::string>("<xmlattr>.name").empty());
        }
      }
    }
    EXPECT_LE(geometries, 1);
  }
}

TEST(Kml, EmptyTrack) {
  const FlightTrack t;
  const std::string kml = export_kml(t, compute_metrics(t));
  const auto tree = parse_xml(kml);
  expect_valid_kml(tree);
  EXPECT_NE(kml.find("<coordinates></coordinates>"), std::string::npos);
}

TEST(Kml, OneMessagePlacemark) {
  const FlightTrack t = build_track({}, {row(0, -35.0, 149.0, {}),
                                         row(100, -35.0001, 149.0001, {"Data Recorder File Index is 186. <&>"})});
  const auto tree = parse_xml(export_kml(t, compute_metrics(t)));
  expect_valid_kml(tree);
  std::vector<std::string> values;
  int placemarks = 0;
  for (const auto& [tag, node] : tree.get_child("kml.Document")) {
    if (tag != "Placemark") continue;
    ++placemarks;
    if (auto ext = node.get_child_optional("ExtendedData")) {
      for (const auto& [d, data] : *ext) values.push_back(data.get<std::string>("value"));
    }
  }
  EXPECT_EQ(placemarks, 2);
  EXPECT_THAT(values, ElementsAre("Data Recorder File Index is 186. <&>"));
}

TEST(Kml, FixtureTrackIsWellFormed) {
  const auto rows = ingest_decoded_csv(testing::read_text(testing::data_dir() / "flight_record_coords.csv"));
  const FlightTrack t = build_track({}, rows);
  expect_valid_kml(parse_xml(export_kml(t, compute_metrics(t))));
}

TEST(GeoJson, EmptyAndMessageFeatures) {
  const FlightTrack empty;
  const auto e = nlohmann::json::parse(export_geojson(empty, compute_metrics(empty)));
  EXPECT_EQ(e["type"], "FeatureCollection");
  ASSERT_EQ(e["features"].size(), 1u);
  EXPECT_EQ(e["features"][0]["geometry"]["type"], "LineString");
  EXPECT_TRUE(e["features"][0]["geometry"]["coordinates"].empty());

  const FlightTrack t = build_track(
      {}, {row(0, 1, 1, {"x"}), row(100, 1.0001, 1, {}), row(200, 1.0002, 1, {"y", "z"})});
  const auto j = nlohmann::json::parse(export_geojson(t, compute_metrics(t)));
  EXPECT_EQ(j["features"].size(), 3u);
  EXPECT_EQ(j["features"][0]["geometry"]["coordinates"].size(), 3u);
  EXPECT_EQ(j["features"][2]["properties"]["messages"], nlohmann::json({"y", "z"}));
}

// RFC 4180 field splitter for reading exports back.
std::vector<std::vector<std::string>> read_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows(1);
  std::string field;
  bool quoted = false;
  rows.back().emplace_back();
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    auto& cell = rows.back().back();
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      rows.back().emplace_back();
    } else if (c == '\n') {
      rows.emplace_back();
      rows.back().emplace_back();
    } else {
      cell += c;
    }
  }
  if (rows.back().size() == 1 && rows.back()[0].empty()) rows.pop_back();
  return rows;
}

TEST(Csv, HeaderRowsAndQuoting) {
  EXPECT_EQ(export_csv(FlightTrack{}), "t_ms,lat,lon,alt_rel,alt_abs,messages\n");
  const std::vector<std::string> msgs = {"Low battery, return home", "say \"hi\"", "semi;colon",
                                         "back\\slash"};
  const FlightTrack t = build_track({}, {row(0, 1, 2, msgs), row(100, 1.5, 2.5, {})});
  const auto rows = read_csv(export_csv(t));
  ASSERT_EQ(rows.size(), 3u);
  ASSERT_EQ(rows[1].size(), 6u);
  EXPECT_EQ(split_messages(rows[1][5]), msgs);
  EXPECT_TRUE(split_messages(rows[2][5]).empty());
}

TEST(MessageField, JoinSplitRoundTrip) {
  const std::vector<std::string> msgs = {"a;b", "c\\d", "", "e"};
  EXPECT_EQ(split_messages(join_messages(msgs)), msgs);
  EXPECT_TRUE(split_messages("").empty());
}

}  // namespace
}  // namespace dronefx
