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

#include "dronefx/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dronefx/text.hpp"
#include "json.hpp"

namespace dronefx {

double haversine(LatLon a, LatLon b) {
  constexpr double kRad = std::numbers::pi / 180.0;
  const double dlat = (b.lat - a.lat) * kRad;
  const double dlon = (b.lon - a.lon) * kRad;
  const double s1 = std::sin(dlat / 2);
  const double s2 = std::sin(dlon / 2);
  double h = s1 * s1 + std::cos(a.lat * kRad) * std::cos(b.lat * kRad) * s2 * s2;
  h = std::clamp(h, 0.0, 1.0);
  return 2.0 * kEarthRadiusMeters * std::asin(std::sqrt(h));
}

FlightTrack build_track(const std::vector<TelemetrySample>& samples,
                        const std::vector<FlightRecordRow>& rows) {
  FlightTrack track;
  struct Timed {
    std::int64_t t;
    std::string text;
  };
  std::vector<Timed> messages;
  for (const auto& s : samples) {
    if (!s.latitude || !s.longitude) continue;
    TrackPoint p;
    p.t = s.t_start;
    p.lat = *s.latitude;
    p.lon = *s.longitude;
    p.alt_rel = s.rel_alt;
    p.alt_abs = s.abs_alt;
    track.points.push_back(std::move(p));
  }
  for (const auto& r : rows) {
    for (const auto& m : r.messages) messages.push_back({r.t_ms, m});
    if (!r.latitude || !r.longitude) continue;
    TrackPoint p;
    p.t = r.t_ms;
    p.lat = *r.latitude;
    p.lon = *r.longitude;
    if (r.imu_alt) p.alt_rel = *r.imu_alt * kFeetToMeters;
    if (!track.home && r.home_distance && *r.home_distance == 0.0) {
      track.home = LatLon{p.lat, p.lon};
    }
    track.points.push_back(std::move(p));
  }

  std::stable_sort(track.points.begin(), track.points.end(), [](const auto& a, const auto& b) {
    if (a.t != b.t) return a.t < b.t;
    if (a.lat != b.lat) return a.lat < b.lat;
    return a.lon < b.lon;
  });
  std::vector<TrackPoint> unique;
  for (auto& p : track.points) {
    if (!unique.empty() && unique.back().t == p.t && unique.back().lat == p.lat &&
        unique.back().lon == p.lon) {
      auto& keep = unique.back();
      if (!keep.alt_rel) keep.alt_rel = p.alt_rel;
      if (!keep.alt_abs) keep.alt_abs = p.alt_abs;
      keep.messages.insert(keep.messages.end(), p.messages.begin(), p.messages.end());
      continue;
    }
    unique.push_back(std::move(p));
  }
  track.points = std::move(unique);

  for (auto& m : messages) {
    if (track.points.empty()) {
      track.unplaced_messages.push_back(std::move(m.text));
      continue;
    }
    auto it = std::lower_bound(track.points.begin(), track.points.end(), m.t,
                               [](const TrackPoint& p, std::int64_t t) { return p.t < t; });
    if (it == track.points.end()) {
      it = std::prev(it);
    } else if (it != track.points.begin()) {
      const auto before = std::prev(it);
      if (m.t - before->t <= it->t - m.t) it = before;
    }
    it->messages.push_back(std::move(m.text));
  }
  return track;
}

TrackMetrics compute_metrics(const FlightTrack& track) {
  TrackMetrics m;
  const auto& pts = track.points;
  m.point_count = pts.size();
  if (pts.empty()) return m;
  m.duration = static_cast<double>(pts.back().t - pts.front().t) / 1000.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].alt_rel) m.max_alt_rel = std::max(m.max_alt_rel, *pts[i].alt_rel);
    if (track.home) {
      const double d = haversine(*track.home, {pts[i].lat, pts[i].lon});
      m.max_home_distance = std::max(m.max_home_distance.value_or(0.0), d);
    }
    if (i == 0) continue;
    const double d = haversine({pts[i - 1].lat, pts[i - 1].lon}, {pts[i].lat, pts[i].lon});
    m.path_length += d;
    const std::int64_t dt = pts[i].t - pts[i - 1].t;
    if (dt > 0) m.max_speed = std::max(m.max_speed, d / (static_cast<double>(dt) / 1000.0));
  }
  return m;
}

namespace {

std::string xml_escape(std::string_view raw) {
  const std::string s = to_valid_utf8(raw);
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      case '\t': case '\n': out.push_back(c); break;
      case '\r': out += "&#13;"; break;
      default:
        // XML 1.0 has no representation for the other C0 controls.
        if (static_cast<unsigned char>(c) < 0x20) {
          out += "\xEF\xBF\xBD";
        } else {
          out.push_back(c);
        }
    }
  }
  return out;
}

bool all_absolute(const FlightTrack& t) {
  return !t.points.empty() &&
         std::all_of(t.points.begin(), t.points.end(), [](const auto& p) { return p.alt_abs.has_value(); });
}

double export_alt(const TrackPoint& p, bool absolute) {
  return absolute ? *p.alt_abs : p.alt_rel.value_or(0.0);
}

std::string position(const TrackPoint& p, bool absolute) {
  return format_double(p.lon) + "," + format_double(p.lat) + "," +
         format_double(export_alt(p, absolute));
}

std::string metrics_text(const TrackMetrics& m) {
  std::string s = "duration_s=" + format_double(m.duration) +
                  "; path_length_m=" + format_double(m.path_length) +
                  "; max_alt_rel_m=" + format_double(m.max_alt_rel) +
                  "; max_speed_mps=" + format_double(m.max_speed) +
                  "; point_count=" + std::to_string(m.point_count);
  if (m.max_home_distance) s += "; max_home_distance_m=" + format_double(*m.max_home_distance);
  return s;
}

std::string join_lines(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) {
    if (!out.empty()) out += '\n';
    out += s;
  }
  return out;
}

void message_placemark(std::string& out, const std::vector<std::string>& msgs,
                       const std::string* coords, std::int64_t t) {
  out += "    <Placemark>\n      <name>Message at t=" + std::to_string(t) + " ms</name>\n";
  out += "      <description>" + xml_escape(join_lines(msgs)) + "</description>\n";
  out += "      <ExtendedData>\n";
  for (const auto& m : msgs) {
    out += "        <Data name=\"message\"><value>" + xml_escape(m) + "</value></Data>\n";
  }
  out += "      </ExtendedData>\n";
  if (coords) out += "      <Point><coordinates>" + *coords + "</coordinates></Point>\n";
  out += "    </Placemark>\n";
}

}  // namespace

std::string export_kml(const FlightTrack& track, const TrackMetrics& metrics) {
  const bool absolute = all_absolute(track);
  std::string out =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<kml xmlns=\"http://www.opengis.net/kml/2.2\">\n"
      "  <Document>\n"
      "    <name>Flight track</name>\n";
  out += "    <description>" + xml_escape(metrics_text(metrics)) + "</description>\n";
  out += "    <Placemark>\n      <name>Flight path</name>\n      <LineString>\n";
  out += std::string("        <altitudeMode>") + (absolute ? "absolute" : "relativeToGround") +
         "</altitudeMode>\n";
  out += "        <coordinates>";
  for (std::size_t i = 0; i < track.points.size(); ++i) {
    if (i) out += ' ';
    out += position(track.points[i], absolute);
  }
  out += "</coordinates>\n      </LineString>\n    </Placemark>\n";
  for (const auto& p : track.points) {
    if (p.messages.empty()) continue;
    const std::string coords = position(p, absolute);
    message_placemark(out, p.messages, &coords, p.t);
  }
  if (!track.unplaced_messages.empty()) {
    message_placemark(out, track.unplaced_messages, nullptr, 0);
  }
  out += "  </Document>\n</kml>\n";
  return out;
}

std::string export_geojson(const FlightTrack& track, const TrackMetrics& metrics) {
  using nlohmann::ordered_json;
  const bool absolute = all_absolute(track);
  const auto pos = [&](const TrackPoint& p) {
    return ordered_json::array({p.lon, p.lat, export_alt(p, absolute)});
  };
  ordered_json doc;
  doc["type"] = "FeatureCollection";
  ordered_json m;
  m["duration_s"] = metrics.duration;
  m["path_length_m"] = metrics.path_length;
  m["max_alt_rel_m"] = metrics.max_alt_rel;
  m["max_speed_mps"] = metrics.max_speed;
  m["max_home_distance_m"] =
      metrics.max_home_distance ? ordered_json(*metrics.max_home_distance) : ordered_json();
  m["point_count"] = metrics.point_count;
  doc["metrics"] = m;
  doc["altitude_reference"] = absolute ? "absolute" : "relative";
  auto features = ordered_json::array();
  ordered_json line;
  line["type"] = "Feature";
  line["properties"] = {{"name", "Flight path"}};
  auto coords = ordered_json::array();
  for (const auto& p : track.points) coords.push_back(pos(p));
  line["geometry"] = {{"type", "LineString"}, {"coordinates", coords}};
  features.push_back(line);
  const auto messages_json = [](const std::vector<std::string>& v) {
    auto a = ordered_json::array();
    for (const auto& s : v) a.push_back(to_valid_utf8(s));
    return a;
  };
  for (const auto& p : track.points) {
    if (p.messages.empty()) continue;
    ordered_json f;
    f["type"] = "Feature";
    f["properties"] = {{"t_ms", p.t}, {"messages", messages_json(p.messages)}};
    f["geometry"] = {{"type", "Point"}, {"coordinates", pos(p)}};
    features.push_back(f);
  }
  if (!track.unplaced_messages.empty()) {
    ordered_json f;
    f["type"] = "Feature";
    f["properties"] = {{"messages", messages_json(track.unplaced_messages)}};
    f["geometry"] = nullptr;
    features.push_back(f);
  }
  doc["features"] = features;
  return doc.dump(2) + "\n";
}

std::string join_messages(const std::vector<std::string>& messages) {
  std::string out;
  for (std::size_t i = 0; i < messages.size(); ++i) {
    if (i) out += ';';
    for (char c : messages[i]) {
      if (c == ';' || c == '\\') out += '\\';
      out += c;
    }
  }
  return out;
}

std::vector<std::string> split_messages(std::string_view field) {
  std::vector<std::string> out;
  if (field.empty()) return out;
  std::string cur;
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (field[i] == '\\' && i + 1 < field.size()) {
      cur += field[++i];
    } else if (field[i] == ';') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += field[i];
    }
  }
  out.push_back(std::move(cur));
  return out;
}

std::string export_csv(const FlightTrack& track) {
  std::string out = "t_ms,lat,lon,alt_rel,alt_abs,messages\n";
  const auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : ""; };
  for (const auto& p : track.points) {
    out += std::to_string(p.t) + "," + format_double(p.lat) + "," + format_double(p.lon) + "," +
           opt(p.alt_rel) + "," + opt(p.alt_abs) + "," + csv_quoted(join_messages(p.messages)) +
           "\n";
  }
  if (!track.unplaced_messages.empty()) {
    out += ",,,,," + csv_quoted(join_messages(track.unplaced_messages)) + "\n";
  }
  return out;
}

}  // namespace dronefx
