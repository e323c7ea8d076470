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
#include <optional>
#include <string>
#include <vector>

#include "dronefx/flightlog.hpp"
#include "dronefx/telemetry.hpp"

namespace dronefx {

inline constexpr double kEarthRadiusMeters = 6371000.0;

struct LatLon {
  double lat = 0.0;
  double lon = 0.0;
};

/// Great-circle distance in meters on a sphere of radius 6,371,000 m.
double haversine(LatLon a, LatLon b);

struct TrackPoint {
  std::int64_t t = 0;  // ms
  double lat = 0.0;
  double lon = 0.0;
  std::optional<double> alt_rel;
  std::optional<double> alt_abs;
  std::vector<std::string> messages;

  bool operator==(const TrackPoint&) const = default;
};

struct FlightTrack {
  std::vector<TrackPoint> points;
  /// Messages that had no point to attach to (track without coordinates).
  std::vector<std::string> unplaced_messages;
  std::optional<LatLon> home;
};

struct TrackMetrics {
  double duration = 0.0;     // s
  double path_length = 0.0;  // m
  double max_alt_rel = 0.0;  // m
  double max_speed = 0.0;    // m/s
  std::optional<double> max_home_distance;  // m
  std::size_t point_count = 0;

  bool operator==(const TrackMetrics&) const = default;
};

/// Merges SRT samples and decoded rows that carry coordinates into a single
/// time-ordered track. Exact (t, lat, lon) duplicates are folded together and
/// every row message is attached to its nearest-in-time point. Row
/// altitudes are converted from feet.
FlightTrack build_track(const std::vector<TelemetrySample>& samples,
                        const std::vector<FlightRecordRow>& rows = {});

TrackMetrics compute_metrics(const FlightTrack& track);

std::string export_kml(const FlightTrack& track, const TrackMetrics& metrics);
std::string export_geojson(const FlightTrack& track, const TrackMetrics& metrics);
std::string export_csv(const FlightTrack& track);

/// Message list <-> single field, ';' separated with '\' escaping.
std::string join_messages(const std::vector<std::string>& messages);
std::vector<std::string> split_messages(std::string_view field);

}  // namespace dronefx
