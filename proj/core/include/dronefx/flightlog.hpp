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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dronefx/catalog.hpp"
#include "dronefx/datetime.hpp"

namespace dronefx {

/// "DJIFlightRecord_YYYY-MM-DD_[HH-MM-SS].txt"; nullopt for any other name
/// or an impossible date.
std::optional<DateTime> parse_flightrecord_filename(std::string_view name);

enum class LogKind { kTxtProprietary, kDatProprietary, kDecodedCsv };
std::string_view to_string(LogKind k);

struct FlightLogFile {
  std::string path;
  LogKind kind = LogKind::kTxtProprietary;
  std::optional<DateTime> start_time;
  bool encoded = true;
  DatProbe probe;

  bool operator==(const FlightLogFile&) const = default;
};

/// Decides by content, never by extension.
FlightLogFile classify_log(std::span<const std::uint8_t> bytes, std::string_view name);

/// Canonical column fields a decoded CSV can map onto.
enum class Column {
  kFlightMode,
  kSatellites,
  kImuAlt,
  kVpsAlt,
  kSpeed,
  kHomeDistance,
  kBatteryPct,
  kBatteryVoltage,
  kCell,  // "Cell 1", "Cell 2", ...
  kCellDeviation,
  kMessage,
  kLatitude,
  kLongitude,
  kTimeMs,
};
std::string_view to_string(Column c);
/// Canonical names ("imu_alt") and header spellings ("IMU Altitude") both work.
std::optional<Column> parse_column(std::string_view name);

/// External header name -> canonical column. Keys are lower-cased with
/// separators ('_', '-', ' ') removed before comparison.
using ColumnMap = std::map<std::string, Column>;

/// "external_name -> canonical_field" lines; '#' starts a comment.
/// Throws kInvalidColumnMap.
ColumnMap parse_column_map(std::string_view text);
ColumnMap load_column_map(const std::filesystem::path& path);

/// Imperial units are kept as recorded: feet, mph, volts, percent.
struct FlightRecordRow {
  std::int64_t index = 0;
  std::int64_t t_ms = 0;  // time column when present, else index * 100
  std::string flight_mode;
  std::optional<std::int64_t> satellites;
  std::optional<double> imu_alt;
  std::optional<double> vps_alt;
  std::optional<double> speed;
  std::optional<double> home_distance;
  std::optional<double> battery_pct;
  std::optional<double> battery_voltage;
  std::vector<double> cell_voltages;
  std::optional<double> cell_deviation;
  std::optional<double> latitude;
  std::optional<double> longitude;
  std::vector<std::string> messages;
  std::map<std::string, std::string> extras;
  std::vector<std::string> warnings;

  bool operator==(const FlightRecordRow&) const = default;
};

inline constexpr std::int64_t kDefaultRowIntervalMs = 100;
inline constexpr double kFeetToMeters = 0.3048;
inline constexpr double kMphToMetersPerSecond = 0.44704;

/// Number of header cells that name a known column.
std::size_t count_known_columns(std::string_view header_line, const ColumnMap& extra = {});

/// Throws kNoHeader when the first line names no known column.
std::vector<FlightRecordRow> ingest_decoded_csv(std::string_view text,
                                                const ColumnMap& extra = {});

/// Splits a Message cell on ';' into trimmed, non-empty messages.
std::vector<std::string> split_message_cell(std::string_view cell);

}  // namespace dronefx
