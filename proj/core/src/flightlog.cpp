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

#include "dronefx/flightlog.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>

#include "dronefx/error.hpp"
#include "dronefx/text.hpp"

namespace dronefx {

std::optional<DateTime> parse_flightrecord_filename(std::string_view name) {
  static const std::regex re(
      R"(^DJIFlightRecord_(\d{4})-(\d{2})-(\d{2})_\[(\d{2})-(\d{2})-(\d{2})\]\.txt$)",
      std::regex::ECMAScript | std::regex::icase);
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_match(name.begin(), name.end(), m, re)) return std::nullopt;
  DateTime dt;
  dt.year = std::stoi(m[1].str());
  dt.month = std::stoi(m[2].str());
  dt.day = std::stoi(m[3].str());
  dt.hour = std::stoi(m[4].str());
  dt.minute = std::stoi(m[5].str());
  dt.second = std::stoi(m[6].str());
  if (!dt.valid()) return std::nullopt;
  return dt;
}

std::string_view to_string(LogKind k) {
  switch (k) {
    case LogKind::kTxtProprietary: return "TxtProprietary";
    case LogKind::kDatProprietary: return "DatProprietary";
    case LogKind::kDecodedCsv: return "DecodedCsv";
  }
  return "TxtProprietary";
}

namespace {

struct ColumnName {
  Column column;
  std::string_view canonical;
  std::vector<std::string_view> aliases;  // already normalised
};

const std::vector<ColumnName>& column_names() {
  static const std::vector<ColumnName> names = {
      {Column::kFlightMode, "flight_mode", {"flightmode"}},
      {Column::kSatellites, "satellites", {"gps", "satellites", "gpssatellites"}},
      {Column::kImuAlt, "imu_alt", {"imualtitude", "imualt"}},
      {Column::kVpsAlt, "vps_alt", {"vpsaltitude", "vpsalt"}},
      {Column::kSpeed, "speed", {"speed"}},
      {Column::kHomeDistance, "home_distance", {"homedistance", "distancefromhome"}},
      {Column::kBatteryPct, "battery_pct", {"battery", "batterypct", "batterylevel"}},
      {Column::kBatteryVoltage, "battery_voltage", {"batteryvoltage"}},
      {Column::kCell, "cell", {}},
      {Column::kCellDeviation, "cell_deviation", {"celldeviation"}},
      {Column::kMessage, "message", {"message", "messages"}},
      {Column::kLatitude, "latitude", {"latitude", "lat"}},
      {Column::kLongitude, "longitude", {"longitude", "lon", "lng"}},
      {Column::kTimeMs, "time_ms", {"timems", "time(ms)", "offsetms", "timemillisecond"}},
  };
  return names;
}

std::string normalise_header(std::string_view h) {
  std::string out;
  for (char c : trim(h)) {
    if (c == ' ' || c == '_' || c == '-' || c == '\t') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

std::optional<Column> lookup(std::string_view header, const ColumnMap& extra) {
  const std::string n = normalise_header(header);
  if (n.empty()) return std::nullopt;
  if (auto it = extra.find(n); it != extra.end()) return it->second;
  for (const auto& c : column_names()) {
    if (std::find(c.aliases.begin(), c.aliases.end(), n) != c.aliases.end()) return c.column;
  }
  if (n.size() > 4 && n.compare(0, 4, "cell") == 0 &&
      std::all_of(n.begin() + 4, n.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    return Column::kCell;
  }
  return std::nullopt;
}

char detect_separator(std::string_view header) {
  return header.find('\t') != std::string_view::npos ? '\t' : ',';
}

std::string_view first_line(std::string_view text) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  const auto nl = text.find('\n');
  std::string_view line = text.substr(0, nl);
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

bool parse_number(std::string_view s, double* out) {
  s = trim(s);
  if (s.empty() || s.size() > 64) return false;
  const std::string tmp(s);
  char* end = nullptr;
  const double v = std::strtod(tmp.c_str(), &end);
  if (end != tmp.c_str() + tmp.size() || !std::isfinite(v)) return false;
  // strtod also accepts hex and inf/nan spellings; only plain decimals pass.
  for (char c : tmp) {
    if (!std::isdigit(static_cast<unsigned char>(c)) && c != '.' && c != '-' && c != '+') {
      return false;
    }
  }
  *out = v;
  return true;
}

// Parses "<number>[ ]<unit>"; an absent unit is accepted, a different one is not.
std::optional<double> with_unit(std::string_view cell, std::string_view unit, const char* field,
                                std::vector<std::string>& warnings, bool* na) {
  std::string_view s = trim(cell);
  *na = s.empty() || s == "N/A" || s == "n/a";
  if (*na) return std::nullopt;
  std::string_view num = s;
  if (!unit.empty() && s.size() >= unit.size()) {
    const std::string tail = to_lower(s.substr(s.size() - unit.size()));
    if (tail == to_lower(unit)) num = trim(s.substr(0, s.size() - unit.size()));
  }
  double v = 0;
  if (!parse_number(num, &v)) {
    warnings.push_back(std::string(field) + ": cannot parse '" + std::string(s) + "'");
    return std::nullopt;
  }
  return v;
}

}  // namespace

std::string_view to_string(Column c) {
  for (const auto& n : column_names()) {
    if (n.column == c) return n.canonical;
  }
  return "unknown";
}

std::optional<Column> parse_column(std::string_view name) {
  const std::string t = to_lower(trim(name));
  for (const auto& n : column_names()) {
    if (n.canonical == t) return n.column;
  }
  // Header spellings such as "IMU Altitude" name the same fields.
  return lookup(name, {});
}

ColumnMap parse_column_map(std::string_view text) {
  ColumnMap map;
  std::size_t line_no = 0;
  for (auto line : split_lines(text)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto arrow = line.find("->");
    const auto where = "column map line " + std::to_string(line_no);
    if (arrow == std::string_view::npos) {
      throw Error(ErrorCode::kInvalidColumnMap, where + ": expected 'name -> field'");
    }
    const std::string key = normalise_header(line.substr(0, arrow));
    const auto col = parse_column(line.substr(arrow + 2));
    if (key.empty() || !col) {
      throw Error(ErrorCode::kInvalidColumnMap, where + ": unknown field or empty name");
    }
    map[key] = *col;
  }
  return map;
}

ColumnMap load_column_map(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read column map " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_column_map(ss.str());
}

std::size_t count_known_columns(std::string_view header_line, const ColumnMap& extra) {
  std::size_t n = 0;
  for (const auto& cell : split(header_line, detect_separator(header_line))) {
    n += lookup(cell, extra).has_value();
  }
  return n;
}

FlightLogFile classify_log(std::span<const std::uint8_t> bytes, std::string_view name) {
  FlightLogFile f;
  f.path = std::string(name);
  const auto slash = name.find_last_of("/\\");
  f.start_time = parse_flightrecord_filename(
      slash == std::string_view::npos ? name : name.substr(slash + 1));
  f.probe = probe_dat_header(bytes);
  const std::string_view text(reinterpret_cast<const char*>(bytes.data()),
                              std::min<std::size_t>(bytes.size(), 64 * 1024));
  if (count_known_columns(first_line(text)) >= 3) {
    f.kind = LogKind::kDecodedCsv;
    f.encoded = false;
  } else if (printable_ratio(bytes) < 0.5) {
    f.kind = LogKind::kDatProprietary;
    f.encoded = true;
  } else {
    f.kind = LogKind::kTxtProprietary;
    f.encoded = true;
  }
  return f;
}

std::vector<std::string> split_message_cell(std::string_view cell) {
  std::vector<std::string> out;
  for (const auto& part : split(cell, ';')) {
    const auto t = trim(part);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

std::vector<FlightRecordRow> ingest_decoded_csv(std::string_view text, const ColumnMap& extra) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  const char sep = detect_separator(first_line(text));
  const auto records = parse_csv(text, sep);
  if (records.empty()) throw Error(ErrorCode::kNoHeader, "empty input");
  const auto& header = records.front();
  std::vector<std::optional<Column>> cols;
  std::size_t known = 0;
  for (const auto& h : header) {
    cols.push_back(lookup(h, extra));
    known += cols.back().has_value();
  }
  if (known == 0) throw Error(ErrorCode::kNoHeader, "no recognised column in header");

  // Cells past the header width belong to the Message column when it is last.
  const bool message_last = cols.back() == Column::kMessage;

  std::vector<FlightRecordRow> rows;
  for (std::size_t r = 1; r < records.size(); ++r) {
    std::vector<std::string> cells = records[r];
    if (cells.size() == 1 && trim(cells[0]).empty()) continue;
    FlightRecordRow row;
    row.index = static_cast<std::int64_t>(rows.size());
    row.t_ms = row.index * kDefaultRowIntervalMs;
    if (cells.size() > header.size()) {
      if (message_last) {
        std::string joined = cells[header.size() - 1];
        for (std::size_t k = header.size(); k < cells.size(); ++k) joined += sep + cells[k];
        cells.resize(header.size());
        cells.back() = std::move(joined);
      } else {
        row.warnings.push_back("row has " + std::to_string(cells.size()) + " cells, header has " +
                               std::to_string(header.size()));
        for (std::size_t k = header.size(); k < cells.size(); ++k) {
          row.extras["_overflow" + std::to_string(k - header.size() + 1)] = cells[k];
        }
      }
    }
    for (std::size_t c = 0; c < header.size(); ++c) {
      const std::string cell = c < cells.size() ? cells[c] : std::string{};
      if (!cols[c]) {
        row.extras[std::string(trim(header[c]))] = cell;
        continue;
      }
      bool na = false;
      auto& w = row.warnings;
      switch (*cols[c]) {
        case Column::kFlightMode: row.flight_mode = std::string(trim(cell)); break;
        case Column::kSatellites:
          if (auto v = with_unit(cell, "satellites", "satellites", w, &na)) {
            if (*v < 0 || std::floor(*v) != *v || *v > 1e9) {
              w.push_back("satellites: not a non-negative integer");
            } else {
              row.satellites = static_cast<std::int64_t>(*v);
            }
          }
          break;
        case Column::kImuAlt: row.imu_alt = with_unit(cell, "ft", "imu_alt", w, &na); break;
        case Column::kVpsAlt: row.vps_alt = with_unit(cell, "ft", "vps_alt", w, &na); break;
        case Column::kSpeed: row.speed = with_unit(cell, "mph", "speed", w, &na); break;
        case Column::kHomeDistance:
          row.home_distance = with_unit(cell, "ft", "home_distance", w, &na);
          break;
        case Column::kBatteryPct:
          if (auto v = with_unit(cell, "%", "battery_pct", w, &na)) {
            if (*v < 0 || *v > 100) {
              w.push_back("battery_pct: out of range");
            } else {
              row.battery_pct = v;
            }
          }
          break;
        case Column::kBatteryVoltage:
          row.battery_voltage = with_unit(cell, "V", "battery_voltage", w, &na);
          break;
        case Column::kCell:
          if (auto v = with_unit(cell, "V", "cell", w, &na)) row.cell_voltages.push_back(*v);
          break;
        case Column::kCellDeviation:
          if (auto v = with_unit(cell, "V", "cell_deviation", w, &na)) {
            if (*v < 0) {
              w.push_back("cell_deviation: negative");
            } else {
              row.cell_deviation = v;
            }
          }
          break;
        case Column::kMessage: {
          auto msgs = split_message_cell(cell);
          row.messages.insert(row.messages.end(), msgs.begin(), msgs.end());
          break;
        }
        case Column::kLatitude:
          if (auto v = with_unit(cell, "", "latitude", w, &na)) {
            if (*v < -90 || *v > 90) {
              w.push_back("latitude: out of range");
            } else {
              row.latitude = v;
            }
          }
          break;
        case Column::kLongitude:
          if (auto v = with_unit(cell, "", "longitude", w, &na)) {
            if (*v < -180 || *v > 180) {
              w.push_back("longitude: out of range");
            } else {
              row.longitude = v;
            }
          }
          break;
        case Column::kTimeMs:
          if (auto v = with_unit(cell, "ms", "time_ms", w, &na)) {
            if (*v < 0 || *v > 9e15) {
              w.push_back("time_ms: out of range");
            } else {
              row.t_ms = static_cast<std::int64_t>(std::llround(*v));
            }
          }
          break;
      }
    }
    if (row.cell_deviation && row.cell_voltages.size() >= 2) {
      const auto [lo, hi] = std::minmax_element(row.cell_voltages.begin(), row.cell_voltages.end());
      if (std::fabs((*hi - *lo) - *row.cell_deviation) > 0.001 + 1e-9) {
        row.warnings.push_back("cell_deviation disagrees with cell voltages");
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace dronefx
