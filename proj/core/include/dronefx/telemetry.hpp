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

namespace dronefx {

/// A bracketed telemetry value. `text` is always the exact source spelling.
struct FieldValue {
  enum class Kind { kNumber, kTuple, kText };
  Kind kind = Kind::kText;
  std::string text;
  double number = 0.0;
  std::vector<std::int64_t> tuple;

  static FieldValue from_text(std::string_view raw);
  bool operator==(const FieldValue&) const = default;
};

using FieldMap = std::map<std::string, FieldValue>;

/// Reserved extras keys that do not come from a bracketed `key: value` pair.
inline constexpr std::string_view kRawKey = "_raw";
inline constexpr std::string_view kDateTimeKey = "_datetime";

struct TelemetrySample {
  std::optional<std::int64_t> cue_index;
  std::int64_t t_start = 0;  // ms from video start
  std::int64_t t_end = 0;
  std::optional<double> latitude;
  std::optional<double> longitude;
  std::optional<double> rel_alt;  // meters
  std::optional<double> abs_alt;  // meters
  /// Exact decimal spelling of the named fields above.
  std::map<std::string, std::string> exact;
  FieldMap camera;
  FieldMap extras;

  /// Bracketed keys captured by this sample (reserved extras excluded).
  std::size_t key_count() const;
  bool operator==(const TelemetrySample&) const = default;
};

struct TelemetryTrack {
  std::vector<TelemetrySample> samples;
  std::string origin;
  std::vector<std::string> warnings;

  bool operator==(const TelemetryTrack&) const = default;
};

/// Named position/altitude keys and the recognised camera keys.
const std::vector<std::string>& named_telemetry_keys();
const std::vector<std::string>& camera_telemetry_keys();

/// Extracts `[key: value]` tokens. Keys are lower-cased with spaces turned
/// into '_'; repeated keys become "key#2", "key#3", ... Text that is not
/// part of any pair is collected under "_raw".
FieldMap tokenize_bracket_fields(std::string_view line);

/// Parses SRT cues. Malformed cues are skipped with a warning; samples come
/// back ordered by start time.
TelemetryTrack parse_srt(std::string_view text, std::string origin = {});

/// Renders a track back to SRT such that parse_srt(to_srt(t)) reproduces
/// the samples of t.
std::string to_srt(const TelemetryTrack& track);

inline constexpr double kJumpWarnMeters = 500.0;
inline constexpr double kAltitudeWarnMeters = 100.0;

/// Warns on non-monotonic time, out-of-range coordinates, position jumps
/// and altitude discontinuities between adjacent samples.
std::vector<std::string> validate_track(const TelemetryTrack& track);

}  // namespace dronefx
