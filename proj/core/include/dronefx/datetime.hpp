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

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace dronefx {

/// A civil date and time with no attached zone.
///
/// Device clocks (FAT directory entries, EXIF, DJI file names) record local
/// wall-clock time without a zone, so values are kept naive and compared as
/// such. Fields are stored as decoded; `valid()` reports whether they form a
/// real calendar instant, which lets callers keep undecodable on-disk values
/// around as evidence instead of silently dropping them.
struct DateTime {
  int year = 1970;
  int month = 1;
  int day = 1;
  int hour = 0;
  int minute = 0;
  int second = 0;
  int millis = 0;

  bool valid() const;

  /// Seconds since 1970-01-01 00:00:00 on the proleptic Gregorian calendar.
  std::int64_t to_seconds() const;
  std::int64_t to_millis() const { return to_seconds() * 1000 + millis; }
  static DateTime from_millis(std::int64_t ms);

  /// "YYYY-MM-DD HH:MM:SS", with ".mmm" appended when millis != 0.
  std::string to_string() const;
  /// Accepts "YYYY-MM-DD HH:MM:SS[.mmm]" and "YYYY-MM-DDTHH:MM:SS[.mmm][Z]".
  static std::optional<DateTime> parse(std::string_view text);

  auto operator<=>(const DateTime&) const = default;
  bool operator==(const DateTime&) const = default;
};

/// A calendar date, used where file-name conventions carry no time of day.
struct Date {
  int year = 1970;
  int month = 1;
  int day = 1;

  bool valid() const;
  std::string to_string() const;

  auto operator<=>(const Date&) const = default;
  bool operator==(const Date&) const = default;
};

bool is_valid_date(int year, int month, int day);

/// Current UTC wall-clock time as "YYYY-MM-DDTHH:MM:SSZ".
std::string utc_now_iso();

}  // namespace dronefx
