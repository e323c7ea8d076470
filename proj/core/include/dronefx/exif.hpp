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
#include <vector>

#include "dronefx/catalog.hpp"
#include "dronefx/datetime.hpp"

namespace dronefx {

struct GpsPosition {
  double lat = 0.0;
  double lon = 0.0;
  std::optional<double> alt;

  bool operator==(const GpsPosition&) const = default;
};

/// Named EXIF fields plus every other tag in `raw`. Timestamps are
/// device-local with an unknown zone.
struct ExifRecord {
  std::optional<DateTime> datetime_original;
  std::optional<std::string> make;
  std::optional<std::string> model;
  std::optional<std::string> serial;
  std::optional<GpsPosition> gps;
  std::optional<PixelSize> pixel_dims;
  /// "<ifd>.0x<tag>" -> rendered value; MakerNote is kept as a length marker.
  std::map<std::string, std::string> raw;
  /// Set when the TIFF structure was damaged; fields hold what was readable.
  bool malformed = false;
  std::vector<std::string> warnings;

  bool operator==(const ExifRecord&) const = default;
};

/// Throws kNotJpeg when the buffer does not start FF D8 and kNoExif for a
/// JPEG without an Exif APP1 segment.
ExifRecord parse_jpeg_exif(std::span<const std::uint8_t> bytes);

/// Throws kNotTiff when the magic is neither "II*\0" nor "MM\0*".
ExifRecord parse_tiff_exif(std::span<const std::uint8_t> bytes);

struct Rational {
  std::uint32_t num = 0;
  std::uint32_t den = 1;
};

/// Degrees/minutes/seconds to signed decimal degrees, rounded half-even to
/// seven places. `ref` is one of N, S, E, W. Throws kZeroDenominator.
double gps_to_decimal(const Rational& deg, const Rational& min, const Rational& sec, char ref);

}  // namespace dronefx
