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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dronefx/byte_source.hpp"
#include "dronefx/imgfs.hpp"

namespace dronefx {

enum class CarveValidator { kJpeg, kTiff, kMp4 };

struct Signature {
  std::string name;  // becomes CarvedFile::kind
  std::vector<std::uint8_t> header;
  /// Distance from the file start to the header (4 for MP4 "ftyp").
  std::uint64_t header_offset = 0;
  std::optional<std::vector<std::uint8_t>> footer;
  std::uint64_t max_length = 0;
  CarveValidator validator = CarveValidator::kJpeg;
  std::string extension;
};

inline constexpr std::uint64_t kJpegMaxLength = 64ull << 20;
inline constexpr std::uint64_t kTiffMaxLength = 256ull << 20;
inline constexpr std::uint64_t kMp4MaxLength = 4ull << 30;
/// Regions below this size also get a byte-aligned header pass.
inline constexpr std::uint64_t kByteScanLimit = 16ull << 20;

/// JPEG, little/big-endian TIFF (covers DNG) and MP4.
std::vector<Signature> default_signatures();

enum class Confidence { kExact, kTruncated, kHeuristic };
std::string_view to_string(Confidence c);

struct CarvedFile {
  std::uint64_t source_offset = 0;
  std::uint64_t length = 0;
  std::string kind;
  std::string extension;
  std::string payload_hash;  // hex SHA-256
  Confidence confidence = Confidence::kExact;

  bool operator==(const CarvedFile&) const = default;
};

struct TextBlock {
  std::uint64_t offset = 0;
  std::uint64_t length = 0;
  std::string text;

  bool operator==(const TextBlock&) const = default;
};

struct CarveOptions {
  unsigned threads = 1;
};

/// Header/footer carving restricted to the given regions. Results are sorted
/// by offset; overlapping candidates are resolved longest first. Throws
/// kInvalidArgument when `signatures` is empty.
std::vector<CarvedFile> carve(const std::vector<UnallocatedRegion>& regions,
                              const ByteSource& bytes, const std::vector<Signature>& signatures,
                              const CarveOptions& options = {},
                              std::vector<std::string>* warnings = nullptr);

/// Maximal runs of >=256 bytes, >=95% printable ASCII, that mention at least
/// two of the latitude/longitude/rel_alt/abs_alt telemetry keys.
std::vector<TextBlock> carve_telemetry_text(const std::vector<UnallocatedRegion>& regions,
                                            const ByteSource& bytes);

/// Whole-source region, for images whose filesystem cannot be walked.
std::vector<UnallocatedRegion> whole_source(const ByteSource& bytes);

/// Writes `<out_dir>/<offset, 12 digits>_<kind>.<ext>` for every carved file and text
/// block plus `<out_dir>/index.txt`. Returns the index text.
std::string write_carved(const std::filesystem::path& out_dir, const ByteSource& bytes,
                         const std::vector<CarvedFile>& files,
                         const std::vector<TextBlock>& blocks);

}  // namespace dronefx
