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
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dronefx/datetime.hpp"

namespace dronefx {

enum class Category { kMedia, kFlightLog, kOther };
std::string_view to_string(Category c);
std::optional<Category> parse_category(std::string_view text);

/// Evidence flags: G geolocation, P personal information, D device
/// identifiers, E encrypted/encoded content that could not be decoded.
class Flags {
 public:
  static constexpr std::uint8_t kG = 1, kP = 2, kD = 4, kE = 8;

  constexpr Flags() = default;
  constexpr explicit Flags(std::uint8_t bits) : bits_(bits & 0x0F) {}

  bool has(std::uint8_t f) const { return (bits_ & f) != 0; }
  bool empty() const { return bits_ == 0; }
  std::uint8_t bits() const { return bits_; }
  Flags& set(std::uint8_t f) {
    bits_ |= f & 0x0F;
    return *this;
  }
  Flags& operator|=(Flags o) {
    bits_ |= o.bits_;
    return *this;
  }
  /// "G, P, D, E" order; empty set renders as "".
  std::string to_string() const;
  /// Accepts letters separated by commas/spaces; nullopt on any other letter.
  static std::optional<Flags> parse(std::string_view text);

  bool operator==(const Flags&) const = default;

 private:
  std::uint8_t bits_ = 0;
};

struct CatalogRule {
  std::string rule_id;
  /// Segment glob matched against the end of the '/'-normalised path; `*`
  /// stays within a segment, `**` spans segments.
  std::string path_glob;
  /// ECMAScript regex matched against the whole file name; empty = any.
  std::string name_pattern;
  Category category = Category::kOther;
  std::string role;
  Flags flags;
};

struct Classification {
  Category category = Category::kOther;
  std::string role = "unclassified";
  Flags flags;
  std::string rule_id;

  bool operator==(const Classification&) const = default;
};

struct ArtefactRecord {
  std::string source_id;
  std::string path;
  Category category = Category::kOther;
  std::string role;
  Flags flags;
  std::map<std::string, std::string> details;

  bool operator==(const ArtefactRecord&) const = default;
};

/// Compiled, immutable rule table. Matching is case-insensitive and treats
/// '\' and '/' alike.
class RuleTable {
 public:
  /// Throws kInvalidRule on a bad glob/regex or duplicate rule id.
  explicit RuleTable(std::vector<CatalogRule> rules);
  ~RuleTable();
  RuleTable(RuleTable&&) noexcept;
  RuleTable& operator=(RuleTable&&) noexcept;

  static const RuleTable& builtin();
  /// User rules take precedence over the built-in ones.
  static RuleTable with_user_rules(std::vector<CatalogRule> user_rules);

  /// First match wins; falls back to (Other, "unclassified", {}).
  Classification classify(std::string_view dir, std::string_view name) const;
  const std::vector<CatalogRule>& rules() const { return rules_; }

 private:
  struct Compiled;
  std::vector<CatalogRule> rules_;
  std::vector<std::unique_ptr<Compiled>> compiled_;
};

std::vector<CatalogRule> builtin_rules();
/// JSON array of objects carrying the CatalogRule fields; flags as "G,P".
std::vector<CatalogRule> parse_rules(std::string_view json_text);
std::vector<CatalogRule> load_rules_file(const std::filesystem::path& path);

Classification classify_path(std::string_view dir, std::string_view name);

// ---- DJI file-name conventions -------------------------------------------

enum class MediaKind { kPhoto, kVideo };
enum class ThumbVariant { kThumbnail, kPreview };
std::string_view to_string(MediaKind k);
std::string_view to_string(ThumbVariant v);

struct PixelSize {
  int width = 0;
  int height = 0;
  bool operator==(const PixelSize&) const = default;
};

struct ThumbnailMeta {
  MediaKind media_kind = MediaKind::kPhoto;
  ThumbVariant variant = ThumbVariant::kThumbnail;
  /// Number of the related full-size DJI_<n> file.
  std::string sequence;
  Date date;
  PixelSize expected_px;
  /// The on-device "thunmbnail" spelling was used.
  bool misspelled = false;

  bool operator==(const ThumbnailMeta&) const = default;
};

/// RC ImageCaches names; nullopt when the name follows none of the patterns.
std::optional<ThumbnailMeta> parse_rc_thumbnail_name(std::string_view name);

/// "YYYY.MM.DD.HH.MM_SS_Cache.mp4"; throws kMalformedName.
DateTime parse_cache_video_name(std::string_view name);

struct QuickTransferMeta {
  Date date;
  MediaKind media_kind = MediaKind::kPhoto;
  bool operator==(const QuickTransferMeta&) const = default;
};

/// "dji_fly_YYYYMMDD_XXXXXX_XXX_<token>_photo.jpg" / "..._video.mp4";
/// throws kMalformedName.
QuickTransferMeta parse_quicktransfer_name(std::string_view name);

// ---- Content indicators ---------------------------------------------------

enum class PiiKind { kEmail, kSerialCandidate, kAccountName };
std::string_view to_string(PiiKind k);

struct PiiHit {
  PiiKind kind = PiiKind::kEmail;
  std::string value;
  std::uint64_t offset = 0;
  std::string context;  // <= 80 chars, non-printables shown as '.'

  bool operator==(const PiiHit&) const = default;
};

/// Model codes that anchor serial-candidate detection (RC and aircraft).
const std::vector<std::string>& known_model_tokens();

/// The local@domain.tld grammar used by scan_pii.
bool is_email(std::string_view text);

std::vector<PiiHit> scan_pii(std::span<const std::uint8_t> bytes);

struct DatProbe {
  std::optional<std::string> model;
  std::vector<std::string> strings;
  bool encoded = true;

  bool operator==(const DatProbe&) const = default;
};

/// Fraction of bytes that are printable ASCII or tab/CR/LF; 0 for empty input.
double printable_ratio(std::span<const std::uint8_t> bytes);

DatProbe probe_dat_header(std::span<const std::uint8_t> bytes);

inline std::span<const std::uint8_t> as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

}  // namespace dronefx
