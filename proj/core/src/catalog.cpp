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

#include "dronefx/catalog.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "dronefx/error.hpp"
#include "json.hpp"

namespace dronefx {

std::string_view to_string(Category c) {
  switch (c) {
    case Category::kMedia: return "Media";
    case Category::kFlightLog: return "FlightLog";
    case Category::kOther: return "Other";
  }
  return "Other";
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

}  // namespace

std::optional<Category> parse_category(std::string_view text) {
  const std::string t = lower(text);
  if (t == "media") return Category::kMedia;
  if (t == "flightlog" || t == "flight_log") return Category::kFlightLog;
  if (t == "other") return Category::kOther;
  return std::nullopt;
}

std::string Flags::to_string() const {
  std::string out;
  const auto add = [&](std::uint8_t f, char letter) {
    if (!has(f)) return;
    if (!out.empty()) out += ", ";
    out.push_back(letter);
  };
  add(kG, 'G');
  add(kP, 'P');
  add(kD, 'D');
  add(kE, 'E');
  return out;
}

std::optional<Flags> Flags::parse(std::string_view text) {
  Flags f;
  for (char ch : text) {
    switch (std::toupper(static_cast<unsigned char>(ch))) {
      case 'G': f.set(kG); break;
      case 'P': f.set(kP); break;
      case 'D': f.set(kD); break;
      case 'E': f.set(kE); break;
      case ',': case ' ': case '{': case '}': break;
      default: return std::nullopt;
    }
  }
  return f;
}

// ---- Rule table -------------------------------------------------------------

namespace {

std::vector<std::string> split_segments(std::string_view path) {
  std::vector<std::string> segs;
  std::string cur;
  for (char ch : path) {
    if (ch == '/' || ch == '\\') {
      if (!cur.empty()) segs.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
  }
  if (!cur.empty()) segs.push_back(std::move(cur));
  return segs;
}

bool match_segments(const std::vector<std::string>& pat, std::size_t pi,
                    const std::vector<std::string>& path, std::size_t si) {
  if (pi == pat.size()) return si == path.size();
  if (pat[pi] == "**") {
    for (std::size_t k = si; k <= path.size(); ++k) {
      if (match_segments(pat, pi + 1, path, k)) return true;
    }
    return false;
  }
  if (si == path.size()) return false;
  if (fnmatch(pat[pi].c_str(), path[si].c_str(), FNM_NOESCAPE) != 0) return false;
  return match_segments(pat, pi + 1, path, si + 1);
}

}  // namespace

struct RuleTable::Compiled {
  std::vector<std::string> glob;
  std::optional<std::regex> name;
};

RuleTable::RuleTable(std::vector<CatalogRule> rules) : rules_(std::move(rules)) {
  std::set<std::string> ids;
  for (const auto& r : rules_) {
    if (r.rule_id.empty() || !ids.insert(r.rule_id).second) {
      throw Error(ErrorCode::kInvalidRule, "rule ids must be unique and non-empty: " + r.rule_id);
    }
    auto c = std::make_unique<Compiled>();
    c->glob = split_segments(r.path_glob);
    if (c->glob.empty()) {
      throw Error(ErrorCode::kInvalidRule, "empty path glob in rule " + r.rule_id);
    }
    if (!r.name_pattern.empty()) {
      try {
        c->name.emplace(r.name_pattern, std::regex::ECMAScript | std::regex::icase);
      } catch (const std::regex_error& e) {
        throw Error(ErrorCode::kInvalidRule, r.rule_id + ": " + e.what());
      }
    }
    compiled_.push_back(std::move(c));
  }
}

RuleTable::~RuleTable() = default;
RuleTable::RuleTable(RuleTable&&) noexcept = default;
RuleTable& RuleTable::operator=(RuleTable&&) noexcept = default;

const RuleTable& RuleTable::builtin() {
  static const RuleTable table(builtin_rules());
  return table;
}

RuleTable RuleTable::with_user_rules(std::vector<CatalogRule> user_rules) {
  auto base = builtin_rules();
  user_rules.insert(user_rules.end(), base.begin(), base.end());
  return RuleTable(std::move(user_rules));
}

Classification RuleTable::classify(std::string_view dir, std::string_view name) const {
  std::string full(dir);
  if (!full.empty()) full += '/';
  full += name;
  const auto path = split_segments(full);
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    const auto& c = *compiled_[i];
    if (c.name && !std::regex_match(name.begin(), name.end(), *c.name)) continue;
    bool hit = false;
    // Suffix match: the glob may start at any segment boundary.
    for (std::size_t start = 0; start < path.size() && !hit; ++start) {
      hit = match_segments(c.glob, 0, path, start);
    }
    if (!hit) continue;
    return {rules_[i].category, rules_[i].role, rules_[i].flags, rules_[i].rule_id};
  }
  return {};
}

std::vector<CatalogRule> builtin_rules() {
  using C = Category;
  const Flags none;
  return {
      {"srt-telemetry", "*", R"(.*\.srt)", C::kOther, "telemetry", {}},
      {"dcim-original", "DCIM/*MEDIA/*", "", C::kMedia, "original", none},
      {"misc-thumbnail", "MISC/THM/*/*", "", C::kMedia, "thumbnail", none},
      {"rc-cached-video", "Android/data/dji.go.v5/files/MediaCaches/**", "", C::kMedia,
       "cached-video", none},
      {"rc-image-cache", "Android/data/dji.go.v5/cache/ImageCaches/**", "", C::kMedia,
       "thumbnail", none},
      {"rc-flight-record", "Android/data/dji.go.v5/files/FlightRecord/**", "", C::kFlightLog,
       "flight-record", none},
      {"flight-record-name", "*", R"(DJIFlightRecord_.*)", C::kFlightLog, "flight-record", none},
      {"quick-transfer", "*", R"(dji_fly_\d{8}_.*_(photo|video)\.[a-z0-9]+)", C::kMedia,
       "quick-transfer", none},
      {"account-sync", "SyncResult/**", "", C::kOther, "account-sync", Flags(Flags::kP)},
      {"assistant-log", "*", R"(.*@.*\.log)", C::kOther, "system-log", Flags(Flags::kE)},
      {"assistant-ui-log", "*", R"(ui_ass2\.log)", C::kOther, "system-log", Flags(Flags::kE)},
      {"proprietary-dat", "*", R"(.*\.dat)", C::kOther, "proprietary-log", none},
  };
}

std::vector<CatalogRule> parse_rules(std::string_view json_text) {
  std::vector<CatalogRule> rules;
  try {
    const auto j = nlohmann::json::parse(json_text);
    const auto& arr = j.is_object() ? j.at("rules") : j;
    for (const auto& jr : arr) {
      CatalogRule r;
      r.rule_id = jr.at("rule_id").get<std::string>();
      r.path_glob = jr.value("path_glob", std::string("*"));
      r.name_pattern = jr.value("name_pattern", std::string{});
      const auto cat = parse_category(jr.at("category").get<std::string>());
      if (!cat) throw Error(ErrorCode::kInvalidRule, "bad category in rule " + r.rule_id);
      r.category = *cat;
      r.role = jr.value("role", std::string("unclassified"));
      const auto flags = Flags::parse(jr.value("flags", std::string{}));
      if (!flags) throw Error(ErrorCode::kInvalidRule, "bad flags in rule " + r.rule_id);
      r.flags = *flags;
      rules.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidRule, e.what());
  }
  RuleTable check(rules);  // compiles every rule or throws
  return rules;
}

std::vector<CatalogRule> load_rules_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read rules file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_rules(ss.str());
}

Classification classify_path(std::string_view dir, std::string_view name) {
  return RuleTable::builtin().classify(dir, name);
}

// ---- Name conventions -------------------------------------------------------

std::string_view to_string(MediaKind k) { return k == MediaKind::kPhoto ? "Photo" : "Video"; }
std::string_view to_string(ThumbVariant v) {
  return v == ThumbVariant::kThumbnail ? "Thumbnail" : "Preview";
}

namespace {

int to_int(const std::string& s) { return std::stoi(s); }

std::optional<Date> parse_yyyymmdd(const std::string& s) {
  if (s.size() != 8) return std::nullopt;
  Date d{to_int(s.substr(0, 4)), to_int(s.substr(4, 2)), to_int(s.substr(6, 2))};
  if (!d.valid()) return std::nullopt;
  return d;
}

}  // namespace

std::optional<ThumbnailMeta> parse_rc_thumbnail_name(std::string_view name) {
  static const std::regex re(
      R"(^(photo|video)_(\d+)_dji_(\d+)_(jpg|mp4)_(\d+)_(\d+)_(\d{8})(\d*)_photo_(thunmbnail|thumbnail|preview)\.jpg$)",
      std::regex::ECMAScript | std::regex::icase);
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_match(name.begin(), name.end(), m, re)) return std::nullopt;
  ThumbnailMeta meta;
  const std::string kind = lower(m[1].str());
  const std::string ext = lower(m[4].str());
  meta.media_kind = kind == "photo" ? MediaKind::kPhoto : MediaKind::kVideo;
  if ((meta.media_kind == MediaKind::kPhoto) != (ext == "jpg")) return std::nullopt;
  const auto date = parse_yyyymmdd(m[7].str());
  if (!date) return std::nullopt;
  meta.date = *date;
  meta.sequence = m[3].str();
  const std::string variant = lower(m[9].str());
  meta.variant = variant == "preview" ? ThumbVariant::kPreview : ThumbVariant::kThumbnail;
  meta.misspelled = variant == "thunmbnail";
  if (meta.media_kind == MediaKind::kPhoto) {
    meta.expected_px = meta.variant == ThumbVariant::kThumbnail ? PixelSize{160, 120}
                                                                : PixelSize{960, 720};
  } else {
    meta.expected_px = meta.variant == ThumbVariant::kThumbnail ? PixelSize{160, 90}
                                                                : PixelSize{960, 540};
  }
  return meta;
}

DateTime parse_cache_video_name(std::string_view name) {
  static const std::regex re(R"(^(\d{4})\.(\d{2})\.(\d{2})\.(\d{2})\.(\d{2})_(\d{2})_Cache\.mp4$)",
                             std::regex::ECMAScript | std::regex::icase);
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_match(name.begin(), name.end(), m, re)) {
    throw Error(ErrorCode::kMalformedName, std::string(name));
  }
  DateTime dt;
  dt.year = to_int(m[1].str());
  dt.month = to_int(m[2].str());
  dt.day = to_int(m[3].str());
  dt.hour = to_int(m[4].str());
  dt.minute = to_int(m[5].str());
  dt.second = to_int(m[6].str());
  if (!dt.valid()) throw Error(ErrorCode::kMalformedName, std::string(name));
  return dt;
}

QuickTransferMeta parse_quicktransfer_name(std::string_view name) {
  static const std::regex re(
      R"(^dji_fly_(\d{8})_(\d{6})_(\d+)_([a-z0-9]+)_(photo|video)\.(jpg|jpeg|mp4)$)",
      std::regex::ECMAScript | std::regex::icase);
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_match(name.begin(), name.end(), m, re)) {
    throw Error(ErrorCode::kMalformedName, std::string(name));
  }
  const auto date = parse_yyyymmdd(m[1].str());
  const std::string kind = lower(m[5].str());
  const std::string ext = lower(m[6].str());
  const bool photo = kind == "photo";
  if (!date || photo != (ext != "mp4")) throw Error(ErrorCode::kMalformedName, std::string(name));
  return {*date, photo ? MediaKind::kPhoto : MediaKind::kVideo};
}

// ---- PII and probes -----------------------------------------------------------

std::string_view to_string(PiiKind k) {
  switch (k) {
    case PiiKind::kEmail: return "Email";
    case PiiKind::kSerialCandidate: return "SerialCandidate";
    case PiiKind::kAccountName: return "AccountName";
  }
  return "Email";
}

const std::vector<std::string>& known_model_tokens() {
  static const std::vector<std::string> tokens = {"RM330", "MT3M3VD"};
  return tokens;
}

namespace {

bool ascii_printable(std::uint8_t b) { return b >= 0x20 && b < 0x7F; }
bool text_byte(std::uint8_t b) { return ascii_printable(b) || b == '\t' || b == '\n' || b == '\r'; }
bool alnum(std::uint8_t b) { return std::isalnum(b) != 0; }
bool local_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '%' ||
         c == '+' || c == '-';
}
bool domain_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-'; }

std::string make_context(std::span<const std::uint8_t> bytes, std::uint64_t offset,
                         std::size_t length) {
  constexpr std::size_t kWidth = 80;
  std::size_t pad = length >= kWidth ? 0 : (kWidth - length) / 2;
  const std::size_t begin = offset > pad ? static_cast<std::size_t>(offset) - pad : 0;
  const std::size_t end = std::min(bytes.size(), begin + kWidth);
  std::string ctx;
  for (std::size_t i = begin; i < end; ++i) {
    ctx.push_back(ascii_printable(bytes[i]) ? static_cast<char>(bytes[i]) : '.');
  }
  return ctx;
}

}  // namespace

bool is_email(std::string_view text) {
  const auto at = text.find('@');
  if (at == std::string_view::npos || text.find('@', at + 1) != std::string_view::npos) {
    return false;
  }
  const std::string_view local = text.substr(0, at);
  const std::string_view domain = text.substr(at + 1);
  if (local.empty() || local.size() > 64 || local.front() == '.' || local.back() == '.' ||
      local.find("..") != std::string_view::npos) {
    return false;
  }
  for (char c : local) {
    if (!local_char(c)) return false;
  }
  if (domain.empty() || domain.size() > 253) return false;
  std::size_t labels = 0;
  std::size_t start = 0;
  std::string_view last;
  while (start <= domain.size()) {
    const auto dot = domain.find('.', start);
    const std::string_view label =
        domain.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
    if (label.empty() || label.size() > 63 || label.front() == '-' || label.back() == '-') {
      return false;
    }
    for (char c : label) {
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-') return false;
    }
    ++labels;
    last = label;
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  if (labels < 2 || last.size() < 2) return false;
  for (char c : last) {
    if (!std::isalpha(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

std::vector<PiiHit> scan_pii(std::span<const std::uint8_t> bytes) {
  std::vector<PiiHit> hits;
  std::set<std::pair<std::uint64_t, int>> seen;
  const auto add = [&](PiiKind kind, std::string value, std::uint64_t offset) {
    if (!seen.insert({offset, static_cast<int>(kind)}).second) return;
    PiiHit h;
    h.kind = kind;
    h.context = make_context(bytes, offset, value.size());
    h.value = std::move(value);
    h.offset = offset;
    hits.push_back(std::move(h));
  };

  // Emails and account names live inside printable runs.
  static const std::regex account_re(
      R"re((account|username|user_name|nickname|login)"?\s*[:=]\s*"?([A-Za-z0-9._@-]{3,64}))re",
      std::regex::ECMAScript | std::regex::icase);
  std::size_t i = 0;
  while (i < bytes.size()) {
    if (!ascii_printable(bytes[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < bytes.size() && ascii_printable(bytes[j])) ++j;
    if (j - i >= 6) {
      const std::string run(reinterpret_cast<const char*>(bytes.data() + i), j - i);
      for (std::size_t at = run.find('@'); at != std::string::npos; at = run.find('@', at + 1)) {
        std::size_t l = at;
        while (l > 0 && local_char(run[l - 1])) --l;
        while (l < at && run[l] == '.') ++l;
        std::size_t r = at + 1;
        while (r < run.size() && domain_char(run[r])) ++r;
        while (r > at + 1 && (run[r - 1] == '.' || run[r - 1] == '-')) --r;
        const std::string candidate = run.substr(l, r - l);
        if (is_email(candidate)) add(PiiKind::kEmail, candidate, i + l);
      }
      for (std::sregex_iterator it(run.begin(), run.end(), account_re), end; it != end; ++it) {
        const auto& m = *it;
        add(PiiKind::kAccountName, m[2].str(), i + static_cast<std::size_t>(m.position(2)));
      }
    }
    i = j;
  }

  // Serial candidates: the nearest uppercase alphanumeric token of 10-20
  // chars, holding both digits and letters, within a short window on either
  // side of a model code. Lower-case key labels in between are skipped.
  constexpr std::size_t kWindow = 48;
  const auto token_ok = [&](std::size_t b, std::size_t e) {
    if (e - b < 10 || e - b > 20) return false;
    bool digit = false, letter = false;
    for (std::size_t k = b; k < e; ++k) {
      const std::uint8_t c = bytes[k];
      if (std::isdigit(c)) {
        digit = true;
      } else if (std::isupper(c)) {
        letter = true;
      } else {
        return false;
      }
    }
    return digit && letter;
  };
  const auto emit = [&](std::size_t b, std::size_t e) {
    add(PiiKind::kSerialCandidate, std::string(reinterpret_cast<const char*>(bytes.data() + b), e - b),
        b);
  };
  for (const auto& model : known_model_tokens()) {
    const auto* mb = reinterpret_cast<const std::uint8_t*>(model.data());
    for (auto it = std::search(bytes.begin(), bytes.end(), mb, mb + model.size());
         it != bytes.end(); it = std::search(it + 1, bytes.end(), mb, mb + model.size())) {
      const std::size_t ms = static_cast<std::size_t>(it - bytes.begin());
      const std::size_t me = ms + model.size();
      // Forward; a token glued to the model code is part of another word.
      if (me >= bytes.size() || !alnum(bytes[me])) {
        const std::size_t limit = std::min(bytes.size(), me + kWindow);
        for (std::size_t p = me; p < limit;) {
          if (!alnum(bytes[p])) {
            ++p;
            continue;
          }
          std::size_t q = p;
          while (q < bytes.size() && alnum(bytes[q])) ++q;
          if (token_ok(p, q)) {
            emit(p, q);
            break;
          }
          p = q;
        }
      }
      // Backward.
      if (ms == 0 || !alnum(bytes[ms - 1])) {
        const std::size_t limit = ms > kWindow ? ms - kWindow : 0;
        for (std::size_t e = ms; e > limit;) {
          if (!alnum(bytes[e - 1])) {
            --e;
            continue;
          }
          std::size_t b = e;
          while (b > 0 && alnum(bytes[b - 1])) --b;
          if (token_ok(b, e)) {
            emit(b, e);
            break;
          }
          e = b;
        }
      }
    }
  }
  std::sort(hits.begin(), hits.end(), [](const PiiHit& a, const PiiHit& b) {
    if (a.offset != b.offset) return a.offset < b.offset;
    return static_cast<int>(a.kind) < static_cast<int>(b.kind);
  });
  return hits;
}

double printable_ratio(std::span<const std::uint8_t> bytes) {
  if (bytes.empty()) return 0.0;
  std::size_t good = 0;
  for (auto b : bytes) good += text_byte(b);
  return static_cast<double>(good) / static_cast<double>(bytes.size());
}

DatProbe probe_dat_header(std::span<const std::uint8_t> bytes) {
  DatProbe p;
  const auto head = bytes.first(std::min<std::size_t>(bytes.size(), 4096));
  std::size_t i = 0;
  while (i < head.size()) {
    if (!ascii_printable(head[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < head.size() && ascii_printable(head[j])) ++j;
    if (j - i >= 5) p.strings.emplace_back(reinterpret_cast<const char*>(head.data() + i), j - i);
    i = j;
  }
  for (const auto& model : known_model_tokens()) {
    const auto* mb = reinterpret_cast<const std::uint8_t*>(model.data());
    if (std::search(head.begin(), head.end(), mb, mb + model.size()) != head.end()) {
      p.model = model;
      break;
    }
  }
  p.encoded = bytes.empty() || printable_ratio(bytes) < 0.5;
  return p;
}

}  // namespace dronefx
