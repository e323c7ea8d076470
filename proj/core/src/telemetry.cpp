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

#include "dronefx/telemetry.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>

#include "dronefx/geo.hpp"
#include "dronefx/text.hpp"

namespace dronefx {

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

bool is_decimal(std::string_view s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
  const std::size_t int_start = i;
  while (i < s.size() && is_digit(s[i])) ++i;
  if (i == int_start) return false;
  if (i < s.size() && s[i] == '.') {
    const std::size_t frac_start = ++i;
    while (i < s.size() && is_digit(s[i])) ++i;
    if (i == frac_start) return false;
  }
  return i == s.size();
}

std::optional<std::vector<std::int64_t>> parse_tuple(std::string_view s) {
  if (s.size() < 2 || s.front() != '(' || s.back() != ')') return std::nullopt;
  std::vector<std::int64_t> out;
  for (const auto& part : split(s.substr(1, s.size() - 2), ',')) {
    const std::string_view t = trim(part);
    std::size_t i = (!t.empty() && t[0] == '-') ? 1 : 0;
    if (t.size() == i || t.size() - i > 18) return std::nullopt;
    for (; i < t.size(); ++i) {
      if (!is_digit(t[i])) return std::nullopt;
    }
    out.push_back(std::strtoll(std::string(t).c_str(), nullptr, 10));
  }
  return out;
}

std::string strip_markup(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '<') {
      const auto close = s.find('>', i);
      const bool tag = close != std::string_view::npos && i + 1 < s.size() &&
                       (s[i + 1] == '/' || std::isalpha(static_cast<unsigned char>(s[i + 1])));
      if (tag) {
        i = close;
        continue;
      }
    }
    out.push_back(s[i]);
  }
  return out;
}

std::string normalise_key(std::string_view raw) {
  std::string key;
  bool pending_space = false;
  for (char c : raw) {
    if (is_space(c)) {
      pending_space = !key.empty();
      continue;
    }
    if (pending_space) key.push_back('_');
    pending_space = false;
    key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (key == "rgbgain") key = "rgb_gain";
  return key;
}

// Index one past the bracket that closes the one opened at `open`.
std::size_t skip_nested(std::string_view s, std::size_t open) {
  int depth = 0;
  for (std::size_t i = open; i < s.size(); ++i) {
    if (s[i] == '[') ++depth;
    if (s[i] == ']' && --depth == 0) return i + 1;
  }
  return s.size();
}

class Collector {
 public:
  void pair(std::string_view raw_key, std::string_view raw_value) {
    std::string key = normalise_key(raw_key);
    std::string_view v = trim(raw_value);
    while (!v.empty() && (v.back() == ',' || is_space(v.back()))) v.remove_suffix(1);
    const int n = ++seen_[key];
    if (n > 1) key += "#" + std::to_string(n);
    out_[key] = FieldValue::from_text(v);
  }

  void raw(std::string_view text) {
    text = trim(text);
    while (!text.empty() && (text.back() == ',' || is_space(text.back()))) text.remove_suffix(1);
    if (text.empty()) return;
    if (!raw_.empty()) raw_ += ' ';
    raw_ += text;
  }

  // A `[...]` body: zero or more `key: value` pairs, possibly preceded by
  // loose text.
  void segment(std::string_view seg) {
    struct Key {
      std::size_t begin, end, colon;
    };
    std::vector<Key> keys;
    std::size_t k = 0;
    {
      // Two-word keys ("sensor temperature") are only recognised at the start.
      std::size_t a = 0;
      while (a < seg.size() && is_space(seg[a])) ++a;
      std::size_t b = a;
      while (b < seg.size() && is_ident(seg[b])) ++b;
      std::size_t c = b;
      while (c < seg.size() && is_space(seg[c])) ++c;
      std::size_t d = c;
      while (d < seg.size() && is_ident(seg[d])) ++d;
      std::size_t e = d;
      while (e < seg.size() && is_space(seg[e])) ++e;
      if (b > a && is_ident_start(seg[a]) && c > b && d > c && is_ident_start(seg[c]) &&
          e < seg.size() && seg[e] == ':') {
        keys.push_back({a, d, e});
        k = e + 1;
      }
    }
    while (k < seg.size()) {
      const char ch = seg[k];
      if (ch == '[') {
        k = skip_nested(seg, k);
        continue;
      }
      const bool boundary = k == 0 || !is_ident(seg[k - 1]);
      if (!boundary || !is_ident_start(ch)) {
        ++k;
        continue;
      }
      std::size_t e = k;
      while (e < seg.size() && is_ident(seg[e])) ++e;
      std::size_t c = e;
      while (c < seg.size() && is_space(seg[c])) ++c;
      if (c < seg.size() && seg[c] == ':') {
        keys.push_back({k, e, c});
        k = c + 1;
      } else {
        k = e;
      }
    }
    if (keys.empty()) {
      raw(seg);
      return;
    }
    raw(seg.substr(0, keys.front().begin));
    for (std::size_t i = 0; i < keys.size(); ++i) {
      const std::size_t vend = i + 1 < keys.size() ? keys[i + 1].begin : seg.size();
      pair(seg.substr(keys[i].begin, keys[i].end - keys[i].begin),
           seg.substr(keys[i].colon + 1, vend - keys[i].colon - 1));
    }
  }

  FieldMap finish() {
    if (!raw_.empty()) out_[std::string(kRawKey)] = FieldValue::from_text(raw_);
    return std::move(out_);
  }

 private:
  FieldMap out_;
  std::map<std::string, int> seen_;
  std::string raw_;
};

bool parse_clock(std::string_view s, std::int64_t* ms) {
  s = trim(s);
  const auto c1 = s.find(':');
  if (c1 == std::string_view::npos || c1 == 0 || c1 > 6) return false;
  const std::string_view rest = s.substr(c1 + 1);
  if (rest.size() != 9 || rest[2] != ':' || (rest[5] != ',' && rest[5] != '.')) return false;
  for (std::size_t i = 0; i < c1; ++i) {
    if (!is_digit(s[i])) return false;
  }
  for (std::size_t i : {0, 1, 3, 4, 6, 7, 8}) {
    if (!is_digit(rest[i])) return false;
  }
  const auto num = [](std::string_view d) {
    std::int64_t v = 0;
    for (char c : d) v = v * 10 + (c - '0');
    return v;
  };
  const std::int64_t h = num(s.substr(0, c1));
  const std::int64_t m = num(rest.substr(0, 2));
  const std::int64_t sec = num(rest.substr(3, 2));
  if (m > 59 || sec > 59) return false;
  *ms = ((h * 60 + m) * 60 + sec) * 1000 + num(rest.substr(6, 3));
  return true;
}

bool parse_time_line(std::string_view line, std::int64_t* start, std::int64_t* end) {
  const auto arrow = line.find("-->");
  if (arrow == std::string_view::npos) return false;
  return parse_clock(line.substr(0, arrow), start) && parse_clock(line.substr(arrow + 3), end);
}

bool is_datetime_line(std::string_view s) {
  s = trim(s);
  if (s.size() < 19) return false;
  static constexpr std::string_view kShape = "dddd-dd-dd?dd:dd:dd";
  for (std::size_t i = 0; i < kShape.size(); ++i) {
    const char want = kShape[i];
    if (want == 'd' ? !is_digit(s[i]) : want == '?' ? (s[i] != ' ' && s[i] != 'T') : s[i] != want) {
      return false;
    }
  }
  for (std::size_t i = kShape.size(); i < s.size(); ++i) {
    if (!is_digit(s[i]) && s[i] != '.' && s[i] != ',') return false;
  }
  return true;
}

std::string format_clock(std::int64_t ms) {
  if (ms < 0) ms = 0;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%02lld:%02lld:%02lld,%03lld",
                static_cast<long long>(ms / 3600000), static_cast<long long>(ms / 60000 % 60),
                static_cast<long long>(ms / 1000 % 60), static_cast<long long>(ms % 1000));
  return buf;
}

std::string base_key(const std::string& key) {
  const auto hash = key.find('#');
  return hash == std::string::npos ? key : key.substr(0, hash);
}

bool reserved(const std::string& key) { return key == kRawKey || key == kDateTimeKey; }

TelemetrySample make_sample(FieldMap fields) {
  static const std::set<std::string> camera(camera_telemetry_keys().begin(),
                                            camera_telemetry_keys().end());
  TelemetrySample s;
  for (auto& [key, value] : fields) {
    if (reserved(key)) {
      s.extras[key] = std::move(value);
      continue;
    }
    if (value.kind == FieldValue::Kind::kNumber && std::isfinite(value.number)) {
      std::optional<double>* slot = nullptr;
      if (key == "latitude") slot = &s.latitude;
      if (key == "longitude") slot = &s.longitude;
      if (key == "rel_alt") slot = &s.rel_alt;
      if (key == "abs_alt") slot = &s.abs_alt;
      if (slot) {
        *slot = value.number;
        s.exact[key] = value.text;
        continue;
      }
    }
    if (camera.count(base_key(key))) {
      s.camera[key] = std::move(value);
    } else {
      s.extras[key] = std::move(value);
    }
  }
  return s;
}

}  // namespace

FieldValue FieldValue::from_text(std::string_view raw) {
  FieldValue v;
  v.text = std::string(raw);
  if (is_decimal(raw) && raw.size() <= 64) {
    v.kind = Kind::kNumber;
    v.number = std::strtod(v.text.c_str(), nullptr);
  } else if (auto t = parse_tuple(raw)) {
    v.kind = Kind::kTuple;
    v.tuple = std::move(*t);
  }
  return v;
}

std::size_t TelemetrySample::key_count() const {
  std::size_t n = exact.size() + camera.size() + extras.size();
  for (const auto& [k, v] : extras) n -= reserved(k);
  return n;
}

const std::vector<std::string>& named_telemetry_keys() {
  static const std::vector<std::string> keys = {"latitude", "longitude", "rel_alt", "abs_alt"};
  return keys;
}

const std::vector<std::string>& camera_telemetry_keys() {
  static const std::vector<std::string> keys = {
      "iso", "shutter", "fnum", "ev", "focal_len", "dzoom_ratio", "delta", "ct",
      "color_temperature", "sensor_temperature", "rgb_gain", "color_md"};
  return keys;
}

FieldMap tokenize_bracket_fields(std::string_view line) {
  const std::string s = strip_markup(line);
  Collector col;
  std::string outside;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '[') {
      outside.push_back(s[i++]);
      continue;
    }
    col.raw(outside);
    outside.clear();
    const std::size_t start = i + 1;
    std::size_t j = start;
    std::size_t end = s.size();
    std::size_t next = s.size();
    while (j < s.size()) {
      if (s[j] == ']') {
        end = j;
        next = j + 1;
        break;
      }
      if (s[j] == '[') {
        std::size_t p = j;
        while (p > start && is_space(s[p - 1])) --p;
        if (p > start && s[p - 1] == ':') {
          j = skip_nested(s, j);
          continue;
        }
        end = j;  // an unclosed bracket is closed by the next one
        next = j;
        break;
      }
      ++j;
    }
    col.segment(std::string_view(s).substr(start, end - start));
    i = next;
  }
  col.raw(outside);
  return col.finish();
}

TelemetryTrack parse_srt(std::string_view text, std::string origin) {
  TelemetryTrack track;
  track.origin = std::move(origin);
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  const auto lines = split_lines(text);

  std::vector<std::vector<std::string_view>> blocks;
  std::vector<std::string_view> cur;
  for (auto line : lines) {
    if (trim(line).empty()) {
      if (!cur.empty()) blocks.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(line);
    }
  }
  if (!cur.empty()) blocks.push_back(std::move(cur));

  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& blk = blocks[b];
    std::size_t pos = 0;
    std::optional<std::int64_t> index;
    const std::string_view first = trim(blk[0]);
    if (!first.empty() && first.size() <= 18 &&
        std::all_of(first.begin(), first.end(), is_digit)) {
      index = std::strtoll(std::string(first).c_str(), nullptr, 10);
      pos = 1;
    }
    std::int64_t t0 = 0, t1 = 0;
    if (pos >= blk.size() || !parse_time_line(blk[pos], &t0, &t1)) {
      track.warnings.push_back("cue block " + std::to_string(b + 1) + ": missing time line");
      continue;
    }
    if (t1 < t0) {
      track.warnings.push_back("cue block " + std::to_string(b + 1) + ": end before start");
      continue;
    }
    std::string payload;
    std::optional<std::string> stamp;
    for (std::size_t k = pos + 1; k < blk.size(); ++k) {
      const std::string clean = strip_markup(blk[k]);
      if (!stamp && is_datetime_line(clean)) {
        stamp = std::string(trim(clean));
        continue;
      }
      if (!payload.empty()) payload += ' ';
      payload += blk[k];
    }
    FieldMap fields = tokenize_bracket_fields(payload);
    if (stamp) fields[std::string(kDateTimeKey)] = FieldValue::from_text(*stamp);
    TelemetrySample s = make_sample(std::move(fields));
    s.cue_index = index;
    s.t_start = t0;
    s.t_end = t1;
    track.samples.push_back(std::move(s));
  }

  if (!std::is_sorted(track.samples.begin(), track.samples.end(),
                      [](const auto& a, const auto& b) { return a.t_start < b.t_start; })) {
    track.warnings.push_back("cues out of time order; samples re-sorted");
    std::stable_sort(track.samples.begin(), track.samples.end(),
                     [](const auto& a, const auto& b) { return a.t_start < b.t_start; });
  }
  std::optional<std::int64_t> last;
  for (const auto& s : track.samples) {
    if (!s.cue_index) continue;
    if (last && *s.cue_index <= *last) {
      track.warnings.push_back("cue index " + std::to_string(*s.cue_index) +
                               " does not increase");
    }
    last = s.cue_index;
  }
  return track;
}

std::string to_srt(const TelemetryTrack& track) {
  std::string out;
  for (std::size_t i = 0; i < track.samples.size(); ++i) {
    const auto& s = track.samples[i];
    out += std::to_string(s.cue_index.value_or(static_cast<std::int64_t>(i + 1))) + "\n";
    out += format_clock(s.t_start) + " --> " + format_clock(s.t_end) + "\n";
    if (auto it = s.extras.find(std::string(kDateTimeKey)); it != s.extras.end()) {
      out += it->second.text + "\n";
    }
    std::string line;
    const auto emit = [&](const std::string& key, const std::string& value) {
      if (!line.empty()) line += ' ';
      line += "[" + base_key(key) + ": " + value + "]";
    };
    for (const auto& key : named_telemetry_keys()) {
      if (auto it = s.exact.find(key); it != s.exact.end()) emit(key, it->second);
    }
    for (const auto& [k, v] : s.camera) emit(k, v.text);
    for (const auto& [k, v] : s.extras) {
      if (!reserved(k)) emit(k, v.text);
    }
    if (auto it = s.extras.find(std::string(kRawKey)); it != s.extras.end()) {
      if (!line.empty()) line += ' ';
      line += it->second.text;
    }
    out += line + "\n\n";
  }
  return out;
}

std::vector<std::string> validate_track(const TelemetryTrack& track) {
  std::vector<std::string> warnings;
  const auto& ss = track.samples;
  const auto in_range = [](const TelemetrySample& s) {
    return s.latitude && s.longitude && *s.latitude >= -90 && *s.latitude <= 90 &&
           *s.longitude >= -180 && *s.longitude <= 180;
  };
  const auto label = [](std::size_t i) { return "sample " + std::to_string(i); };
  const TelemetrySample* prev_pos = nullptr;
  for (std::size_t i = 0; i < ss.size(); ++i) {
    const auto& s = ss[i];
    if (i > 0 && s.t_start < ss[i - 1].t_start) {
      warnings.push_back(label(i) + ": timestamp goes backwards");
    }
    if ((s.latitude && (*s.latitude < -90 || *s.latitude > 90)) ||
        (s.longitude && (*s.longitude < -180 || *s.longitude > 180))) {
      warnings.push_back(label(i) + ": coordinates out of range");
    }
    if (i > 0) {
      const auto& p = ss[i - 1];
      const auto& a = s.rel_alt && p.rel_alt ? s.rel_alt : s.abs_alt;
      const auto& b = s.rel_alt && p.rel_alt ? p.rel_alt : p.abs_alt;
      if (a && b && std::fabs(*a - *b) > kAltitudeWarnMeters) {
        warnings.push_back(label(i) + ": altitude discontinuity");
      }
    }
    if (!in_range(s)) continue;
    if (prev_pos) {
      const double d = haversine({*prev_pos->latitude, *prev_pos->longitude},
                                 {*s.latitude, *s.longitude});
      if (d > kJumpWarnMeters) {
        char buf[64];
        std::snprintf(buf, sizeof buf, ": position jump of %.1f m", d);
        warnings.push_back(label(i) + buf);
      }
    }
    prev_pos = &s;
  }
  return warnings;
}

}  // namespace dronefx
