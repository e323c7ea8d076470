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

#include "dronefx/exif.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdio>
#include <set>

#include "dronefx/error.hpp"

namespace dronefx {

namespace {

constexpr std::uint16_t kTagImageWidth = 0x0100;
constexpr std::uint16_t kTagImageLength = 0x0101;
constexpr std::uint16_t kTagMake = 0x010F;
constexpr std::uint16_t kTagModel = 0x0110;
constexpr std::uint16_t kTagExifIfd = 0x8769;
constexpr std::uint16_t kTagGpsIfd = 0x8825;
constexpr std::uint16_t kTagDateTimeOriginal = 0x9003;
constexpr std::uint16_t kTagMakerNote = 0x927C;
constexpr std::uint16_t kTagPixelX = 0xA002;
constexpr std::uint16_t kTagPixelY = 0xA003;
constexpr std::uint16_t kTagBodySerial = 0xA431;
constexpr std::uint16_t kGpsLatRef = 1, kGpsLat = 2, kGpsLonRef = 3, kGpsLon = 4,
                        kGpsAltRef = 5, kGpsAlt = 6;

constexpr std::size_t kMaxRenderedValues = 64;

std::size_t type_size(std::uint16_t type) {
  switch (type) {
    case 1: case 2: case 6: case 7: return 1;
    case 3: case 8: return 2;
    case 4: case 9: case 11: return 4;
    case 5: case 10: case 12: return 8;
    default: return 0;
  }
}

struct Entry {
  std::uint16_t tag = 0;
  std::uint16_t type = 0;
  std::uint32_t count = 0;
  std::span<const std::uint8_t> data;  // empty when out of bounds
};

class TiffReader {
 public:
  TiffReader(std::span<const std::uint8_t> b, bool little) : b_(b), le_(little) {}

  bool has(std::uint64_t off, std::uint64_t len) const {
    return off <= b_.size() && len <= b_.size() - off;
  }
  std::uint16_t u16(std::size_t off) const {
    return le_ ? static_cast<std::uint16_t>(b_[off] | (b_[off + 1] << 8))
               : static_cast<std::uint16_t>((b_[off] << 8) | b_[off + 1]);
  }
  std::uint32_t u32(std::size_t off) const {
    const std::uint32_t a = b_[off], b = b_[off + 1], c = b_[off + 2], d = b_[off + 3];
    return le_ ? (a | (b << 8) | (c << 16) | (d << 24)) : ((a << 24) | (b << 16) | (c << 8) | d);
  }
  std::uint16_t u16(std::span<const std::uint8_t> s, std::size_t i) const {
    return u16(static_cast<std::size_t>(s.data() - b_.data()) + i);
  }
  std::uint32_t u32(std::span<const std::uint8_t> s, std::size_t i) const {
    return u32(static_cast<std::size_t>(s.data() - b_.data()) + i);
  }
  std::span<const std::uint8_t> bytes() const { return b_; }

 private:
  std::span<const std::uint8_t> b_;
  bool le_;
};

class Parser {
 public:
  Parser(std::span<const std::uint8_t> tiff, ExifRecord& rec) : tiff_(tiff), rec_(rec) {}

  void run() {
    if (tiff_.size() < 8) {
      fail("TIFF header truncated");
      return;
    }
    bool little;
    if (tiff_[0] == 'I' && tiff_[1] == 'I') {
      little = true;
    } else if (tiff_[0] == 'M' && tiff_[1] == 'M') {
      little = false;
    } else {
      fail("bad TIFF byte order");
      return;
    }
    r_.emplace(tiff_, little);
    if (r_->u16(2) != 42) {
      fail("bad TIFF magic");
      return;
    }
    std::uint32_t next = r_->u32(4);
    int index = 0;
    while (next != 0) {
      const std::string name = "ifd" + std::to_string(index);
      const auto entries = read_ifd(next, name, &next);
      if (!entries) break;
      if (index == 0) handle_ifd0(*entries);
      ++index;
    }
    finish();
  }

 private:
  void fail(const std::string& why) {
    rec_.malformed = true;
    rec_.warnings.push_back("malformed TIFF: " + why);
  }

  // Returns nullopt for unreadable or revisited IFDs.
  std::optional<std::vector<Entry>> read_ifd(std::uint32_t off, const std::string& name,
                                             std::uint32_t* next_out) {
    if (next_out) *next_out = 0;
    if (!visited_.insert(off).second) {
      fail("IFD cycle at offset " + std::to_string(off));
      return std::nullopt;
    }
    if (!r_->has(off, 2)) {
      fail(name + " offset out of bounds");
      return std::nullopt;
    }
    const std::uint16_t n = r_->u16(off);
    std::vector<Entry> entries;
    for (std::uint32_t i = 0; i < n; ++i) {
      const std::uint64_t e = std::uint64_t{off} + 2 + 12ull * i;
      if (!r_->has(e, 12)) {
        fail(name + " entry table truncated");
        return entries;
      }
      Entry en;
      en.tag = r_->u16(e);
      en.type = r_->u16(e + 2);
      en.count = r_->u32(e + 4);
      const std::size_t sz = type_size(en.type);
      const std::uint64_t total = std::uint64_t{sz} * en.count;
      if (sz == 0) {
        rec_.warnings.push_back(name + ": unknown type for tag " + hex_tag(en.tag));
      } else if (total <= 4) {
        en.data = r_->bytes().subspan(e + 8, total);
      } else {
        const std::uint32_t vo = r_->u32(e + 8);
        if (r_->has(vo, total)) {
          en.data = r_->bytes().subspan(vo, total);
        } else {
          fail(name + " tag " + hex_tag(en.tag) + " value out of bounds");
        }
      }
      record_raw(name, en);
      entries.push_back(en);
    }
    const std::uint64_t tail = std::uint64_t{off} + 2 + 12ull * n;
    if (next_out) {
      if (r_->has(tail, 4)) {
        *next_out = r_->u32(tail);
      } else if (n > 0) {
        fail(name + " next-IFD pointer truncated");
      }
    }
    return entries;
  }

  static std::string hex_tag(std::uint16_t tag) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "0x%04x", tag);
    return buf;
  }

  std::string render(const Entry& e) const {
    if (e.data.empty() && e.count != 0) return "<unreadable>";
    if (e.tag == kTagMakerNote) return "<" + std::to_string(e.data.size()) + " bytes>";
    const std::size_t sz = type_size(e.type);
    if (sz == 0) return "<type " + std::to_string(e.type) + ">";
    if (e.type == 2) return ascii(e);
    if (e.type == 7 || e.type == 1 || e.type == 6) {
      if (e.data.size() > kMaxRenderedValues) return "<" + std::to_string(e.data.size()) + " bytes>";
      std::string out;
      static const char* kHex = "0123456789abcdef";
      for (auto b : e.data) {
        out.push_back(kHex[b >> 4]);
        out.push_back(kHex[b & 15]);
      }
      return out;
    }
    const std::size_t n = e.data.size() / sz;
    if (n > kMaxRenderedValues) return "<" + std::to_string(n) + " values>";
    std::string out;
    for (std::size_t i = 0; i < n; ++i) {
      if (i) out += ' ';
      const std::size_t o = i * sz;
      switch (e.type) {
        case 3: out += std::to_string(r_->u16(e.data, o)); break;
        case 8: out += std::to_string(static_cast<std::int16_t>(r_->u16(e.data, o))); break;
        case 4: out += std::to_string(r_->u32(e.data, o)); break;
        case 9: out += std::to_string(static_cast<std::int32_t>(r_->u32(e.data, o))); break;
        case 5:
          out += std::to_string(r_->u32(e.data, o)) + "/" + std::to_string(r_->u32(e.data, o + 4));
          break;
        case 10:
          out += std::to_string(static_cast<std::int32_t>(r_->u32(e.data, o))) + "/" +
                 std::to_string(static_cast<std::int32_t>(r_->u32(e.data, o + 4)));
          break;
        default: out += "?"; break;
      }
    }
    return out;
  }

  static std::string ascii(const Entry& e) {
    std::string s(e.data.begin(), e.data.end());
    while (!s.empty() && (s.back() == '\0' || s.back() == ' ')) s.pop_back();
    const auto nul = s.find('\0');
    if (nul != std::string::npos) s.resize(nul);
    return s;
  }

  void record_raw(const std::string& ifd, const Entry& e) {
    rec_.raw[ifd + "." + hex_tag(e.tag)] = render(e);
  }

  std::optional<std::uint32_t> integer(const Entry& e) const {
    if (e.data.empty()) return std::nullopt;
    if (e.type == 3) return r_->u16(e.data, 0);
    if (e.type == 4) return r_->u32(e.data, 0);
    return std::nullopt;
  }

  std::optional<std::string> text(const Entry& e) const {
    if (e.type != 2 || e.data.empty()) return std::nullopt;
    auto s = ascii(e);
    if (s.empty()) return std::nullopt;
    return s;
  }

  void handle_ifd0(const std::vector<Entry>& entries) {
    for (const auto& e : entries) {
      switch (e.tag) {
        case kTagMake: rec_.make = text(e); break;
        case kTagModel: rec_.model = text(e); break;
        case kTagImageWidth: ifd0_w_ = integer(e); break;
        case kTagImageLength: ifd0_h_ = integer(e); break;
        case kTagExifIfd:
          if (auto off = integer(e)) {
            if (auto sub = read_ifd(*off, "exif", nullptr)) handle_exif(*sub);
          }
          break;
        case kTagGpsIfd:
          if (auto off = integer(e)) {
            if (auto sub = read_ifd(*off, "gps", nullptr)) handle_gps(*sub);
          }
          break;
        default: break;
      }
    }
  }

  void handle_exif(const std::vector<Entry>& entries) {
    for (const auto& e : entries) {
      switch (e.tag) {
        case kTagDateTimeOriginal:
          if (auto s = text(e)) {
            int y, mo, d, h, mi, se;
            char tail;
            if (std::sscanf(s->c_str(), "%4d:%2d:%2d %2d:%2d:%2d%c", &y, &mo, &d, &h, &mi, &se,
                            &tail) == 6) {
              DateTime dt{y, mo, d, h, mi, se, 0};
              if (dt.valid()) {
                rec_.datetime_original = dt;
                break;
              }
            }
            rec_.warnings.push_back("unparseable DateTimeOriginal: " + *s);
          }
          break;
        case kTagBodySerial: rec_.serial = text(e); break;
        case kTagPixelX: exif_w_ = integer(e); break;
        case kTagPixelY: exif_h_ = integer(e); break;
        default: break;
      }
    }
  }

  std::optional<std::array<Rational, 3>> dms(const Entry& e) const {
    if (e.type != 5 || e.data.size() < 24) return std::nullopt;
    std::array<Rational, 3> out;
    for (std::size_t i = 0; i < 3; ++i) {
      out[i] = {r_->u32(e.data, i * 8), r_->u32(e.data, i * 8 + 4)};
    }
    return out;
  }

  void handle_gps(const std::vector<Entry>& entries) {
    std::optional<char> lat_ref, lon_ref;
    std::optional<std::array<Rational, 3>> lat, lon;
    std::optional<Rational> alt;
    std::uint8_t alt_ref = 0;
    for (const auto& e : entries) {
      switch (e.tag) {
        case kGpsLatRef:
          if (auto s = text(e)) lat_ref = (*s)[0];
          break;
        case kGpsLonRef:
          if (auto s = text(e)) lon_ref = (*s)[0];
          break;
        case kGpsLat: lat = dms(e); break;
        case kGpsLon: lon = dms(e); break;
        case kGpsAltRef:
          if (!e.data.empty()) alt_ref = e.data[0];
          break;
        case kGpsAlt:
          if (e.type == 5 && e.data.size() >= 8) alt = Rational{r_->u32(e.data, 0), r_->u32(e.data, 4)};
          break;
        default: break;
      }
    }
    if (!lat || !lon) return;
    try {
      GpsPosition p;
      p.lat = gps_to_decimal((*lat)[0], (*lat)[1], (*lat)[2], lat_ref.value_or('N'));
      p.lon = gps_to_decimal((*lon)[0], (*lon)[1], (*lon)[2], lon_ref.value_or('E'));
      if (p.lat < -90 || p.lat > 90 || p.lon < -180 || p.lon > 180) {
        rec_.warnings.push_back("GPS position out of range");
        return;
      }
      if (alt && alt->den != 0) {
        const double a = static_cast<double>(alt->num) / alt->den;
        p.alt = alt_ref == 1 ? -a : a;
      }
      rec_.gps = p;
    } catch (const Error& err) {
      rec_.warnings.push_back(std::string("GPS ignored: ") + err.what());
    }
  }

  void finish() {
    if (exif_w_ && exif_h_) {
      rec_.pixel_dims = PixelSize{static_cast<int>(*exif_w_), static_cast<int>(*exif_h_)};
    } else if (ifd0_w_ && ifd0_h_) {
      rec_.pixel_dims = PixelSize{static_cast<int>(*ifd0_w_), static_cast<int>(*ifd0_h_)};
    }
  }

  std::span<const std::uint8_t> tiff_;
  ExifRecord& rec_;
  std::optional<TiffReader> r_;
  std::set<std::uint32_t> visited_;
  std::optional<std::uint32_t> ifd0_w_, ifd0_h_, exif_w_, exif_h_;
};

}  // namespace

ExifRecord parse_tiff_exif(std::span<const std::uint8_t> bytes) {
  const bool le = bytes.size() >= 4 && bytes[0] == 'I' && bytes[1] == 'I' && bytes[2] == 42 &&
                  bytes[3] == 0;
  const bool be = bytes.size() >= 4 && bytes[0] == 'M' && bytes[1] == 'M' && bytes[2] == 0 &&
                  bytes[3] == 42;
  if (!le && !be) throw Error(ErrorCode::kNotTiff, "missing TIFF magic");
  ExifRecord rec;
  Parser(bytes, rec).run();
  return rec;
}

ExifRecord parse_jpeg_exif(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 0xFF || bytes[1] != 0xD8) {
    throw Error(ErrorCode::kNotJpeg, "missing SOI marker");
  }
  std::size_t pos = 2;
  while (pos + 4 <= bytes.size()) {
    if (bytes[pos] != 0xFF) break;
    std::uint8_t marker = bytes[pos + 1];
    if (marker == 0xFF) {
      ++pos;
      continue;
    }
    if (marker == 0x01 || (marker >= 0xD0 && marker <= 0xD7)) {
      pos += 2;
      continue;
    }
    if (marker == 0xDA || marker == 0xD9) break;
    const std::size_t len = (std::size_t{bytes[pos + 2]} << 8) | bytes[pos + 3];
    if (len < 2) break;
    const std::size_t payload = pos + 4;
    const std::size_t avail = std::min(len - 2, bytes.size() - payload);
    if (marker == 0xE1 && avail >= 6 &&
        std::equal(bytes.begin() + payload, bytes.begin() + payload + 6, "Exif\0\0")) {
      ExifRecord rec;
      Parser(bytes.subspan(payload + 6, avail - 6), rec).run();
      if (avail < len - 2) {
        rec.malformed = true;
        rec.warnings.push_back("malformed TIFF: APP1 segment truncated");
      }
      return rec;
    }
    pos = payload + len - 2;
  }
  throw Error(ErrorCode::kNoExif, "no Exif APP1 segment");
}

double gps_to_decimal(const Rational& deg, const Rational& min, const Rational& sec, char ref) {
  using boost::multiprecision::cpp_int;
  if (deg.den == 0 || min.den == 0 || sec.den == 0) {
    throw Error(ErrorCode::kZeroDenominator, "GPS rational with zero denominator");
  }
  bool negative;
  switch (ref) {
    case 'N': case 'n': case 'E': case 'e': negative = false; break;
    case 'S': case 's': case 'W': case 'w': negative = true; break;
    default: throw Error(ErrorCode::kInvalidArgument, std::string("bad GPS reference: ") + ref);
  }
  const cpp_int dd = deg.den, md = min.den, sd = sec.den;
  const cpp_int num = cpp_int(deg.num) * md * sd * 3600 + cpp_int(min.num) * dd * sd * 60 +
                      cpp_int(sec.num) * dd * md;
  const cpp_int den = dd * md * sd * 3600;
  const cpp_int scaled = num * 10000000;
  cpp_int q = scaled / den;
  const cpp_int twice_r = (scaled % den) * 2;
  if (twice_r > den || (twice_r == den && (q & 1) != 0)) ++q;
  const double value = q.convert_to<double>() / 1e7;
  return negative ? -value : value;
}

}  // namespace dronefx
