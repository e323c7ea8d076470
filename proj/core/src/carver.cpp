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

#include "dronefx/carver.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <unordered_set>

#include "dronefx/error.hpp"
#include "dronefx/hash.hpp"
#include "dronefx/parallel.hpp"

namespace dronefx {

namespace fs = std::filesystem;

std::string_view to_string(Confidence c) {
  switch (c) {
    case Confidence::kExact: return "Exact";
    case Confidence::kTruncated: return "Truncated";
    case Confidence::kHeuristic: return "Heuristic";
  }
  return "Heuristic";
}

std::vector<Signature> default_signatures() {
  std::vector<Signature> sigs;
  sigs.push_back({"jpeg", {0xFF, 0xD8, 0xFF}, 0, std::vector<std::uint8_t>{0xFF, 0xD9},
                  kJpegMaxLength, CarveValidator::kJpeg, "jpg"});
  sigs.push_back({"tiff", {'I', 'I', 0x2A, 0x00}, 0, std::nullopt, kTiffMaxLength,
                  CarveValidator::kTiff, "tif"});
  sigs.push_back({"tiff", {'M', 'M', 0x00, 0x2A}, 0, std::nullopt, kTiffMaxLength,
                  CarveValidator::kTiff, "tif"});
  sigs.push_back({"mp4", {'f', 't', 'y', 'p'}, 4, std::nullopt, kMp4MaxLength,
                  CarveValidator::kMp4, "mp4"});
  return sigs;
}

std::vector<UnallocatedRegion> whole_source(const ByteSource& bytes) {
  if (bytes.size() == 0) return {};
  return {{0, bytes.size()}};
}

namespace {

// Buffered reads confined to [begin, end).
class BoundedReader {
 public:
  BoundedReader(const ByteSource& src, std::uint64_t begin, std::uint64_t end)
      : src_(src), begin_(begin), end_(end) {}

  std::uint64_t end() const { return end_; }
  bool contains(std::uint64_t pos, std::uint64_t n = 1) const {
    return pos >= begin_ && pos <= end_ && n <= end_ - pos;
  }

  // Returns -1 outside the window.
  int at(std::uint64_t pos) {
    if (pos < begin_ || pos >= end_) return -1;
    if (pos < cache_pos_ || pos >= cache_pos_ + cache_.size()) {
      cache_pos_ = pos;
      const std::uint64_t n = std::min<std::uint64_t>(kCache, end_ - pos);
      cache_.resize(static_cast<std::size_t>(n));
      cache_.resize(src_.read_at(pos, cache_));
      if (cache_.empty()) return -1;
    }
    return cache_[static_cast<std::size_t>(pos - cache_pos_)];
  }

  std::optional<std::uint32_t> u16(std::uint64_t pos, bool le) {
    const int a = at(pos), b = at(pos + 1);
    if (a < 0 || b < 0) return std::nullopt;
    return le ? static_cast<std::uint32_t>(a | b << 8) : static_cast<std::uint32_t>(a << 8 | b);
  }

  std::optional<std::uint32_t> u32(std::uint64_t pos, bool le) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      const int b = at(pos + static_cast<std::uint64_t>(le ? 3 - i : i));
      if (b < 0) return std::nullopt;
      v = v << 8 | static_cast<std::uint32_t>(b);
    }
    return v;
  }

  std::optional<std::uint64_t> u64be(std::uint64_t pos) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      const int b = at(pos + static_cast<std::uint64_t>(i));
      if (b < 0) return std::nullopt;
      v = v << 8 | static_cast<std::uint64_t>(b);
    }
    return v;
  }

 private:
  static constexpr std::uint64_t kCache = 1 << 16;
  const ByteSource& src_;
  std::uint64_t begin_;
  std::uint64_t end_;
  std::uint64_t cache_pos_ = 0;
  std::vector<std::uint8_t> cache_;
};

struct Extent {
  std::uint64_t length = 0;
  Confidence confidence = Confidence::kExact;
};

bool jpeg_marker_ok(int m) {
  return (m >= 0xE0 && m <= 0xEF) || m == 0xDB || m == 0xC4 || m == 0xDD || m == 0xFE ||
         (m >= 0xC0 && m <= 0xCF && m != 0xC8 && m != 0xCC);
}

std::optional<Extent> jpeg_extent(BoundedReader& r, std::uint64_t start, std::uint64_t limit,
                                  std::uint64_t next_start) {
  if (!jpeg_marker_ok(r.at(start + 3))) return std::nullopt;
  const auto truncated = [&] {
    const std::uint64_t stop = std::min(limit, next_start);
    return Extent{stop - start, Confidence::kTruncated};
  };
  const auto naive = [&]() -> Extent {
    for (std::uint64_t p = start + 2; p + 1 < limit; ++p) {
      if (r.at(p) == 0xFF && r.at(p + 1) == 0xD9) return {p + 2 - start, Confidence::kHeuristic};
    }
    return truncated();
  };

  std::uint64_t pos = start + 2;
  for (;;) {
    if (pos >= limit) return truncated();
    if (r.at(pos) != 0xFF) return naive();
    while (pos < limit && r.at(pos) == 0xFF) ++pos;
    if (pos >= limit) return truncated();
    const int m = r.at(pos);
    ++pos;
    if (m == 0xD9) return Extent{pos - start, Confidence::kExact};
    if (m == 0xD8 || m == 0x00) return naive();
    if ((m >= 0xD0 && m <= 0xD7) || m == 0x01) continue;
    const auto len = r.u16(pos, false);
    if (!len) return truncated();
    if (*len < 2) return naive();
    pos += *len;
    if (m != 0xDA) continue;
    // Entropy-coded data runs until a marker other than stuffing or RSTn.
    for (;;) {
      if (pos + 1 >= limit) return truncated();
      if (r.at(pos) != 0xFF) {
        ++pos;
        continue;
      }
      const int b = r.at(pos + 1);
      if (b == 0x00 || b == 0xFF || (b >= 0xD0 && b <= 0xD7)) {
        pos += b == 0xFF ? 1 : 2;
        continue;
      }
      break;
    }
  }
}

std::uint32_t tiff_type_size(std::uint32_t type) {
  switch (type) {
    case 1: case 2: case 6: case 7: return 1;
    case 3: case 8: return 2;
    case 4: case 9: case 11: case 13: return 4;
    case 5: case 10: case 12: return 8;
    default: return 0;
  }
}

std::optional<Extent> tiff_extent(BoundedReader& r, std::uint64_t start, std::uint64_t limit,
                                  std::uint64_t cap) {
  const bool le = r.at(start) == 'I';
  const auto first = r.u32(start + 4, le);
  if (!first || *first < 8) return std::nullopt;

  std::uint64_t extent = 8;
  bool beyond = false;
  std::vector<std::uint64_t> queue{*first};
  std::unordered_set<std::uint64_t> seen;
  int ifds = 0;
  const auto note = [&](std::uint64_t off, std::uint64_t size) {
    if (off > cap || size > cap - off) {
      beyond = true;
      return;
    }
    extent = std::max(extent, off + size);
  };
  const auto read_array = [&](std::uint32_t type, std::uint32_t count,
                              std::uint64_t value_pos) -> std::vector<std::uint64_t> {
    std::vector<std::uint64_t> vals;
    const std::uint32_t sz = tiff_type_size(type);
    if ((type != 3 && type != 4 && type != 13) || count > 65536) return vals;
    std::uint64_t base = value_pos;
    if (static_cast<std::uint64_t>(sz) * count > 4) {
      const auto off = r.u32(value_pos, le);
      if (!off) return vals;
      base = start + *off;
    }
    for (std::uint32_t i = 0; i < count; ++i) {
      const auto v = sz == 2 ? r.u16(base + static_cast<std::uint64_t>(i) * 2, le)
                             : r.u32(base + static_cast<std::uint64_t>(i) * 4, le);
      if (!v) break;
      vals.push_back(*v);
    }
    return vals;
  };

  while (!queue.empty() && ifds < 256) {
    const std::uint64_t ifd = queue.back();
    queue.pop_back();
    if (ifd < 8 || !seen.insert(ifd).second) continue;
    const auto n = r.u16(start + ifd, le);
    if (!n) {
      beyond = true;
      break;
    }
    if (*n == 0 || *n > 4096) {
      if (ifds == 0) return std::nullopt;
      continue;
    }
    ++ifds;
    const std::uint64_t entries_end = ifd + 2 + 12ull * *n;
    note(ifd, 2 + 12ull * *n + 4);
    std::map<std::uint32_t, std::vector<std::uint64_t>> arrays;
    int bad_types = 0;
    for (std::uint32_t i = 0; i < *n; ++i) {
      const std::uint64_t e = start + ifd + 2 + 12ull * i;
      const auto tag = r.u16(e, le);
      const auto type = r.u16(e + 2, le);
      const auto count = r.u32(e + 4, le);
      if (!tag || !type || !count) {
        beyond = true;
        break;
      }
      const std::uint32_t tsz = tiff_type_size(*type);
      if (tsz == 0) {
        ++bad_types;
        continue;
      }
      const std::uint64_t bytes = static_cast<std::uint64_t>(tsz) * *count;
      if (bytes > 4) {
        const auto off = r.u32(e + 8, le);
        if (off) note(*off, bytes);
      }
      switch (*tag) {
        case 273: case 279: case 324: case 325: case 514: case 513:
          arrays[*tag] = read_array(*type, *count, e + 8);
          break;
        case 330: case 34665: case 34853: case 40965:
          for (auto v : read_array(*type, *count, e + 8)) queue.push_back(v);
          break;
        default:
          break;
      }
    }
    if (ifds == 1 && bad_types * 2 > static_cast<int>(*n)) return std::nullopt;
    const auto pair_up = [&](std::uint32_t off_tag, std::uint32_t len_tag) {
      const auto& offs = arrays[off_tag];
      const auto& lens = arrays[len_tag];
      for (std::size_t i = 0; i < std::min(offs.size(), lens.size()); ++i) note(offs[i], lens[i]);
    };
    pair_up(273, 279);
    pair_up(324, 325);
    pair_up(513, 514);
    const auto next = r.u32(start + entries_end, le);
    if (next && *next != 0) queue.push_back(*next);
  }
  if (ifds == 0) return std::nullopt;
  if (beyond || start + extent > limit) {
    return Extent{std::min(limit - start, std::min(extent, cap)), Confidence::kTruncated};
  }
  return Extent{extent, Confidence::kExact};
}

bool mp4_known_box(const char t[4]) {
  static const char* kTypes[] = {"ftyp", "moov", "mdat", "free", "skip", "wide", "uuid", "meta",
                                 "udta", "pdin", "moof", "mfra", "styp", "sidx", "prft", "emsg"};
  for (const char* k : kTypes) {
    if (std::memcmp(t, k, 4) == 0) return true;
  }
  return false;
}

std::optional<Extent> mp4_extent(BoundedReader& r, std::uint64_t start, std::uint64_t limit) {
  const auto ftyp_size = r.u32(start, false);
  if (!ftyp_size || *ftyp_size < 8 || *ftyp_size > 4096) return std::nullopt;
  std::uint64_t pos = start;
  bool moov = false, mdat = false;
  for (;;) {
    if (pos + 8 > limit) break;
    const auto size32 = r.u32(pos, false);
    char type[4];
    for (int i = 0; i < 4; ++i) type[i] = static_cast<char>(r.at(pos + 4 + static_cast<std::uint64_t>(i)));
    if (!size32 || !mp4_known_box(type)) break;
    std::uint64_t size = *size32;
    if (size == 1) {
      const auto large = r.u64be(pos + 8);
      if (!large) return Extent{limit - start, Confidence::kTruncated};
      size = *large;
    } else if (size == 0) {
      return Extent{limit - start, Confidence::kTruncated};
    }
    if (size < 8) break;
    moov = moov || std::memcmp(type, "moov", 4) == 0;
    mdat = mdat || std::memcmp(type, "mdat", 4) == 0;
    if (size > limit - pos) return Extent{limit - start, Confidence::kTruncated};
    pos += size;
  }
  if (pos == start) return std::nullopt;
  return Extent{pos - start, moov ? Confidence::kExact : Confidence::kHeuristic};
}

struct Candidate {
  std::uint64_t start = 0;
  std::size_t sig = 0;
};

// Header positions inside one region.
std::vector<Candidate> find_headers(const ByteSource& bytes, const UnallocatedRegion& region,
                                    const std::vector<Signature>& sigs) {
  std::vector<Candidate> found;
  const bool byte_pass = region.length < kByteScanLimit;
  std::size_t max_probe = 0;
  for (const auto& s : sigs) {
    max_probe = std::max<std::size_t>(max_probe, s.header.size() + s.header_offset);
  }
  constexpr std::uint64_t kWindow = 8ull << 20;
  const std::uint64_t end = region.start + region.length;
  std::vector<std::uint8_t> buf;
  for (std::uint64_t w = region.start; w < end; w += kWindow) {
    const std::uint64_t wlen = std::min<std::uint64_t>(kWindow + max_probe, end - w);
    buf.resize(static_cast<std::size_t>(wlen));
    buf.resize(bytes.read_at(w, buf));
    const std::uint64_t scan_end = std::min<std::uint64_t>(kWindow, buf.size());
    for (std::uint64_t i = 0; i < scan_end; ++i) {
      const std::uint64_t abs = w + i;
      if (!byte_pass && abs % 512 != 0) {
        i += (512 - abs % 512) - 1;
        continue;
      }
      for (std::size_t s = 0; s < sigs.size(); ++s) {
        const auto& sig = sigs[s];
        const std::uint64_t hp = i + sig.header_offset;
        if (hp + sig.header.size() > buf.size()) continue;
        if (std::memcmp(buf.data() + hp, sig.header.data(), sig.header.size()) == 0) {
          found.push_back({abs, s});
        }
      }
    }
  }
  return found;
}

struct Accepted {
  std::uint64_t start;
  std::uint64_t length;
  std::size_t sig;
  Confidence confidence;
};

int confidence_rank(Confidence c) {
  return c == Confidence::kExact ? 0 : c == Confidence::kTruncated ? 1 : 2;
}

std::vector<Accepted> carve_region(const ByteSource& bytes, const UnallocatedRegion& region,
                                   const std::vector<Signature>& sigs) {
  const std::uint64_t end = region.start + region.length;
  auto headers = find_headers(bytes, region, sigs);
  std::sort(headers.begin(), headers.end(),
            [](const Candidate& a, const Candidate& b) { return a.start < b.start; });

  BoundedReader reader(bytes, region.start, end);
  std::vector<Accepted> cands;
  for (std::size_t i = 0; i < headers.size(); ++i) {
    const auto& h = headers[i];
    const auto& sig = sigs[h.sig];
    const std::uint64_t cap = std::min(end, h.start + sig.max_length);
    std::uint64_t next_start = end;
    for (std::size_t j = i + 1; j < headers.size(); ++j) {
      if (headers[j].start > h.start) {
        next_start = headers[j].start;
        break;
      }
    }
    std::optional<Extent> ext;
    switch (sig.validator) {
      case CarveValidator::kJpeg: ext = jpeg_extent(reader, h.start, cap, next_start); break;
      case CarveValidator::kTiff: ext = tiff_extent(reader, h.start, end, sig.max_length); break;
      case CarveValidator::kMp4: ext = mp4_extent(reader, h.start, cap); break;
    }
    if (!ext || ext->length == 0) continue;
    cands.push_back({h.start, ext->length, h.sig, ext->confidence});
  }

  std::sort(cands.begin(), cands.end(), [](const Accepted& a, const Accepted& b) {
    if (a.length != b.length) return a.length > b.length;
    if (a.confidence != b.confidence) {
      return confidence_rank(a.confidence) < confidence_rank(b.confidence);
    }
    return a.start < b.start;
  });
  std::map<std::uint64_t, std::uint64_t> taken;  // start -> end
  std::vector<Accepted> out;
  for (const auto& c : cands) {
    const std::uint64_t c_end = c.start + c.length;
    auto it = taken.lower_bound(c.start);
    bool overlap = it != taken.end() && it->first < c_end;
    if (!overlap && it != taken.begin()) overlap = std::prev(it)->second > c.start;
    if (overlap) continue;
    taken.emplace(c.start, c_end);
    out.push_back(c);
  }
  return out;
}

std::string hash_range(const ByteSource& bytes, std::uint64_t start, std::uint64_t length) {
  Sha256 h;
  std::vector<std::uint8_t> buf(1 << 20);
  std::uint64_t done = 0;
  while (done < length) {
    const std::size_t n = static_cast<std::size_t>(std::min<std::uint64_t>(buf.size(), length - done));
    const std::size_t got = bytes.read_at(start + done, std::span(buf.data(), n));
    h.update(std::span<const std::uint8_t>(buf.data(), got));
    if (got < n) break;
    done += got;
  }
  return to_hex(h.finish());
}

}  // namespace

std::vector<CarvedFile> carve(const std::vector<UnallocatedRegion>& regions,
                              const ByteSource& bytes, const std::vector<Signature>& signatures,
                              const CarveOptions& options, std::vector<std::string>* warnings) {
  if (signatures.empty()) throw Error(ErrorCode::kInvalidArgument, "no signatures given");
  std::vector<std::vector<CarvedFile>> per_region(regions.size());
  std::vector<std::string> region_warnings(regions.size());
  parallel_for(regions.size(), options.threads, [&](std::size_t i) {
    const auto& region = regions[i];
    if (region.length == 0) return;
    if (region.start >= bytes.size() || region.length > bytes.size() - region.start) {
      region_warnings[i] = "region at " + std::to_string(region.start) +
                           " lies outside the source; skipped";
      return;
    }
    for (const auto& a : carve_region(bytes, region, signatures)) {
      const auto& sig = signatures[a.sig];
      CarvedFile f;
      f.source_offset = a.start;
      f.length = a.length;
      f.kind = sig.name;
      f.extension = sig.extension;
      f.confidence = a.confidence;
      f.payload_hash = hash_range(bytes, a.start, a.length);
      per_region[i].push_back(std::move(f));
    }
  });
  std::vector<CarvedFile> out;
  for (auto& v : per_region) out.insert(out.end(), v.begin(), v.end());
  std::sort(out.begin(), out.end(), [](const CarvedFile& a, const CarvedFile& b) {
    return a.source_offset < b.source_offset;
  });
  if (warnings) {
    for (auto& w : region_warnings) {
      if (!w.empty()) warnings->push_back(std::move(w));
    }
  }
  return out;
}

namespace {

bool printable(std::uint8_t b) { return (b >= 0x20 && b < 0x7F) || b == '\t' || b == '\n' || b == '\r'; }

bool has_key(const std::string& text, std::string_view key) {
  for (std::size_t p = text.find(key); p != std::string::npos; p = text.find(key, p + 1)) {
    if (p > 0) {
      const char before = text[p - 1];
      if (std::isalnum(static_cast<unsigned char>(before)) || before == '_') continue;
    }
    std::size_t q = p + key.size();
    while (q < text.size() && text[q] == ' ') ++q;
    if (q < text.size() && text[q] == ':') return true;
  }
  return false;
}

void consider_block(std::uint64_t offset, std::string&& text, std::vector<TextBlock>& out) {
  std::size_t b = 0, e = text.size();
  while (b < e && !printable(static_cast<std::uint8_t>(text[b]))) ++b;
  while (e > b && !printable(static_cast<std::uint8_t>(text[e - 1]))) --e;
  if (e - b < 256) return;
  std::size_t good = 0;
  for (std::size_t i = b; i < e; ++i) good += printable(static_cast<std::uint8_t>(text[i]));
  if (good * 100 < (e - b) * 95) return;
  std::string body = text.substr(b, e - b);
  if (body.find('[') == std::string::npos) return;
  int keys = 0;
  for (std::string_view k : {"latitude", "longitude", "rel_alt", "abs_alt"}) keys += has_key(body, k);
  if (keys < 2) return;
  out.push_back({offset + b, e - b, std::move(body)});
}

}  // namespace

std::vector<TextBlock> carve_telemetry_text(const std::vector<UnallocatedRegion>& regions,
                                            const ByteSource& bytes) {
  constexpr std::size_t kSeparatorRun = 16;
  constexpr std::size_t kMaxBlock = 16u << 20;
  std::vector<TextBlock> out;
  for (const auto& region : regions) {
    if (region.start >= bytes.size()) continue;
    const std::uint64_t end = std::min(region.start + region.length, bytes.size());
    std::string cur;
    std::uint64_t cur_start = region.start;
    std::size_t bad_run = 0;
    const auto flush = [&](std::uint64_t next_start) {
      if (!cur.empty()) consider_block(cur_start, std::move(cur), out);
      cur.clear();
      bad_run = 0;
      cur_start = next_start;
    };
    std::vector<std::uint8_t> buf(4u << 20);
    for (std::uint64_t w = region.start; w < end; w += buf.size()) {
      const std::size_t n = static_cast<std::size_t>(std::min<std::uint64_t>(buf.size(), end - w));
      const std::size_t got = bytes.read_at(w, std::span(buf.data(), n));
      for (std::size_t i = 0; i < got; ++i) {
        const std::uint8_t c = buf[i];
        const std::uint64_t abs = w + i;
        if (c == 0) {
          flush(abs + 1);
          continue;
        }
        if (printable(c)) {
          bad_run = 0;
        } else if (++bad_run >= kSeparatorRun) {
          cur.resize(cur.size() - std::min(cur.size(), bad_run - 1));
          flush(abs + 1);
          continue;
        }
        if (cur.empty()) cur_start = abs;
        cur.push_back(static_cast<char>(c));
        if (cur.size() >= kMaxBlock) flush(abs + 1);
      }
      if (got < n) break;
    }
    flush(end);
  }
  std::sort(out.begin(), out.end(),
            [](const TextBlock& a, const TextBlock& b) { return a.offset < b.offset; });
  return out;
}

std::string write_carved(const fs::path& out_dir, const ByteSource& bytes,
                         const std::vector<CarvedFile>& files,
                         const std::vector<TextBlock>& blocks) {
  fs::create_directories(out_dir);
  struct Line {
    std::uint64_t offset;
    std::string text;
  };
  std::vector<Line> lines;
  char name[64];
  for (const auto& f : files) {
    std::snprintf(name, sizeof name, "%012llu_%s.%s",
                  static_cast<unsigned long long>(f.source_offset), f.kind.c_str(),
                  f.extension.c_str());
    std::ofstream out(out_dir / name, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write carved file " + std::string(name));
    std::vector<std::uint8_t> buf(1 << 20);
    std::uint64_t done = 0;
    while (done < f.length) {
      const std::size_t n = static_cast<std::size_t>(std::min<std::uint64_t>(buf.size(), f.length - done));
      const std::size_t got = bytes.read_at(f.source_offset + done, std::span(buf.data(), n));
      out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(got));
      if (got < n) break;
      done += got;
    }
    lines.push_back({f.source_offset, std::to_string(f.source_offset) + " " +
                                          std::to_string(f.length) + " " + f.kind + " " +
                                          f.payload_hash + " " + std::string(to_string(f.confidence)) +
                                          " " + name});
  }
  for (const auto& b : blocks) {
    std::snprintf(name, sizeof name, "%012llu_telemetry.txt",
                  static_cast<unsigned long long>(b.offset));
    std::ofstream out(out_dir / name, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write carved block " + std::string(name));
    out.write(b.text.data(), static_cast<std::streamsize>(b.text.size()));
    lines.push_back({b.offset, std::to_string(b.offset) + " " + std::to_string(b.length) +
                                   " telemetry " + to_hex(sha256(b.text)) + " Heuristic " + name});
  }
  std::stable_sort(lines.begin(), lines.end(),
                   [](const Line& a, const Line& b) { return a.offset < b.offset; });
  std::string index = "# offset length kind sha256 confidence file\n";
  for (const auto& l : lines) index += l.text + "\n";
  std::ofstream idx(out_dir / "index.txt", std::ios::binary | std::ios::trunc);
  idx << index;
  return index;
}

}  // namespace dronefx
