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

#include "dronefx/imgfs.hpp"

#include <sys/stat.h>

#include <algorithm>
#include <cstring>
#include <fstream>
#include <unordered_set>

#include "dronefx/error.hpp"

namespace dronefx {

namespace fs = std::filesystem;

std::string_view to_string(FsKind kind) {
  switch (kind) {
    case FsKind::kFat32: return "Fat32";
    case FsKind::kExFat: return "ExFat";
    case FsKind::kUnknown: return "Unknown";
  }
  return "Unknown";
}

SourceHandle::SourceHandle(EvidenceSource source, std::shared_ptr<const ByteSource> bytes)
    : source_(std::move(source)), bytes_(std::move(bytes)) {}

SourceHandle::SourceHandle(EvidenceSource source, fs::path tree_root)
    : source_(std::move(source)), tree_root_(std::move(tree_root)) {}

const ByteSource& SourceHandle::bytes() const {
  if (!bytes_) throw Error(ErrorCode::kInvalidArgument, "directory-tree handle has no bytes");
  return *bytes_;
}

std::uint64_t SourceHandle::size() const { return bytes_ ? bytes_->size() : source_.byte_size; }

SourceHandle open_source(const EvidenceSource& source, const OpenOptions& options) {
  std::error_code ec;
  if (!fs::exists(source.origin_path, ec)) {
    throw Error(ErrorCode::kIoError, "origin missing: " + source.origin_path);
  }
  if (!options.skip_verification) {
    const std::string actual = compute_source_hash(source);
    if (actual != source.content_hash) {
      throw Error(ErrorCode::kRefusedUnverified,
                  source.source_id + " hash mismatch: expected " + source.content_hash +
                      " actual " + actual);
    }
  }
  if (source.kind == SourceKind::kDirectoryTree) {
    return SourceHandle(source, fs::path(source.origin_path));
  }
  std::shared_ptr<const ByteSource> bytes =
      std::make_shared<FileByteSource>(fs::path(source.origin_path));
  if (options.volume_offset != 0) {
    bytes = std::make_shared<SliceByteSource>(bytes, options.volume_offset, UINT64_MAX);
  }
  return SourceHandle(source, std::move(bytes));
}

namespace {

std::uint16_t le16(const std::uint8_t* p) { return static_cast<std::uint16_t>(p[0] | p[1] << 8); }
std::uint32_t le32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

bool power_of_two(std::uint32_t v) { return v != 0 && (v & (v - 1)) == 0; }

constexpr std::uint32_t kFatMask = 0x0FFFFFFF;
constexpr std::uint32_t kEndOfChain = 0x0FFFFFF8;
constexpr std::uint32_t kBadCluster = 0x0FFFFFF7;
constexpr std::uint8_t kDeletedMarker = 0xE5;
constexpr std::uint8_t kAttrLongName = 0x0F;
constexpr std::uint8_t kAttrVolumeId = 0x08;
constexpr std::uint8_t kAttrDirectory = 0x10;

// Whole first FAT, loaded once per operation.
class FatTable {
 public:
  FatTable(const ByteSource& bytes, const VolumeInfo& v) : volume_(v) {
    const std::uint64_t entries = static_cast<std::uint64_t>(v.cluster_count) + 2;
    const std::uint64_t want = std::min<std::uint64_t>(entries * 4, v.fat_size_bytes);
    raw_ = bytes.read(v.fat_offset, static_cast<std::size_t>(want));
  }

  std::uint32_t at(std::uint32_t cluster) const {
    const std::size_t off = static_cast<std::size_t>(cluster) * 4;
    if (off + 4 > raw_.size()) return kBadCluster;
    return le32(raw_.data() + off) & kFatMask;
  }

  bool in_range(std::uint32_t cluster) const {
    return cluster >= 2 && cluster <= volume_.cluster_count + 1;
  }

  struct Chain {
    std::vector<std::uint32_t> clusters;
    bool broken = false;
    std::string problem;
  };

  // Follows the chain from `start`, stopping after `max_clusters`.
  Chain follow(std::uint32_t start, std::uint64_t max_clusters) const {
    Chain chain;
    std::unordered_set<std::uint32_t> seen;
    std::uint32_t cur = start;
    while (chain.clusters.size() < max_clusters) {
      if (!in_range(cur)) {
        chain.broken = true;
        chain.problem = "cluster " + std::to_string(cur) + " out of range";
        break;
      }
      if (!seen.insert(cur).second) {
        chain.broken = true;
        chain.problem = "cycle at cluster " + std::to_string(cur);
        break;
      }
      chain.clusters.push_back(cur);
      const std::uint32_t next = at(cur);
      if (next >= kEndOfChain) break;
      if (next == 0 || next == kBadCluster) {
        chain.broken = true;
        chain.problem = "chain hits " + std::string(next == 0 ? "free" : "bad") +
                        " entry after cluster " + std::to_string(cur);
        break;
      }
      cur = next;
    }
    return chain;
  }

 private:
  VolumeInfo volume_;
  std::vector<std::uint8_t> raw_;
};

std::optional<DateTime> decode_fat_time(std::uint16_t date, std::uint16_t time,
                                        std::uint8_t tenths) {
  if (date == 0) return std::nullopt;
  DateTime dt;
  dt.year = 1980 + (date >> 9);
  dt.month = (date >> 5) & 0x0F;
  dt.day = date & 0x1F;
  dt.hour = time >> 11;
  dt.minute = (time >> 5) & 0x3F;
  dt.second = (time & 0x1F) * 2;
  if (tenths < 200) {
    dt.second += tenths / 100;
    dt.millis = (tenths % 100) * 10;
  }
  return dt;
}

std::string trim_right(std::string s) {
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

std::string format_short_name(const std::uint8_t* e, bool deleted) {
  std::string base(reinterpret_cast<const char*>(e), 8);
  std::string ext(reinterpret_cast<const char*>(e) + 8, 3);
  if (deleted) {
    base[0] = '_';
  } else if (static_cast<std::uint8_t>(base[0]) == 0x05) {
    base[0] = static_cast<char>(0xE5);
  }
  base = trim_right(base);
  ext = trim_right(ext);
  for (auto& ch : base) {
    if (static_cast<unsigned char>(ch) < 0x20) ch = '_';
  }
  for (auto& ch : ext) {
    if (static_cast<unsigned char>(ch) < 0x20) ch = '_';
  }
  const std::uint8_t nt = e[12];
  if (nt & 0x08) {
    for (auto& ch : base) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  }
  if (nt & 0x10) {
    for (auto& ch : ext) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  }
  return ext.empty() ? base : base + "." + ext;
}

std::uint8_t short_name_checksum(const std::uint8_t* e) {
  std::uint8_t sum = 0;
  for (int i = 0; i < 11; ++i) {
    sum = static_cast<std::uint8_t>(((sum & 1) ? 0x80 : 0) + (sum >> 1) + e[i]);
  }
  return sum;
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// Characters of one LFN slot, stopping at the terminator.
std::vector<std::uint16_t> lfn_units(const std::uint8_t* e) {
  static constexpr int kOffsets[] = {1, 3, 5, 7, 9, 14, 16, 18, 20, 22, 24, 28, 30};
  std::vector<std::uint16_t> units;
  for (int off : kOffsets) {
    const std::uint16_t u = le16(e + off);
    if (u == 0x0000 || u == 0xFFFF) break;
    units.push_back(u);
  }
  return units;
}

struct PendingLfn {
  std::vector<std::vector<std::uint16_t>> parts;  // physical order
  std::uint8_t checksum = 0;
  bool consistent = true;

  void clear() {
    parts.clear();
    consistent = true;
  }

  std::string assemble() const {
    std::string name;
    std::vector<std::uint16_t> units;
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
      units.insert(units.end(), it->begin(), it->end());
    }
    for (std::size_t i = 0; i < units.size(); ++i) {
      std::uint32_t cp = units[i];
      if (cp >= 0xD800 && cp < 0xDC00 && i + 1 < units.size() && units[i + 1] >= 0xDC00 &&
          units[i + 1] < 0xE000) {
        cp = 0x10000 + ((cp - 0xD800) << 10) + (units[i + 1] - 0xDC00);
        ++i;
        name.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        name.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        name.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        name.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        continue;
      }
      if (cp == '/' || cp < 0x20) cp = '_';
      append_utf8(name, cp);
    }
    return name;
  }
};

struct DirTask {
  std::string path;
  std::uint32_t cluster = 0;
  bool deleted = false;
};

std::string join_path(const std::string& parent, const std::string& name) {
  return parent.empty() ? name : parent + "/" + name;
}

}  // namespace

VolumeInfo detect_volume(const ByteSource& bytes) {
  if (bytes.size() < 512) throw Error(ErrorCode::kTooSmall, "volume smaller than one sector");
  const auto bs = bytes.read(0, 512);
  const std::uint8_t* b = bs.data();
  VolumeInfo v;
  v.total_size = bytes.size();

  if (std::memcmp(b + 3, "EXFAT   ", 8) == 0) {
    v.fs_kind = FsKind::kExFat;
    const std::uint8_t bps_shift = b[108];
    const std::uint8_t spc_shift = b[109];
    if (bps_shift >= 9 && bps_shift <= 12 && spc_shift <= 25 - bps_shift) {
      v.bytes_per_sector = 1u << bps_shift;
      v.sectors_per_cluster = 1u << spc_shift;
      v.fat_offset = static_cast<std::uint64_t>(le32(b + 80)) * v.bytes_per_sector;
      v.data_offset = static_cast<std::uint64_t>(le32(b + 88)) * v.bytes_per_sector;
      v.cluster_count = le32(b + 92);
      v.root_cluster = le32(b + 96);
      v.num_fats = b[110];
    }
    return v;
  }

  if (b[510] != 0x55 || b[511] != 0xAA) return v;
  const std::uint32_t bps = le16(b + 11);
  const std::uint32_t spc = b[13];
  const std::uint32_t reserved = le16(b + 14);
  const std::uint32_t nfats = b[16];
  const std::uint32_t root_entries = le16(b + 17);
  const std::uint32_t total16 = le16(b + 19);
  const std::uint32_t fat16 = le16(b + 22);
  const std::uint32_t total32 = le32(b + 32);
  const std::uint32_t fat32 = le32(b + 36);
  const std::uint32_t root = le32(b + 44);

  const bool bps_ok = bps == 512 || bps == 1024 || bps == 2048 || bps == 4096;
  if (!bps_ok || !power_of_two(spc) || reserved == 0 || nfats == 0 || nfats > 4 ||
      root_entries != 0 || fat16 != 0 || fat32 == 0 || root < 2) {
    return v;
  }
  const std::uint64_t total_sectors = total16 != 0 ? total16 : total32;
  const std::uint64_t meta_sectors = reserved + static_cast<std::uint64_t>(nfats) * fat32;
  if (total_sectors <= meta_sectors) return v;

  v.fs_kind = FsKind::kFat32;
  v.bytes_per_sector = bps;
  v.sectors_per_cluster = spc;
  v.num_fats = nfats;
  v.fat_offset = static_cast<std::uint64_t>(reserved) * bps;
  v.fat_size_bytes = static_cast<std::uint64_t>(fat32) * bps;
  v.data_offset = meta_sectors * bps;
  v.root_cluster = root;
  v.total_size = total_sectors * bps;
  std::uint64_t clusters = (total_sectors - meta_sectors) / spc;
  const std::uint64_t fat_capacity = v.fat_size_bytes / 4;
  if (fat_capacity < 2) return VolumeInfo{FsKind::kUnknown, 0, 0, 0, 0, 0, bytes.size()};
  clusters = std::min<std::uint64_t>(clusters, fat_capacity - 2);
  clusters = std::min<std::uint64_t>(clusters, 0x0FFFFFF5);
  v.cluster_count = static_cast<std::uint32_t>(clusters);
  return v;
}

std::uint32_t fat_entry(const ByteSource& bytes, const VolumeInfo& volume, std::uint32_t cluster) {
  std::uint8_t raw[4] = {};
  if (bytes.read_at(volume.fat_offset + static_cast<std::uint64_t>(cluster) * 4, raw) != 4) {
    return kBadCluster;
  }
  return le32(raw) & kFatMask;
}

std::vector<FileEntry> walk_fat32(const ByteSource& bytes, const VolumeInfo& volume) {
  if (volume.fs_kind != FsKind::kFat32) {
    throw Error(ErrorCode::kNotFat32, "directory walking needs a FAT32 volume");
  }
  const FatTable fat(bytes, volume);
  const std::uint64_t csize = volume.cluster_size();
  // A directory may hold at most 65536 entries of 32 bytes.
  const std::uint64_t max_dir_clusters = std::max<std::uint64_t>(1, (65536ull * 32) / csize);

  std::vector<FileEntry> out;
  std::unordered_set<std::uint32_t> visited_dirs;
  std::vector<DirTask> stack{{"", volume.root_cluster, false}};

  while (!stack.empty()) {
    const DirTask task = stack.back();
    stack.pop_back();
    if (!visited_dirs.insert(task.cluster).second) continue;

    std::vector<std::uint32_t> clusters;
    if (task.deleted) {
      clusters.push_back(task.cluster);
    } else {
      auto chain = fat.follow(task.cluster, max_dir_clusters);
      clusters = std::move(chain.clusters);
    }

    std::vector<DirTask> children;
    PendingLfn lfn;
    bool end_of_dir = false;
    std::vector<std::uint8_t> data;
    for (std::uint32_t cl : clusters) {
      if (end_of_dir) break;
      data = bytes.read(volume.cluster_offset(cl), static_cast<std::size_t>(csize));
      // A deleted directory's cluster may have been reused; require the "." entry.
      if (task.deleted && (data.size() < 32 || std::memcmp(data.data(), ".          ", 11) != 0)) {
        break;
      }
      for (std::size_t off = 0; off + 32 <= data.size(); off += 32) {
        const std::uint8_t* e = data.data() + off;
        if (e[0] == 0x00) {
          end_of_dir = true;
          break;
        }
        const bool deleted = e[0] == kDeletedMarker;
        const std::uint8_t attr = e[11];
        if (attr == kAttrLongName) {
          if (!deleted && (e[0] & 0x40)) lfn.clear();
          if (lfn.parts.empty()) {
            lfn.checksum = e[13];
          } else if (lfn.checksum != e[13]) {
            lfn.clear();
            lfn.checksum = e[13];
          }
          lfn.parts.push_back(lfn_units(e));
          continue;
        }
        if (e[0] == '.' && (e[1] == ' ' || e[1] == '.')) {
          lfn.clear();
          continue;
        }
        if ((attr & kAttrVolumeId) && !(attr & kAttrDirectory)) {
          lfn.clear();
          continue;
        }

        FileEntry fe;
        fe.deleted = deleted;
        fe.allocated = !deleted;
        fe.attributes = attr;
        fe.is_directory = (attr & kAttrDirectory) != 0;
        fe.short_name = format_short_name(e, deleted);
        fe.first_cluster = static_cast<std::uint32_t>(le16(e + 20)) << 16 | le16(e + 26);
        fe.size = fe.is_directory ? 0 : le32(e + 28);
        fe.created = decode_fat_time(le16(e + 16), le16(e + 14), e[13]);
        fe.modified = decode_fat_time(le16(e + 24), le16(e + 22), 0);
        fe.accessed = decode_fat_time(le16(e + 18), 0, 0);

        std::string name = fe.short_name;
        if (!lfn.parts.empty() && lfn.checksum == short_name_checksum(e)) {
          std::string long_name = lfn.assemble();
          if (!long_name.empty()) name = std::move(long_name);
        } else if (deleted) {
          fe.name_reconstructed = true;
        }
        lfn.clear();
        fe.path = join_path(task.path, name);

        if (task.deleted && !deleted) {
          fe.warning = "orphaned: parent directory was deleted";
        }

        if (!deleted && !fe.is_directory && fe.size > 0) {
          const std::uint64_t need = (fe.size + csize - 1) / csize;
          const auto chain = fat.follow(fe.first_cluster, need);
          if (chain.broken || chain.clusters.size() < need) {
            fe.warning = "CorruptChain: " +
                         (chain.problem.empty() ? std::string("chain shorter than file size")
                                                : chain.problem);
          }
        }
        if (fe.is_directory) {
          if (!fat.in_range(fe.first_cluster)) {
            fe.warning = "CorruptChain: directory cluster " + std::to_string(fe.first_cluster) +
                         " out of range";
          } else {
            children.push_back({fe.path, fe.first_cluster, deleted || task.deleted});
          }
        }
        out.push_back(std::move(fe));
      }
    }
    // Depth-first in on-disk order.
    for (auto it = children.rbegin(); it != children.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

ReadResult read_file(const ByteSource& bytes, const VolumeInfo& volume, const FileEntry& entry) {
  ReadResult r;
  r.recovered = entry.deleted;
  if (entry.size == 0) return r;
  const std::uint64_t csize = volume.cluster_size();
  const FatTable fat(bytes, volume);
  if (!fat.in_range(entry.first_cluster)) {
    r.chain_broken = true;
    return r;
  }
  if (entry.deleted) {
    const std::uint64_t start = volume.cluster_offset(entry.first_cluster);
    const std::uint64_t avail = volume.data_end() > start ? volume.data_end() - start : 0;
    const std::uint64_t n = std::min(entry.size, avail);
    r.bytes = bytes.read(start, static_cast<std::size_t>(n));
    r.chain_broken = r.bytes.size() < entry.size;
    return r;
  }
  const std::uint64_t need = (entry.size + csize - 1) / csize;
  const auto chain = fat.follow(entry.first_cluster, need);
  r.bytes.reserve(static_cast<std::size_t>(entry.size));
  std::uint64_t remaining = entry.size;
  for (std::uint32_t cl : chain.clusters) {
    const std::size_t n = static_cast<std::size_t>(std::min(remaining, csize));
    auto chunk = bytes.read(volume.cluster_offset(cl), n);
    r.bytes.insert(r.bytes.end(), chunk.begin(), chunk.end());
    remaining -= n;
    if (chunk.size() < n || remaining == 0) break;
  }
  r.chain_broken = r.bytes.size() < entry.size;
  return r;
}

std::vector<UnallocatedRegion> unallocated_regions(const ByteSource& bytes,
                                                   const VolumeInfo& volume) {
  std::vector<UnallocatedRegion> out;
  if (volume.fs_kind != FsKind::kFat32) return out;
  const FatTable fat(bytes, volume);
  const std::uint64_t csize = volume.cluster_size();
  const std::uint32_t last = volume.cluster_count + 1;
  std::uint32_t run_start = 0;
  for (std::uint32_t c = 2; c <= last + 1; ++c) {
    const bool free = c <= last && fat.at(c) == 0;
    if (free && run_start == 0) run_start = c;
    if (!free && run_start != 0) {
      out.push_back({volume.cluster_offset(run_start), (c - run_start) * csize});
      run_start = 0;
    }
    if (c == last + 1) break;
  }
  return out;
}

std::vector<UnallocatedRegion> allocated_regions(const ByteSource& bytes,
                                                 const VolumeInfo& volume) {
  std::vector<UnallocatedRegion> out;
  if (volume.fs_kind != FsKind::kFat32) return out;
  std::uint64_t cursor = volume.data_offset;
  for (const auto& r : unallocated_regions(bytes, volume)) {
    if (r.start > cursor) out.push_back({cursor, r.start - cursor});
    cursor = r.start + r.length;
  }
  if (volume.data_end() > cursor) out.push_back({cursor, volume.data_end() - cursor});
  return out;
}

namespace {

std::optional<DateTime> from_timespec(const struct timespec& ts) {
  return DateTime::from_millis(static_cast<std::int64_t>(ts.tv_sec) * 1000 + ts.tv_nsec / 1000000);
}

}  // namespace

std::vector<FileEntry> list_tree(const fs::path& root) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) throw Error(ErrorCode::kIoError, "not a directory: " + root.string());
  std::vector<FileEntry> out;
  for (const auto& de : fs::recursive_directory_iterator(root, ec)) {
    const bool dir = de.is_directory();
    if (!dir && !de.is_regular_file()) continue;
    FileEntry fe;
    fe.path = fs::relative(de.path(), root).generic_string();
    fe.short_name = de.path().filename().string();
    fe.is_directory = dir;
    fe.size = dir ? 0 : de.file_size();
    struct stat st {};
    if (::stat(de.path().c_str(), &st) == 0) {
      fe.modified = from_timespec(st.st_mtim);
      fe.accessed = from_timespec(st.st_atim);
    }
    out.push_back(std::move(fe));
  }
  std::sort(out.begin(), out.end(),
            [](const FileEntry& a, const FileEntry& b) { return a.path < b.path; });
  return out;
}

std::vector<std::uint8_t> read_tree_file(const fs::path& root, const FileEntry& entry,
                                         std::uint64_t max_bytes) {
  if (entry.is_directory) return {};
  FileByteSource src(root / fs::path(entry.path));
  const std::uint64_t n = std::min(src.size(), max_bytes);
  return src.read(0, static_cast<std::size_t>(n));
}

}  // namespace dronefx
