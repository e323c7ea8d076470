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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dronefx/byte_source.hpp"
#include "dronefx/case_store.hpp"
#include "dronefx/datetime.hpp"

namespace dronefx {

enum class FsKind { kFat32, kExFat, kUnknown };
std::string_view to_string(FsKind kind);

struct VolumeInfo {
  FsKind fs_kind = FsKind::kUnknown;
  std::uint32_t bytes_per_sector = 0;
  std::uint32_t sectors_per_cluster = 0;
  std::uint64_t fat_offset = 0;
  std::uint64_t data_offset = 0;
  std::uint32_t root_cluster = 0;
  std::uint64_t total_size = 0;

  std::uint32_t num_fats = 0;
  std::uint64_t fat_size_bytes = 0;
  /// Number of data clusters; valid cluster numbers are 2 .. cluster_count+1.
  std::uint32_t cluster_count = 0;

  std::uint64_t cluster_size() const {
    return static_cast<std::uint64_t>(bytes_per_sector) * sectors_per_cluster;
  }
  std::uint64_t cluster_offset(std::uint32_t cluster) const {
    return data_offset + static_cast<std::uint64_t>(cluster - 2) * cluster_size();
  }
  std::uint64_t data_end() const {
    return data_offset + static_cast<std::uint64_t>(cluster_count) * cluster_size();
  }
};

struct FileEntry {
  std::string path;        // volume-relative, '/'-separated, no leading slash
  std::string short_name;  // 8.3 form; '_' replaces the lost first byte when deleted
  std::uint64_t size = 0;
  std::optional<DateTime> created;
  std::optional<DateTime> modified;
  std::optional<DateTime> accessed;
  bool allocated = true;
  bool deleted = false;
  bool is_directory = false;
  std::uint32_t first_cluster = 0;
  std::uint8_t attributes = 0;
  /// True when the emitted name had to be guessed (deleted short entry without
  /// a recoverable long name).
  bool name_reconstructed = false;
  std::string warning;

  bool operator==(const FileEntry&) const = default;
};

struct UnallocatedRegion {
  std::uint64_t start = 0;
  std::uint64_t length = 0;

  bool operator==(const UnallocatedRegion&) const = default;
};

/// Read-only view over a registered source: a byte source for raw images, a
/// root directory for trees.
class SourceHandle {
 public:
  SourceHandle(EvidenceSource source, std::shared_ptr<const ByteSource> bytes);
  SourceHandle(EvidenceSource source, std::filesystem::path tree_root);

  const EvidenceSource& source() const { return source_; }
  bool is_image() const { return bytes_ != nullptr; }
  /// Throws for tree handles.
  const ByteSource& bytes() const;
  std::shared_ptr<const ByteSource> shared_bytes() const { return bytes_; }
  const std::filesystem::path& tree_root() const { return tree_root_; }
  std::uint64_t size() const;

 private:
  EvidenceSource source_;
  std::shared_ptr<const ByteSource> bytes_;
  std::filesystem::path tree_root_;
};

struct OpenOptions {
  /// Skip re-hashing the origin before opening.
  bool skip_verification = false;
  /// Byte offset of the volume inside a raw image (for partitioned images).
  std::uint64_t volume_offset = 0;
};

/// Throws kIoError when the origin is gone and kRefusedUnverified when the
/// content hash no longer matches (unless verification is skipped).
SourceHandle open_source(const EvidenceSource& source, const OpenOptions& options = {});

/// Throws kTooSmall below 512 bytes.
VolumeInfo detect_volume(const ByteSource& bytes);

/// Enumerates every reachable directory entry, including deleted ones.
/// Never aborts on a single bad entry or chain; problems land in
/// FileEntry::warning. Output order is depth-first in on-disk order.
std::vector<FileEntry> walk_fat32(const ByteSource& bytes, const VolumeInfo& volume);

struct ReadResult {
  std::vector<std::uint8_t> bytes;
  /// Deleted entry: bytes were read contiguously from first_cluster.
  bool recovered = false;
  /// The allocation chain ended early or looped; bytes are partial.
  bool chain_broken = false;
};

ReadResult read_file(const ByteSource& bytes, const VolumeInfo& volume, const FileEntry& entry);

/// Maximal runs of FREE clusters, sorted by start.
std::vector<UnallocatedRegion> unallocated_regions(const ByteSource& bytes,
                                                   const VolumeInfo& volume);
/// Complement of unallocated_regions within the data area.
std::vector<UnallocatedRegion> allocated_regions(const ByteSource& bytes,
                                                 const VolumeInfo& volume);

/// Reads one FAT entry (28-bit value).
std::uint32_t fat_entry(const ByteSource& bytes, const VolumeInfo& volume, std::uint32_t cluster);

/// Regular files and directories below a tree root; timestamps come from the
/// host filesystem and are rendered in UTC.
std::vector<FileEntry> list_tree(const std::filesystem::path& root);
std::vector<std::uint8_t> read_tree_file(const std::filesystem::path& root,
                                         const FileEntry& entry,
                                         std::uint64_t max_bytes = UINT64_MAX);

}  // namespace dronefx
