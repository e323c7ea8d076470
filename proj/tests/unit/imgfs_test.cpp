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

#include <algorithm>
#include <filesystem>
#include <memory>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "dronefx/byte_source.hpp"
#include "dronefx/error.hpp"
#include "dronefx/hash.hpp"
#include "dronefx/imgfs.hpp"
#include "fixtures.hpp"

namespace dronefx {
namespace {

namespace fs = std::filesystem;
using testing::data_dir;

std::shared_ptr<const ByteSource> load_image(const std::string& rel) {
  return std::make_shared<MemoryByteSource>(testing::gunzip_bytes(data_dir() / rel));
}

const FileEntry* find(const std::vector<FileEntry>& entries, std::string_view path) {
  for (const auto& e : entries) {
    if (e.path == path) return &e;
  }
  return nullptr;
}

std::string hex(const std::vector<std::uint8_t>& bytes) { return to_hex(sha256(bytes)); }

class Del3Volume : public ::testing::Test {
 protected:
  void SetUp() override {
    image_ = load_image("del3.img.gz");
    volume_ = detect_volume(*image_);
    entries_ = walk_fat32(*image_, volume_);
    meta_ = nlohmann::json::parse(testing::read_text(data_dir() / "del3.json"));
  }

  std::shared_ptr<const ByteSource> image_;
  VolumeInfo volume_;
  std::vector<FileEntry> entries_;
  nlohmann::json meta_;
};

TEST(Imgfs, DetectsFat32) {
  auto image = load_image("empty.img.gz");
  const VolumeInfo v = detect_volume(*image);
  EXPECT_EQ(v.fs_kind, FsKind::kFat32);
  EXPECT_EQ(v.bytes_per_sector, 512u);
  EXPECT_GT(v.cluster_count, 0u);
  EXPECT_LE(v.data_end(), image->size());
}

TEST(Imgfs, DetectsExFatBootSector) {
  std::vector<std::uint8_t> boot(4096, 0);
  boot[0] = 0xEB;
  boot[1] = 0x76;
  boot[2] = 0x90;
  std::copy_n("EXFAT   ", 8, boot.begin() + 3);
  boot[80] = 24;   // FAT offset in sectors
  boot[84] = 8;    // FAT length
  boot[88] = 32;   // cluster heap offset
  boot[92] = 100;  // cluster count
  boot[96] = 4;    // root directory cluster
  boot[108] = 9;   // 512-byte sectors
  boot[109] = 3;   // 8 sectors per cluster
  boot[110] = 1;
  boot[510] = 0x55;
  boot[511] = 0xAA;
  MemoryByteSource src(boot);
  const VolumeInfo v = detect_volume(src);
  EXPECT_EQ(v.fs_kind, FsKind::kExFat);
  EXPECT_EQ(v.bytes_per_sector, 512u);
  EXPECT_EQ(v.sectors_per_cluster, 8u);
  EXPECT_EQ(v.root_cluster, 4u);
  EXPECT_EQ(v.cluster_count, 100u);
}

TEST(Imgfs, ZeroSectorIsUnknownAndShortInputThrows) {
  MemoryByteSource zeros(std::vector<std::uint8_t>(512, 0));
  EXPECT_EQ(detect_volume(zeros).fs_kind, FsKind::kUnknown);
  MemoryByteSource tiny(std::vector<std::uint8_t>(100, 0));
  try {
    detect_volume(tiny);
    FAIL() << "expected TooSmall";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooSmall);
  }
  EXPECT_THROW(walk_fat32(zeros, detect_volume(zeros)), Error);
}

TEST(Imgfs, ScenarioRootListing) {
  auto image = load_image("scenarios/A/droneSD.img.gz");
  const auto entries = walk_fat32(*image, detect_volume(*image));
  for (const char* dir : {"DCIM", "LOST.DIR", "MISC"}) {
    const FileEntry* e = find(entries, dir);
    ASSERT_NE(e, nullptr) << dir;
    EXPECT_TRUE(e->is_directory);
    EXPECT_FALSE(e->deleted);
  }
  const FileEntry* deleted = nullptr;
  for (const auto& e : entries) {
    if (e.deleted && e.path.ends_with("JI_0004.SRT")) deleted = &e;
  }
  ASSERT_NE(deleted, nullptr);
  EXPECT_FALSE(deleted->allocated);
  ASSERT_NE(find(entries, "DCIM/100MEDIA/DJI_0001.JPG"), nullptr);
}

TEST(Imgfs, EmptyVolumeHasNoFiles) {
  auto image = load_image("empty.img.gz");
  const auto entries = walk_fat32(*image, detect_volume(*image));
  const auto files = std::count_if(entries.begin(), entries.end(), [](const FileEntry& e) {
    return !e.deleted && !e.path.starts_with(".");
  });
  EXPECT_EQ(files, 0);
}

TEST(Imgfs, EmptyVolumeIsMostlyFree) {
  auto image = load_image("empty.img.gz");
  const VolumeInfo v = detect_volume(*image);
  const auto regions = unallocated_regions(*image, v);
  ASSERT_FALSE(regions.empty());
  EXPECT_LE(regions.size(), 2u);
  std::uint64_t free_bytes = 0;
  for (const auto& r : regions) free_bytes += r.length;
  // Only the root directory cluster is in use.
  EXPECT_EQ(free_bytes, (v.cluster_count - 1) * v.cluster_size());
  EXPECT_TRUE(std::is_sorted(regions.begin(), regions.end(),
                             [](const auto& a, const auto& b) { return a.start < b.start; }));
}

TEST_F(Del3Volume, ReadsAllocatedFilesExactly) {
  const FileEntry* tenk = find(entries_, "TENK.BIN");
  ASSERT_NE(tenk, nullptr);
  EXPECT_EQ(tenk->size, 10u * 1024);
  const ReadResult r = read_file(*image_, volume_, *tenk);
  EXPECT_EQ(hex(r.bytes), meta_["tenk_sha256"].get<std::string>());
  EXPECT_FALSE(r.recovered);
  EXPECT_FALSE(r.chain_broken);

  const FileEntry* zero = find(entries_, "ZERO.BIN");
  ASSERT_NE(zero, nullptr);
  EXPECT_TRUE(read_file(*image_, volume_, *zero).bytes.empty());
}

TEST_F(Del3Volume, RecoversDeletedFile) {
  const FileEntry* victim = nullptr;
  for (const auto& e : entries_) {
    if (e.deleted && e.path.ends_with("ICTIM.BIN")) victim = &e;
  }
  ASSERT_NE(victim, nullptr);
  EXPECT_EQ(victim->size, meta_["victim_size"].get<std::uint64_t>());
  EXPECT_EQ(victim->first_cluster, meta_["freed_clusters"][0].get<std::uint32_t>());
  const ReadResult r = read_file(*image_, volume_, *victim);
  EXPECT_TRUE(r.recovered);
  EXPECT_EQ(hex(r.bytes), meta_["victim_sha256"].get<std::string>());
}

TEST_F(Del3Volume, FreedClustersFormOneRun) {
  const auto freed = meta_["freed_clusters"].get<std::vector<std::uint32_t>>();
  const std::uint64_t start = volume_.cluster_offset(freed.front());
  const std::uint64_t end = volume_.cluster_offset(freed.back()) + volume_.cluster_size();
  int containing = 0;
  for (const auto& r : unallocated_regions(*image_, volume_)) {
    if (r.start < end && start < r.start + r.length) {
      ++containing;
      EXPECT_EQ(r.start, start);
      EXPECT_EQ(r.length, end - start);
    }
  }
  EXPECT_EQ(containing, 1);
  for (std::uint32_t c : freed) EXPECT_EQ(fat_entry(*image_, volume_, c), 0u);
}

TEST_F(Del3Volume, AllocatedRegionsComplementFreeSpace) {
  std::uint64_t total = 0;
  for (const auto& r : unallocated_regions(*image_, volume_)) total += r.length;
  for (const auto& r : allocated_regions(*image_, volume_)) total += r.length;
  EXPECT_EQ(total, volume_.data_end() - volume_.data_offset);
}

TEST(Imgfs, FullVolumeHasNoFreeRuns) {
  auto base = load_image("empty.img.gz");
  const VolumeInfo v = detect_volume(*base);
  testing::PatchedByteSource full(base);
  for (std::uint32_t c = 2; c < v.cluster_count + 2; ++c) {
    full.patch(v.fat_offset + std::uint64_t{c} * 4, 0xFF);
  }
  EXPECT_TRUE(unallocated_regions(full, v).empty());
}

class OpenSourceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    testing::write_bytes(dir_ / "img", testing::gunzip_bytes(data_dir() / "empty.img.gz"));
    Workspace ws;
    case_ = ws.create_case("open", "x");
    source_ = add_source(case_, dir_ / "img", SourceKind::kRawImage, SourceLabel::kDroneSD);
  }

  testing::TempDir dir_;
  CaseFile case_;
  EvidenceSource source_;
};

TEST_F(OpenSourceTest, OpensVerifiedImage) {
  const SourceHandle h = open_source(source_);
  EXPECT_TRUE(h.is_image());
  EXPECT_EQ(h.size(), source_.byte_size);
}

TEST_F(OpenSourceTest, MissingOriginIsIoError) {
  fs::remove(dir_ / "img");
  try {
    open_source(source_);
    FAIL() << "expected IoError";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIoError);
  }
}

TEST_F(OpenSourceTest, ChangedImageIsRefusedUnlessOverridden) {
  auto bytes = testing::read_bytes(dir_ / "img");
  bytes[bytes.size() - 1] ^= 0xFF;
  testing::write_bytes(dir_ / "img", bytes);
  try {
    open_source(source_);
    FAIL() << "expected RefusedUnverified";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRefusedUnverified);
  }
  OpenOptions skip;
  skip.skip_verification = true;
  EXPECT_NO_THROW(open_source(source_, skip));
}

TEST(Imgfs, TreeListing) {
  const auto entries = list_tree(data_dir() / "scenarios/A/droneInternal");
  const FileEntry* dat = find(entries, "FlightLogs/FLY042.DAT");
  ASSERT_NE(dat, nullptr);
  EXPECT_FALSE(dat->is_directory);
  EXPECT_TRUE(dat->modified.has_value());
  const auto head = read_tree_file(data_dir() / "scenarios/A/droneInternal", *dat, 16);
  EXPECT_EQ(head.size(), 16u);
}

}  // namespace
}  // namespace dronefx
