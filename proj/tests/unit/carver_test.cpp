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
#include <cstdio>
#include <cstring>
#include <memory>

#include <gtest/gtest.h>

#include "dronefx/byte_source.hpp"
#include "dronefx/carver.hpp"
#include "dronefx/error.hpp"
#include "dronefx/hash.hpp"
#include "dronefx/imgfs.hpp"
#include "fixtures.hpp"

namespace dronefx {
namespace {

using testing::data_dir;

struct Planted {
  std::uint64_t offset;
  std::vector<std::uint8_t> bytes;
};

// The empty FAT32 volume with payloads copied into free clusters.
class PlantedVolume {
 public:
  PlantedVolume() : image_(testing::gunzip_bytes(data_dir() / "empty.img.gz")) {
    MemoryByteSource probe(image_);
    volume_ = detect_volume(probe);
  }

  std::uint64_t plant(std::uint32_t cluster, const std::vector<std::uint8_t>& bytes) {
    const std::uint64_t off = volume_.cluster_offset(cluster);
    std::copy(bytes.begin(), bytes.end(), image_.begin() + static_cast<std::ptrdiff_t>(off));
    return off;
  }

  std::shared_ptr<const ByteSource> source() const {
    return std::make_shared<MemoryByteSource>(image_);
  }
  const VolumeInfo& volume() const { return volume_; }

 private:
  std::vector<std::uint8_t> image_;
  VolumeInfo volume_;
};

std::string hex(const std::vector<std::uint8_t>& b) { return to_hex(sha256(b)); }

TEST(Carver, ZeroRegionYieldsNothing) {
  MemoryByteSource zeros(std::vector<std::uint8_t>(1 << 20, 0));
  EXPECT_TRUE(carve(whole_source(zeros), zeros, default_signatures()).empty());
  EXPECT_TRUE(carve_telemetry_text(whole_source(zeros), zeros).empty());
}

TEST(Carver, EmptySignatureListIsRejected) {
  MemoryByteSource zeros(std::vector<std::uint8_t>(4096, 0));
  EXPECT_THROW(carve(whole_source(zeros), zeros, {}), Error);
}

TEST(Carver, RecoversPlantedImagesFromFreeSpace) {
  PlantedVolume vol;
  std::vector<Planted> planted;
  std::uint32_t cluster = 100;
  for (const char* name : {"exif/exif_equator.jpg", "exif/exif_north_west.jpg",
                           "exif/exif_south_east.jpg", "exif/exif_raw.dng"}) {
    auto bytes = testing::read_bytes(data_dir() / name);
    planted.push_back({vol.plant(cluster, bytes), bytes});
    cluster += 40;
  }
  auto src = vol.source();
  const auto regions = unallocated_regions(*src, vol.volume());
  const auto carved = carve(regions, *src, default_signatures());
  ASSERT_EQ(carved.size(), planted.size());
  for (std::size_t i = 0; i < planted.size(); ++i) {
    EXPECT_EQ(carved[i].source_offset, planted[i].offset);
    EXPECT_EQ(carved[i].payload_hash, hex(planted[i].bytes));
    EXPECT_EQ(carved[i].confidence, Confidence::kExact);
  }
  EXPECT_EQ(carved[0].kind, "jpeg");
  EXPECT_EQ(carved[3].kind, "tiff");
}

TEST(Carver, OverwrittenFooterIsTruncated) {
  PlantedVolume vol;
  auto bytes = testing::read_bytes(data_dir() / "exif/exif_equator.jpg");
  ASSERT_EQ(bytes[bytes.size() - 2], 0xFF);
  ASSERT_EQ(bytes[bytes.size() - 1], 0xD9);
  bytes[bytes.size() - 2] = 0;
  bytes[bytes.size() - 1] = 0;
  const auto off = vol.plant(200, bytes);
  auto src = vol.source();
  const auto carved = carve(unallocated_regions(*src, vol.volume()), *src, default_signatures());
  ASSERT_EQ(carved.size(), 1u);
  EXPECT_EQ(carved[0].source_offset, off);
  EXPECT_EQ(carved[0].confidence, Confidence::kTruncated);
}

TEST(Carver, CarvingIsDeterministicAcrossThreads) {
  PlantedVolume vol;
  std::uint32_t cluster = 300;
  for (int i = 0; i < 6; ++i) {
    vol.plant(cluster, testing::read_bytes(data_dir() / "exif/exif_north_west.jpg"));
    cluster += 57;
  }
  auto src = vol.source();
  const auto regions = unallocated_regions(*src, vol.volume());
  const auto one = carve(regions, *src, default_signatures());
  CarveOptions four;
  four.threads = 4;
  EXPECT_EQ(carve(regions, *src, default_signatures(), four), one);
  EXPECT_EQ(carve(regions, *src, default_signatures()), one);
  EXPECT_EQ(one.size(), 6u);
}

std::vector<std::uint8_t> text_bytes(std::string_view s) { return {s.begin(), s.end()}; }

TEST(Carver, TelemetryTextBlocks) {
  const std::string srt = testing::read_text(data_dir() / "camera_cue.srt");
  std::vector<std::uint8_t> buf(64 * 1024, 0);
  std::memcpy(buf.data() + 1000, srt.data(), srt.size());
  std::memcpy(buf.data() + 30000, srt.data(), srt.size());
  MemoryByteSource src(buf);
  const auto blocks = carve_telemetry_text(whole_source(src), src);
  ASSERT_EQ(blocks.size(), 2u);
  EXPECT_EQ(blocks[0].offset, 1000u);
  EXPECT_EQ(blocks[1].offset, 30000u);
  EXPECT_EQ(blocks[0].text, srt);
  EXPECT_NE(blocks[0].text.find("[latitude: -35"), std::string::npos);
}

TEST(Carver, ProseIsNotTelemetry) {
  std::string prose;
  while (prose.size() < 2000) prose += "The quick brown fox jumps over the lazy dog. ";
  MemoryByteSource src(text_bytes(prose));
  EXPECT_TRUE(carve_telemetry_text(whole_source(src), src).empty());
}

TEST(Carver, WritesCarvedFilesAndIndex) {
  testing::TempDir dir;
  PlantedVolume vol;
  const auto jpeg = testing::read_bytes(data_dir() / "exif/exif_equator.jpg");
  vol.plant(500, jpeg);
  auto src = vol.source();
  const auto files = carve(unallocated_regions(*src, vol.volume()), *src, default_signatures());
  const std::string index = write_carved(dir.path(), *src, files, {});
  ASSERT_EQ(files.size(), 1u);
  char name[64];
  std::snprintf(name, sizeof name, "%012llu_jpeg.jpg",
                static_cast<unsigned long long>(files[0].source_offset));
  EXPECT_EQ(testing::read_bytes(dir / name), jpeg);
  EXPECT_NE(index.find(files[0].payload_hash), std::string::npos);
}

}  // namespace
}  // namespace dronefx
