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

#include <cstdio>
#include <memory>
#include <random>
#include <string>

#include <benchmark/benchmark.h>

#include "dronefx/byte_source.hpp"
#include "dronefx/carver.hpp"
#include "dronefx/catalog.hpp"
#include "dronefx/flightlog.hpp"
#include "dronefx/geo.hpp"
#include "dronefx/hash.hpp"
#include "dronefx/imgfs.hpp"
#include "dronefx/pipeline.hpp"
#include "dronefx/telemetry.hpp"
#include "fixtures.hpp"

namespace dronefx {
namespace {

std::shared_ptr<const ByteSource> plant_image() {
  static const auto image = std::make_shared<MemoryByteSource>(
      testing::gunzip_bytes(testing::data_dir() / "plant64.img.gz"));
  return image;
}

void BM_Sha256(benchmark::State& state) {
  const std::vector<std::uint8_t> data(static_cast<std::size_t>(state.range(0)), 0x5A);
  for (auto _ : state) benchmark::DoNotOptimize(sha256(data));
  state.SetBytesProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Sha256)->Arg(4 << 10)->Arg(1 << 20)->Arg(16 << 20);

void BM_WalkFat32(benchmark::State& state) {
  const auto image = plant_image();
  const VolumeInfo v = detect_volume(*image);
  for (auto _ : state) benchmark::DoNotOptimize(walk_fat32(*image, v));
}
BENCHMARK(BM_WalkFat32);

void BM_UnallocatedRegions(benchmark::State& state) {
  const auto image = plant_image();
  const VolumeInfo v = detect_volume(*image);
  for (auto _ : state) benchmark::DoNotOptimize(unallocated_regions(*image, v));
}
BENCHMARK(BM_UnallocatedRegions);

void BM_Carve(benchmark::State& state) {
  const auto image = plant_image();
  const auto regions = unallocated_regions(*image, detect_volume(*image));
  const auto sigs = default_signatures();
  CarveOptions opts;
  opts.threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(carve(regions, *image, sigs, opts));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(image->size()));
}
BENCHMARK(BM_Carve)->Arg(1)->Arg(4)->UseRealTime();

void BM_CarveTelemetryText(benchmark::State& state) {
  const auto image = plant_image();
  const auto regions = unallocated_regions(*image, detect_volume(*image));
  for (auto _ : state) benchmark::DoNotOptimize(carve_telemetry_text(regions, *image));
}
BENCHMARK(BM_CarveTelemetryText);

std::string make_srt(int cues) {
  std::string text;
  char buf[320];
  for (int i = 0; i < cues; ++i) {
    const int ms = i * 33;
    std::snprintf(buf, sizeof buf,
                  "%d\n00:%02d:%02d,%03d --> 00:%02d:%02d,%03d\n"
                  "<font size=\"28\">[iso : 100] [shutter : 1/1000.0] [fnum : 280] [ev : 0] "
                  "[ct : 5154] [color_md : default] [focal_len : 240] [latitude: %.6f] "
                  "[longitude: %.6f] [rel_alt: %.3f abs_alt: %.3f]</font>\n\n",
                  i + 1, ms / 60000, ms / 1000 % 60, ms % 1000, (ms + 33) / 60000,
                  (ms + 33) / 1000 % 60, (ms + 33) % 1000, -35.28 + i * 1e-6, 149.13 + i * 1e-6,
                  i * 0.01, 440 + i * 0.01);
    text += buf;
  }
  return text;
}

void BM_ParseSrt(benchmark::State& state) {
  const std::string text = make_srt(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(parse_srt(text));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ParseSrt)->Arg(100)->Arg(10000);

void BM_IngestCsv(benchmark::State& state) {
  std::string text =
      "Flight Mode,GPS,IMU Altitude,VPS Altitude,Speed,Home Distance,Battery,Battery Voltage,"
      "Cell 1,Cell 2,Cell Deviation,Latitude,Longitude,Message\n";
  for (int i = 0; i < state.range(0); ++i) {
    text += "P-GPS,18 satellites," + std::to_string(i % 400) + "ft,N/A,12 mph,40ft,87%,8.1V,"
            "4.05V,4.05V,0.002V,-35.28" + std::to_string(i) + ",149.13,";
    text += (i % 50 == 0) ? "Returning home; Low battery\n" : "\n";
  }
  for (auto _ : state) benchmark::DoNotOptimize(ingest_decoded_csv(text));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_IngestCsv)->Arg(1000)->Arg(50000);

void BM_Haversine(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> lat(-90, 90), lon(-180, 180);
  std::vector<LatLon> pts(1024);
  for (auto& p : pts) p = {lat(rng), lon(rng)};
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(haversine(pts[i % 1024], pts[(i + 1) % 1024]));
    ++i;
  }
}
BENCHMARK(BM_Haversine);

void BM_ScanPii(benchmark::State& state) {
  std::mt19937 rng(3);
  std::vector<std::uint8_t> blob(1 << 20);
  for (auto& b : blob) b = static_cast<std::uint8_t>(rng());
  const std::string plant = "RM330 5YSZK7E0021XYZ pilot@example.com";
  std::copy(plant.begin(), plant.end(), blob.begin() + 4096);
  for (auto _ : state) benchmark::DoNotOptimize(scan_pii(blob));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(blob.size()));
}
BENCHMARK(BM_ScanPii);

void BM_ScanCase(benchmark::State& state) {
  testing::TempDir work;
  Workspace ws;
  CaseFile c = ws.create_case("bench", "bench");
  add_source(c, testing::stage_evidence(work.path(), "A/droneSD.img.gz"), SourceKind::kRawImage,
             SourceLabel::kDroneSD);
  add_source(c, testing::stage_evidence(work.path(), "B/rcInternal"), SourceKind::kDirectoryTree,
             SourceLabel::kRCInternal);
  ScanOptions opts;
  opts.threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(scan_case(c, opts));
}
BENCHMARK(BM_ScanCase)->Arg(1)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace dronefx

BENCHMARK_MAIN();
