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

#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "dronefx/error.hpp"
#include "dronefx/report.hpp"
#include "fixtures.hpp"

namespace dronefx {
namespace {

namespace fs = std::filesystem;

class ScenarioA : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    work_ = new testing::TempDir;
    Workspace ws([] { return std::string("case-a"); },
                 [] { return std::string("2023-02-01T09:00:00Z"); });
    case_ = new CaseFile(ws.create_case("Scenario A", "examiner1"));
    add_source(*case_, testing::stage_evidence(work_->path(), "A/droneSD.img.gz"),
               SourceKind::kRawImage, SourceLabel::kDroneSD);
    add_source(*case_, testing::stage_evidence(work_->path(), "A/droneInternal"),
               SourceKind::kDirectoryTree, SourceLabel::kDroneInternal);
    scan_ = new ScanResult(scan_case(*case_));
  }
  static void TearDownTestSuite() {
    delete scan_;
    delete case_;
    delete work_;
  }

  static testing::TempDir* work_;
  static CaseFile* case_;
  static ScanResult* scan_;
};

testing::TempDir* ScenarioA::work_ = nullptr;
CaseFile* ScenarioA::case_ = nullptr;
ScanResult* ScenarioA::scan_ = nullptr;

TEST_F(ScenarioA, DroneSdRow) {
  const ArtefactMatrix m = summarize(*case_, scan_->artefacts);
  ASSERT_EQ(m.cells.size(), 2u);
  const MatrixCell* sd = m.find(Device::kDrone, Storage::kSD);
  ASSERT_NE(sd, nullptr);
  EXPECT_TRUE(sd->present);
  EXPECT_EQ(sd->media_text(), "Y");
  EXPECT_EQ(sd->flight_log_text(), "N");
  EXPECT_TRUE(sd->flags.has(Flags::kG));
  EXPECT_TRUE(sd->flags.has(Flags::kD));
  EXPECT_TRUE(sd->witnesses.count("media"));
  EXPECT_TRUE(sd->witnesses.count("G"));
  EXPECT_EQ(m.find(Device::kRC, Storage::kSD), nullptr);
}

TEST_F(ScenarioA, ReportsAreDeterministic) {
  ReportInput in;
  in.case_file = case_;
  in.scan = scan_;
  in.generated_at = "2023-02-01T10:00:00Z";
  const std::string json = render_report(in, "json");
  EXPECT_EQ(render_report(in, "json"), json);
  const auto doc = nlohmann::json::parse(json);
  EXPECT_EQ(doc["format"], "dronefx-report/1");
  EXPECT_EQ(doc["case"]["case_id"], "case-a");
  EXPECT_EQ(doc["sources"].size(), 2u);
  const std::string md = render_report(in, "markdown");
  EXPECT_EQ(render_report(in, "markdown"), md);
  EXPECT_NE(md.find("| Drone | SD | Y | N |"), std::string::npos) << md;
}

TEST(Report, EmptyCaseHasEmptyMatrix) {
  Workspace ws;
  const CaseFile c = ws.create_case("empty", "x");
  EXPECT_TRUE(summarize(c, {}).cells.empty());
  ReportInput in;
  in.case_file = &c;
  const auto doc = nlohmann::json::parse(render_report(in, "json"));
  EXPECT_TRUE(doc["matrix"].empty());
}

TEST(Report, SyncResultAloneRaisesP) {
  testing::TempDir dir;
  fs::create_directories(dir / "rc/files/SyncResult");
  std::ofstream(dir / "rc/files/SyncResult/profile.json") << R"({"email": "pilot@example.org"})";
  Workspace ws;
  CaseFile c = ws.create_case("p", "x");
  add_source(c, dir / "rc", SourceKind::kDirectoryTree, SourceLabel::kRCInternal);
  const ScanResult r = scan_case(c);
  const MatrixCell* cell = summarize(c, r.artefacts).find(Device::kRC, Storage::kInternal);
  ASSERT_NE(cell, nullptr);
  EXPECT_TRUE(cell->flags.has(Flags::kP));
  EXPECT_EQ(cell->media_text(), "N");
  ASSERT_EQ(r.pii.size(), 1u);
  EXPECT_EQ(r.pii[0].hit.value, "pilot@example.org");
}

TEST(Report, FormatErrors) {
  Workspace ws;
  const CaseFile c = ws.create_case("f", "x");
  ReportInput in;
  in.case_file = &c;
  try {
    render_report(in, "pdf");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownFormat);
  }
  ReportInput none;
  try {
    render_report(none, "json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

ArtefactRecord video(std::string path, std::string role, std::string when, std::uint64_t size) {
  ArtefactRecord a;
  a.source_id = role == "cached-video" ? "rc" : "drone";
  a.path = std::move(path);
  a.category = Category::kMedia;
  a.role = std::move(role);
  a.details["recorded_at"] = std::move(when);
  a.details["size"] = std::to_string(size);
  return a;
}

TEST(VideoPairs, NearestWithinTolerance) {
  EXPECT_EQ(size_ratio_percent(11, 100), 11);
  EXPECT_EQ(size_ratio_percent(1, 8), 13);
  EXPECT_EQ(size_ratio_percent(5, 0), 0);
  const std::vector<ArtefactRecord> records = {
      video("cache.mp4", "cached-video", "2023-01-28 19:09:49", 110),
      video("far.mp4", "original", "2023-01-28 21:00:00", 1000),
      video("near.mp4", "original", "2023-01-28 19:10:30", 1000),
      video("lonely.mp4", "cached-video", "2023-01-29 08:00:00", 50),
  };
  const auto pairs = pair_cached_videos(records);
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0].cached, "rc:cache.mp4");
  EXPECT_EQ(pairs[0].full, "drone:near.mp4");
  EXPECT_EQ(pairs[0].ratio_percent, 11);
  EXPECT_TRUE(pair_cached_videos(records, 10).empty());
}

}  // namespace
}  // namespace dronefx
