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

#include <string>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "dronefx/error.hpp"
#include "dronefx/flightlog.hpp"
#include "fixtures.hpp"

namespace dronefx {
namespace {

using ::testing::ElementsAre;
using testing::data_dir;

constexpr std::string_view kHeader =
    "Flight Mode,GPS,IMU Altitude,VPS Altitude,Speed,Home Distance,Battery,Battery Voltage,"
    "Cell 1,Cell 2,Cell Deviation,Message\n";

TEST(FlightRecordName, ParsesTimestamp) {
  EXPECT_EQ(parse_flightrecord_filename("DJIFlightRecord_2023-01-28_[19-09-49].txt"),
            (DateTime{2023, 1, 28, 19, 9, 49}));
  EXPECT_FALSE(parse_flightrecord_filename("DJIFlightRecord_2023-02-30_[00-00-00].txt"));
  EXPECT_FALSE(parse_flightrecord_filename("flight.txt"));
  EXPECT_FALSE(parse_flightrecord_filename("DJIFlightRecord_2023-01-28_[25-00-00].txt"));
}

TEST(ClassifyLog, DecodedCsvByHeader) {
  const std::string csv = std::string(kHeader) + "P-GPS,18 satellites,0ft,0ft,6 mph,0ft,100%,8.2V,4.1V,4.1V,0V,\n";
  const FlightLogFile f = classify_log(as_bytes(csv), "whatever.txt");
  EXPECT_EQ(f.kind, LogKind::kDecodedCsv);
  EXPECT_FALSE(f.encoded);
}

TEST(ClassifyLog, BinaryWithModelString) {
  const auto bytes = testing::read_bytes(
      data_dir() / "scenarios/D/rcInternal/Android/data/dji.go.v5/files/FlightRecord/"
                   "DJIFlightRecord_2023-01-30_[10-14-40].txt");
  const FlightLogFile f = classify_log(bytes, "DJIFlightRecord_2023-01-30_[10-14-40].txt");
  EXPECT_EQ(f.probe.model, "RM330");
  EXPECT_TRUE(f.encoded);
  EXPECT_EQ(f.start_time, (DateTime{2023, 1, 30, 10, 14, 40}));
}

TEST(ClassifyLog, ContentBeatsExtension) {
  const auto bytes =
      testing::read_bytes(data_dir() / "scenarios/A/droneInternal/FlightLogs/FLY042.DAT");
  EXPECT_EQ(classify_log(bytes, "FLY042.DAT").kind, LogKind::kDatProprietary);
  EXPECT_EQ(classify_log(bytes, "FLY042.txt").kind, LogKind::kDatProprietary);
  EXPECT_EQ(classify_log(bytes, "FLY042.txt").probe.model, "MT3M3VD");
}

TEST(Ingest, StartingMotorsRow) {
  const std::string csv = std::string(kHeader) +
      "Starting Motors, 32 satellites, 0ft, N/A, 0 mph, 0ft, 100%, 8.397V, 4.20V, 4.20V, 0.001V, \n";
  const auto rows = ingest_decoded_csv(csv);
  ASSERT_EQ(rows.size(), 1u);
  const FlightRecordRow& r = rows[0];
  EXPECT_EQ(r.flight_mode, "Starting Motors");
  EXPECT_EQ(r.satellites, 32);
  EXPECT_EQ(r.battery_voltage, 8.397);
  EXPECT_EQ(r.cell_deviation, 0.001);
  EXPECT_FALSE(r.vps_alt.has_value());
  EXPECT_EQ(r.imu_alt, 0.0);
  EXPECT_EQ(r.battery_pct, 100.0);
  EXPECT_THAT(r.cell_voltages, ElementsAre(4.2, 4.2));
  EXPECT_TRUE(r.messages.empty());
  EXPECT_TRUE(r.warnings.empty());
  EXPECT_EQ(r.t_ms, 0);
}

TEST(Ingest, TabSeparatedTableAndMessages) {
  const auto rows = ingest_decoded_csv(testing::read_text(data_dir() / "flight_record.tsv"));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1].t_ms, kDefaultRowIntervalMs);
  EXPECT_EQ(rows[1].messages.size(), 2u);
  const std::string csv = std::string(kHeader) +
      "P-GPS,18 satellites,0ft,0ft,0 mph,0ft,99%,8.3V,4.1V,4.1V,0.002V,Data Recorder File Index is 186.\n";
  EXPECT_THAT(ingest_decoded_csv(csv)[0].messages, ElementsAre("Data Recorder File Index is 186."));
}

TEST(Ingest, HeaderOnlyAndNoHeader) {
  EXPECT_TRUE(ingest_decoded_csv(kHeader).empty());
  try {
    ingest_decoded_csv("alpha,beta\n1,2\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoHeader);
  }
}

TEST(Ingest, BadNumbersAreKeptWithWarnings) {
  const std::string csv = std::string(kHeader) +
      "P-GPS,lots satellites,12ft,N/A,fast,0ft,100%,8.3V,4.1V,4.1V,0.001V,\n";
  const auto rows = ingest_decoded_csv(csv);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_FALSE(rows[0].satellites.has_value());
  EXPECT_FALSE(rows[0].speed.has_value());
  EXPECT_EQ(rows[0].imu_alt, 12.0);
  EXPECT_EQ(rows[0].warnings.size(), 2u);
}

TEST(Ingest, UnknownColumnsBecomeExtras) {
  const std::string csv = "Flight Mode,Gimbal Pitch\nP-GPS,-90\n";
  const auto rows = ingest_decoded_csv(csv);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].extras.at("Gimbal Pitch"), "-90");
}

TEST(ColumnMapTest, MapsExternalHeaders) {
  const ColumnMap map = parse_column_map(
      "# airdata export\n"
      "altitude(feet) -> IMU Altitude\n"
      "text -> Message\n");
  EXPECT_EQ(map.size(), 2u);
  const std::string csv = "Flight Mode,altitude(feet),text\nP-GPS,42,hello; world\n";
  EXPECT_EQ(count_known_columns("Flight Mode,altitude(feet),text", map), 3u);
  const auto rows = ingest_decoded_csv(csv, map);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].imu_alt, 42.0);
  EXPECT_THAT(rows[0].messages, ElementsAre("hello", "world"));
  EXPECT_THROW(parse_column_map("nonsense line"), Error);
  EXPECT_THROW(parse_column_map("x -> Not A Column"), Error);
}

TEST(MessageCell, Split) {
  EXPECT_THAT(split_message_cell(" a ; ;b;"), ElementsAre("a", "b"));
  EXPECT_TRUE(split_message_cell("").empty());
}

}  // namespace
}  // namespace dronefx
