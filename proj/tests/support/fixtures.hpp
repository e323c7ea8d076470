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
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "dronefx/byte_source.hpp"

namespace dronefx::testing {

/// Directory holding the committed fixtures.
std::filesystem::path data_dir();

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path);
std::string read_text(const std::filesystem::path& path);
void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);

/// Inflates a gzip fixture to `out`.
void gunzip_file(const std::filesystem::path& gz, const std::filesystem::path& out);
std::vector<std::uint8_t> gunzip_bytes(const std::filesystem::path& gz);

/// Unique scratch directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

/// Copies a fixture tree so tests never touch the committed files.
void copy_tree(const std::filesystem::path& from, const std::filesystem::path& to);

/// Copies `scenarios/<rel>` under `<work>/evidence`, inflating `.gz` images.
/// Returns the staged path; repeated calls reuse the first copy.
std::filesystem::path stage_evidence(const std::filesystem::path& work, const std::string& rel);

/// Overlays byte patches on a shared base source without copying it.
class PatchedByteSource final : public ByteSource {
 public:
  explicit PatchedByteSource(std::shared_ptr<const ByteSource> base) : base_(std::move(base)) {}

  void patch(std::uint64_t offset, std::uint8_t value) { patches_[offset] = value; }
  std::uint64_t size() const override { return base_->size(); }
  std::size_t read_at(std::uint64_t offset, std::span<std::uint8_t> out) const override;

 private:
  std::shared_ptr<const ByteSource> base_;
  std::map<std::uint64_t, std::uint8_t> patches_;
};

/// Current resident set size of this process in KiB.
long resident_kib();

}  // namespace dronefx::testing
