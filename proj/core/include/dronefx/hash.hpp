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

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>

namespace dronefx {

using Digest = std::array<std::uint8_t, 32>;

/// Name recorded in manifest headers.
inline constexpr std::string_view kHashAlgorithm = "SHA-256";

std::string to_hex(const Digest& digest);

/// Incremental SHA-256.
class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(std::span<const std::uint8_t> data);
  void update(std::string_view data);
  Digest finish();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

Digest sha256(std::span<const std::uint8_t> data);
Digest sha256(std::string_view data);

/// Polled between read blocks; returning true aborts hashing with
/// ErrorCode::kHashInterrupted.
using CancelCheck = std::function<bool()>;

Digest hash_file(const std::filesystem::path& path, const CancelCheck& cancelled = {});

/// Canonical manifest for a directory tree: one `<hex>  <relative_path>\n`
/// line per regular file, relative paths use '/' and are sorted byte-wise.
struct TreeManifest {
  std::string text;
  std::uint64_t total_bytes = 0;
  std::size_t file_count = 0;
};

TreeManifest build_tree_manifest(const std::filesystem::path& root,
                                 const CancelCheck& cancelled = {});

}  // namespace dronefx
