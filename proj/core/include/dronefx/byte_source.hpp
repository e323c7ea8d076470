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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <vector>

namespace dronefx {

/// Random-access, read-only byte provider. Implementations must be safe for
/// concurrent `read_at` calls.
class ByteSource {
 public:
  virtual ~ByteSource() = default;

  virtual std::uint64_t size() const = 0;
  /// Copies up to out.size() bytes starting at offset; returns the count read
  /// (short only at end of source).
  virtual std::size_t read_at(std::uint64_t offset, std::span<std::uint8_t> out) const = 0;

  std::vector<std::uint8_t> read(std::uint64_t offset, std::size_t length) const;
};

/// File opened O_RDONLY; reads use pread so no shared file position exists.
class FileByteSource final : public ByteSource {
 public:
  explicit FileByteSource(const std::filesystem::path& path);
  ~FileByteSource() override;
  FileByteSource(const FileByteSource&) = delete;
  FileByteSource& operator=(const FileByteSource&) = delete;

  std::uint64_t size() const override { return size_; }
  std::size_t read_at(std::uint64_t offset, std::span<std::uint8_t> out) const override;

 private:
  int fd_ = -1;
  std::uint64_t size_ = 0;
};

class MemoryByteSource final : public ByteSource {
 public:
  explicit MemoryByteSource(std::vector<std::uint8_t> bytes) : bytes_(std::move(bytes)) {}

  std::uint64_t size() const override { return bytes_.size(); }
  std::size_t read_at(std::uint64_t offset, std::span<std::uint8_t> out) const override;

 private:
  std::vector<std::uint8_t> bytes_;
};

/// Window [offset, offset+length) of another source, addressed from zero.
class SliceByteSource final : public ByteSource {
 public:
  SliceByteSource(std::shared_ptr<const ByteSource> base, std::uint64_t offset,
                  std::uint64_t length);

  std::uint64_t size() const override { return length_; }
  std::size_t read_at(std::uint64_t offset, std::span<std::uint8_t> out) const override;

 private:
  std::shared_ptr<const ByteSource> base_;
  std::uint64_t offset_;
  std::uint64_t length_;
};

}  // namespace dronefx
