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

#include "dronefx/byte_source.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <cstring>

#include "dronefx/error.hpp"

namespace dronefx {

std::vector<std::uint8_t> ByteSource::read(std::uint64_t offset, std::size_t length) const {
  std::vector<std::uint8_t> out(length);
  out.resize(read_at(offset, out));
  return out;
}

FileByteSource::FileByteSource(const std::filesystem::path& path) {
  fd_ = ::open(path.c_str(), O_RDONLY | O_CLOEXEC);
  if (fd_ < 0) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  struct stat st {};
  if (::fstat(fd_, &st) != 0) {
    ::close(fd_);
    throw Error(ErrorCode::kIoError, "cannot stat " + path.string());
  }
  size_ = static_cast<std::uint64_t>(st.st_size);
}

FileByteSource::~FileByteSource() {
  if (fd_ >= 0) ::close(fd_);
}

std::size_t FileByteSource::read_at(std::uint64_t offset, std::span<std::uint8_t> out) const {
  if (offset >= size_) return 0;
  std::size_t want = static_cast<std::size_t>(std::min<std::uint64_t>(out.size(), size_ - offset));
  std::size_t done = 0;
  while (done < want) {
    const ssize_t n = ::pread(fd_, out.data() + done, want - done,
                              static_cast<off_t>(offset + done));
    if (n <= 0) break;
    done += static_cast<std::size_t>(n);
  }
  return done;
}

std::size_t MemoryByteSource::read_at(std::uint64_t offset, std::span<std::uint8_t> out) const {
  if (offset >= bytes_.size()) return 0;
  const std::size_t n =
      static_cast<std::size_t>(std::min<std::uint64_t>(out.size(), bytes_.size() - offset));
  std::memcpy(out.data(), bytes_.data() + offset, n);
  return n;
}

SliceByteSource::SliceByteSource(std::shared_ptr<const ByteSource> base, std::uint64_t offset,
                                 std::uint64_t length)
    : base_(std::move(base)), offset_(offset), length_(0) {
  const std::uint64_t avail = offset_ < base_->size() ? base_->size() - offset_ : 0;
  length_ = std::min(length, avail);
}

std::size_t SliceByteSource::read_at(std::uint64_t offset, std::span<std::uint8_t> out) const {
  if (offset >= length_) return 0;
  const std::size_t n =
      static_cast<std::size_t>(std::min<std::uint64_t>(out.size(), length_ - offset));
  return base_->read_at(offset_ + offset, out.first(n));
}

}  // namespace dronefx
