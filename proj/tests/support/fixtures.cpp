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

#include "fixtures.hpp"

#include <unistd.h>
#include <zlib.h>

#include <atomic>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#ifndef DRONEFX_TEST_DATA_DIR
#error "DRONEFX_TEST_DATA_DIR must be defined"
#endif

namespace dronefx::testing {
namespace fs = std::filesystem;

fs::path data_dir() { return DRONEFX_TEST_DATA_DIR; }

std::vector<std::uint8_t> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string read_text(const fs::path& path) {
  const auto b = read_bytes(path);
  return {b.begin(), b.end()};
}

void write_bytes(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::vector<std::uint8_t> gunzip_bytes(const fs::path& gz) {
  gzFile f = gzopen(gz.c_str(), "rb");
  if (!f) throw std::runtime_error("cannot open " + gz.string());
  std::vector<std::uint8_t> out;
  std::vector<std::uint8_t> buf(1 << 20);
  for (;;) {
    const int n = gzread(f, buf.data(), static_cast<unsigned>(buf.size()));
    if (n < 0) {
      gzclose(f);
      throw std::runtime_error("corrupt gzip " + gz.string());
    }
    if (n == 0) break;
    out.insert(out.end(), buf.begin(), buf.begin() + n);
  }
  gzclose(f);
  return out;
}

void gunzip_file(const fs::path& gz, const fs::path& out) { write_bytes(out, gunzip_bytes(gz)); }

TempDir::TempDir() {
  static std::atomic<unsigned> counter{0};
  std::random_device rd;
  path_ = fs::temp_directory_path() /
          ("dronefx-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void copy_tree(const fs::path& from, const fs::path& to) {
  fs::create_directories(to);
  fs::copy(from, to, fs::copy_options::recursive | fs::copy_options::overwrite_existing);
}

fs::path stage_evidence(const fs::path& work, const std::string& rel) {
  const fs::path from = data_dir() / "scenarios" / rel;
  if (rel.ends_with(".gz")) {
    const fs::path to = work / "evidence" / rel.substr(0, rel.size() - 3);
    if (!fs::exists(to)) {
      fs::create_directories(to.parent_path());
      gunzip_file(from, to);
    }
    return to;
  }
  const fs::path to = work / "evidence" / rel;
  if (!fs::exists(to)) copy_tree(from, to);
  return to;
}

std::size_t PatchedByteSource::read_at(std::uint64_t offset, std::span<std::uint8_t> out) const {
  const std::size_t n = base_->read_at(offset, out);
  for (auto it = patches_.lower_bound(offset); it != patches_.end() && it->first < offset + n; ++it) {
    out[it->first - offset] = it->second;
  }
  return n;
}

long resident_kib() {
  std::ifstream statm("/proc/self/statm");
  long pages = 0, resident = 0;
  statm >> pages >> resident;
  return resident * (sysconf(_SC_PAGESIZE) / 1024);
}

}  // namespace dronefx::testing
