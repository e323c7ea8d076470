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
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dronefx/hash.hpp"

namespace dronefx {

enum class SourceKind { kRawImage, kDirectoryTree };
enum class SourceLabel { kDroneSD, kRCSD, kDroneInternal, kRCInternal, kUnknown };
enum class Outcome { kOk, kError };

std::string_view to_string(SourceKind kind);
std::string_view to_string(SourceLabel label);
std::string_view to_string(Outcome outcome);
std::optional<SourceKind> parse_source_kind(std::string_view text);
/// Accepts both the canonical names ("DroneSD") and CLI spellings ("droneSD").
std::optional<SourceLabel> parse_source_label(std::string_view text);

struct AuditEvent {
  std::string at;  // UTC, "YYYY-MM-DDTHH:MM:SSZ"
  std::string actor;
  std::string action;
  std::string subject;
  Outcome outcome = Outcome::kOk;
  std::string detail;

  bool operator==(const AuditEvent&) const = default;
};

struct EvidenceSource {
  std::string source_id;
  SourceKind kind = SourceKind::kRawImage;
  std::string origin_path;
  std::uint64_t byte_size = 0;
  std::string content_hash;  // lowercase hex SHA-256
  std::string acquired_at;
  SourceLabel label = SourceLabel::kUnknown;
  /// Canonical per-file manifest; only populated for DirectoryTree sources.
  std::string tree_manifest;

  bool operator==(const EvidenceSource&) const = default;
};

struct CaseFile {
  std::string case_id;
  std::string name;
  std::string examiner;
  std::string created_at;
  std::vector<EvidenceSource> sources;
  std::vector<AuditEvent> audit;

  const EvidenceSource* find_source(std::string_view source_id) const;

  bool operator==(const CaseFile&) const = default;
};

struct VerificationResult {
  bool ok = false;
  std::string expected;
  std::string actual;
};

using IdGenerator = std::function<std::string()>;
using UtcClock = std::function<std::string()>;

/// Who is acting and what time it is; injected so tests can pin both.
struct AuditContext {
  std::string actor;
  UtcClock clock = utc_clock();

  static UtcClock utc_clock();
};

std::string random_case_id();

/// Tracks the case ids that exist under one workspace root.
class Workspace {
 public:
  explicit Workspace(IdGenerator ids = random_case_id, UtcClock clock = AuditContext::utc_clock());

  /// Collects ids from `<root>/*/case.json`.
  static Workspace scan(const std::filesystem::path& root, IdGenerator ids = random_case_id,
                        UtcClock clock = AuditContext::utc_clock());

  CaseFile create_case(std::string_view name, std::string_view examiner);
  bool contains(std::string_view case_id) const { return ids_.count(std::string(case_id)) > 0; }
  void register_id(std::string case_id) { ids_.insert(std::move(case_id)); }

 private:
  std::set<std::string> ids_;
  IdGenerator ids_gen_;
  UtcClock clock_;
};

/// Appends an event, clamping its time so storage order stays non-decreasing.
void append_audit(CaseFile& c, const AuditContext& ctx, std::string action, std::string subject,
                  Outcome outcome, std::string detail = {});

struct AddSourceOptions {
  AuditContext audit;
  CancelCheck cancelled;
};

/// Hashes the origin and registers it. On any failure the case gains a single
/// Error audit event and no source.
EvidenceSource add_source(CaseFile& c, const std::filesystem::path& path, SourceKind kind,
                          SourceLabel label, const AddSourceOptions& options = {});

/// Recomputes the digest of a source without touching the case.
std::string compute_source_hash(const EvidenceSource& source, const CancelCheck& cancelled = {});

/// Throws kVerificationUnavailable when the origin is missing and
/// kUnknownSource for unregistered ids; both are audited.
VerificationResult verify_source(CaseFile& c, std::string_view source_id,
                                 const AuditContext& ctx = {});

/// `# algorithm` header followed by `<hex>  <origin_path>` per source.
std::string render_manifest(const CaseFile& c);

std::string case_to_json(const CaseFile& c);
CaseFile case_from_json(std::string_view text);

/// Writes case.json, manifest.txt and manifests/<source_id>.txt.
void save_case(const CaseFile& c, const std::filesystem::path& case_dir);
CaseFile load_case(const std::filesystem::path& case_dir);

}  // namespace dronefx
