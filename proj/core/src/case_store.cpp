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

#include "dronefx/case_store.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "dronefx/datetime.hpp"
#include "dronefx/error.hpp"
#include "dronefx/io.hpp"
#include "json.hpp"

namespace dronefx {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string_view to_string(SourceKind kind) {
  return kind == SourceKind::kRawImage ? "RawImage" : "DirectoryTree";
}

std::string_view to_string(SourceLabel label) {
  switch (label) {
    case SourceLabel::kDroneSD: return "DroneSD";
    case SourceLabel::kRCSD: return "RCSD";
    case SourceLabel::kDroneInternal: return "DroneInternal";
    case SourceLabel::kRCInternal: return "RCInternal";
    case SourceLabel::kUnknown: return "Unknown";
  }
  return "Unknown";
}

std::string_view to_string(Outcome outcome) { return outcome == Outcome::kOk ? "Ok" : "Error"; }

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

}  // namespace

std::optional<SourceKind> parse_source_kind(std::string_view text) {
  const std::string t = lower(text);
  if (t == "rawimage" || t == "image") return SourceKind::kRawImage;
  if (t == "directorytree" || t == "tree") return SourceKind::kDirectoryTree;
  return std::nullopt;
}

std::optional<SourceLabel> parse_source_label(std::string_view text) {
  const std::string t = lower(text);
  if (t == "dronesd") return SourceLabel::kDroneSD;
  if (t == "rcsd") return SourceLabel::kRCSD;
  if (t == "droneinternal") return SourceLabel::kDroneInternal;
  if (t == "rcinternal") return SourceLabel::kRCInternal;
  if (t == "unknown") return SourceLabel::kUnknown;
  return std::nullopt;
}

const EvidenceSource* CaseFile::find_source(std::string_view source_id) const {
  for (const auto& s : sources) {
    if (s.source_id == source_id) return &s;
  }
  return nullptr;
}

UtcClock AuditContext::utc_clock() { return [] { return utc_now_iso(); }; }

std::string random_case_id() {
  std::random_device rd;
  std::uniform_int_distribution<std::uint64_t> dist;
  char buf[32];
  std::snprintf(buf, sizeof buf, "case-%016llx", static_cast<unsigned long long>(dist(rd)));
  return buf;
}

Workspace::Workspace(IdGenerator ids, UtcClock clock)
    : ids_gen_(std::move(ids)), clock_(std::move(clock)) {}

Workspace Workspace::scan(const fs::path& root, IdGenerator ids, UtcClock clock) {
  Workspace ws(std::move(ids), std::move(clock));
  std::error_code ec;
  if (!fs::is_directory(root, ec)) return ws;
  for (const auto& entry : fs::directory_iterator(root, ec)) {
    const fs::path case_json = entry.path() / "case.json";
    if (!fs::is_regular_file(case_json, ec)) continue;
    try {
      ws.register_id(load_case(entry.path()).case_id);
    } catch (const Error&) {
      // Skip unreadable neighbours.
    }
  }
  return ws;
}

CaseFile Workspace::create_case(std::string_view name, std::string_view examiner) {
  if (name.empty()) throw Error(ErrorCode::kEmptyName, "case name must be non-empty");
  std::string id = ids_gen_();
  if (contains(id)) throw Error(ErrorCode::kDuplicateCase, "case id already in workspace: " + id);
  ids_.insert(id);

  CaseFile c;
  c.case_id = std::move(id);
  c.name = std::string(name);
  c.examiner = std::string(examiner);
  c.created_at = clock_();
  AuditContext ctx{std::string(examiner), clock_};
  append_audit(c, ctx, "create_case", c.case_id, Outcome::kOk, c.name);
  c.audit.front().at = c.created_at;
  return c;
}

void append_audit(CaseFile& c, const AuditContext& ctx, std::string action, std::string subject,
                  Outcome outcome, std::string detail) {
  AuditEvent ev;
  ev.at = ctx.clock ? ctx.clock() : utc_now_iso();
  if (!c.audit.empty() && ev.at < c.audit.back().at) ev.at = c.audit.back().at;
  ev.actor = ctx.actor.empty() ? c.examiner : ctx.actor;
  ev.action = std::move(action);
  ev.subject = std::move(subject);
  ev.outcome = outcome;
  ev.detail = std::move(detail);
  c.audit.push_back(std::move(ev));
}

namespace {

std::string next_source_id(const CaseFile& c) {
  std::size_t n = c.sources.size() + 1;
  for (;;) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "src-%03zu", n);
    if (c.find_source(buf) == nullptr) return buf;
    ++n;
  }
}

bool path_within(const fs::path& inner, const fs::path& outer) {
  auto i = inner.begin();
  for (auto o = outer.begin(); o != outer.end(); ++o, ++i) {
    if (o->empty()) continue;
    if (i == inner.end() || *i != *o) return false;
  }
  return true;
}

}  // namespace

std::string compute_source_hash(const EvidenceSource& source, const CancelCheck& cancelled) {
  if (source.kind == SourceKind::kRawImage) return to_hex(hash_file(source.origin_path, cancelled));
  return to_hex(sha256(build_tree_manifest(source.origin_path, cancelled).text));
}

EvidenceSource add_source(CaseFile& c, const fs::path& path, SourceKind kind, SourceLabel label,
                          const AddSourceOptions& options) {
  EvidenceSource src;
  try {
    std::error_code ec;
    const fs::path canonical = fs::weakly_canonical(path, ec);
    if (ec || !fs::exists(canonical)) {
      throw Error(ErrorCode::kIoError, "evidence path does not exist: " + path.string());
    }
    if (kind == SourceKind::kRawImage && !fs::is_regular_file(canonical)) {
      throw Error(ErrorCode::kIoError, "raw image must be a regular file: " + path.string());
    }
    if (kind == SourceKind::kDirectoryTree && !fs::is_directory(canonical)) {
      throw Error(ErrorCode::kIoError, "directory tree must be a directory: " + path.string());
    }
    src.source_id = next_source_id(c);
    src.kind = kind;
    src.origin_path = canonical.string();
    src.label = label;
    if (kind == SourceKind::kRawImage) {
      src.content_hash = to_hex(hash_file(canonical, options.cancelled));
      src.byte_size = fs::file_size(canonical);
    } else {
      TreeManifest m = build_tree_manifest(canonical, options.cancelled);
      src.content_hash = to_hex(sha256(m.text));
      src.byte_size = m.total_bytes;
      src.tree_manifest = std::move(m.text);
    }
    src.acquired_at = options.audit.clock ? options.audit.clock() : utc_now_iso();
  } catch (const Error& e) {
    append_audit(c, options.audit, "add_source", path.string(), Outcome::kError, e.what());
    throw;
  } catch (const fs::filesystem_error& e) {
    append_audit(c, options.audit, "add_source", path.string(), Outcome::kError, e.what());
    throw Error(ErrorCode::kIoError, e.what());
  }
  c.sources.push_back(src);
  append_audit(c, options.audit, "add_source", src.source_id, Outcome::kOk,
               src.content_hash + "  " + src.origin_path);
  return src;
}

VerificationResult verify_source(CaseFile& c, std::string_view source_id,
                                 const AuditContext& ctx) {
  const EvidenceSource* src = c.find_source(source_id);
  if (src == nullptr) {
    append_audit(c, ctx, "verify_source", std::string(source_id), Outcome::kError,
                 "unknown source");
    throw Error(ErrorCode::kUnknownSource, std::string(source_id));
  }
  std::error_code ec;
  const bool present = src->kind == SourceKind::kRawImage
                           ? fs::is_regular_file(src->origin_path, ec)
                           : fs::is_directory(src->origin_path, ec);
  if (!present) {
    append_audit(c, ctx, "verify_source", std::string(source_id), Outcome::kError,
                 "origin missing: " + src->origin_path);
    throw Error(ErrorCode::kVerificationUnavailable, "origin missing: " + src->origin_path);
  }
  VerificationResult r;
  r.expected = src->content_hash;
  try {
    r.actual = compute_source_hash(*src);
  } catch (const Error& e) {
    append_audit(c, ctx, "verify_source", std::string(source_id), Outcome::kError, e.what());
    throw Error(ErrorCode::kVerificationUnavailable, e.what());
  }
  r.ok = r.expected == r.actual;
  append_audit(c, ctx, "verify_source", std::string(source_id),
               r.ok ? Outcome::kOk : Outcome::kError,
               r.ok ? r.actual : "mismatch: expected " + r.expected + " actual " + r.actual);
  return r;
}

std::string render_manifest(const CaseFile& c) {
  std::string out = "# algorithm: ";
  out += kHashAlgorithm;
  out += "\n# case: " + c.case_id + "\n";
  for (const auto& s : c.sources) {
    out += s.content_hash + "  " + s.origin_path + "\n";
  }
  return out;
}

std::string case_to_json(const CaseFile& c) {
  ordered_json j;
  j["format"] = "dronefx-case/1";
  j["case_id"] = c.case_id;
  j["name"] = c.name;
  j["examiner"] = c.examiner;
  j["created_at"] = c.created_at;
  j["hash_algorithm"] = kHashAlgorithm;
  j["sources"] = ordered_json::array();
  for (const auto& s : c.sources) {
    ordered_json js;
    js["source_id"] = s.source_id;
    js["kind"] = to_string(s.kind);
    js["origin_path"] = s.origin_path;
    js["byte_size"] = s.byte_size;
    js["content_hash"] = s.content_hash;
    js["acquired_at"] = s.acquired_at;
    js["label"] = to_string(s.label);
    j["sources"].push_back(std::move(js));
  }
  j["audit"] = ordered_json::array();
  for (const auto& a : c.audit) {
    ordered_json ja;
    ja["at"] = a.at;
    ja["actor"] = a.actor;
    ja["action"] = a.action;
    ja["subject"] = a.subject;
    ja["outcome"] = to_string(a.outcome);
    ja["detail"] = a.detail;
    j["audit"].push_back(std::move(ja));
  }
  return j.dump(2) + "\n";
}

CaseFile case_from_json(std::string_view text) {
  CaseFile c;
  try {
    const auto j = ordered_json::parse(text);
    c.case_id = j.at("case_id").get<std::string>();
    c.name = j.at("name").get<std::string>();
    c.examiner = j.at("examiner").get<std::string>();
    c.created_at = j.at("created_at").get<std::string>();
    for (const auto& js : j.at("sources")) {
      EvidenceSource s;
      s.source_id = js.at("source_id").get<std::string>();
      const auto kind = parse_source_kind(js.at("kind").get<std::string>());
      const auto label = parse_source_label(js.at("label").get<std::string>());
      if (!kind || !label) throw Error(ErrorCode::kInvalidCase, "bad source kind/label");
      s.kind = *kind;
      s.label = *label;
      s.origin_path = js.at("origin_path").get<std::string>();
      s.byte_size = js.at("byte_size").get<std::uint64_t>();
      s.content_hash = js.at("content_hash").get<std::string>();
      s.acquired_at = js.at("acquired_at").get<std::string>();
      c.sources.push_back(std::move(s));
    }
    for (const auto& ja : j.at("audit")) {
      AuditEvent a;
      a.at = ja.at("at").get<std::string>();
      a.actor = ja.at("actor").get<std::string>();
      a.action = ja.at("action").get<std::string>();
      a.subject = ja.at("subject").get<std::string>();
      a.outcome = ja.at("outcome").get<std::string>() == "Ok" ? Outcome::kOk : Outcome::kError;
      a.detail = ja.value("detail", std::string{});
      c.audit.push_back(std::move(a));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidCase, e.what());
  }
  return c;
}


void save_case(const CaseFile& c, const fs::path& case_dir) {
  std::error_code ec;
  fs::create_directories(case_dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + case_dir.string());
  const fs::path dir = fs::weakly_canonical(case_dir);
  for (const auto& s : c.sources) {
    const fs::path origin(s.origin_path);
    if (path_within(dir, origin) || path_within(origin, dir)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "case directory and evidence path overlap: " + s.origin_path);
    }
  }
  write_text_file(case_dir / "case.json", case_to_json(c));
  write_text_file(case_dir / "manifest.txt", render_manifest(c));
  bool any_tree = false;
  for (const auto& s : c.sources) any_tree = any_tree || s.kind == SourceKind::kDirectoryTree;
  if (any_tree) {
    fs::create_directories(case_dir / "manifests");
    for (const auto& s : c.sources) {
      if (s.kind == SourceKind::kDirectoryTree) {
        write_text_file(case_dir / "manifests" / (s.source_id + ".txt"), s.tree_manifest);
      }
    }
  }
}

CaseFile load_case(const fs::path& case_dir) {
  CaseFile c = case_from_json(read_text_file(case_dir / "case.json"));
  for (auto& s : c.sources) {
    if (s.kind != SourceKind::kDirectoryTree) continue;
    const fs::path m = case_dir / "manifests" / (s.source_id + ".txt");
    std::error_code ec;
    if (fs::is_regular_file(m, ec)) s.tree_manifest = read_text_file(m);
  }
  return c;
}

}  // namespace dronefx
