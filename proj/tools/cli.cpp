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

#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>

#include "dronefx/case_store.hpp"
#include "dronefx/error.hpp"
#include "dronefx/geo.hpp"
#include "dronefx/io.hpp"
#include "dronefx/parallel.hpp"
#include "dronefx/pipeline.hpp"
#include "dronefx/report.hpp"
#include "dronefx/timeline.hpp"
#include "dronefx/version.hpp"
#include "json.hpp"

namespace dronefx::cli {
namespace fs = std::filesystem;

namespace {

constexpr const char* kCaseDirEnv = "DRONEFX_CASE_DIR";

struct CliConfig {
  std::string case_dir;
  int verbosity = 0;
  unsigned threads = default_thread_count();
  bool serial = false;
  std::string rules_file;
  std::string column_map;
  std::size_t min_count = 8;
  double window_seconds = 2.0;
  bool shared_zone = false;

  unsigned thread_count() const { return serial ? 1u : std::max(1u, threads); }
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

fs::path resolve_case_dir(const CliConfig& cfg) {
  if (!cfg.case_dir.empty()) return cfg.case_dir;
  if (const char* env = std::getenv(kCaseDirEnv); env && *env) return env;
  throw UsageError(std::string("no case directory given and ") + kCaseDirEnv + " is unset");
}

std::string actor_name(const CaseFile& c) {
  if (const char* user = std::getenv("USER"); user && *user) return user;
  return c.examiner.empty() ? "dronefx" : c.examiner;
}

AuditContext audit_for(const CaseFile& c) { return AuditContext{actor_name(c)}; }

void print_warnings(std::ostream& err, const CliConfig& cfg, const std::vector<std::string>& w) {
  if (w.empty()) return;
  if (cfg.verbosity > 0) {
    for (const auto& line : w) err << "warning: " << line << "\n";
  } else {
    err << w.size() << " warning(s); rerun with -v to list them\n";
  }
}

std::optional<RuleTable> user_rules(const CliConfig& cfg) {
  if (cfg.rules_file.empty()) return std::nullopt;
  return RuleTable::with_user_rules(load_rules_file(cfg.rules_file));
}

ScanResult require_scan(const fs::path& dir) {
  auto scan = load_scan(dir);
  if (!scan) throw Error(ErrorCode::kInvalidCase, "case has not been scanned; run `scan` first");
  return std::move(*scan);
}

std::vector<Indicator> indicators_for(const ScanResult& scan, const ClusterOptions& opts) {
  auto out = detect_format_clusters(scan.timeline.events, opts);
  auto boots = detect_boot_markers(scan.timeline.events);
  out.insert(out.end(), boots.begin(), boots.end());
  std::stable_sort(out.begin(), out.end(), [](const Indicator& a, const Indicator& b) {
    return std::tie(a.at, a.source_id) < std::tie(b.at, b.source_id);
  });
  return out;
}

std::string indicators_json(const std::vector<Indicator>& inds, const Timeline& tl) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& ind : inds) {
    auto ev = nlohmann::ordered_json::array();
    for (auto i : ind.evidence) {
      const auto& e = tl.events[i];
      ev.push_back({{"at", e.at.to_string()},
                    {"source_id", e.source_id},
                    {"path", e.path},
                    {"kind", std::string(to_string(e.kind))}});
    }
    arr.push_back({{"kind", std::string(to_string(ind.kind))},
                   {"at", ind.at.to_string()},
                   {"source_id", ind.source_id},
                   {"note", ind.note},
                   {"evidence", std::move(ev)}});
  }
  return arr.dump(2, ' ', false, nlohmann::ordered_json::error_handler_t::replace) + "\n";
}

std::string safe_name(std::string_view text) {
  std::string out;
  for (char ch : text) {
    const bool keep = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
                      (ch >= '0' && ch <= '9') || ch == '-' || ch == '.';
    out += keep ? ch : '_';
  }
  return out;
}

// Commands ------------------------------------------------------------------

int cmd_case_init(const CliConfig& cfg, const std::string& name, const std::string& examiner,
                  std::ostream& out) {
  const fs::path dir = resolve_case_dir(cfg);
  if (fs::exists(dir / "case.json")) {
    throw Error(ErrorCode::kDuplicateCase, "a case already exists in " + dir.string());
  }
  const fs::path root = dir.has_parent_path() ? dir.parent_path() : fs::path(".");
  Workspace ws = Workspace::scan(root);
  CaseFile c = ws.create_case(name, examiner);
  append_audit(c, AuditContext{examiner}, "case.init", c.case_id, Outcome::kOk, name);
  save_case(c, dir);
  out << c.case_id << "\n";
  return kExitOk;
}

int cmd_source_add(const CliConfig& cfg, const std::string& path, const std::string& kind_text,
                   const std::string& label_text, std::ostream& out) {
  const fs::path dir = resolve_case_dir(cfg);
  const auto kind = parse_source_kind(kind_text == "image" ? "RawImage"
                                      : kind_text == "tree" ? "DirectoryTree"
                                                            : kind_text);
  const auto label = parse_source_label(label_text);
  if (!kind) throw UsageError("unknown source kind: " + kind_text);
  if (!label) throw UsageError("unknown source label: " + label_text);
  const fs::path evidence = fs::weakly_canonical(path);
  const fs::path case_abs = fs::weakly_canonical(dir);
  const auto rel = evidence.lexically_relative(case_abs);
  if (!rel.empty() && *rel.begin() != "..") {
    throw Error(ErrorCode::kInvalidArgument, "evidence must not live inside the case directory");
  }
  CaseFile c = load_case(dir);
  AddSourceOptions opts;
  opts.audit = audit_for(c);
  try {
    const EvidenceSource src = add_source(c, evidence, *kind, *label, opts);
    save_case(c, dir);
    out << src.source_id << "  " << src.content_hash << "\n";
  } catch (const Error&) {
    save_case(c, dir);
    throw;
  }
  return kExitOk;
}

int cmd_source_verify(const CliConfig& cfg, const std::string& id, std::ostream& out,
                      std::ostream& err) {
  const fs::path dir = resolve_case_dir(cfg);
  CaseFile c = load_case(dir);
  std::vector<std::string> ids;
  if (!id.empty()) {
    ids.push_back(id);
  } else {
    for (const auto& s : c.sources) ids.push_back(s.source_id);
  }
  const AuditContext ctx = audit_for(c);
  int rc = kExitOk;
  for (const auto& sid : ids) {
    try {
      const auto r = verify_source(c, sid, ctx);
      out << sid << "  " << (r.ok ? "OK" : "MISMATCH") << "  " << r.actual << "\n";
      if (!r.ok) rc = kExitOperational;
    } catch (const Error& e) {
      err << "error: " << sid << ": " << e.what() << "\n";
      rc = kExitOperational;
    }
  }
  save_case(c, dir);
  return rc;
}

int cmd_scan(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  const fs::path dir = resolve_case_dir(cfg);
  CaseFile c = load_case(dir);
  const auto rules = user_rules(cfg);
  ScanOptions opts;
  opts.threads = cfg.thread_count();
  opts.rules = rules ? &*rules : nullptr;
  if (!cfg.column_map.empty()) opts.column_map = load_column_map(cfg.column_map);
  ScanResult r;
  try {
    r = scan_case(c, opts);
  } catch (const Error& e) {
    append_audit(c, audit_for(c), "scan", c.case_id, Outcome::kError, e.what());
    save_case(c, dir);
    throw;
  }
  save_scan(r, dir);
  append_audit(c, audit_for(c), "scan", c.case_id, Outcome::kOk,
               std::to_string(r.artefacts.size()) + " artefacts");
  save_case(c, dir);
  print_warnings(err, cfg, r.warnings);
  out << r.artefacts.size() << " artefacts, " << r.tracks.size() << " tracks, " << r.pii.size()
      << " PII findings, " << r.timeline.events.size() << " timeline events\n";
  return kExitOk;
}

int cmd_carve(const CliConfig& cfg, const std::string& id, std::ostream& out, std::ostream& err) {
  const fs::path dir = resolve_case_dir(cfg);
  CaseFile c = load_case(dir);
  std::vector<std::string> ids;
  if (!id.empty()) {
    ids.push_back(id);
  } else {
    for (const auto& s : c.sources) {
      if (s.kind == SourceKind::kRawImage) ids.push_back(s.source_id);
    }
  }
  const AuditContext ctx = audit_for(c);
  int rc = kExitOk;
  for (const auto& sid : ids) {
    try {
      const auto s = carve_source(c, sid, dir, cfg.thread_count());
      append_audit(c, ctx, "carve", sid, Outcome::kOk,
                   std::to_string(s.files.size()) + " files, " + s.region_mode);
      print_warnings(err, cfg, s.warnings);
      out << sid << "  " << s.files.size() << " files  " << s.blocks.size()
          << " telemetry blocks  (" << s.region_mode << ")\n";
    } catch (const Error& e) {
      append_audit(c, ctx, "carve", sid, Outcome::kError, e.what());
      err << "error: " << sid << ": " << e.what() << "\n";
      rc = kExitOperational;
    }
  }
  save_case(c, dir);
  return rc;
}

int cmd_flight_export(const CliConfig& cfg, const std::string& format, const std::string& out_path,
                      const std::string& track_filter, std::ostream& out, std::ostream& err) {
  const fs::path dir = resolve_case_dir(cfg);
  const ScanResult scan = require_scan(dir);
  std::vector<const TrackRecord*> tracks;
  for (const auto& t : scan.tracks) {
    const std::string ref = t.source_id + ":" + t.path;
    if (track_filter.empty() || ref.find(track_filter) != std::string::npos) tracks.push_back(&t);
  }
  if (tracks.empty()) {
    err << "no flight tracks to export\n";
    return kExitOperational;
  }
  const auto render = [&](const TrackRecord& t) {
    if (format == "kml") return export_kml(t.track, t.metrics);
    if (format == "geojson") return export_geojson(t.track, t.metrics);
    return export_csv(t.track);
  };
  if (out_path == "-") {
    for (const auto* t : tracks) out << render(*t);
    return kExitOk;
  }
  if (!out_path.empty() && tracks.size() == 1 && !fs::is_directory(out_path)) {
    write_text_file(out_path, render(*tracks.front()));
    out << out_path << "\n";
    return kExitOk;
  }
  const fs::path target = out_path.empty() ? dir / "exports" : fs::path(out_path);
  fs::create_directories(target);
  for (const auto* t : tracks) {
    const fs::path file = target / (safe_name(t->source_id + "_" + t->path) + "." + format);
    write_text_file(file, render(*t));
    out << file.string() << "\n";
  }
  return kExitOk;
}

int cmd_timeline(const CliConfig& cfg, std::ostream& out) {
  const fs::path dir = resolve_case_dir(cfg);
  const ScanResult scan = require_scan(dir);
  ClusterOptions opts;
  opts.min_count = cfg.min_count;
  opts.window_ms = static_cast<std::int64_t>(cfg.window_seconds * 1000.0 + 0.5);
  opts.shared_zone = cfg.shared_zone;
  const auto inds = indicators_for(scan, opts);
  write_text_file(dir / "timeline.csv", export_timeline_csv(scan.timeline.events));
  write_text_file(dir / "indicators.json", indicators_json(inds, scan.timeline));
  out << scan.timeline.events.size() << " events (" << scan.timeline.excluded_undated
      << " undated excluded), " << inds.size() << " indicators\n";
  for (const auto& i : inds) {
    out << to_string(i.kind) << "  " << i.at.to_string() << "  "
        << (i.source_id.empty() ? "*" : i.source_id) << "  " << i.note << "\n";
  }
  return kExitOk;
}

int cmd_report(const CliConfig& cfg, const std::string& format, const std::string& out_path,
               std::ostream& out) {
  const fs::path dir = resolve_case_dir(cfg);
  const CaseFile c = load_case(dir);
  const auto scan = load_scan(dir);
  ReportInput in;
  in.case_file = &c;
  in.scan = scan ? &*scan : nullptr;
  if (scan) {
    ClusterOptions opts;
    opts.min_count = cfg.min_count;
    opts.window_ms = static_cast<std::int64_t>(cfg.window_seconds * 1000.0 + 0.5);
    opts.shared_zone = cfg.shared_zone;
    in.indicators = indicators_for(*scan, opts);
  }
  in.carved = load_carve_summaries(dir);
  in.generated_at = utc_now_iso();
  const std::string text = render_report(in, format);
  if (out_path == "-") {
    out << text;
    return kExitOk;
  }
  const fs::path file =
      out_path.empty() ? dir / (format == "json" ? "report.json" : "report.md") : fs::path(out_path);
  write_text_file(file, text);
  out << file.string() << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Forensic triage of drone and remote-controller storage", "dronefx"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  CliConfig cfg;
  app.add_flag("-v,--verbose", cfg.verbosity, "More diagnostics (repeatable)");
  app.add_option("--threads", cfg.threads, "Worker threads (default: logical cores)")
      ->check(CLI::Range(1u, 1024u));
  app.add_flag("--serial", cfg.serial, "Single-threaded run");
  app.add_option("--rules", cfg.rules_file, "JSON file of extra catalog rules")
      ->check(CLI::ExistingFile);
  app.add_option("--column-map", cfg.column_map, "Extra flight-log column aliases")
      ->check(CLI::ExistingFile);

  const auto case_dir_arg = [&](CLI::App* sub) {
    sub->add_option("dir", cfg.case_dir, "Case directory (default: $DRONEFX_CASE_DIR)");
  };

  std::function<int()> action;

  auto* case_cmd = app.add_subcommand("case", "Case management")->require_subcommand(1);
  auto* init = case_cmd->add_subcommand("init", "Create a new case");
  std::string name, examiner;
  case_dir_arg(init);
  init->add_option("--name", name, "Case name")->required();
  init->add_option("--examiner", examiner, "Examiner name")->required();
  init->callback([&] { action = [&] { return cmd_case_init(cfg, name, examiner, out); }; });

  auto* source_cmd = app.add_subcommand("source", "Evidence sources")->require_subcommand(1);
  auto* add = source_cmd->add_subcommand("add", "Register and hash an evidence source");
  std::string src_path, kind = "image", label;
  case_dir_arg(add);
  add->add_option("path", src_path, "Image file or directory tree")->required();
  add->add_option("--kind", kind, "Source kind")->check(CLI::IsMember({"image", "tree"}));
  add->add_option("--label", label, "Device and storage label")
      ->required()
      ->check(CLI::IsMember({"droneSD", "rcSD", "droneInternal", "rcInternal"}));
  add->callback([&] { action = [&] { return cmd_source_add(cfg, src_path, kind, label, out); }; });

  auto* verify = source_cmd->add_subcommand("verify", "Re-hash sources against the case");
  std::string verify_id;
  case_dir_arg(verify);
  verify->add_option("--id", verify_id, "Only this source");
  verify->callback([&] { action = [&] { return cmd_source_verify(cfg, verify_id, out, err); }; });

  auto* scan = app.add_subcommand("scan", "Walk, classify and parse every source");
  case_dir_arg(scan);
  scan->callback([&] { action = [&] { return cmd_scan(cfg, out, err); }; });

  auto* carve = app.add_subcommand("carve", "Carve unallocated space of raw images");
  std::string carve_id;
  case_dir_arg(carve);
  carve->add_option("--id", carve_id, "Only this source");
  carve->callback([&] { action = [&] { return cmd_carve(cfg, carve_id, out, err); }; });

  auto* flight = app.add_subcommand("flight", "Flight tracks")->require_subcommand(1);
  auto* exp = flight->add_subcommand("export", "Export reconstructed flight tracks");
  std::string export_format, export_out, track_filter;
  case_dir_arg(exp);
  exp->add_option("--format", export_format, "Output format")
      ->required()
      ->check(CLI::IsMember({"kml", "geojson", "csv"}));
  exp->add_option("--out", export_out, "File (single track), directory, or - for stdout");
  exp->add_option("--track", track_filter, "Only tracks whose source:path contains this text");
  exp->callback([&] {
    action = [&] {
      return cmd_flight_export(cfg, export_format, export_out, track_filter, out, err);
    };
  });

  auto* timeline = app.add_subcommand("timeline", "Build the timeline and its indicators");
  case_dir_arg(timeline);
  const auto cluster_opts = [&](CLI::App* sub) {
    sub->add_option("--min-count", cfg.min_count, "Entries needed for a format cluster")
        ->check(CLI::Range(1, 1000000));
    sub->add_option("--window", cfg.window_seconds, "Cluster window in seconds")
        ->check(CLI::Range(0.0, 86400.0));
    sub->add_flag("--shared-zone", cfg.shared_zone, "Cluster across all sources together");
  };
  cluster_opts(timeline);
  timeline->callback([&] { action = [&] { return cmd_timeline(cfg, out); }; });

  auto* report = app.add_subcommand("report", "Render the case report");
  std::string report_format, report_out;
  case_dir_arg(report);
  report->add_option("--format", report_format, "Report format")
      ->required()
      ->check(CLI::IsMember({"json", "markdown"}));
  report->add_option("--out", report_out, "Output file, or - for stdout");
  cluster_opts(report);
  report->callback([&] { action = [&] { return cmd_report(cfg, report_format, report_out, out); }; });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (!action) return kExitUsage;
  try {
    return action();
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitOperational;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitOperational;
  }
}

}  // namespace dronefx::cli
