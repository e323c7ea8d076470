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

#include "dronefx/pipeline.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "dronefx/error.hpp"
#include "dronefx/exif.hpp"
#include "dronefx/imgfs.hpp"
#include "dronefx/io.hpp"
#include "dronefx/parallel.hpp"
#include "dronefx/telemetry.hpp"
#include "dronefx/text.hpp"
#include "json.hpp"

namespace dronefx {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::string extension_of(std::string_view name) {
  const auto dot = name.find_last_of('.');
  return dot == std::string_view::npos ? std::string{} : to_lower(name.substr(dot + 1));
}

std::string stem_of(std::string_view name) {
  const auto dot = name.find_last_of('.');
  return to_lower(dot == std::string_view::npos ? name : name.substr(0, dot));
}

std::pair<std::string, std::string> split_path(const std::string& path) {
  const auto slash = path.find_last_of('/');
  if (slash == std::string::npos) return {"", path};
  return {path.substr(0, slash), path.substr(slash + 1)};
}

struct FileWork {
  ArtefactRecord record;
  std::vector<PiiHit> pii;
  std::optional<TrackRecord> track;
  bool encoded_log = false;
  bool decoded_csv = false;
  std::vector<std::string> warnings;
};

using Loader = std::function<std::optional<std::vector<std::uint8_t>>()>;

bool wants_content(const std::string& ext, const Classification& cls) {
  static const std::set<std::string> kParsed = {"jpg", "jpeg", "dng", "tif", "tiff", "srt", "csv"};
  if (kParsed.count(ext)) return true;
  return cls.category != Category::kMedia;
}

void apply_exif(const ExifRecord& x, FileWork& w) {
  auto& d = w.record.details;
  if (x.make) d["exif.make"] = *x.make;
  if (x.model) d["exif.model"] = *x.model;
  if (x.serial) d["exif.serial"] = *x.serial;
  if (x.datetime_original) d["exif.datetime_original"] = x.datetime_original->to_string();
  if (x.pixel_dims) {
    d["exif.pixel_dims"] =
        std::to_string(x.pixel_dims->width) + "x" + std::to_string(x.pixel_dims->height);
  }
  if (x.gps) {
    d["exif.gps_lat"] = format_double(x.gps->lat);
    d["exif.gps_lon"] = format_double(x.gps->lon);
    if (x.gps->alt) d["exif.gps_alt"] = format_double(*x.gps->alt);
    w.record.flags.set(Flags::kG);
  }
  if (x.model || x.serial) w.record.flags.set(Flags::kD);
  if (x.malformed) d["exif.malformed"] = "true";
}

void apply_names(const std::string& name, FileWork& w) {
  auto& d = w.record.details;
  if (auto t = parse_rc_thumbnail_name(name)) {
    d["thumb.media_kind"] = std::string(to_string(t->media_kind));
    d["thumb.variant"] = std::string(to_string(t->variant));
    d["thumb.sequence"] = t->sequence;
    d["thumb.date"] = t->date.to_string();
    d["thumb.expected_px"] =
        std::to_string(t->expected_px.width) + "x" + std::to_string(t->expected_px.height);
    if (t->misspelled) d["thumb.misspelled"] = "true";
  }
  try {
    d["recorded_at"] = parse_cache_video_name(name).to_string();
  } catch (const Error&) {
  }
  try {
    const auto q = parse_quicktransfer_name(name);
    d["quick_transfer.date"] = q.date.to_string();
    d["quick_transfer.media_kind"] = std::string(to_string(q.media_kind));
  } catch (const Error&) {
  }
  if (auto t = parse_flightrecord_filename(name)) d["flight.start_time"] = t->to_string();
}

FileWork process_entry(const std::string& source_id, const FileEntry& e, const RuleTable& rules,
                       const ScanOptions& opt, const Loader& load) {
  FileWork w;
  auto [dir, name] = split_path(e.path);
  const Classification cls = rules.classify(dir, name);
  auto& r = w.record;
  r.source_id = source_id;
  r.path = e.path;
  r.category = cls.category;
  r.role = cls.role;
  r.flags = cls.flags;
  auto& d = r.details;
  d["rule"] = cls.rule_id;
  d["size"] = std::to_string(e.size);
  if (e.deleted) d["deleted"] = "true";
  if (e.name_reconstructed) d["name_reconstructed"] = "true";
  if (!e.warning.empty()) d["warning"] = e.warning;
  if (e.created) d["created"] = e.created->to_string();
  if (e.modified) d["modified"] = e.modified->to_string();
  if (e.accessed) d["accessed"] = e.accessed->to_string();
  apply_names(name, w);

  const std::string ext = extension_of(name);
  if ((ext == "mp4" || ext == "mov") && !d.count("recorded_at") &&
      (cls.role == "original" || cls.role == "quick-transfer")) {
    if (e.created && e.created->valid()) {
      d["recorded_at"] = e.created->to_string();
    } else if (e.modified && e.modified->valid()) {
      d["recorded_at"] = e.modified->to_string();
    }
  }

  if (!wants_content(ext, cls)) return w;
  if (e.size > opt.max_content_bytes) {
    d["content"] = "skipped: larger than content limit";
    return w;
  }
  std::optional<std::vector<std::uint8_t>> content;
  try {
    content = load();
  } catch (const Error& err) {
    w.warnings.push_back(e.path + ": " + err.what());
  }
  if (!content) return w;
  const std::span<const std::uint8_t> bytes(*content);
  const std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());

  if (ext == "jpg" || ext == "jpeg") {
    try {
      apply_exif(parse_jpeg_exif(bytes), w);
    } catch (const Error& err) {
      d["exif.error"] = std::string(to_string(err.code()));
    }
  } else if (ext == "dng" || ext == "tif" || ext == "tiff") {
    try {
      apply_exif(parse_tiff_exif(bytes), w);
    } catch (const Error& err) {
      d["exif.error"] = std::string(to_string(err.code()));
    }
  }

  if (ext == "srt") {
    auto track = parse_srt(text, e.path);
    d["telemetry.samples"] = std::to_string(track.samples.size());
    auto v = validate_track(track);
    if (!track.warnings.empty() || !v.empty()) {
      d["telemetry.warnings"] = std::to_string(track.warnings.size() + v.size());
    }
    TrackRecord tr;
    tr.source_id = source_id;
    tr.path = e.path;
    tr.track = build_track(track.samples);
    if (!tr.track.points.empty()) {
      r.flags.set(Flags::kG);
      tr.metrics = compute_metrics(tr.track);
      w.track = std::move(tr);
    }
    return w;
  }

  const bool log_like = cls.category == Category::kFlightLog || cls.role == "proprietary-log" ||
                        ext == "csv";
  if (log_like) {
    const FlightLogFile log = classify_log(bytes, name);
    d["log.kind"] = std::string(to_string(log.kind));
    if (log.probe.model) {
      d["log.model"] = *log.probe.model;
      r.flags.set(Flags::kD);
    }
    if (log.kind == LogKind::kDecodedCsv) {
      w.decoded_csv = true;
      try {
        const auto rows = ingest_decoded_csv(text, opt.column_map);
        d["log.rows"] = std::to_string(rows.size());
        TrackRecord tr;
        tr.source_id = source_id;
        tr.path = e.path;
        for (const auto& row : rows) {
          tr.messages.insert(tr.messages.end(), row.messages.begin(), row.messages.end());
        }
        tr.track = build_track({}, rows);
        tr.metrics = compute_metrics(tr.track);
        if (!tr.track.points.empty()) r.flags.set(Flags::kG);
        if (!tr.track.points.empty() || !tr.messages.empty()) {
          r.category = Category::kFlightLog;
          if (r.role == "unclassified") r.role = "decoded-log";
          w.track = std::move(tr);
        }
      } catch (const Error& err) {
        w.warnings.push_back(e.path + ": " + err.what());
      }
    } else {
      w.encoded_log = log.encoded;
    }
  }

  if (cls.category != Category::kMedia) {
    w.pii = scan_pii(bytes);
    for (const auto& h : w.pii) {
      r.flags.set(h.kind == PiiKind::kSerialCandidate ? Flags::kD : Flags::kP);
    }
  }
  return w;
}

struct SourceScan {
  std::vector<FileWork> work;
  std::vector<FileEntry> entries;
  std::vector<std::string> warnings;
};

SourceScan scan_source(const EvidenceSource& src, const RuleTable& rules, const ScanOptions& opt) {
  SourceScan out;
  OpenOptions oo;
  oo.skip_verification = opt.skip_verification;
  const SourceHandle h = open_source(src, oo);
  std::optional<VolumeInfo> vol;
  if (h.is_image()) {
    try {
      vol = detect_volume(h.bytes());
    } catch (const Error& err) {
      out.warnings.push_back(src.source_id + ": " + err.what());
      return out;
    }
    if (vol->fs_kind != FsKind::kFat32) {
      out.warnings.push_back(src.source_id + ": " + std::string(to_string(vol->fs_kind)) +
                             " volume cannot be walked; use carve");
      return out;
    }
    out.entries = walk_fat32(h.bytes(), *vol);
  } else {
    out.entries = list_tree(h.tree_root());
  }

  std::vector<std::size_t> files;
  for (std::size_t i = 0; i < out.entries.size(); ++i) {
    if (!out.entries[i].is_directory) files.push_back(i);
  }
  out.work.resize(files.size());
  parallel_for(files.size(), opt.threads, [&](std::size_t k) {
    const FileEntry& e = out.entries[files[k]];
    Loader load = [&]() -> std::optional<std::vector<std::uint8_t>> {
      if (!h.is_image()) return read_tree_file(h.tree_root(), e);
      ReadResult rr = read_file(h.bytes(), *vol, e);
      if (rr.chain_broken) return std::nullopt;
      return std::move(rr.bytes);
    };
    out.work[k] = process_entry(src.source_id, e, rules, opt, load);
  });

  std::set<std::string> decoded_stems;
  for (const auto& w : out.work) {
    if (w.decoded_csv) decoded_stems.insert(stem_of(split_path(w.record.path).second));
  }
  for (auto& w : out.work) {
    if (!w.encoded_log) continue;
    if (decoded_stems.count(stem_of(split_path(w.record.path).second))) {
      w.record.details["log.decoded_twin"] = "true";
    } else {
      w.record.flags.set(Flags::kE);
    }
  }
  return out;
}

// ---- JSON ---------------------------------------------------------------------

ordered_json opt_json(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(); }
std::optional<double> opt_double(const ordered_json& j) {
  return j.is_null() ? std::nullopt : std::optional<double>(j.get<double>());
}

ordered_json metrics_json(const TrackMetrics& m) {
  ordered_json j;
  j["duration_s"] = m.duration;
  j["path_length_m"] = m.path_length;
  j["max_alt_rel_m"] = m.max_alt_rel;
  j["max_speed_mps"] = m.max_speed;
  j["max_home_distance_m"] = opt_json(m.max_home_distance);
  j["point_count"] = m.point_count;
  return j;
}

TrackMetrics metrics_from(const ordered_json& j) {
  TrackMetrics m;
  m.duration = j.at("duration_s").get<double>();
  m.path_length = j.at("path_length_m").get<double>();
  m.max_alt_rel = j.at("max_alt_rel_m").get<double>();
  m.max_speed = j.at("max_speed_mps").get<double>();
  m.max_home_distance = opt_double(j.at("max_home_distance_m"));
  m.point_count = j.at("point_count").get<std::size_t>();
  return m;
}

std::string dump(const ordered_json& j) {
  return j.dump(2, ' ', false, ordered_json::error_handler_t::replace) + "\n";
}

}  // namespace

ScanResult scan_case(const CaseFile& c, const ScanOptions& options) {
  const RuleTable& rules = options.rules ? *options.rules : RuleTable::builtin();
  ScanResult result;
  std::vector<SourceEntries> timeline_input;
  for (const auto& src : c.sources) {
    SourceScan s;
    try {
      s = scan_source(src, rules, options);
    } catch (const Error& err) {
      result.warnings.push_back(src.source_id + ": " + err.what());
      continue;
    }
    result.warnings.insert(result.warnings.end(), s.warnings.begin(), s.warnings.end());
    for (auto& w : s.work) {
      for (auto& hit : w.pii) result.pii.push_back({src.source_id, w.record.path, std::move(hit)});
      if (w.track) result.tracks.push_back(std::move(*w.track));
      result.warnings.insert(result.warnings.end(), w.warnings.begin(), w.warnings.end());
      result.artefacts.push_back(std::move(w.record));
    }
    timeline_input.push_back({src.source_id, std::move(s.entries)});
  }
  std::stable_sort(result.artefacts.begin(), result.artefacts.end(), [](const auto& a, const auto& b) {
    return std::tie(a.source_id, a.path) < std::tie(b.source_id, b.path);
  });
  std::stable_sort(result.pii.begin(), result.pii.end(), [](const auto& a, const auto& b) {
    return std::tie(a.source_id, a.path, a.hit.offset) < std::tie(b.source_id, b.path, b.hit.offset);
  });
  std::stable_sort(result.tracks.begin(), result.tracks.end(), [](const auto& a, const auto& b) {
    return std::tie(a.source_id, a.path) < std::tie(b.source_id, b.path);
  });
  result.timeline = build_timeline(timeline_input);
  return result;
}

std::string scan_to_json(const ScanResult& r) {
  ordered_json j;
  j["format"] = "dronefx-scan/1";
  auto arts = ordered_json::array();
  for (const auto& a : r.artefacts) {
    ordered_json ja;
    ja["source_id"] = a.source_id;
    ja["path"] = a.path;
    ja["category"] = std::string(to_string(a.category));
    ja["role"] = a.role;
    ja["flags"] = a.flags.to_string();
    ja["details"] = a.details;
    arts.push_back(std::move(ja));
  }
  j["artefacts"] = std::move(arts);
  auto pii = ordered_json::array();
  for (const auto& p : r.pii) {
    pii.push_back({{"source_id", p.source_id},
                   {"path", p.path},
                   {"kind", std::string(to_string(p.hit.kind))},
                   {"value", p.hit.value},
                   {"offset", p.hit.offset},
                   {"context", p.hit.context}});
  }
  j["pii"] = std::move(pii);
  auto tracks = ordered_json::array();
  for (const auto& t : r.tracks) {
    ordered_json jt;
    jt["source_id"] = t.source_id;
    jt["path"] = t.path;
    jt["metrics"] = metrics_json(t.metrics);
    jt["messages"] = t.messages;
    jt["unplaced_messages"] = t.track.unplaced_messages;
    jt["home"] = t.track.home ? ordered_json::array({t.track.home->lat, t.track.home->lon})
                              : ordered_json();
    auto pts = ordered_json::array();
    for (const auto& p : t.track.points) {
      pts.push_back(ordered_json::array(
          {p.t, p.lat, p.lon, opt_json(p.alt_rel), opt_json(p.alt_abs), p.messages}));
    }
    jt["points"] = std::move(pts);
    tracks.push_back(std::move(jt));
  }
  j["tracks"] = std::move(tracks);
  ordered_json tl;
  tl["excluded_undated"] = r.timeline.excluded_undated;
  auto events = ordered_json::array();
  for (const auto& e : r.timeline.events) {
    events.push_back(ordered_json::array(
        {e.at.to_string(), e.source_id, e.path, std::string(to_string(e.kind))}));
  }
  tl["events"] = std::move(events);
  j["timeline"] = std::move(tl);
  j["warnings"] = r.warnings;
  return dump(j);
}

ScanResult scan_from_json(std::string_view text) {
  ScanResult r;
  try {
    const auto j = ordered_json::parse(text);
    for (const auto& ja : j.at("artefacts")) {
      ArtefactRecord a;
      a.source_id = ja.at("source_id").get<std::string>();
      a.path = ja.at("path").get<std::string>();
      a.category = parse_category(ja.at("category").get<std::string>()).value_or(Category::kOther);
      a.role = ja.at("role").get<std::string>();
      a.flags = Flags::parse(ja.at("flags").get<std::string>()).value_or(Flags{});
      a.details = ja.at("details").get<std::map<std::string, std::string>>();
      r.artefacts.push_back(std::move(a));
    }
    for (const auto& jp : j.at("pii")) {
      PiiFinding p;
      p.source_id = jp.at("source_id").get<std::string>();
      p.path = jp.at("path").get<std::string>();
      const std::string kind = jp.at("kind").get<std::string>();
      p.hit.kind = kind == "Email"         ? PiiKind::kEmail
                   : kind == "AccountName" ? PiiKind::kAccountName
                                           : PiiKind::kSerialCandidate;
      p.hit.value = jp.at("value").get<std::string>();
      p.hit.offset = jp.at("offset").get<std::uint64_t>();
      p.hit.context = jp.at("context").get<std::string>();
      r.pii.push_back(std::move(p));
    }
    for (const auto& jt : j.at("tracks")) {
      TrackRecord t;
      t.source_id = jt.at("source_id").get<std::string>();
      t.path = jt.at("path").get<std::string>();
      t.metrics = metrics_from(jt.at("metrics"));
      t.messages = jt.at("messages").get<std::vector<std::string>>();
      t.track.unplaced_messages = jt.at("unplaced_messages").get<std::vector<std::string>>();
      if (!jt.at("home").is_null()) {
        t.track.home = LatLon{jt.at("home").at(0).get<double>(), jt.at("home").at(1).get<double>()};
      }
      for (const auto& jp : jt.at("points")) {
        TrackPoint p;
        p.t = jp.at(0).get<std::int64_t>();
        p.lat = jp.at(1).get<double>();
        p.lon = jp.at(2).get<double>();
        p.alt_rel = opt_double(jp.at(3));
        p.alt_abs = opt_double(jp.at(4));
        p.messages = jp.at(5).get<std::vector<std::string>>();
        t.track.points.push_back(std::move(p));
      }
      r.tracks.push_back(std::move(t));
    }
    const auto& tl = j.at("timeline");
    r.timeline.excluded_undated = tl.at("excluded_undated").get<std::size_t>();
    for (const auto& je : tl.at("events")) {
      TimelineEvent e;
      const auto at = DateTime::parse(je.at(0).get<std::string>());
      const auto kind = parse_event_kind(je.at(3).get<std::string>());
      if (!at || !kind) throw Error(ErrorCode::kInvalidCase, "bad timeline event in scan file");
      e.at = *at;
      e.source_id = je.at(1).get<std::string>();
      e.path = je.at(2).get<std::string>();
      e.kind = *kind;
      r.timeline.events.push_back(std::move(e));
    }
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidCase, std::string("scan file: ") + e.what());
  }
  return r;
}

void save_scan(const ScanResult& r, const fs::path& case_dir) {
  write_text_file(case_dir / std::string(kScanFile), scan_to_json(r));
}

std::optional<ScanResult> load_scan(const fs::path& case_dir) {
  const fs::path p = case_dir / std::string(kScanFile);
  std::error_code ec;
  if (!fs::exists(p, ec)) return std::nullopt;
  return scan_from_json(read_text_file(p));
}

CarveSummary carve_source(const CaseFile& c, const std::string& source_id,
                          const fs::path& case_dir, unsigned threads, bool skip_verification) {
  const EvidenceSource* src = c.find_source(source_id);
  if (!src) throw Error(ErrorCode::kUnknownSource, source_id);
  if (src->kind != SourceKind::kRawImage) {
    throw Error(ErrorCode::kInvalidArgument, source_id + " is a directory tree; nothing to carve");
  }
  OpenOptions oo;
  oo.skip_verification = skip_verification;
  const SourceHandle h = open_source(*src, oo);
  CarveSummary s;
  s.source_id = source_id;
  std::vector<UnallocatedRegion> regions;
  try {
    const VolumeInfo vol = detect_volume(h.bytes());
    if (vol.fs_kind == FsKind::kFat32) {
      regions = unallocated_regions(h.bytes(), vol);
      s.region_mode = "walked";
    }
  } catch (const Error& err) {
    s.warnings.push_back(err.what());
  }
  if (s.region_mode.empty()) {
    regions = whole_source(h.bytes());
    s.region_mode = "whole-source";
  }
  CarveOptions co;
  co.threads = std::max(1u, threads);
  s.files = carve(regions, h.bytes(), default_signatures(), co, &s.warnings);
  s.blocks = carve_telemetry_text(regions, h.bytes());
  const fs::path out = case_dir / "carved" / source_id;
  std::error_code ec;
  fs::remove_all(out, ec);
  write_carved(out, h.bytes(), s.files, s.blocks);
  return s;
}

std::vector<CarveSummary> load_carve_summaries(const fs::path& case_dir) {
  std::vector<CarveSummary> out;
  const fs::path root = case_dir / "carved";
  std::error_code ec;
  if (!fs::is_directory(root, ec)) return out;
  std::vector<fs::path> dirs;
  for (const auto& de : fs::directory_iterator(root, ec)) {
    if (de.is_directory() && fs::exists(de.path() / "index.txt")) dirs.push_back(de.path());
  }
  std::sort(dirs.begin(), dirs.end());
  for (const auto& d : dirs) {
    CarveSummary s;
    s.source_id = d.filename().string();
    const std::string text = read_text_file(d / "index.txt");
    for (auto line : split_lines(text)) {
      if (line.empty() || line.front() == '#') continue;
      std::istringstream in{std::string(line)};
      std::uint64_t offset = 0, length = 0;
      std::string kind, hash, confidence, file;
      if (!(in >> offset >> length >> kind >> hash >> confidence >> file)) continue;
      if (kind == "telemetry") {
        s.blocks.push_back({offset, length, {}});
        continue;
      }
      CarvedFile f;
      f.source_offset = offset;
      f.length = length;
      f.kind = kind;
      f.extension = extension_of(file);
      f.payload_hash = hash;
      f.confidence = confidence == "Exact"       ? Confidence::kExact
                     : confidence == "Truncated" ? Confidence::kTruncated
                                                 : Confidence::kHeuristic;
      s.files.push_back(std::move(f));
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace dronefx
