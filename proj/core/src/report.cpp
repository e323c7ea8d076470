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

#include "dronefx/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "dronefx/error.hpp"
#include "dronefx/text.hpp"
#include "dronefx/version.hpp"
#include "json.hpp"

namespace dronefx {

using nlohmann::ordered_json;

std::string_view to_string(Device d) { return d == Device::kDrone ? "Drone" : "RC"; }
std::string_view to_string(Storage s) { return s == Storage::kSD ? "SD" : "Internal"; }

std::string MatrixCell::media_text() const { return !present ? "--" : media ? "Y" : "N"; }
std::string MatrixCell::flight_log_text() const {
  return !present ? "--" : flight_log ? "Y" : "N";
}
std::string MatrixCell::other_text() const {
  if (!present) return "--";
  return flags.empty() ? "N" : flags.to_string();
}

const MatrixCell* ArtefactMatrix::find(Device d, Storage s) const {
  for (const auto& c : cells) {
    if (c.device == d && c.storage == s) return &c;
  }
  return nullptr;
}

namespace {

std::optional<std::pair<Device, Storage>> placement(SourceLabel label) {
  switch (label) {
    case SourceLabel::kDroneSD: return std::pair{Device::kDrone, Storage::kSD};
    case SourceLabel::kDroneInternal: return std::pair{Device::kDrone, Storage::kInternal};
    case SourceLabel::kRCSD: return std::pair{Device::kRC, Storage::kSD};
    case SourceLabel::kRCInternal: return std::pair{Device::kRC, Storage::kInternal};
    case SourceLabel::kUnknown: return std::nullopt;
  }
  return std::nullopt;
}

std::string ref(const ArtefactRecord& a) { return a.source_id + ":" + a.path; }

}  // namespace

ArtefactMatrix summarize(const CaseFile& c, const std::vector<ArtefactRecord>& artefacts) {
  std::map<std::string, std::pair<Device, Storage>> where;
  bool device_seen[2] = {false, false};
  bool cell_present[2][2] = {{false, false}, {false, false}};
  for (const auto& s : c.sources) {
    if (auto p = placement(s.label)) {
      where[s.source_id] = *p;
      device_seen[static_cast<int>(p->first)] = true;
      cell_present[static_cast<int>(p->first)][static_cast<int>(p->second)] = true;
    }
  }
  ArtefactMatrix m;
  for (Device d : {Device::kDrone, Device::kRC}) {
    if (!device_seen[static_cast<int>(d)]) continue;
    for (Storage s : {Storage::kSD, Storage::kInternal}) {
      MatrixCell cell;
      cell.device = d;
      cell.storage = s;
      cell.present = cell_present[static_cast<int>(d)][static_cast<int>(s)];
      m.cells.push_back(std::move(cell));
    }
  }
  for (const auto& a : artefacts) {
    const auto it = where.find(a.source_id);
    if (it == where.end()) continue;
    auto* cell = const_cast<MatrixCell*>(m.find(it->second.first, it->second.second));
    if (!cell) continue;
    if (a.category == Category::kMedia && !cell->media) {
      cell->media = true;
      cell->witnesses.emplace("media", ref(a));
    }
    if (a.category == Category::kFlightLog && !cell->flight_log) {
      cell->flight_log = true;
      cell->witnesses.emplace("flight_log", ref(a));
    }
    const std::pair<std::uint8_t, const char*> letters[] = {
        {Flags::kG, "G"}, {Flags::kP, "P"}, {Flags::kD, "D"}, {Flags::kE, "E"}};
    for (const auto& [bit, name] : letters) {
      if (a.flags.has(bit) && !cell->flags.has(bit)) {
        cell->flags.set(bit);
        cell->witnesses.emplace(name, ref(a));
      }
    }
  }
  return m;
}

int size_ratio_percent(std::uint64_t cached, std::uint64_t full) {
  if (full == 0) return 0;
  return static_cast<int>(std::llround(100.0 * static_cast<double>(cached) / static_cast<double>(full)));
}

std::vector<VideoPair> pair_cached_videos(const std::vector<ArtefactRecord>& artefacts,
                                          std::int64_t tolerance_s) {
  struct Video {
    const ArtefactRecord* rec;
    std::int64_t t;
    std::uint64_t size;
  };
  const auto info = [](const ArtefactRecord& a) -> std::optional<Video> {
    const auto at = a.details.find("recorded_at");
    const auto size = a.details.find("size");
    if (at == a.details.end() || size == a.details.end()) return std::nullopt;
    const auto dt = DateTime::parse(at->second);
    if (!dt) return std::nullopt;
    return Video{&a, dt->to_seconds(), std::strtoull(size->second.c_str(), nullptr, 10)};
  };
  std::vector<Video> cached, full;
  for (const auto& a : artefacts) {
    if (a.category != Category::kMedia) continue;
    auto v = info(a);
    if (!v) continue;
    if (a.role == "cached-video") {
      cached.push_back(*v);
    } else if (a.role == "original" || a.role == "quick-transfer") {
      full.push_back(*v);
    }
  }
  std::vector<VideoPair> out;
  for (const auto& c : cached) {
    const Video* best = nullptr;
    std::int64_t best_gap = 0;
    for (const auto& f : full) {
      const std::int64_t gap = std::llabs(f.t - c.t);
      if (gap > tolerance_s) continue;
      if (!best || gap < best_gap) {
        best = &f;
        best_gap = gap;
      }
    }
    if (!best) continue;
    out.push_back({ref(*c.rec), ref(*best->rec), c.size, best->size,
                   size_ratio_percent(c.size, best->size)});
  }
  return out;
}

namespace {

ordered_json build_document(const ReportInput& in) {
  const CaseFile& c = *in.case_file;
  static const ScanResult kEmpty;
  const ScanResult& scan = in.scan ? *in.scan : kEmpty;

  ordered_json j;
  j["format"] = "dronefx-report/1";
  j["tool"] = {{"name", "dronefx"}, {"version", kVersion}};
  j["generated_at"] = in.generated_at;
  j["case"] = {{"case_id", c.case_id},
               {"name", c.name},
               {"examiner", c.examiner},
               {"created_at", c.created_at},
               {"scanned", in.scan != nullptr}};
  auto sources = ordered_json::array();
  for (const auto& s : c.sources) {
    sources.push_back({{"source_id", s.source_id},
                       {"kind", std::string(to_string(s.kind))},
                       {"label", std::string(to_string(s.label))},
                       {"origin_path", s.origin_path},
                       {"byte_size", s.byte_size},
                       {"sha256", s.content_hash},
                       {"acquired_at", s.acquired_at}});
  }
  j["sources"] = std::move(sources);

  auto matrix = ordered_json::array();
  for (const auto& cell : summarize(c, scan.artefacts).cells) {
    matrix.push_back({{"device", std::string(to_string(cell.device))},
                      {"storage", std::string(to_string(cell.storage))},
                      {"media", cell.media_text()},
                      {"flight_log", cell.flight_log_text()},
                      {"other", cell.other_text()},
                      {"witnesses", cell.witnesses}});
  }
  j["matrix"] = std::move(matrix);

  auto arts = ordered_json::array();
  for (const auto& a : scan.artefacts) {
    arts.push_back({{"ref", ref(a)},
                    {"category", std::string(to_string(a.category))},
                    {"role", a.role},
                    {"flags", a.flags.to_string()},
                    {"details", a.details}});
  }
  j["artefacts"] = std::move(arts);

  auto pairs = ordered_json::array();
  for (const auto& p : pair_cached_videos(scan.artefacts)) {
    pairs.push_back({{"cached", p.cached},
                     {"full", p.full},
                     {"cached_size", p.cached_size},
                     {"full_size", p.full_size},
                     {"ratio", std::to_string(p.ratio_percent) + "%"}});
  }
  j["video_pairs"] = std::move(pairs);

  auto tracks = ordered_json::array();
  for (const auto& t : scan.tracks) {
    const auto& m = t.metrics;
    std::size_t placed = 0;
    for (const auto& p : t.track.points) placed += p.messages.size();
    tracks.push_back({{"ref", t.source_id + ":" + t.path},
                      {"points", m.point_count},
                      {"duration_s", m.duration},
                      {"path_length_m", m.path_length},
                      {"max_alt_rel_m", m.max_alt_rel},
                      {"max_speed_mps", m.max_speed},
                      {"max_home_distance_m", m.max_home_distance ? ordered_json(*m.max_home_distance)
                                                                  : ordered_json()},
                      {"messages", placed + t.track.unplaced_messages.size()}});
  }
  j["tracks"] = std::move(tracks);

  ordered_json tl;
  tl["events"] = scan.timeline.events.size();
  tl["excluded_undated"] = scan.timeline.excluded_undated;
  auto inds = ordered_json::array();
  for (const auto& ind : in.indicators) {
    auto ev = ordered_json::array();
    for (auto i : ind.evidence) {
      if (i >= scan.timeline.events.size()) continue;
      const auto& e = scan.timeline.events[i];
      ev.push_back(e.source_id + ":" + e.path + " " + std::string(to_string(e.kind)));
    }
    inds.push_back({{"kind", std::string(to_string(ind.kind))},
                    {"at", ind.at.to_string()},
                    {"source_id", ind.source_id},
                    {"note", ind.note},
                    {"evidence", std::move(ev)}});
  }
  tl["indicators"] = std::move(inds);
  j["timeline"] = std::move(tl);

  auto pii = ordered_json::array();
  for (const auto& p : scan.pii) {
    pii.push_back({{"ref", p.source_id + ":" + p.path},
                   {"kind", std::string(to_string(p.hit.kind))},
                   {"value", p.hit.value},
                   {"offset", p.hit.offset}});
  }
  j["pii"] = std::move(pii);

  auto carved = ordered_json::array();
  for (const auto& s : in.carved) {
    std::map<std::string, std::size_t> kinds;
    for (const auto& f : s.files) ++kinds[f.kind];
    carved.push_back({{"source_id", s.source_id},
                      {"files", s.files.size()},
                      {"telemetry_blocks", s.blocks.size()},
                      {"by_kind", kinds},
                      {"index", "carved/" + s.source_id + "/index.txt"}});
  }
  j["carved"] = std::move(carved);
  j["warnings"] = scan.warnings;
  return j;
}

std::string cell(const ordered_json& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.is_null() ? "" : v.dump();
  std::string out;
  for (char ch : s) {
    if (ch == '|') {
      out += "\\|";
    } else if (ch == '\n' || ch == '\r') {
      out += ' ';
    } else {
      out += ch;
    }
  }
  return out;
}

void table(std::string& md, const std::vector<std::string>& headers,
           const std::vector<std::vector<std::string>>& rows) {
  md += "|";
  for (const auto& h : headers) md += " " + h + " |";
  md += "\n|";
  for (std::size_t i = 0; i < headers.size(); ++i) md += " --- |";
  md += "\n";
  for (const auto& r : rows) {
    md += "|";
    for (const auto& c : r) md += " " + c + " |";
    md += "\n";
  }
  md += "\n";
}

std::string render_markdown(const ordered_json& j) {
  std::string md = "# Case report: " + cell(j["case"]["name"]) + "\n\n";
  md += "- Case id: " + cell(j["case"]["case_id"]) + "\n";
  md += "- Examiner: " + cell(j["case"]["examiner"]) + "\n";
  md += "- Created: " + cell(j["case"]["created_at"]) + "\n";
  md += "- Tool: " + cell(j["tool"]["name"]) + " " + cell(j["tool"]["version"]) + "\n";
  md += "- Generated: " + cell(j["generated_at"]) + "\n";
  md += std::string("- Scanned: ") + (j["case"]["scanned"].get<bool>() ? "yes" : "no") + "\n\n";

  std::vector<std::vector<std::string>> rows;
  md += "## Sources\n\n";
  for (const auto& s : j["sources"]) {
    rows.push_back({cell(s["source_id"]), cell(s["kind"]), cell(s["label"]), cell(s["origin_path"]),
                    cell(s["byte_size"]), cell(s["sha256"]), cell(s["acquired_at"])});
  }
  table(md, {"Source", "Kind", "Label", "Origin", "Bytes", "SHA-256", "Acquired"}, rows);

  md += "## Artefact matrix\n\n";
  rows.clear();
  for (const auto& m : j["matrix"]) {
    std::string w;
    for (const auto& [k, v] : m["witnesses"].items()) {
      if (!w.empty()) w += "; ";
      w += k + ": " + cell(v);
    }
    rows.push_back({cell(m["device"]), cell(m["storage"]), cell(m["media"]), cell(m["flight_log"]),
                    cell(m["other"]), w});
  }
  table(md, {"Device", "Storage", "Media", "Flight log", "Other", "Witnesses"}, rows);

  md += "## Artefacts\n\n";
  rows.clear();
  for (const auto& a : j["artefacts"]) {
    std::string d;
    for (const auto& [k, v] : a["details"].items()) {
      if (!d.empty()) d += "; ";
      d += k + "=" + cell(v);
    }
    rows.push_back({cell(a["ref"]), cell(a["category"]), cell(a["role"]), cell(a["flags"]), d});
  }
  table(md, {"Artefact", "Category", "Role", "Flags", "Details"}, rows);

  md += "## Cached video pairs\n\n";
  rows.clear();
  for (const auto& p : j["video_pairs"]) {
    rows.push_back({cell(p["cached"]), cell(p["full"]), cell(p["cached_size"]), cell(p["full_size"]),
                    cell(p["ratio"])});
  }
  table(md, {"Cached", "Full", "Cached bytes", "Full bytes", "Ratio"}, rows);

  md += "## Flight tracks\n\n";
  rows.clear();
  for (const auto& t : j["tracks"]) {
    rows.push_back({cell(t["ref"]), cell(t["points"]), cell(t["duration_s"]), cell(t["path_length_m"]),
                    cell(t["max_alt_rel_m"]), cell(t["max_speed_mps"]), cell(t["max_home_distance_m"]),
                    cell(t["messages"])});
  }
  table(md, {"Track", "Points", "Duration (s)", "Length (m)", "Max rel. alt (m)", "Max speed (m/s)",
             "Max home distance (m)", "Messages"},
        rows);

  md += "## Timeline indicators\n\n";
  md += "Events: " + cell(j["timeline"]["events"]) +
        ", undated entries excluded: " + cell(j["timeline"]["excluded_undated"]) + "\n\n";
  rows.clear();
  for (const auto& i : j["timeline"]["indicators"]) {
    std::string ev;
    for (const auto& e : i["evidence"]) {
      if (!ev.empty()) ev += "; ";
      ev += cell(e);
    }
    rows.push_back({cell(i["kind"]), cell(i["at"]), cell(i["source_id"]), cell(i["note"]), ev});
  }
  table(md, {"Indicator", "At", "Source", "Note", "Evidence"}, rows);

  md += "## PII findings\n\n";
  rows.clear();
  for (const auto& p : j["pii"]) {
    rows.push_back({cell(p["ref"]), cell(p["kind"]), cell(p["value"]), cell(p["offset"])});
  }
  table(md, {"Artefact", "Kind", "Value", "Offset"}, rows);

  md += "## Carved data\n\n";
  rows.clear();
  for (const auto& s : j["carved"]) {
    rows.push_back({cell(s["source_id"]), cell(s["files"]), cell(s["telemetry_blocks"]),
                    cell(s["by_kind"]), cell(s["index"])});
  }
  table(md, {"Source", "Files", "Telemetry blocks", "By kind", "Index"}, rows);

  md += "## Warnings\n\n";
  if (j["warnings"].empty()) md += "None.\n";
  for (const auto& w : j["warnings"]) md += "- " + cell(w) + "\n";
  return md;
}

}  // namespace

std::string render_report(const ReportInput& input, std::string_view format) {
  const std::string f = to_lower(format);
  if (f != "json" && f != "markdown" && f != "md") {
    throw Error(ErrorCode::kUnknownFormat, "unknown report format: " + std::string(format));
  }
  if (!input.case_file) throw Error(ErrorCode::kInvalidArgument, "report needs a case");
  const ordered_json doc = build_document(input);
  if (f == "json") return doc.dump(2, ' ', false, ordered_json::error_handler_t::replace) + "\n";
  return to_valid_utf8(render_markdown(doc));
}

}  // namespace dronefx
