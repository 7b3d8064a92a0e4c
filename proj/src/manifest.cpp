#include "facegraph/manifest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace facegraph {

namespace {

using ordered_json = nlohmann::ordered_json;

bool in_unit_interval(double v) { return v >= 0.0 && v <= 1.0; }

double require_number(const ordered_json& j, const char* field,
                      std::size_t line) {
  if (!j.is_number()) {
    throw ParseError(line, std::string(field) + " must be a number");
  }
  const double v = j.get<double>();
  if (!std::isfinite(v)) {
    throw ParseError(line, std::string(field) + " must be finite");
  }
  return v;
}

std::uint32_t require_uint(const ordered_json& j, const char* field,
                           std::size_t line) {
  if (!j.is_number_unsigned()) {
    throw ParseError(line,
                     std::string(field) + " must be a non-negative integer");
  }
  const auto v = j.get<std::uint64_t>();
  if (v > 0xffffffffULL) {
    throw ParseError(line, std::string(field) + " out of range");
  }
  return static_cast<std::uint32_t>(v);
}

// Shortest decimal representation that parses back to the same double.
std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void require_writable(double v, const char* field) {
  if (!std::isfinite(v)) {
    throw IoError(std::string("cannot serialize non-finite ") + field);
  }
}

FaceRecord parse_row(const ordered_json& row, const ManifestHeader& header,
                     std::size_t line) {
  if (!row.is_object()) throw ParseError(line, "row is not a JSON object");

  static const char* const known[] = {"video_id", "frame",     "face",
                                      "bbox",     "conf",      "embedding",
                                      "score",    "label",     "component",
                                      "kept"};
  for (const auto& [key, value] : row.items()) {
    if (std::find_if(std::begin(known), std::end(known),
                     [&](const char* k) { return key == k; }) ==
        std::end(known)) {
      throw ParseError(line, "unexpected field '" + key + "'");
    }
  }
  for (const char* field : {"video_id", "frame", "face", "bbox", "conf"}) {
    if (!row.contains(field)) {
      throw ParseError(line, std::string("missing field '") + field + "'");
    }
  }

  FaceRecord rec;
  if (!row["video_id"].is_string()) {
    throw ParseError(line, "video_id must be a string");
  }
  rec.video_id = row["video_id"].get<std::string>();
  if (rec.video_id.empty()) throw ParseError(line, "video_id is empty");
  rec.frame_index = require_uint(row["frame"], "frame", line);
  rec.face_index = require_uint(row["face"], "face", line);

  const auto& bbox = row["bbox"];
  if (!bbox.is_array() || bbox.size() != 4) {
    throw ParseError(line, "bbox must be an array of 4 numbers");
  }
  rec.bbox.x0 = require_number(bbox[0], "bbox", line);
  rec.bbox.y0 = require_number(bbox[1], "bbox", line);
  rec.bbox.x1 = require_number(bbox[2], "bbox", line);
  rec.bbox.y1 = require_number(bbox[3], "bbox", line);
  if (!rec.bbox.valid()) {
    throw ParseError(line, "bbox must satisfy x1 > x0 and y1 > y0");
  }

  rec.detector_confidence = require_number(row["conf"], "conf", line);
  if (!in_unit_interval(rec.detector_confidence)) {
    throw ParseError(line, "conf out of [0,1]");
  }

  if (row.contains("embedding")) {
    const auto& emb = row["embedding"];
    if (!emb.is_array()) throw ParseError(line, "embedding must be an array");
    if (emb.size() != header.embedding_dim) {
      throw DimensionMismatchError(
          "line " + std::to_string(line) + ": embedding length " +
          std::to_string(emb.size()) + " does not match header dimension " +
          std::to_string(header.embedding_dim));
    }
    Embedding e;
    e.values.reserve(emb.size());
    for (const auto& v : emb) {
      e.values.push_back(require_number(v, "embedding", line));
    }
    try {
      rec.embedding = normalize_embedding(e);
    } catch (const ZeroVectorError&) {
      throw ParseError(line, "embedding is the zero vector");
    }
  }
  if (row.contains("score")) {
    const double s = require_number(row["score"], "score", line);
    if (!in_unit_interval(s)) throw ParseError(line, "score out of [0,1]");
    rec.score = s;
  }
  if (row.contains("label")) {
    const auto& label = row["label"];
    if (!label.is_number_integer() ||
        (label.get<int>() != 0 && label.get<int>() != 1)) {
      throw ParseError(line, "label must be 0 or 1");
    }
    rec.video_label = label.get<int>();
  }
  if (row.contains("component") != row.contains("kept")) {
    throw ParseError(line, "component and kept must appear together");
  }
  if (row.contains("component")) {
    const auto& comp = row["component"];
    if (!comp.is_number_integer() || comp.get<std::int64_t>() < 0) {
      throw ParseError(line, "component must be a non-negative integer");
    }
    rec.component_id = comp.get<int>();
    if (!row["kept"].is_boolean()) {
      throw ParseError(line, "kept must be a boolean");
    }
    rec.kept = row["kept"].get<bool>();
  }
  return rec;
}

}  // namespace

ManifestReader::ManifestReader(std::istream& in) : in_(&in) {
  std::string line;
  if (!std::getline(*in_, line)) {
    throw ParseError(1, "missing manifest header");
  }
  ordered_json j;
  try {
    j = ordered_json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(1, std::string("invalid header: ") + e.what());
  }
  if (!j.is_object() || !j.contains("version") || !j.contains("embedding_dim")) {
    throw ParseError(1, "header must declare version and embedding_dim");
  }
  if (!j["version"].is_number_integer() || j["version"].get<int>() != 1) {
    throw ParseError(1, "unsupported manifest version");
  }
  header_.version = 1;
  header_.embedding_dim = require_uint(j["embedding_dim"], "embedding_dim", 1);
  if (header_.embedding_dim < 1) {
    throw ParseError(1, "embedding_dim must be >= 1");
  }
}

std::optional<FaceRecord> ManifestReader::next() {
  std::string line;
  if (!std::getline(*in_, line)) return std::nullopt;
  ++line_no_;
  if (line.empty()) throw ParseError(line_no_, "empty line");
  ordered_json row;
  try {
    row = ordered_json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(line_no_, std::string("invalid JSON: ") + e.what());
  }
  FaceRecord rec = parse_row(row, header_, line_no_);
  ++rows_;
  return rec;
}

ManifestWriter::ManifestWriter(std::ostream& out, ManifestHeader header)
    : out_(&out), header_(header) {
  ordered_json j;
  j["version"] = header_.version;
  j["embedding_dim"] = header_.embedding_dim;
  *out_ << j.dump() << '\n';
}

void ManifestWriter::write(const FaceRecord& record) {
  if (record.embedding && record.embedding->dim() != header_.embedding_dim) {
    throw DimensionMismatchError(
        "record embedding length " + std::to_string(record.embedding->dim()) +
        " does not match header dimension " +
        std::to_string(header_.embedding_dim));
  }
  require_writable(record.bbox.x0, "bbox");
  require_writable(record.bbox.y0, "bbox");
  require_writable(record.bbox.x1, "bbox");
  require_writable(record.bbox.y1, "bbox");
  require_writable(record.detector_confidence, "conf");

  ordered_json row;
  row["video_id"] = record.video_id;
  row["frame"] = record.frame_index;
  row["face"] = record.face_index;
  row["bbox"] = {record.bbox.x0, record.bbox.y0, record.bbox.x1,
                 record.bbox.y1};
  row["conf"] = record.detector_confidence;
  if (record.embedding) {
    for (double v : record.embedding->values) require_writable(v, "embedding");
    row["embedding"] = record.embedding->values;
  }
  if (record.score) {
    require_writable(*record.score, "score");
    row["score"] = *record.score;
  }
  if (record.video_label) row["label"] = *record.video_label;
  if (record.component_id) {
    row["component"] = *record.component_id;
    row["kept"] = record.kept.value_or(false);
  }
  *out_ << row.dump() << '\n';
  if (!*out_) throw IoError("write failed");
  ++rows_;
}

std::pair<ManifestHeader, std::vector<FaceRecord>> read_manifest(
    std::istream& in) {
  ManifestReader reader(in);
  std::vector<FaceRecord> records;
  while (auto rec = reader.next()) records.push_back(std::move(*rec));
  return {reader.header(), std::move(records)};
}

std::size_t write_manifest(const ManifestHeader& header,
                           const std::vector<FaceRecord>& records,
                           std::ostream& out) {
  ManifestWriter writer(out, header);
  for (const auto& rec : records) writer.write(rec);
  return writer.rows_written();
}

std::vector<VideoGroup> group_by_video(std::vector<FaceRecord> records) {
  VideoGrouper grouper;
  for (auto& rec : records) grouper.push(std::move(rec));
  return grouper.finish();
}

std::optional<VideoGroup> VideoGrouper::push(FaceRecord record) {
  std::string id = record.video_id;
  if (assume_sorted_ && any_ && id < last_id_) {
    throw UnsortedInputError("video '" + id +
                             "' arrived after '" + last_id_ + "'");
  }
  std::optional<VideoGroup> emitted;
  if (assume_sorted_ && any_ && id != last_id_) {
    auto node = pending_.extract(last_id_);
    emitted = VideoGroup::from_records(last_id_, std::move(node.mapped()));
  }
  pending_[id].push_back(std::move(record));
  last_id_ = std::move(id);
  any_ = true;
  return emitted;
}

std::vector<VideoGroup> VideoGrouper::finish() {
  std::vector<VideoGroup> groups;
  groups.reserve(pending_.size());
  for (auto& [id, records] : pending_) {
    groups.push_back(VideoGroup::from_records(id, std::move(records)));
  }
  pending_.clear();
  any_ = false;
  return groups;
}

void write_verdict_csv(const std::vector<VideoVerdict>& verdicts,
                       std::ostream& out) {
  out << "video_id,scheme,score,defaulted\n";
  for (const auto& v : verdicts) {
    if (v.video_id.find_first_of(",\"\n") != std::string::npos) {
      throw IoError("video_id '" + v.video_id +
                    "' contains characters not representable in CSV");
    }
    require_writable(v.score, "score");
    out << v.video_id << ',' << to_string(v.scheme) << ','
        << format_double(v.score) << ',' << (v.defaulted ? "true" : "false")
        << '\n';
  }
  if (!out) throw IoError("write failed");
}

std::vector<VideoVerdict> read_verdict_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line) || line != "video_id,scheme,score,defaulted") {
    throw ParseError(1, "expected verdict CSV header");
  }
  std::vector<VideoVerdict> verdicts;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) throw ParseError(line_no, "empty line");
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 4) throw ParseError(line_no, "expected 4 fields");
    VideoVerdict v;
    v.video_id = fields[0];
    if (v.video_id.empty()) throw ParseError(line_no, "video_id is empty");
    try {
      v.scheme = parse_scheme(fields[1]);
    } catch (const Error& e) {
      throw ParseError(line_no, e.what());
    }
    const auto& s = fields[2];
    auto res = std::from_chars(s.data(), s.data() + s.size(), v.score);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() ||
        !(v.score >= 0.0 && v.score <= 1.0)) {
      throw ParseError(line_no, "score must be a number in [0,1]");
    }
    if (fields[3] == "true") {
      v.defaulted = true;
    } else if (fields[3] == "false") {
      v.defaulted = false;
    } else {
      throw ParseError(line_no, "defaulted must be true or false");
    }
    verdicts.push_back(std::move(v));
  }
  return verdicts;
}

std::string metrics_report_json(const MetricsReport& report) {
  ordered_json j;
  j["log_loss"] = report.log_loss;
  j["accuracy"] = report.accuracy;
  j["macro_f1"] = report.macro_f1;
  j["n_videos"] = report.n_videos;
  return j.dump();
}

}  // namespace facegraph
