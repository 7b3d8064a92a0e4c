#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "facegraph/metrics.hpp"
#include "facegraph/model.hpp"

namespace facegraph {

// Detection manifests are UTF-8 line-delimited JSON: one header line
//   {"version":1,"embedding_dim":512}
// followed by one object per detected face:
//   {"video_id":"v1","frame":0,"face":0,"bbox":[x0,y0,x1,y1],"conf":0.97,
//    "embedding":[...],"score":0.83,"label":1}
// embedding, score and label are optional. Cleaned manifests add
// "component" and "kept" per row.

struct ManifestHeader {
  int version = 1;
  std::uint32_t embedding_dim = 512;
};

// Streaming row reader; memory use is independent of file size. Each row is
// validated (bbox sanity, embedding length against the header, score range)
// and embeddings are L2-normalized at ingest.
class ManifestReader {
 public:
  explicit ManifestReader(std::istream& in);

  const ManifestHeader& header() const { return header_; }
  std::optional<FaceRecord> next();
  std::size_t rows_read() const { return rows_; }

 private:
  std::istream* in_;
  ManifestHeader header_;
  std::size_t line_no_ = 1;
  std::size_t rows_ = 0;
};

class ManifestWriter {
 public:
  ManifestWriter(std::ostream& out, ManifestHeader header);

  void write(const FaceRecord& record);
  std::size_t rows_written() const { return rows_; }

 private:
  std::ostream* out_;
  ManifestHeader header_;
  std::size_t rows_ = 0;
};

std::pair<ManifestHeader, std::vector<FaceRecord>> read_manifest(
    std::istream& in);
std::size_t write_manifest(const ManifestHeader& header,
                           const std::vector<FaceRecord>& records,
                           std::ostream& out);

// Groups records by video id. Accepts any input order; the result is sorted
// by video_id with records sorted by (frame, face) and n_f computed.
std::vector<VideoGroup> group_by_video(std::vector<FaceRecord> records);

// Streaming variant of group_by_video. In sorted mode a group is emitted as
// soon as the video id changes, so only one video is buffered at a time; a
// record arriving for an earlier id then throws UnsortedInputError. The
// default mode buffers everything and emits at finish().
class VideoGrouper {
 public:
  explicit VideoGrouper(bool assume_sorted = false)
      : assume_sorted_(assume_sorted) {}

  std::optional<VideoGroup> push(FaceRecord record);
  std::vector<VideoGroup> finish();

 private:
  bool assume_sorted_;
  std::map<std::string, std::vector<FaceRecord>> pending_;
  std::string last_id_;
  bool any_ = false;
};

// Verdict report: CSV with header "video_id,scheme,score,defaulted".
// Scores are serialized with shortest round-trip precision.
void write_verdict_csv(const std::vector<VideoVerdict>& verdicts,
                       std::ostream& out);
std::vector<VideoVerdict> read_verdict_csv(std::istream& in);

// Metrics report: single JSON object
// {"log_loss":...,"accuracy":...,"macro_f1":...,"n_videos":...}
std::string metrics_report_json(const MetricsReport& report);

}  // namespace facegraph
