#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "facegraph/errors.hpp"

namespace facegraph {

// D-dimensional facial embedding. All records of one manifest share the
// dimension declared in the manifest header.
struct Embedding {
  std::vector<double> values;

  std::size_t dim() const { return values.size(); }
  bool operator==(const Embedding&) const = default;
};

double l2_norm(const Embedding& e);

// Returns e scaled to unit L2 norm. Throws ZeroVectorError when every
// coordinate is zero (a corrupt manifest row upstream).
Embedding normalize_embedding(const Embedding& e);

struct BBox {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;

  bool valid() const { return x1 > x0 && y1 > y0; }
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  bool operator==(const BBox&) const = default;
};

// Identifies one detected face within a video. The full record identity is
// the (video_id, frame, face) triple; within a single video this pair is
// enough and is what components and ground truth refer to.
struct RecordKey {
  std::uint32_t frame = 0;
  std::uint32_t face = 0;

  auto operator<=>(const RecordKey&) const = default;
};

// One detected face as produced by an upstream detector + embedder.
// component_id/kept are set only on rows of cleaned manifests.
struct FaceRecord {
  std::string video_id;
  std::uint32_t frame_index = 0;
  std::uint32_t face_index = 0;
  BBox bbox;
  double detector_confidence = 0.0;
  std::optional<Embedding> embedding;
  std::optional<double> score;       // model's fake probability, in [0,1]
  std::optional<int> video_label;    // 0 = real, 1 = fake
  std::optional<int> component_id;
  std::optional<bool> kept;

  RecordKey key() const { return {frame_index, face_index}; }
  bool operator==(const FaceRecord&) const = default;
};

// All records of one video, sorted by (frame_index, face_index).
// n_f is the number of distinct frames holding at least one detection.
struct VideoGroup {
  std::string video_id;
  std::vector<FaceRecord> records;
  std::uint32_t n_f = 0;

  // Sorts, rejects duplicate (frame, face) pairs, computes n_f.
  static VideoGroup from_records(std::string video_id,
                                 std::vector<FaceRecord> records);
};

struct SimilarityThreshold {
  double theta = 0.8;
};

// Component-size threshold as an exact rational of n_f (default 1/2).
struct SizeFraction {
  std::uint32_t numerator = 1;
  std::uint32_t denominator = 2;

  bool operator==(const SizeFraction&) const = default;
};

SizeFraction parse_size_fraction(const std::string& text);  // "1/2", "3/4"
std::string to_string(const SizeFraction& f);

struct Component {
  std::vector<RecordKey> members;  // sorted ascending
  bool kept = true;

  std::size_t size() const { return members.size(); }
};

// Partition of one video's records into connected components, each flagged
// kept or pruned. theta is NaN when the set was reconstructed from an
// annotated manifest rather than computed.
struct ComponentSet {
  std::string video_id;
  std::vector<Component> components;
  std::uint32_t n_f = 0;
  double theta = 0.0;
  SizeFraction size_fraction;

  std::size_t kept_count() const;
  std::size_t kept_record_count() const;
};

enum class AggregationScheme { avg, median, max, face };

std::string to_string(AggregationScheme scheme);
AggregationScheme parse_scheme(const std::string& text);

struct VideoVerdict {
  std::string video_id;
  AggregationScheme scheme = AggregationScheme::face;
  double score = 0.5;
  bool defaulted = false;  // true when 0.5 was substituted for "no usable faces"
};

}  // namespace facegraph
