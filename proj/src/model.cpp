#include "facegraph/model.hpp"

#include <algorithm>
#include <cmath>

namespace facegraph {

double l2_norm(const Embedding& e) {
  double sum = 0.0;
  for (double v : e.values) sum += v * v;
  return std::sqrt(sum);
}

Embedding normalize_embedding(const Embedding& e) {
  const double norm = l2_norm(e);
  if (norm == 0.0) throw ZeroVectorError();
  // Already unit within fp noise: return unchanged so the operation is
  // exactly idempotent and round trips through manifests stay bit-stable.
  if (std::abs(norm - 1.0) <= 1e-9) return e;
  Embedding out;
  out.values.reserve(e.values.size());
  for (double v : e.values) out.values.push_back(v / norm);
  return out;
}

VideoGroup VideoGroup::from_records(std::string video_id,
                                    std::vector<FaceRecord> records) {
  std::sort(records.begin(), records.end(),
            [](const FaceRecord& a, const FaceRecord& b) {
              return a.key() < b.key();
            });
  std::uint32_t n_f = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (i > 0 && records[i].key() == records[i - 1].key()) {
      throw DuplicateRecordError(
          "duplicate record (" + video_id + ", " +
          std::to_string(records[i].frame_index) + ", " +
          std::to_string(records[i].face_index) + ")");
    }
    if (i == 0 || records[i].frame_index != records[i - 1].frame_index) ++n_f;
  }
  VideoGroup group;
  group.video_id = std::move(video_id);
  group.records = std::move(records);
  group.n_f = n_f;
  return group;
}

SizeFraction parse_size_fraction(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      // Bare integer means numerator over 1, e.g. "1" for N_F itself.
      const long num = std::stol(text);
      if (num <= 0 || num > 1) throw Error("size fraction out of (0, 1]");
      return {static_cast<std::uint32_t>(num), 1};
    }
    const long num = std::stol(text.substr(0, slash));
    const long den = std::stol(text.substr(slash + 1));
    if (num <= 0 || den <= 0 || num > den) {
      throw Error("size fraction out of (0, 1]");
    }
    return {static_cast<std::uint32_t>(num), static_cast<std::uint32_t>(den)};
  } catch (const std::logic_error&) {
    throw Error("cannot parse size fraction '" + text + "'");
  }
}

std::string to_string(const SizeFraction& f) {
  return std::to_string(f.numerator) + "/" + std::to_string(f.denominator);
}

std::size_t ComponentSet::kept_count() const {
  std::size_t n = 0;
  for (const auto& c : components) n += c.kept ? 1 : 0;
  return n;
}

std::size_t ComponentSet::kept_record_count() const {
  std::size_t n = 0;
  for (const auto& c : components) n += c.kept ? c.size() : 0;
  return n;
}

std::string to_string(AggregationScheme scheme) {
  switch (scheme) {
    case AggregationScheme::avg: return "avg";
    case AggregationScheme::median: return "median";
    case AggregationScheme::max: return "max";
    case AggregationScheme::face: return "face";
  }
  return "?";
}

AggregationScheme parse_scheme(const std::string& text) {
  if (text == "avg") return AggregationScheme::avg;
  if (text == "median") return AggregationScheme::median;
  if (text == "max") return AggregationScheme::max;
  if (text == "face") return AggregationScheme::face;
  throw Error("unknown aggregation scheme '" + text + "'");
}

}  // namespace facegraph
