#include "facegraph/synth.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>

#include <json.hpp>

#include "facegraph/graph.hpp"

namespace facegraph {

namespace {

constexpr int kMaxMarginAttempts = 1000;

std::vector<double> gaussian_vector(Rng& rng, std::uint32_t dim) {
  std::vector<double> v(dim);
  for (auto& x : v) x = rng.gaussian();
  return v;
}

Embedding random_unit(Rng& rng, std::uint32_t dim) {
  for (;;) {
    Embedding e{gaussian_vector(rng, dim)};
    if (l2_norm(e) > 0.0) return normalize_embedding(e);
  }
}

// Unit vector at the requested cosine from `anchor`.
Embedding unit_at_cosine(Rng& rng, const Embedding& anchor, double cosine) {
  const std::uint32_t dim = static_cast<std::uint32_t>(anchor.dim());
  for (;;) {
    Embedding g = random_unit(rng, dim);
    double dot = 0.0;
    for (std::size_t k = 0; k < dim; ++k) dot += g.values[k] * anchor.values[k];
    Embedding perp;
    perp.values.resize(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      perp.values[k] = g.values[k] - dot * anchor.values[k];
    }
    const double norm = l2_norm(perp);
    if (norm == 0.0) continue;
    const double s = std::sqrt(1.0 - cosine * cosine);
    Embedding out;
    out.values.resize(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      out.values[k] = cosine * anchor.values[k] + s * perp.values[k] / norm;
    }
    return out;
  }
}

Embedding perturb(Rng& rng, const Embedding& mean, double sigma) {
  if (sigma == 0.0) return mean;
  Embedding noise = random_unit(rng, static_cast<std::uint32_t>(mean.dim()));
  Embedding out;
  out.values.resize(mean.dim());
  for (std::size_t k = 0; k < mean.dim(); ++k) {
    out.values[k] = mean.values[k] + sigma * noise.values[k];
  }
  return normalize_embedding(out);
}

// `count` distinct frame slots chosen uniformly from [0, n).
std::vector<std::uint32_t> choose_frames(Rng& rng, std::uint32_t n,
                                         std::uint32_t count) {
  std::vector<std::uint32_t> slots(n);
  std::iota(slots.begin(), slots.end(), 0u);
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::size_t j = i + rng.bounded(slots.size() - i);
    std::swap(slots[i], slots[j]);
  }
  slots.resize(count);
  std::sort(slots.begin(), slots.end());
  return slots;
}

struct Placement {
  std::uint32_t frame_slot;
  std::size_t group;  // identities first, then false-positive tracks
  double score;
};

void validate(const ScenarioSpec& spec) {
  if (spec.n_frames == 0) throw Error("scenario needs n_frames >= 1");
  if (spec.dim == 0) throw Error("scenario needs dim >= 1");
  for (const auto& id : spec.identities) {
    if (!(id.presence > 0.0 && id.presence <= 1.0)) {
      throw Error("identity presence must be in (0, 1]");
    }
  }
  const auto& fp = spec.fp_spec;
  if (fp.count > 0 && fp.mode == FpMode::scattered &&
      (fp.occurrences < 1 || fp.occurrences > spec.n_frames)) {
    throw Error("false-positive occurrences must be in [1, n_frames]");
  }
  if (fp.attach_cos != 0.0) {
    if (fp.attach_cos < 0.0 || fp.attach_cos >= 1.0) {
      throw Error("attach_cos must be in [0, 1)");
    }
    if (spec.identities.empty()) {
      throw Error("attach_cos requires at least one identity");
    }
    if (spec.guaranteed_margin) {
      throw Error("attach_cos is incompatible with guaranteed_margin");
    }
  }
  if (spec.frame_indices && spec.frame_indices->size() != spec.n_frames) {
    throw Error("frame_indices size must equal n_frames");
  }
  if (spec.noise_sigma < 0.0) throw Error("noise_sigma must be >= 0");
}

bool margins_hold(const std::vector<Embedding>& embeddings,
                  const std::vector<std::size_t>& group_of) {
  for (std::size_t i = 0; i < embeddings.size(); ++i) {
    for (std::size_t j = i + 1; j < embeddings.size(); ++j) {
      const double s = similarity(embeddings[i], embeddings[j]);
      if (group_of[i] == group_of[j]) {
        if (s <= kWithinMargin) return false;
      } else {
        if (s >= kCrossMargin) return false;
      }
    }
  }
  return true;
}

Scenario assemble(const ScenarioSpec& spec, Rng& rng,
                  std::vector<Embedding>* embeddings_out,
                  std::vector<std::size_t>* group_of_out) {
  const std::uint32_t n = spec.n_frames;
  const std::size_t n_identities = spec.identities.size();
  const std::size_t n_fp_tracks = spec.fp_spec.count;

  // Group mean directions: identities, then false-positive tracks.
  std::vector<Embedding> means;
  means.reserve(n_identities + n_fp_tracks);
  for (std::size_t k = 0; k < n_identities; ++k) {
    means.push_back(random_unit(rng, spec.dim));
  }
  for (std::size_t j = 0; j < n_fp_tracks; ++j) {
    if (spec.fp_spec.attach_cos > 0.0) {
      means.push_back(unit_at_cosine(rng, means[0], spec.fp_spec.attach_cos));
    } else {
      means.push_back(random_unit(rng, spec.dim));
    }
  }

  std::vector<Placement> placements;
  for (std::size_t k = 0; k < n_identities; ++k) {
    const double want = spec.identities[k].presence * static_cast<double>(n);
    const auto count = static_cast<std::uint32_t>(std::clamp(
        std::floor(want + 0.5), 1.0, static_cast<double>(n)));
    for (std::uint32_t slot : choose_frames(rng, n, count)) {
      placements.push_back(
          {slot, k, spec.identities[k].score_dist.sample(rng)});
    }
  }
  for (std::size_t j = 0; j < n_fp_tracks; ++j) {
    const std::uint32_t count =
        spec.fp_spec.mode == FpMode::persistent ? n : spec.fp_spec.occurrences;
    for (std::uint32_t slot : choose_frames(rng, n, count)) {
      placements.push_back(
          {slot, n_identities + j, spec.fp_spec.score_dist.sample(rng)});
    }
  }
  std::stable_sort(placements.begin(), placements.end(),
                   [](const Placement& a, const Placement& b) {
                     if (a.frame_slot != b.frame_slot) {
                       return a.frame_slot < b.frame_slot;
                     }
                     return a.group < b.group;
                   });

  Scenario scenario;
  scenario.truth.video_id = spec.video_id;
  embeddings_out->clear();
  group_of_out->clear();

  std::uint32_t current_slot = 0;
  std::uint32_t face_ordinal = 0;
  for (const auto& p : placements) {
    if (p.frame_slot != current_slot) {
      current_slot = p.frame_slot;
      face_ordinal = 0;
    }
    FaceRecord rec;
    rec.video_id = spec.video_id;
    rec.frame_index =
        spec.frame_indices ? (*spec.frame_indices)[p.frame_slot] : p.frame_slot;
    rec.face_index = face_ordinal++;
    const bool is_fp = p.group >= n_identities;
    // Lanes wrap every 6 columns so boxes always land inside a 256x256
    // synthetic frame; overlap is harmless, nothing consumes bbox geometry.
    const auto col = static_cast<double>(
        (is_fp ? p.group - n_identities : p.group) % 6);
    rec.bbox = BBox{16.0 + 36.0 * col, is_fp ? 120.0 : 16.0,
                    44.0 + 36.0 * col, is_fp ? 148.0 : 44.0};
    rec.detector_confidence = is_fp ? 0.72 : 0.98;
    rec.embedding = perturb(rng, means[p.group], spec.noise_sigma);
    rec.score = p.score;
    rec.video_label = spec.video_label;
    scenario.truth.labels[rec.key()] =
        TruthLabel{is_fp ? -1 : static_cast<int>(p.group)};
    embeddings_out->push_back(*rec.embedding);
    group_of_out->push_back(p.group);
    scenario.records.push_back(std::move(rec));
  }
  return scenario;
}

}  // namespace

double ScoreDist::sample(Rng& rng) const {
  if (lo == hi) return lo;
  return rng.uniform(lo, hi);
}

Scenario generate(const ScenarioSpec& spec) {
  validate(spec);
  std::vector<Embedding> embeddings;
  std::vector<std::size_t> group_of;
  for (int attempt = 0; attempt < kMaxMarginAttempts; ++attempt) {
    Rng rng(splitmix64(spec.seed ^
                       (static_cast<std::uint64_t>(attempt) *
                        0x9e3779b97f4a7c15ULL)));
    Scenario scenario = assemble(spec, rng, &embeddings, &group_of);
    if (!spec.guaranteed_margin || margins_hold(embeddings, group_of)) {
      return scenario;
    }
  }
  throw InfeasibleMarginError(
      "could not satisfy similarity margins after " +
      std::to_string(kMaxMarginAttempts) +
      " attempts; noise_sigma too large for dim");
}

CleaningScore score_cleaning(const ComponentSet& set,
                             const GroundTruth& truth) {
  if (set.video_id != truth.video_id) {
    throw JoinError("component set is for video '" + set.video_id +
                    "' but ground truth is for '" + truth.video_id + "'");
  }
  std::size_t kept = 0;
  std::size_t kept_true = 0;
  std::size_t true_faces = 0;
  for (const auto& [key, label] : truth.labels) {
    if (!label.is_fp()) ++true_faces;
  }
  for (const auto& c : set.components) {
    if (!c.kept) continue;
    for (const auto& key : c.members) {
      const auto it = truth.labels.find(key);
      if (it == truth.labels.end()) {
        throw JoinError("kept record (" + std::to_string(key.frame) + ", " +
                        std::to_string(key.face) + ") missing from truth");
      }
      ++kept;
      if (!it->second.is_fp()) ++kept_true;
    }
  }
  CleaningScore score;
  score.precision = kept == 0 ? 1.0
                              : static_cast<double>(kept_true) /
                                    static_cast<double>(kept);
  score.recall = true_faces == 0 ? 1.0
                                 : static_cast<double>(kept_true) /
                                       static_cast<double>(true_faces);
  return score;
}

void write_truth(const GroundTruth& truth, std::ostream& out) {
  for (const auto& [key, label] : truth.labels) {
    nlohmann::ordered_json row;
    row["video_id"] = truth.video_id;
    row["frame"] = key.frame;
    row["face"] = key.face;
    row["truth"] =
        label.is_fp() ? "fp" : "identity:" + std::to_string(label.identity);
    out << row.dump() << '\n';
  }
  if (!out) throw IoError("write failed");
}

std::vector<GroundTruth> read_truths(std::istream& in) {
  std::map<std::string, GroundTruth> by_video;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) throw ParseError(line_no, "empty line");
    nlohmann::ordered_json row;
    try {
      row = nlohmann::ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, std::string("invalid JSON: ") + e.what());
    }
    for (const char* field : {"video_id", "frame", "face", "truth"}) {
      if (!row.contains(field)) {
        throw ParseError(line_no, std::string("missing field '") + field + "'");
      }
    }
    const std::string video_id = row["video_id"].get<std::string>();
    GroundTruth& truth = by_video[video_id];
    truth.video_id = video_id;
    RecordKey key{row["frame"].get<std::uint32_t>(),
                  row["face"].get<std::uint32_t>()};
    const std::string text = row["truth"].get<std::string>();
    TruthLabel label;
    if (text == "fp") {
      label.identity = -1;
    } else if (text.rfind("identity:", 0) == 0) {
      label.identity = std::stoi(text.substr(9));
    } else {
      throw ParseError(line_no, "truth must be 'fp' or 'identity:<k>'");
    }
    if (!truth.labels.emplace(key, label).second) {
      throw ParseError(line_no, "duplicate (frame, face) in ground truth");
    }
  }
  std::vector<GroundTruth> truths;
  truths.reserve(by_video.size());
  for (auto& [id, truth] : by_video) truths.push_back(std::move(truth));
  return truths;
}

}  // namespace facegraph
