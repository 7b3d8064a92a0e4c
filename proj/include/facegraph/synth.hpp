#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "facegraph/model.hpp"
#include "facegraph/rng.hpp"

namespace facegraph {

// Per-face score model: constant when lo == hi, otherwise uniform(lo, hi).
struct ScoreDist {
  double lo = 0.5;
  double hi = 0.5;

  static ScoreDist constant(double c) { return {c, c}; }
  static ScoreDist uniform(double lo, double hi) { return {lo, hi}; }
  double sample(Rng& rng) const;
};

struct IdentitySpec {
  double presence = 1.0;  // fraction of frames this identity appears in
  ScoreDist score_dist = ScoreDist::constant(0.5);
};

enum class FpMode {
  scattered,   // each false positive is its own direction in random frames
  persistent,  // each false positive repeats its direction in every frame
};

struct FalsePositiveSpec {
  std::uint32_t count = 0;
  FpMode mode = FpMode::scattered;
  // Frames each scattered false positive occupies (a cluster of this size);
  // ignored in persistent mode, which always covers every frame.
  std::uint32_t occurrences = 1;
  // Cosine pulling false-positive directions toward identity 0's mean.
  // 0 keeps them fully random. Incompatible with guaranteed_margin.
  double attach_cos = 0.0;
  ScoreDist score_dist = ScoreDist::constant(0.5);
};

// Margins enforced when guaranteed_margin is set: the generator verifies
// them explicitly and redraws on violation, so component structure is
// analytically known for any theta in [0.7, 0.9].
constexpr double kWithinMargin = 0.9;
constexpr double kCrossMargin = 0.7;

struct ScenarioSpec {
  std::string video_id = "synth-0";
  std::uint32_t n_frames = 8;
  std::uint32_t dim = 512;
  std::vector<IdentitySpec> identities;
  FalsePositiveSpec fp_spec;
  // L2 norm of the additive perturbation applied to each group mean before
  // renormalization (NOT a per-coordinate std, which would scale with dim).
  double noise_sigma = 0.1;
  std::uint64_t seed = 0;
  bool guaranteed_margin = false;
  std::optional<int> video_label;
  // Optional explicit frame numbering (e.g. from plan_frames); size must
  // equal n_frames. Defaults to 0..n_frames-1.
  std::optional<std::vector<std::uint32_t>> frame_indices;
};

// identity >= 0 names the generating identity; -1 marks a false positive.
struct TruthLabel {
  int identity = -1;

  bool is_fp() const { return identity < 0; }
  bool operator==(const TruthLabel&) const = default;
};

struct GroundTruth {
  std::string video_id;
  std::map<RecordKey, TruthLabel> labels;
};

struct Scenario {
  std::vector<FaceRecord> records;  // sorted by (frame, face)
  GroundTruth truth;
};

// Deterministic for a fixed seed. With guaranteed_margin the draw is
// re-attempted up to 1000 times until every within-group similarity
// exceeds kWithinMargin and every cross-group similarity stays below
// kCrossMargin; InfeasibleMarginError afterwards (sigma too large for the
// dimension).
Scenario generate(const ScenarioSpec& spec);

struct CleaningScore {
  double precision = 1.0;
  double recall = 1.0;
};

// precision = |kept & true faces| / |kept|   (1.0 when nothing is kept)
// recall    = |kept & true faces| / |true faces|  (1.0 when none exist)
CleaningScore score_cleaning(const ComponentSet& set,
                             const GroundTruth& truth);

// Ground-truth sidecar: one JSON object per line,
// {"video_id":...,"frame":...,"face":...,"truth":"identity:0"|"fp"}.
// A sidecar may interleave several videos; reads come back sorted by id.
void write_truth(const GroundTruth& truth, std::ostream& out);
std::vector<GroundTruth> read_truths(std::istream& in);

}  // namespace facegraph
