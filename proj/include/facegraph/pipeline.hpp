#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "facegraph/manifest.hpp"
#include "facegraph/metrics.hpp"
#include "facegraph/model.hpp"
#include "facegraph/synth.hpp"

namespace facegraph {

// Knobs shared by the pipeline stages. Defaults are the operating point the
// rest of the toolchain assumes: theta 0.8, size threshold N_F/2, Face
// aggregation.
struct RunConfig {
  SimilarityThreshold theta{0.8};
  SizeFraction size_fraction{1, 2};
  AggregationScheme scheme = AggregationScheme::face;
  bool all_schemes = false;
  bool no_clean = false;
  std::uint64_t seed = 0;
  unsigned jobs = 0;  // 0 = hardware concurrency
};

struct CleanSummary {
  std::string video_id;
  std::size_t n_records = 0;  // K
  std::uint32_t n_f = 0;
  std::size_t components_kept = 0;
  std::size_t components_pruned = 0;
};

// clean: per-video face-graph cleaning over a whole manifest. Re-emits the
// input rows with component/kept annotations, videos sorted by id. Videos
// are processed by a bounded worker pool; output is identical regardless of
// pool size.
std::vector<CleanSummary> run_clean(std::istream& in, std::ostream& out,
                                    const RunConfig& config);

// aggregate: verdicts from a cleaned manifest, sorted by (video_id, scheme).
// With config.no_clean the component annotations are not required and every
// record lands in one kept pseudo-component (the no-cleaning baseline).
std::vector<VideoVerdict> run_aggregate(std::istream& in,
                                        const RunConfig& config);

// video_id -> label for every row that carries one; conflicting labels for
// one video are a JoinError.
std::map<std::string, int> labels_from_manifest(std::istream& in);

// evaluate: joins verdicts (one scheme) against labels. A verdict whose
// video has no label is a JoinError.
MetricsReport run_evaluate(const std::vector<VideoVerdict>& verdicts,
                           const std::map<std::string, int>& labels);

// Whole pipeline in one process, no intermediate serialization; returns the
// metrics report JSON. Byte-identical to staging clean | aggregate |
// evaluate through files.
std::string run_end_to_end(std::istream& manifest, const RunConfig& config);

struct SweepCell {
  double theta = 0.0;
  SizeFraction size_fraction;
  MetricsReport report;
};

// sweep: clean -> aggregate -> evaluate for every (theta, frac) cell.
std::vector<SweepCell> run_sweep(const std::vector<VideoGroup>& groups,
                                 const std::map<std::string, int>& labels,
                                 const std::vector<double>& thetas,
                                 const std::vector<SizeFraction>& fracs,
                                 const RunConfig& config);

void write_sweep_csv(const std::vector<SweepCell>& cells, std::ostream& out);

constexpr double kDefaultSweepThetas[] = {0.7, 0.8, 0.9};
constexpr SizeFraction kDefaultSweepFracs[] = {{1, 4}, {1, 2}, {3, 4}};

// Batch scenario generation for the synth subcommand.
struct SynthOptions {
  std::size_t n_videos = 1;
  std::uint32_t n_frames = 8;
  std::uint32_t dim = 512;
  std::uint32_t identities = 1;
  double presence = 1.0;
  std::uint32_t false_positives = 0;
  FpMode fp_mode = FpMode::scattered;
  std::uint32_t fp_occurrences = 1;
  double noise_sigma = 0.1;
  std::uint64_t seed = 0;
  bool guaranteed_margin = true;

  enum class LabelMode { none, real, fake, mixed };
  LabelMode labels = LabelMode::mixed;
  double score_fake = 0.9;  // manipulated identity in fake videos
  double score_real = 0.1;  // everything else

  // Frame numbering via uniform sampling when total_frames > 0; otherwise
  // frames are simply 0..n_frames-1.
  std::uint64_t total_frames = 0;
  double source_fps = 30.0;
  double target_rate = 4.0;

  double bbox_factor = 1.3;
  double frame_w = 256.0;
  double frame_h = 256.0;
};

struct SynthBatch {
  ManifestHeader header;
  std::vector<FaceRecord> records;
  std::vector<GroundTruth> truths;  // one per video, sorted by id
};

SynthBatch run_synth(const SynthOptions& options);

}  // namespace facegraph
