#include "facegraph/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <functional>
#include <istream>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <thread>

#include "facegraph/aggregate.hpp"
#include "facegraph/graph.hpp"
#include "facegraph/sampling.hpp"

namespace facegraph {

namespace {

// Runs fn(0..n) on up to `jobs` workers. Items are claimed through an
// atomic counter and results are stored by index, so pool size never
// changes the output.
void parallel_for(std::size_t n, unsigned jobs,
                  const std::function<void(std::size_t)>& fn) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  const auto workers = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::map<RecordKey, double> collect_scores(const VideoGroup& group) {
  std::map<RecordKey, double> scores;
  for (const auto& rec : group.records) {
    if (rec.score) scores[rec.key()] = *rec.score;
  }
  return scores;
}

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::uint32_t count_distinct_frames(const std::vector<RecordKey>& keys) {
  std::set<std::uint32_t> frames;
  for (const auto& key : keys) frames.insert(key.frame);
  return static_cast<std::uint32_t>(frames.size());
}

void append_label(std::map<std::string, int>& labels, const FaceRecord& rec) {
  if (!rec.video_label) return;
  const auto [it, inserted] = labels.emplace(rec.video_id, *rec.video_label);
  if (!inserted && it->second != *rec.video_label) {
    throw JoinError("conflicting labels for video '" + rec.video_id + "'");
  }
}

std::vector<LabeledVerdict> join_labels(
    const std::vector<VideoVerdict>& verdicts,
    const std::map<std::string, int>& labels) {
  std::vector<LabeledVerdict> items;
  items.reserve(verdicts.size());
  for (const auto& v : verdicts) {
    const auto it = labels.find(v.video_id);
    if (it == labels.end()) {
      throw JoinError("no label for video '" + v.video_id + "'");
    }
    items.push_back({v.video_id, v.score, it->second});
  }
  return items;
}

}  // namespace

std::vector<CleanSummary> run_clean(std::istream& in, std::ostream& out,
                                    const RunConfig& config) {
  ManifestReader reader(in);
  VideoGrouper grouper;
  while (auto rec = reader.next()) grouper.push(std::move(*rec));
  std::vector<VideoGroup> groups = grouper.finish();

  std::vector<ComponentSet> sets(groups.size());
  parallel_for(groups.size(), config.jobs, [&](std::size_t i) {
    sets[i] = clean_video(groups[i], config.theta, config.size_fraction);
  });

  ManifestWriter writer(out, reader.header());
  std::vector<CleanSummary> summaries;
  summaries.reserve(groups.size());
  for (std::size_t i = 0; i < groups.size(); ++i) {
    std::map<RecordKey, std::pair<int, bool>> annotation;
    for (std::size_t c = 0; c < sets[i].components.size(); ++c) {
      for (const auto& key : sets[i].components[c].members) {
        annotation[key] = {static_cast<int>(c), sets[i].components[c].kept};
      }
    }
    for (auto rec : groups[i].records) {
      const auto& [component, kept] = annotation.at(rec.key());
      rec.component_id = component;
      rec.kept = kept;
      writer.write(rec);
    }
    CleanSummary summary;
    summary.video_id = groups[i].video_id;
    summary.n_records = groups[i].records.size();
    summary.n_f = groups[i].n_f;
    summary.components_kept = sets[i].kept_count();
    summary.components_pruned = sets[i].components.size() - summary.components_kept;
    summaries.push_back(std::move(summary));
  }
  return summaries;
}

namespace {

struct AnnotatedRow {
  RecordKey key;
  std::optional<double> score;
  std::optional<int> component;
  std::optional<bool> kept;
  std::size_t line_no = 0;
};

// Rebuilds a ComponentSet from the component/kept annotations written by
// clean. theta is unknowable here and stays NaN.
ComponentSet component_set_from_annotations(
    const std::string& video_id, const std::vector<AnnotatedRow>& rows) {
  std::map<int, Component> by_id;
  for (const auto& row : rows) {
    if (!row.component || !row.kept) {
      throw ParseError(row.line_no,
                       "row lacks component/kept annotations (run clean "
                       "first or pass --no-clean)");
    }
    auto [it, inserted] = by_id.try_emplace(*row.component);
    Component& component = it->second;
    if (inserted) {
      component.kept = *row.kept;
    } else if (component.kept != *row.kept) {
      throw ParseError(row.line_no,
                       "inconsistent kept flag for component " +
                           std::to_string(*row.component));
    }
    component.members.push_back(row.key);
  }
  ComponentSet set;
  set.video_id = video_id;
  set.theta = std::numeric_limits<double>::quiet_NaN();
  std::vector<RecordKey> all_keys;
  for (auto& [id, component] : by_id) {
    std::sort(component.members.begin(), component.members.end());
    all_keys.insert(all_keys.end(), component.members.begin(),
                    component.members.end());
    set.components.push_back(std::move(component));
  }
  set.n_f = count_distinct_frames(all_keys);
  return set;
}

ComponentSet all_kept_component_set(const std::string& video_id,
                                    const std::vector<AnnotatedRow>& rows) {
  ComponentSet set;
  set.video_id = video_id;
  set.theta = std::numeric_limits<double>::quiet_NaN();
  Component all;
  all.kept = true;
  for (const auto& row : rows) all.members.push_back(row.key);
  std::sort(all.members.begin(), all.members.end());
  set.n_f = count_distinct_frames(all.members);
  if (!all.members.empty()) set.components.push_back(std::move(all));
  return set;
}

}  // namespace

std::vector<VideoVerdict> run_aggregate(std::istream& in,
                                        const RunConfig& config) {
  ManifestReader reader(in);
  std::map<std::string, std::vector<AnnotatedRow>> videos;
  std::size_t line_no = 1;
  while (auto rec = reader.next()) {
    ++line_no;
    AnnotatedRow row;
    row.key = rec->key();
    row.score = rec->score;
    row.component = rec->component_id;
    row.kept = rec->kept;
    row.line_no = line_no;
    auto& rows = videos[rec->video_id];
    rows.push_back(row);
  }

  std::vector<VideoVerdict> verdicts;
  for (const auto& [video_id, rows] : videos) {
    std::set<RecordKey> seen;
    std::map<RecordKey, double> scores;
    for (const auto& row : rows) {
      if (!seen.insert(row.key).second) {
        throw DuplicateRecordError(
            "duplicate record (" + video_id + ", " +
            std::to_string(row.key.frame) + ", " +
            std::to_string(row.key.face) + ")");
      }
      if (row.score) scores[row.key] = *row.score;
    }
    const ComponentSet set =
        config.no_clean ? all_kept_component_set(video_id, rows)
                        : component_set_from_annotations(video_id, rows);
    if (config.all_schemes) {
      for (auto& v : aggregate_all_schemes(set, scores)) {
        verdicts.push_back(std::move(v));
      }
    } else {
      verdicts.push_back(aggregate(set, scores, config.scheme));
    }
  }
  return verdicts;
}

std::map<std::string, int> labels_from_manifest(std::istream& in) {
  ManifestReader reader(in);
  std::map<std::string, int> labels;
  while (auto rec = reader.next()) append_label(labels, *rec);
  return labels;
}

MetricsReport run_evaluate(const std::vector<VideoVerdict>& verdicts,
                           const std::map<std::string, int>& labels) {
  for (const auto& v : verdicts) {
    if (v.scheme != verdicts.front().scheme) {
      throw Error("verdicts mix aggregation schemes; filter by scheme first");
    }
  }
  return evaluate_verdicts(join_labels(verdicts, labels));
}

std::string run_end_to_end(std::istream& manifest, const RunConfig& config) {
  ManifestReader reader(manifest);
  VideoGrouper grouper;
  std::map<std::string, int> labels;
  while (auto rec = reader.next()) {
    append_label(labels, *rec);
    grouper.push(std::move(*rec));
  }
  std::vector<VideoGroup> groups = grouper.finish();

  std::vector<VideoVerdict> verdicts(groups.size());
  parallel_for(groups.size(), config.jobs, [&](std::size_t i) {
    const ComponentSet set =
        config.no_clean
            ? baseline_component_set(groups[i])
            : clean_video(groups[i], config.theta, config.size_fraction);
    verdicts[i] = aggregate(set, collect_scores(groups[i]), config.scheme);
  });
  return metrics_report_json(run_evaluate(verdicts, labels));
}

std::vector<SweepCell> run_sweep(const std::vector<VideoGroup>& groups,
                                 const std::map<std::string, int>& labels,
                                 const std::vector<double>& thetas,
                                 const std::vector<SizeFraction>& fracs,
                                 const RunConfig& config) {
  std::vector<std::map<RecordKey, double>> scores(groups.size());
  for (std::size_t i = 0; i < groups.size(); ++i) {
    scores[i] = collect_scores(groups[i]);
  }

  std::vector<SweepCell> cells;
  for (double theta : thetas) {
    // Components depend on theta only; each frac cell just re-prunes.
    std::vector<std::vector<Component>> components(groups.size());
    parallel_for(groups.size(), config.jobs, [&](std::size_t i) {
      components[i] = connected_components(
          build_face_graph(groups[i], SimilarityThreshold{theta}));
    });
    for (const auto& frac : fracs) {
      std::vector<VideoVerdict> verdicts(groups.size());
      parallel_for(groups.size(), config.jobs, [&](std::size_t i) {
        ComponentSet set =
            prune_components(components[i], groups[i].n_f, frac);
        set.video_id = groups[i].video_id;
        set.theta = theta;
        verdicts[i] = aggregate(set, scores[i], config.scheme);
      });
      SweepCell cell;
      cell.theta = theta;
      cell.size_fraction = frac;
      cell.report = run_evaluate(verdicts, labels);
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

void write_sweep_csv(const std::vector<SweepCell>& cells, std::ostream& out) {
  out << "theta,size_frac,log_loss,accuracy,macro_f1,n_videos\n";
  for (const auto& cell : cells) {
    out << format_double(cell.theta) << ',' << to_string(cell.size_fraction)
        << ',' << format_double(cell.report.log_loss) << ','
        << format_double(cell.report.accuracy) << ','
        << format_double(cell.report.macro_f1) << ',' << cell.report.n_videos
        << '\n';
  }
  if (!out) throw IoError("write failed");
}

SynthBatch run_synth(const SynthOptions& options) {
  if (options.bbox_factor < 1.0) throw Error("bbox factor must be >= 1");

  std::optional<std::vector<std::uint32_t>> frame_numbers;
  std::uint32_t n_frames = options.n_frames;
  if (options.total_frames > 0) {
    FramePlan plan = plan_frames(options.total_frames, options.source_fps,
                                 options.target_rate);
    if (plan.frame_indices.empty()) {
      throw Error("frame plan selected no frames");
    }
    frame_numbers = plan.frame_indices;
    n_frames = static_cast<std::uint32_t>(plan.frame_indices.size());
  }

  SynthBatch batch;
  batch.header.embedding_dim = options.dim;
  for (std::size_t v = 0; v < options.n_videos; ++v) {
    std::string ordinal = std::to_string(v);
    ordinal.insert(0, ordinal.size() < 5 ? 5 - ordinal.size() : 0, '0');
    const std::string video_id = "synth-" + ordinal;

    std::optional<int> label;
    switch (options.labels) {
      case SynthOptions::LabelMode::none: break;
      case SynthOptions::LabelMode::real: label = 0; break;
      case SynthOptions::LabelMode::fake: label = 1; break;
      case SynthOptions::LabelMode::mixed: label = v % 2 == 0 ? 0 : 1; break;
    }

    ScenarioSpec spec;
    spec.video_id = video_id;
    spec.n_frames = n_frames;
    spec.frame_indices = frame_numbers;
    spec.dim = options.dim;
    spec.noise_sigma = options.noise_sigma;
    spec.seed = derive_seed(options.seed, video_id, 0);
    spec.guaranteed_margin = options.guaranteed_margin;
    spec.video_label = label;
    for (std::uint32_t k = 0; k < options.identities; ++k) {
      IdentitySpec identity;
      identity.presence = options.presence;
      // In fake videos the first identity is the manipulated face.
      const bool manipulated = label == 1 && k == 0;
      identity.score_dist = ScoreDist::constant(
          manipulated ? options.score_fake : options.score_real);
      spec.identities.push_back(identity);
    }
    spec.fp_spec.count = options.false_positives;
    spec.fp_spec.mode = options.fp_mode;
    spec.fp_spec.occurrences = options.fp_occurrences;
    spec.fp_spec.score_dist = ScoreDist::constant(0.5);

    Scenario scenario = generate(spec);
    for (auto& rec : scenario.records) {
      rec.bbox = expand_bbox(rec.bbox, options.bbox_factor, options.frame_w,
                             options.frame_h);
      batch.records.push_back(std::move(rec));
    }
    batch.truths.push_back(std::move(scenario.truth));
  }
  return batch;
}

}  // namespace facegraph
