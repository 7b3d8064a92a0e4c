// facegraph: face-graph dataset cleaning and video-level score aggregation.
//
// Subcommands: clean, aggregate, evaluate, sweep, synth. Data goes to files
// or stdout ("-"); diagnostics go to stderr. Exit codes: 0 success, 2 input
// format errors, 3 missing/inconsistent data, 1 anything else.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "facegraph/manifest.hpp"
#include "facegraph/pipeline.hpp"
#include "facegraph/synth.hpp"

namespace {

using namespace facegraph;

struct Output {
  explicit Output(const std::string& path) {
    if (path != "-") {
      file.emplace(path, std::ios::binary);
      if (!*file) throw IoError("cannot open '" + path + "' for writing");
    }
  }
  std::ostream& stream() { return file ? *file : std::cout; }
  std::optional<std::ofstream> file;
};

struct Input {
  explicit Input(const std::string& path) {
    if (path != "-") {
      file.emplace(path, std::ios::binary);
      if (!*file) throw IoError("cannot open '" + path + "' for reading");
    }
  }
  std::istream& stream() { return file ? *file : std::cin; }
  std::optional<std::ifstream> file;
};

std::vector<double> parse_theta_list(const std::string& text) {
  std::vector<double> thetas;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      thetas.push_back(std::stod(item));
    } catch (const std::logic_error&) {
      throw Error("cannot parse theta '" + item + "'");
    }
    if (thetas.back() < -1.0 || thetas.back() > 1.0) {
      throw Error("theta must lie in [-1, 1]");
    }
  }
  if (thetas.empty()) throw Error("empty theta list");
  return thetas;
}

std::vector<SizeFraction> parse_frac_list(const std::string& text) {
  std::vector<SizeFraction> fracs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    fracs.push_back(parse_size_fraction(item));
  }
  if (fracs.empty()) throw Error("empty size-fraction list");
  return fracs;
}

int cmd_clean(const std::string& in_path, const std::string& out_path,
              const RunConfig& config) {
  Input in(in_path);
  Output out(out_path);
  const auto summaries = run_clean(in.stream(), out.stream(), config);
  for (const auto& s : summaries) {
    std::cerr << s.video_id << " K=" << s.n_records << " N_F=" << s.n_f
              << " kept=" << s.components_kept
              << " pruned=" << s.components_pruned << '\n';
  }
  return 0;
}

int cmd_aggregate(const std::string& in_path, const std::string& out_path,
                  const RunConfig& config) {
  Input in(in_path);
  const auto verdicts = run_aggregate(in.stream(), config);
  Output out(out_path);
  write_verdict_csv(verdicts, out.stream());
  return 0;
}

int cmd_evaluate(const std::string& verdicts_path,
                 const std::string& labels_path, const std::string& out_path,
                 const std::optional<std::string>& scheme_name) {
  std::vector<VideoVerdict> verdicts;
  {
    Input in(verdicts_path);
    verdicts = read_verdict_csv(in.stream());
  }
  if (scheme_name) {
    const auto scheme = parse_scheme(*scheme_name);
    std::erase_if(verdicts,
                  [&](const VideoVerdict& v) { return v.scheme != scheme; });
  }
  std::map<std::string, int> labels;
  {
    Input in(labels_path);
    labels = labels_from_manifest(in.stream());
  }
  const MetricsReport report = run_evaluate(verdicts, labels);
  Output out(out_path);
  out.stream() << metrics_report_json(report) << '\n';
  return 0;
}

int cmd_sweep(const std::string& in_path, const std::string& out_path,
              const std::string& thetas_text, const std::string& fracs_text,
              const RunConfig& config) {
  const auto thetas = parse_theta_list(thetas_text);
  const auto fracs = parse_frac_list(fracs_text);
  std::vector<VideoGroup> groups;
  std::map<std::string, int> labels;
  {
    Input in(in_path);
    ManifestReader reader(in.stream());
    VideoGrouper grouper;
    while (auto rec = reader.next()) {
      if (rec->video_label) {
        const auto [it, inserted] =
            labels.emplace(rec->video_id, *rec->video_label);
        if (!inserted && it->second != *rec->video_label) {
          throw JoinError("conflicting labels for video '" + rec->video_id +
                          "'");
        }
      }
      grouper.push(std::move(*rec));
    }
    groups = grouper.finish();
  }
  const auto cells = run_sweep(groups, labels, thetas, fracs, config);
  Output out(out_path);
  write_sweep_csv(cells, out.stream());
  return 0;
}

int cmd_synth(const SynthOptions& options, const std::string& out_path,
              std::string truth_path) {
  const SynthBatch batch = run_synth(options);
  {
    Output out(out_path);
    write_manifest(batch.header, batch.records, out.stream());
  }
  if (truth_path.empty() && out_path != "-") {
    truth_path = out_path + ".truth";
  }
  if (!truth_path.empty()) {
    Output out(truth_path);
    for (const auto& truth : batch.truths) write_truth(truth, out.stream());
  }
  std::cerr << "generated " << batch.records.size() << " records across "
            << batch.truths.size() << " videos\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Embedding-similarity face-graph cleaning and video-level "
               "prediction aggregation"};
  app.require_subcommand(1);

  RunConfig config;
  std::string theta_text = "0.8";
  std::string frac_text = "1/2";
  std::string scheme_text = "face";

  std::string in_path = "-";
  std::string out_path = "-";
  std::string labels_path;
  std::optional<std::string> eval_scheme;
  std::string thetas_text = "0.7,0.8,0.9";
  std::string fracs_text = "1/4,1/2,3/4";

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", config.seed, "Random seed")
        ->envname("FACEGRAPH_SEED");
    cmd->add_option("--jobs", config.jobs,
                    "Worker threads (0 = all available)");
  };

  auto* clean = app.add_subcommand(
      "clean", "Annotate a manifest with face-graph components");
  clean->add_option("input", in_path, "Input manifest (- for stdin)");
  clean->add_option("-o,--output", out_path, "Output manifest (- for stdout)");
  clean->add_option("--theta", theta_text, "Similarity threshold");
  clean->add_option("--size-frac", frac_text,
                    "Component size threshold as a fraction of N_F");
  add_common(clean);

  auto* aggregate = app.add_subcommand(
      "aggregate", "Collapse per-face scores into per-video verdicts");
  aggregate->add_option("input", in_path, "Cleaned manifest (- for stdin)");
  aggregate->add_option("-o,--output", out_path, "Verdict CSV (- for stdout)");
  aggregate->add_option("--scheme", scheme_text,
                        "avg, median, max, face, or all");
  aggregate->add_flag("--no-clean", config.no_clean,
                      "Ignore annotations; aggregate over all records");
  add_common(aggregate);

  auto* evaluate = app.add_subcommand(
      "evaluate", "Score verdicts against labels (log loss, accuracy, F1)");
  evaluate->add_option("verdicts", in_path, "Verdict CSV (- for stdin)");
  evaluate->add_option("--labels", labels_path, "Manifest carrying labels")
      ->required();
  evaluate->add_option("-o,--output", out_path, "Metrics JSON (- for stdout)");
  evaluate->add_option("--scheme", eval_scheme,
                       "Evaluate only this scheme's verdicts");

  auto* sweep = app.add_subcommand(
      "sweep", "Grid of clean->aggregate->evaluate runs");
  sweep->add_option("input", in_path, "Manifest with embeddings+scores+labels");
  sweep->add_option("-o,--output", out_path, "Grid CSV (- for stdout)");
  sweep->add_option("--thetas", thetas_text, "Comma-separated thresholds");
  sweep->add_option("--fracs", fracs_text, "Comma-separated size fractions");
  sweep->add_option("--scheme", scheme_text, "Aggregation scheme");
  add_common(sweep);

  SynthOptions synth_options;
  std::string truth_path;
  std::string fp_mode_text = "scattered";
  std::string label_mode_text = "mixed";
  auto* synth = app.add_subcommand(
      "synth", "Generate a synthetic manifest with ground-truth sidecar");
  synth->add_option("-o,--output", out_path, "Output manifest (- for stdout)");
  synth->add_option("--truth", truth_path,
                    "Ground-truth sidecar path (default: <output>.truth)");
  synth->add_option("--n-videos", synth_options.n_videos, "Videos to generate");
  synth->add_option("--frames", synth_options.n_frames, "Frames per video");
  synth->add_option("--dim", synth_options.dim, "Embedding dimension");
  synth->add_option("--identities", synth_options.identities,
                    "Identities per video");
  synth->add_option("--presence", synth_options.presence,
                    "Fraction of frames each identity appears in");
  synth->add_option("--false-positives", synth_options.false_positives,
                    "False-positive tracks per video");
  synth->add_option("--fp-mode", fp_mode_text, "scattered or persistent");
  synth->add_option("--fp-occurrences", synth_options.fp_occurrences,
                    "Frames per scattered false positive");
  synth->add_option("--sigma", synth_options.noise_sigma,
                    "Perturbation norm around each identity mean");
  bool no_margin = false;
  synth->add_flag("--no-margin", no_margin,
                  "Skip the similarity-margin guarantee");
  synth->add_option("--label", label_mode_text, "none, real, fake, or mixed");
  synth->add_option("--score-fake", synth_options.score_fake,
                    "Score of the manipulated identity in fake videos");
  synth->add_option("--score-real", synth_options.score_real,
                    "Score of unmanipulated identities");
  synth->add_option("--total-frames", synth_options.total_frames,
                    "Source frame count; enables uniform frame sampling");
  synth->add_option("--fps-source", synth_options.source_fps,
                    "Source video frame rate");
  synth->add_option("--rate", synth_options.target_rate,
                    "Sampling rate in frames/second");
  synth->add_option("--bbox-factor", synth_options.bbox_factor,
                    "Bounding-box expansion factor");
  synth->add_option("--seed", synth_options.seed, "Random seed")
      ->envname("FACEGRAPH_SEED");

  CLI11_PARSE(app, argc, argv);

  try {
    config.theta = SimilarityThreshold{[&] {
      try {
        const double t = std::stod(theta_text);
        if (t < -1.0 || t > 1.0) throw Error("theta must lie in [-1, 1]");
        return t;
      } catch (const std::logic_error&) {
        throw Error("cannot parse theta '" + theta_text + "'");
      }
    }()};
    config.size_fraction = parse_size_fraction(frac_text);
    if (scheme_text == "all") {
      config.all_schemes = true;
    } else {
      config.scheme = parse_scheme(scheme_text);
    }

    if (clean->parsed()) return cmd_clean(in_path, out_path, config);
    if (aggregate->parsed()) return cmd_aggregate(in_path, out_path, config);
    if (evaluate->parsed()) {
      return cmd_evaluate(in_path, labels_path, out_path, eval_scheme);
    }
    if (sweep->parsed()) {
      return cmd_sweep(in_path, out_path, thetas_text, fracs_text, config);
    }
    if (synth->parsed()) {
      if (fp_mode_text == "scattered") {
        synth_options.fp_mode = FpMode::scattered;
      } else if (fp_mode_text == "persistent") {
        synth_options.fp_mode = FpMode::persistent;
      } else {
        throw Error("fp-mode must be scattered or persistent");
      }
      if (label_mode_text == "none") {
        synth_options.labels = SynthOptions::LabelMode::none;
      } else if (label_mode_text == "real") {
        synth_options.labels = SynthOptions::LabelMode::real;
      } else if (label_mode_text == "fake") {
        synth_options.labels = SynthOptions::LabelMode::fake;
      } else if (label_mode_text == "mixed") {
        synth_options.labels = SynthOptions::LabelMode::mixed;
      } else {
        throw Error("label must be none, real, fake, or mixed");
      }
      synth_options.guaranteed_margin = !no_margin;
      return cmd_synth(synth_options, out_path, truth_path);
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const DimensionMismatchError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const DuplicateRecordError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const UnsortedInputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const MissingEmbeddingError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const MissingScoreError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const JoinError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const EmptyInputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
