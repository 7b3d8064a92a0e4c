#include "facegraph/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace facegraph {

namespace {

double score_of(const ComponentSet& set,
                const std::map<RecordKey, double>& scores,
                const RecordKey& key) {
  const auto it = scores.find(key);
  if (it == scores.end()) {
    throw MissingScoreError("kept record (" + set.video_id + ", " +
                            std::to_string(key.frame) + ", " +
                            std::to_string(key.face) + ") has no score");
  }
  return it->second;
}

}  // namespace

VideoVerdict aggregate(const ComponentSet& set,
                       const std::map<RecordKey, double>& scores,
                       AggregationScheme scheme) {
  VideoVerdict verdict;
  verdict.video_id = set.video_id;
  verdict.scheme = scheme;

  if (set.kept_record_count() == 0) {
    verdict.score = 0.5;
    verdict.defaulted = true;
    return verdict;
  }

  switch (scheme) {
    case AggregationScheme::avg: {
      double sum = 0.0;
      std::size_t n = 0;
      for (const auto& c : set.components) {
        if (!c.kept) continue;
        for (const auto& key : c.members) {
          sum += score_of(set, scores, key);
          ++n;
        }
      }
      verdict.score = sum / static_cast<double>(n);
      break;
    }
    case AggregationScheme::median: {
      std::vector<double> values;
      for (const auto& c : set.components) {
        if (!c.kept) continue;
        for (const auto& key : c.members) {
          values.push_back(score_of(set, scores, key));
        }
      }
      std::sort(values.begin(), values.end());
      const std::size_t n = values.size();
      verdict.score = (n % 2 == 1)
                          ? values[n / 2]
                          : 0.5 * (values[n / 2 - 1] + values[n / 2]);
      break;
    }
    case AggregationScheme::max: {
      double best = -std::numeric_limits<double>::infinity();
      for (const auto& c : set.components) {
        if (!c.kept) continue;
        for (const auto& key : c.members) {
          best = std::max(best, score_of(set, scores, key));
        }
      }
      verdict.score = best;
      break;
    }
    case AggregationScheme::face: {
      // Mean per kept component, summed in member order so that a single
      // kept component yields exactly the avg result.
      double best = -std::numeric_limits<double>::infinity();
      for (const auto& c : set.components) {
        if (!c.kept) continue;
        double sum = 0.0;
        for (const auto& key : c.members) sum += score_of(set, scores, key);
        best = std::max(best, sum / static_cast<double>(c.size()));
      }
      verdict.score = best;
      break;
    }
  }
  return verdict;
}

std::vector<VideoVerdict> aggregate_all_schemes(
    const ComponentSet& set, const std::map<RecordKey, double>& scores) {
  std::vector<VideoVerdict> verdicts;
  for (auto scheme : {AggregationScheme::avg, AggregationScheme::median,
                      AggregationScheme::max, AggregationScheme::face}) {
    verdicts.push_back(aggregate(set, scores, scheme));
  }
  return verdicts;
}

ComponentSet baseline_component_set(const VideoGroup& group) {
  ComponentSet set;
  set.video_id = group.video_id;
  set.n_f = group.n_f;
  set.theta = std::numeric_limits<double>::quiet_NaN();
  if (!group.records.empty()) {
    Component all;
    all.members.reserve(group.records.size());
    for (const auto& rec : group.records) all.members.push_back(rec.key());
    all.kept = true;
    set.components.push_back(std::move(all));
  }
  return set;
}

}  // namespace facegraph
