#pragma once

#include <map>
#include <vector>

#include "facegraph/model.hpp"

namespace facegraph {

// Collapses the per-face scores of one video into a single verdict. Only
// records in kept components contribute:
//   avg    - arithmetic mean of kept scores
//   median - median of kept scores (even counts: midpoint of central pair)
//   max    - maximum kept score
//   face   - mean per kept component, then the maximum of those means
// With zero kept records the verdict defaults to 0.5 for every scheme.
// Throws MissingScoreError when a kept record has no score.
VideoVerdict aggregate(const ComponentSet& set,
                       const std::map<RecordKey, double>& scores,
                       AggregationScheme scheme);

// All four schemes in enum order.
std::vector<VideoVerdict> aggregate_all_schemes(
    const ComponentSet& set, const std::map<RecordKey, double>& scores);

// A ComponentSet placing every record in one kept pseudo-component, which
// makes aggregate() reproduce the no-cleaning baseline pipeline.
ComponentSet baseline_component_set(const VideoGroup& group);

}  // namespace facegraph
