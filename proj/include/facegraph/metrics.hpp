#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace facegraph {

struct LabeledVerdict {
  std::string video_id;
  double score = 0.5;  // fake probability, in [0,1]
  int label = 0;       // 0 = real, 1 = fake
};

// Binary cross-entropy -(1/n) * sum[y ln p + (1-y) ln(1-p)], with p clipped
// to [1e-15, 1 - 1e-15] before the logs so a confident wrong answer stays
// finite. Throws EmptyInputError on an empty list.
double log_loss(const std::vector<LabeledVerdict>& items);

// Fraction of items whose predicted class matches the label. Predicted class
// is fake iff score > 0.5 and real iff score < 0.5; a score of exactly 0.5
// conveys no decision and counts as incorrect for both classes.
double accuracy(const std::vector<LabeledVerdict>& items);

// Mean of per-class F1 over classes {0, 1}. A class with precision + recall
// of zero (or absent from both predictions and labels) contributes F1 = 0.
// Scores of exactly 0.5 predict neither class, as in accuracy().
double macro_f1(const std::vector<LabeledVerdict>& items);

struct MetricsReport {
  double log_loss = 0.0;
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  std::size_t n_videos = 0;
};

MetricsReport evaluate_verdicts(const std::vector<LabeledVerdict>& items);

}  // namespace facegraph
