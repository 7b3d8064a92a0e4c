#include "facegraph/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "facegraph/errors.hpp"

namespace facegraph {

namespace {

constexpr double kClip = 1e-15;

// -1 encodes "no decision" (score exactly 0.5); it never matches a label
// and never counts as a prediction of either class.
int predicted_class(double score) {
  if (score > 0.5) return 1;
  if (score < 0.5) return 0;
  return -1;
}

}  // namespace

double log_loss(const std::vector<LabeledVerdict>& items) {
  if (items.empty()) throw EmptyInputError();
  double sum = 0.0;
  for (const auto& item : items) {
    const double p = std::clamp(item.score, kClip, 1.0 - kClip);
    sum += item.label == 1 ? std::log(p) : std::log(1.0 - p);
  }
  return -sum / static_cast<double>(items.size());
}

double accuracy(const std::vector<LabeledVerdict>& items) {
  if (items.empty()) throw EmptyInputError();
  std::size_t correct = 0;
  for (const auto& item : items) {
    if (predicted_class(item.score) == item.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(items.size());
}

double macro_f1(const std::vector<LabeledVerdict>& items) {
  if (items.empty()) throw EmptyInputError();
  double f1_sum = 0.0;
  for (int cls : {0, 1}) {
    std::size_t tp = 0, fp = 0, fn = 0;
    for (const auto& item : items) {
      const bool predicted = predicted_class(item.score) == cls;
      const bool actual = item.label == cls;
      if (predicted && actual) ++tp;
      if (predicted && !actual) ++fp;
      if (!predicted && actual) ++fn;
    }
    const double denom = static_cast<double>(2 * tp + fp + fn);
    f1_sum += denom > 0.0 ? 2.0 * static_cast<double>(tp) / denom : 0.0;
  }
  return f1_sum / 2.0;
}

MetricsReport evaluate_verdicts(const std::vector<LabeledVerdict>& items) {
  MetricsReport report;
  report.log_loss = log_loss(items);
  report.accuracy = accuracy(items);
  report.macro_f1 = macro_f1(items);
  report.n_videos = items.size();
  return report;
}

}  // namespace facegraph
