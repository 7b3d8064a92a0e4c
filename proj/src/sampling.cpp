#include "facegraph/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "facegraph/rng.hpp"

namespace facegraph {

FramePlan plan_frames(std::uint64_t total_frames, double source_fps,
                      double target_rate) {
  FramePlan plan;
  plan.source_fps = source_fps;
  plan.target_rate = target_rate;
  if (total_frames == 0) return plan;

  const double step = source_fps / target_rate;
  for (std::uint64_t k = 0;; ++k) {
    const double idx = std::floor(static_cast<double>(k) * step + 0.5);
    if (idx >= static_cast<double>(total_frames)) break;
    const auto frame = static_cast<std::uint32_t>(idx);
    if (plan.frame_indices.empty() || plan.frame_indices.back() != frame) {
      plan.frame_indices.push_back(frame);
    }
  }
  return plan;
}

BBox expand_bbox(const BBox& b, double factor, double frame_w,
                 double frame_h) {
  const double cx = 0.5 * (b.x0 + b.x1);
  const double cy = 0.5 * (b.y0 + b.y1);
  const double hw = 0.5 * b.width() * factor;
  const double hh = 0.5 * b.height() * factor;
  BBox out;
  out.x0 = std::max(0.0, cx - hw);
  out.y0 = std::max(0.0, cy - hh);
  out.x1 = std::min(frame_w, cx + hw);
  out.y1 = std::min(frame_h, cy + hh);
  return out;
}

std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view video_id,
                          std::uint64_t epoch) {
  return splitmix64(splitmix64(global_seed ^ fnv1a64(video_id)) ^ epoch);
}

std::vector<RecordKey> plan_balanced_faces(
    int video_label, const std::vector<RecordKey>& available,
    std::uint64_t seed) {
  const std::size_t quota =
      video_label == 1 ? kFakeFaceQuota : kRealFaceQuota;
  const std::size_t take = std::min(quota, available.size());

  std::vector<std::size_t> order(available.size());
  std::iota(order.begin(), order.end(), 0u);
  Rng rng(seed);
  for (std::size_t i = 0; i < take; ++i) {
    const std::size_t j = i + rng.bounded(order.size() - i);
    std::swap(order[i], order[j]);
  }
  std::vector<std::size_t> picked(order.begin(), order.begin() + take);
  std::sort(picked.begin(), picked.end());

  std::vector<RecordKey> result;
  result.reserve(take);
  for (std::size_t i : picked) result.push_back(available[i]);
  return result;
}

}  // namespace facegraph
