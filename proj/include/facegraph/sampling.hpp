#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "facegraph/model.hpp"

namespace facegraph {

struct FramePlan {
  std::vector<std::uint32_t> frame_indices;  // strictly increasing
  double source_fps = 0.0;
  double target_rate = 0.0;
};

// Uniform frame sampling: index k of the plan maps to source frame
// round(k * source_fps / target_rate), round-half-up, clipped to
// [0, total_frames) and deduplicated. target_rate >= source_fps selects
// every frame.
FramePlan plan_frames(std::uint64_t total_frames, double source_fps,
                      double target_rate);

// Scales the box about its center by `factor` (>= 1), then clamps to
// [0, frame_w] x [0, frame_h].
BBox expand_bbox(const BBox& b, double factor, double frame_w, double frame_h);

// Per-(video, epoch) sampling seed:
// splitmix64(splitmix64(global_seed ^ fnv1a64(video_id)) ^ epoch).
std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view video_id,
                          std::uint64_t epoch);

constexpr std::size_t kRealFaceQuota = 16;
constexpr std::size_t kFakeFaceQuota = 4;

// Uniform subset without replacement of size min(quota, |available|) where
// the quota is 16 faces for real videos (label 0) and 4 for fake ones
// (label 1). Selection is a partial Fisher-Yates shuffle driven by the
// documented Rng, so fixed seeds reproduce across platforms. The chosen
// ids are returned in their original order.
std::vector<RecordKey> plan_balanced_faces(int video_label,
                                           const std::vector<RecordKey>& available,
                                           std::uint64_t seed);

}  // namespace facegraph
