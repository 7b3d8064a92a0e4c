#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "facegraph/model.hpp"

namespace facegraph {

// Face graph of one video: nodes are the group's records (same order), an
// undirected edge joins records whose embedding similarity exceeds the
// threshold used at build time. Edges are stored as (i, j) with i < j,
// sorted lexicographically.
struct FaceGraph {
  std::vector<RecordKey> node_ids;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;

  std::size_t node_count() const { return node_ids.size(); }
};

// Union-find with path compression and union by size.
class DisjointSet {
 public:
  explicit DisjointSet(std::size_t n);

  std::size_t find(std::size_t x);
  void unite(std::size_t a, std::size_t b);
  std::size_t set_count() const { return sets_; }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> size_;
  std::size_t sets_;
};

// Dot product of two same-length embeddings; a cosine in [-1, 1] once both
// sides are unit-norm. Symmetric by construction.
double similarity(const Embedding& a, const Embedding& b);

// Evaluates every unordered pair of records; an edge requires similarity
// strictly above theta, so ties at exactly theta stay disconnected. Faces
// from the same frame may be connected. Every record must carry an
// embedding.
FaceGraph build_face_graph(const VideoGroup& group, SimilarityThreshold theta);

// Connected components of the graph, each component's members sorted
// ascending; components ordered by descending size, then smallest member.
std::vector<Component> connected_components(const FaceGraph& graph);

// Flags each component pruned iff size <= n_f * frac, evaluated in exact
// integer arithmetic: size * frac.denominator <= n_f * frac.numerator.
// Nothing is deleted; pruned components keep their members. The returned
// set has no video_id/theta; clean_video fills those in.
ComponentSet prune_components(std::vector<Component> components,
                              std::uint32_t n_f, SizeFraction frac);

// Full pre-processing pipeline for one video:
// build_face_graph -> connected_components -> prune_components.
ComponentSet clean_video(const VideoGroup& group, SimilarityThreshold theta,
                         SizeFraction frac);

}  // namespace facegraph
