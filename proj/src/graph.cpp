#include "facegraph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace facegraph {

DisjointSet::DisjointSet(std::size_t n)
    : parent_(n), size_(n, 1), sets_(n) {
  std::iota(parent_.begin(), parent_.end(), 0u);
}

std::size_t DisjointSet::find(std::size_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];  // halve the path
    x = parent_[x];
  }
  return x;
}

void DisjointSet::unite(std::size_t a, std::size_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return;
  if (size_[a] < size_[b]) std::swap(a, b);
  parent_[b] = static_cast<std::uint32_t>(a);
  size_[a] += size_[b];
  --sets_;
}

double similarity(const Embedding& a, const Embedding& b) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatchError("embedding lengths differ: " +
                                 std::to_string(a.dim()) + " vs " +
                                 std::to_string(b.dim()));
  }
  double dot = 0.0;
  for (std::size_t k = 0; k < a.values.size(); ++k) {
    dot += a.values[k] * b.values[k];
  }
  return dot;
}

FaceGraph build_face_graph(const VideoGroup& group, SimilarityThreshold theta) {
  FaceGraph graph;
  const std::size_t n = group.records.size();
  graph.node_ids.reserve(n);
  for (const auto& rec : group.records) {
    if (!rec.embedding) {
      throw MissingEmbeddingError(
          "record (" + group.video_id + ", " +
          std::to_string(rec.frame_index) + ", " +
          std::to_string(rec.face_index) + ") has no embedding");
    }
    graph.node_ids.push_back(rec.key());
  }

  // Pair space walked in blocks for cache locality; the edge set is a pure
  // function of the similarity values, so blocking cannot change it.
  constexpr std::size_t kBlock = 64;
  for (std::size_t ib = 0; ib < n; ib += kBlock) {
    const std::size_t iend = std::min(ib + kBlock, n);
    for (std::size_t jb = ib; jb < n; jb += kBlock) {
      const std::size_t jend = std::min(jb + kBlock, n);
      for (std::size_t i = ib; i < iend; ++i) {
        const Embedding& ei = *group.records[i].embedding;
        for (std::size_t j = std::max(jb, i + 1); j < jend; ++j) {
          if (similarity(ei, *group.records[j].embedding) > theta.theta) {
            graph.edges.emplace_back(static_cast<std::uint32_t>(i),
                                     static_cast<std::uint32_t>(j));
          }
        }
      }
    }
  }
  std::sort(graph.edges.begin(), graph.edges.end());
  return graph;
}

std::vector<Component> connected_components(const FaceGraph& graph) {
  const std::size_t n = graph.node_count();
  DisjointSet ds(n);
  for (const auto& [i, j] : graph.edges) ds.unite(i, j);

  std::map<std::size_t, std::vector<RecordKey>> by_root;
  for (std::size_t i = 0; i < n; ++i) {
    by_root[ds.find(i)].push_back(graph.node_ids[i]);
  }
  std::vector<Component> components;
  components.reserve(by_root.size());
  for (auto& [root, members] : by_root) {
    std::sort(members.begin(), members.end());
    components.push_back(Component{std::move(members), true});
  }
  std::sort(components.begin(), components.end(),
            [](const Component& a, const Component& b) {
              if (a.size() != b.size()) return a.size() > b.size();
              return a.members.front() < b.members.front();
            });
  return components;
}

ComponentSet prune_components(std::vector<Component> components,
                              std::uint32_t n_f, SizeFraction frac) {
  ComponentSet set;
  set.n_f = n_f;
  set.size_fraction = frac;
  set.theta = std::numeric_limits<double>::quiet_NaN();
  for (auto& c : components) {
    const std::uint64_t lhs =
        static_cast<std::uint64_t>(c.size()) * frac.denominator;
    const std::uint64_t rhs =
        static_cast<std::uint64_t>(n_f) * frac.numerator;
    c.kept = lhs > rhs;
  }
  set.components = std::move(components);
  return set;
}

ComponentSet clean_video(const VideoGroup& group, SimilarityThreshold theta,
                         SizeFraction frac) {
  FaceGraph graph = build_face_graph(group, theta);
  ComponentSet set =
      prune_components(connected_components(graph), group.n_f, frac);
  set.video_id = group.video_id;
  set.theta = theta.theta;
  return set;
}

}  // namespace facegraph
