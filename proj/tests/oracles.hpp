// Test-only reference implementations, independent of the library's own
// algorithms: breadth-first-search connected components and partition
// normalization for comparing clusterings.
#pragma once

#include <cstdint>
#include <queue>
#include <set>
#include <utility>
#include <vector>

#include "facegraph/graph.hpp"
#include "facegraph/model.hpp"

namespace testing_oracles {

inline std::vector<std::vector<std::size_t>> bfs_components(
    std::size_t n,
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
  std::vector<std::vector<std::size_t>> adjacency(n);
  for (const auto& [i, j] : edges) {
    adjacency[i].push_back(j);
    adjacency[j].push_back(i);
  }
  std::vector<bool> visited(n, false);
  std::vector<std::vector<std::size_t>> components;
  for (std::size_t start = 0; start < n; ++start) {
    if (visited[start]) continue;
    std::vector<std::size_t> members;
    std::queue<std::size_t> frontier;
    frontier.push(start);
    visited[start] = true;
    while (!frontier.empty()) {
      const std::size_t u = frontier.front();
      frontier.pop();
      members.push_back(u);
      for (std::size_t v : adjacency[u]) {
        if (!visited[v]) {
          visited[v] = true;
          frontier.push(v);
        }
      }
    }
    components.push_back(std::move(members));
  }
  return components;
}

// Canonical form: a set of member-key sets, insensitive to ordering.
inline std::set<std::set<facegraph::RecordKey>> as_partition(
    const std::vector<facegraph::Component>& components) {
  std::set<std::set<facegraph::RecordKey>> partition;
  for (const auto& c : components) {
    partition.insert(
        std::set<facegraph::RecordKey>(c.members.begin(), c.members.end()));
  }
  return partition;
}

inline std::set<std::set<facegraph::RecordKey>> as_partition(
    const facegraph::FaceGraph& graph,
    const std::vector<std::vector<std::size_t>>& index_components) {
  std::set<std::set<facegraph::RecordKey>> partition;
  for (const auto& members : index_components) {
    std::set<facegraph::RecordKey> keys;
    for (std::size_t i : members) keys.insert(graph.node_ids[i]);
    partition.insert(std::move(keys));
  }
  return partition;
}

// True when every block of `fine` is contained in some block of `coarse`.
inline bool refines(const std::set<std::set<facegraph::RecordKey>>& fine,
                    const std::set<std::set<facegraph::RecordKey>>& coarse) {
  for (const auto& block : fine) {
    bool contained = false;
    for (const auto& super : coarse) {
      if (std::includes(super.begin(), super.end(), block.begin(),
                        block.end())) {
        contained = true;
        break;
      }
    }
    if (!contained) return false;
  }
  return true;
}

}  // namespace testing_oracles
