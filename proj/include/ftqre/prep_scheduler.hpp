#pragma once

#include <algorithm>
#include <set>
#include <vector>

#include "ftqre/graph_compiler.hpp"

namespace ftqre {

// One multi-product Pauli measurement: a star centre plus the leaves whose
// edges it prepares.
struct PrepTuple {
  int center = 0;
  std::vector<int> leaves;
  int d_max = 0;  // max position distance within the tuple
  bool operator==(const PrepTuple&) const = default;

  int lo() const { return std::min(center, *std::min_element(leaves.begin(), leaves.end())); }
  int hi() const { return std::max(center, *std::max_element(leaves.begin(), leaves.end())); }
};

struct PrepSchedule {
  std::vector<std::vector<PrepTuple>> steps;
  bool operator==(const PrepSchedule&) const = default;
  long long length() const { return static_cast<long long>(steps.size()); }
};

inline constexpr int kDefaultFanout = 4;

// Greedy scheduler. Node positions are their indices. Each sub-step scans
// centres in index order and takes the star of unprepared edges at that
// centre (capped at `fanout` leaves) when its bus interval is free.
inline PrepSchedule schedule_preparation(int n_nodes, const std::vector<std::pair<int, int>>& edges,
                                         int fanout = kDefaultFanout) {
  if (fanout < 1) throw validation_error("schedule_preparation: fan-out must be >= 1");
  std::vector<std::set<int>> open(n_nodes);
  size_t remaining = 0;
  for (auto [a, b] : edges) {
    if (a == b) throw validation_error("schedule_preparation: self edge");
    if (open[a].insert(b).second) {
      open[b].insert(a);
      ++remaining;
    }
  }
  PrepSchedule out;
  while (remaining > 0) {
    std::vector<PrepTuple> step;
    std::vector<std::pair<int, int>> used;  // occupied intervals
    for (int c = 0; c < n_nodes; ++c) {
      if (open[c].empty()) continue;
      PrepTuple t;
      t.center = c;
      for (int v : open[c]) {
        if (static_cast<int>(t.leaves.size()) == fanout) break;
        t.leaves.push_back(v);
      }
      int lo = t.lo(), hi = t.hi();
      bool clash = false;
      for (auto [a, b] : used)
        if (lo <= b && a <= hi) clash = true;
      if (clash) continue;
      used.push_back({lo, hi});
      t.d_max = hi - lo;
      for (int v : t.leaves) {
        open[c].erase(v);
        open[v].erase(c);
        --remaining;
      }
      step.push_back(std::move(t));
    }
    out.steps.push_back(std::move(step));
  }
  return out;
}

inline PrepSchedule schedule_preparation(const GraphState& g, int fanout = kDefaultFanout) {
  return schedule_preparation(g.n_nodes, g.edges, fanout);
}

}  // namespace ftqre
