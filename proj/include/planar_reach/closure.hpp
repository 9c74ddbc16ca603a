#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <vector>

#include "planar_reach/plane_graph.hpp"

namespace planar_reach {

// Reflexive-transitive closure as an n x n bit matrix, built by one DFS per
// vertex.  The reference oracle for differential tests; never part of the
// constant-time query path.
class ClosureOracle {
 public:
  static ClosureOracle build(const PlaneDigraph& g, int cap = 5000) {
    if (g.n() > cap)
      throw GraphError("closure cap exceeded: n=" + std::to_string(g.n()) +
                       " > " + std::to_string(cap));
    ClosureOracle c;
    c.n_ = g.n();
    c.words_ = (g.n() + 63) / 64;
    c.bits_.assign(static_cast<size_t>(c.n_) * c.words_, 0);
    std::vector<std::vector<Vertex>> out(g.n());
    for (EdgeId e = 0; e < g.m(); ++e) out[g.tail(e)].push_back(g.head(e));
    std::vector<char> seen(g.n());
    std::vector<Vertex> stack;
    for (Vertex u = 0; u < g.n(); ++u) {
      std::fill(seen.begin(), seen.end(), 0);
      stack.assign(1, u);
      seen[u] = 1;
      uint64_t* row = &c.bits_[static_cast<size_t>(u) * c.words_];
      while (!stack.empty()) {
        Vertex v = stack.back();
        stack.pop_back();
        row[v >> 6] |= uint64_t{1} << (v & 63);
        for (Vertex w : out[v])
          if (!seen[w]) {
            seen[w] = 1;
            stack.push_back(w);
          }
      }
    }
    return c;
  }

  bool reach(Vertex u, Vertex v) const {
    return (bits_[static_cast<size_t>(u) * words_ + (v >> 6)] >> (v & 63)) & 1;
  }

  int64_t true_pairs() const {
    int64_t total = 0;
    for (uint64_t w : bits_) total += std::popcount(w);
    return total;
  }

  int n() const { return n_; }

 private:
  int n_ = 0;
  int words_ = 0;
  std::vector<uint64_t> bits_;
};

inline ClosureOracle closure(const PlaneDigraph& g, int cap = 5000) {
  return ClosureOracle::build(g, cap);
}

// Plain forward BFS, for size-independent checks.
inline std::vector<char> reachable_from(const PlaneDigraph& g, Vertex s) {
  std::vector<std::vector<Vertex>> out(g.n());
  for (EdgeId e = 0; e < g.m(); ++e) out[g.tail(e)].push_back(g.head(e));
  std::vector<char> seen(g.n(), 0);
  std::vector<Vertex> queue{s};
  seen[s] = 1;
  for (size_t qi = 0; qi < queue.size(); ++qi)
    for (Vertex w : out[queue[qi]])
      if (!seen[w]) {
        seen[w] = 1;
        queue.push_back(w);
      }
  return seen;
}

}  // namespace planar_reach
