#pragma once

#include <vector>

#include "planar_reach/plane_graph.hpp"

namespace planar_reach {

// Strongly connected components, iterative Tarjan.  comp[v] ids are assigned
// in reverse topological order of the condensation (comp 0 is a sink
// component), which condense_acyclic relies on.
struct SccResult {
  std::vector<int> comp;
  int count = 0;

  bool trivial() const {
    std::vector<int> size(count, 0);
    for (int c : comp)
      if (++size[c] > 1) return false;
    return true;
  }
};

inline SccResult strongly_connected_components(const PlaneDigraph& g) {
  const int n = g.n();
  std::vector<std::vector<Vertex>> out(n);
  for (EdgeId e = 0; e < g.m(); ++e) out[g.tail(e)].push_back(g.head(e));

  SccResult r;
  r.comp.assign(n, -1);
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<Vertex> stack;
  int next_index = 0;

  // frame: (vertex, position in out[vertex])
  std::vector<std::pair<Vertex, size_t>> call;
  for (Vertex s = 0; s < n; ++s) {
    if (index[s] != -1) continue;
    call.emplace_back(s, 0);
    while (!call.empty()) {
      auto& [v, pos] = call.back();
      if (pos == 0) {
        index[v] = low[v] = next_index++;
        stack.push_back(v);
        on_stack[v] = 1;
      }
      bool descended = false;
      while (pos < out[v].size()) {
        Vertex w = out[v][pos++];
        if (index[w] == -1) {
          call.emplace_back(w, 0);
          descended = true;
          break;
        }
        if (on_stack[w]) low[v] = std::min(low[v], index[w]);
      }
      if (descended) continue;
      if (low[v] == index[v]) {
        while (true) {
          Vertex w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          r.comp[w] = r.count;
          if (w == v) break;
        }
        ++r.count;
      }
      Vertex done = v;
      call.pop_back();
      if (!call.empty()) {
        Vertex parent = call.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
    }
  }
  return r;
}

}  // namespace planar_reach
