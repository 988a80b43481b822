#pragma once

#include <cstdint>
#include <vector>

#include "pmflab/flow.hpp"
#include "pmflab/graph.hpp"
#include "pmflab/rng.hpp"

namespace testutil {

// Connected random digraph: a bidirectional random spanning chain plus
// density * n^2 random directed edges, capacities uniform in (0.1, 1.1).
inline pmflab::CapGraph random_connected_graph(int n, double density, std::uint64_t seed) {
  pmflab::RngStream rng(seed);
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  rng.shuffle(order);
  std::vector<pmflab::Edge> edges;
  for (int i = 0; i + 1 < n; ++i) {
    const double cap = 0.1 + rng.next();
    edges.push_back({order[i], order[i + 1], cap});
    edges.push_back({order[i + 1], order[i], 0.1 + rng.next()});
  }
  const int extra = static_cast<int>(density * n * n);
  for (int k = 0; k < extra; ++k) {
    const int a = static_cast<int>(rng.next_below(n));
    const int b = static_cast<int>(rng.next_below(n));
    if (a == b) continue;
    edges.push_back({a, b, 0.1 + rng.next()});
  }
  return pmflab::CapGraph(n, std::move(edges));
}

// Strictly positive random weights in canonical normalization.
inline pmflab::WeightVector random_weights(int n, std::uint64_t seed, bool allow_zeros = false) {
  pmflab::RngStream rng(seed);
  std::vector<double> raw(n);
  int positive = 0;
  for (int i = 0; i < n; ++i) {
    if (allow_zeros && rng.next() < 0.25) {
      raw[i] = 0.0;
    } else {
      raw[i] = 0.2 + rng.next();
      ++positive;
    }
  }
  if (positive < 2) {
    raw[0] = 1.0;
    raw[n - 1] = 1.0;
  }
  return pmflab::WeightVector::normalized(std::move(raw));
}

// Path on n nodes with unit capacities in both directions.
inline pmflab::CapGraph path_graph(int n, double cap = 1.0) {
  std::vector<pmflab::Edge> edges;
  for (int i = 0; i + 1 < n; ++i) {
    edges.push_back({i, i + 1, cap});
    edges.push_back({i + 1, i, cap});
  }
  return pmflab::CapGraph(n, std::move(edges));
}

// Independent brute-force sparsest cut: direct mask loop, no gray code.
inline double brute_sparsest(const pmflab::CapGraph& g, const pmflab::WeightVector& w) {
  const int n = g.node_count();
  double best = std::numeric_limits<double>::infinity();
  for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
    double cap = 0.0, pi_s = 0.0, pi_c = 0.0;
    for (const pmflab::Edge& e : g.edges())
      if ((mask >> e.tail & 1u) && !(mask >> e.head & 1u)) cap += e.capacity;
    for (int v = 0; v < n; ++v)
      (mask >> v & 1u) ? pi_s += w[v] : pi_c += w[v];
    if (pi_s * pi_c > 0.0) best = std::min(best, cap / (pi_s * pi_c));
  }
  return best;
}

}  // namespace testutil
