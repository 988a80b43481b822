#pragma once

#include <span>
#include <vector>

#include "pmflab/types.hpp"

namespace pmflab {

struct Edge {
  NodeId tail = 0;
  NodeId head = 0;
  double capacity = 0.0;
};

// Directed graph with nonnegative edge capacities, bits per slot. An absent
// edge is the same as capacity zero: zero-capacity edges are dropped on
// construction and duplicates are merged by summing.
class CapGraph {
 public:
  CapGraph() = default;
  CapGraph(int n, std::vector<Edge> edges);

  int node_count() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  double capacity(NodeId tail, NodeId head) const;
  const std::vector<int>& out_edges(NodeId v) const { return out_[v]; }
  const std::vector<int>& in_edges(NodeId v) const { return in_[v]; }

  CapGraph scaled(double factor) const;
  // Same edge set, every capacity replaced by c.
  CapGraph with_uniform_capacity(double c) const;

  // Connectivity of the undirected support (an edge in either direction
  // links its endpoints).
  bool connected_undirected() const;
  std::vector<NodeId> component_of(NodeId start) const;

  static CapGraph complete(int n, double cap = 1.0);

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> out_, in_;
};

// Node weights for product flows, kept in the canonical normalization
// sum(pi) == p_pi where p_pi counts the strictly positive entries.
class WeightVector {
 public:
  static WeightVector uniform(int n);
  // Rescales raw nonnegative weights into the canonical normalization.
  static WeightVector normalized(std::vector<double> raw);

  const std::vector<double>& pi() const { return pi_; }
  double operator[](int i) const { return pi_[i]; }
  int size() const { return static_cast<int>(pi_.size()); }
  int positive_count() const { return p_pi_; }
  bool was_rescaled() const { return rescaled_; }

 private:
  std::vector<double> pi_;
  int p_pi_ = 0;
  bool rescaled_ = false;
};

struct Cut {
  std::vector<NodeId> side_s;  // sorted node ids of S
  double cut_capacity = 0.0;   // sum of C(i,j) over i in S, j not in S
  double sparsity = 0.0;       // cut_capacity / (pi(S) * pi(S^c))
};

// Exact minimizer of cut_capacity / (pi(S) pi(S^c)) over every proper subset
// S with pi(S) pi(S^c) > 0. Ties break to the lexicographically smallest S.
// Throws CapabilityError when n exceeds limits.enum_cap.
Cut sparsest_cut_exact(const CapGraph& g, const WeightVector& w, const Limits& limits = {});

struct CutSearchResult {
  Cut cut;
  bool heuristic = false;  // true when the Fiedler sweep was used
};

// Exact when n <= limits.enum_cap; above the cap, a spectral sweep over the
// Fiedler-vector ordering returns an upper bound on the sparsest cut.
CutSearchResult sparsest_cut(const CapGraph& g, const WeightVector& w, const Limits& limits = {});

struct ConductanceResult {
  std::vector<NodeId> side_u;
  double value = 0.0;
  bool disconnected = false;
};

// min over 1 <= |U| <= n/2 of crossing-edge count / |U|. Counts edges, not
// capacities. A disconnected graph yields value 0 with a component witness.
ConductanceResult conductance(const CapGraph& g, const Limits& limits = {});

// m x m grid, nodes at (i/m, j/m), 4-neighbor bidirectional unit capacities.
CapGraph grid_graph(int m);
std::vector<Point> grid_points(int m, double side = 1.0);
inline NodeId grid_node(int m, int i, int j) { return i * m + j; }

// r* = min{r : G_r connected} = the longest edge of a minimum spanning tree.
double connectivity_radius(std::span<const Point> points, const Region& region);

}  // namespace pmflab
