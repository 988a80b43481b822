#include "pmflab/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>

namespace pmflab {
namespace {

int ctz64(std::uint64_t x) { return std::countr_zero(x); }

}  // namespace

CapGraph::CapGraph(int n, std::vector<Edge> edges) : n_(n) {
  if (n < 0) throw std::invalid_argument("node count must be nonnegative");
  std::map<std::pair<NodeId, NodeId>, double> merged;
  for (const Edge& e : edges) {
    if (e.tail < 0 || e.tail >= n || e.head < 0 || e.head >= n)
      throw std::invalid_argument("edge endpoint out of range");
    if (e.tail == e.head) throw std::invalid_argument("self-loops are not allowed");
    if (!(e.capacity >= 0.0) || !std::isfinite(e.capacity))
      throw std::invalid_argument("edge capacity must be finite and nonnegative");
    if (e.capacity > 0.0) merged[{e.tail, e.head}] += e.capacity;
  }
  edges_.reserve(merged.size());
  for (const auto& [key, cap] : merged) edges_.push_back({key.first, key.second, cap});
  out_.assign(n_, {});
  in_.assign(n_, {});
  for (int idx = 0; idx < static_cast<int>(edges_.size()); ++idx) {
    out_[edges_[idx].tail].push_back(idx);
    in_[edges_[idx].head].push_back(idx);
  }
}

double CapGraph::capacity(NodeId tail, NodeId head) const {
  for (int idx : out_[tail])
    if (edges_[idx].head == head) return edges_[idx].capacity;
  return 0.0;
}

CapGraph CapGraph::scaled(double factor) const {
  if (!(factor >= 0.0)) throw std::domain_error("scale factor must be nonnegative");
  std::vector<Edge> scaled_edges = edges_;
  for (Edge& e : scaled_edges) e.capacity *= factor;
  return CapGraph(n_, std::move(scaled_edges));
}

CapGraph CapGraph::with_uniform_capacity(double c) const {
  std::vector<Edge> copy = edges_;
  for (Edge& e : copy) e.capacity = c;
  return CapGraph(n_, std::move(copy));
}

std::vector<NodeId> CapGraph::component_of(NodeId start) const {
  std::vector<char> seen(n_, 0);
  std::vector<NodeId> stack{start}, comp;
  seen[start] = 1;
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    comp.push_back(v);
    for (int idx : out_[v]) {
      NodeId u = edges_[idx].head;
      if (!seen[u]) seen[u] = 1, stack.push_back(u);
    }
    for (int idx : in_[v]) {
      NodeId u = edges_[idx].tail;
      if (!seen[u]) seen[u] = 1, stack.push_back(u);
    }
  }
  std::sort(comp.begin(), comp.end());
  return comp;
}

bool CapGraph::connected_undirected() const {
  if (n_ <= 1) return true;
  return static_cast<int>(component_of(0).size()) == n_;
}

CapGraph CapGraph::complete(int n, double cap) {
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) * (n - 1));
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = 0; j < n; ++j)
      if (i != j) edges.push_back({i, j, cap});
  return CapGraph(n, std::move(edges));
}

WeightVector WeightVector::uniform(int n) {
  if (n < 1) throw std::domain_error("weight vector needs at least one node");
  WeightVector w;
  w.pi_.assign(n, 1.0);
  w.p_pi_ = n;
  return w;
}

WeightVector WeightVector::normalized(std::vector<double> raw) {
  int positive = 0;
  double sum = 0.0;
  for (double v : raw) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::domain_error("weights must be finite and nonnegative");
    if (v > 0.0) ++positive;
    sum += v;
  }
  if (positive == 0) throw std::domain_error("weight vector must have a positive entry");
  WeightVector w;
  double scale = static_cast<double>(positive) / sum;
  w.rescaled_ = std::fabs(scale - 1.0) > 1e-12;
  for (double& v : raw) v *= scale;
  w.pi_ = std::move(raw);
  w.p_pi_ = positive;
  return w;
}

namespace {

// Gray-code subset walk shared by the exact cut searches. Calls visit(S)
// with incremental state after each single-node toggle.
template <class Visit>
void enumerate_subsets(int n, Visit&& visit) {
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < total; ++k) {
    visit(ctz64(k));
  }
}

bool lex_less(const std::vector<char>& in_s, const std::vector<NodeId>& best, int n) {
  std::vector<NodeId> cur;
  cur.reserve(n);
  for (NodeId v = 0; v < n; ++v)
    if (in_s[v]) cur.push_back(v);
  return std::lexicographical_compare(cur.begin(), cur.end(), best.begin(), best.end());
}

std::vector<NodeId> collect(const std::vector<char>& in_s, int n) {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < n; ++v)
    if (in_s[v]) out.push_back(v);
  return out;
}

}  // namespace

Cut sparsest_cut_exact(const CapGraph& g, const WeightVector& w, const Limits& limits) {
  const int n = g.node_count();
  if (n != w.size()) throw std::invalid_argument("weight vector size must match node count");
  if (n > limits.enum_cap)
    throw CapabilityError("sparsest_cut_exact: n=" + std::to_string(n) +
                          " exceeds the enumeration limit " + std::to_string(limits.enum_cap));
  if (n < 2) throw std::domain_error("sparsest cut needs at least two nodes");
  if (w.positive_count() < 2) throw std::domain_error("sparsest cut needs p_pi >= 2");

  double pi_total = 0.0;
  for (double v : w.pi()) pi_total += v;

  std::vector<char> in_s(n, 0);
  double cut_cap = 0.0, pi_s = 0.0;
  int size_s = 0;

  double best_sparsity = std::numeric_limits<double>::infinity();
  double best_cap = 0.0;
  std::vector<NodeId> best_s;

  enumerate_subsets(n, [&](int v) {
    if (!in_s[v]) {
      for (int idx : g.out_edges(v))
        if (!in_s[g.edges()[idx].head]) cut_cap += g.edges()[idx].capacity;
      for (int idx : g.in_edges(v))
        if (in_s[g.edges()[idx].tail]) cut_cap -= g.edges()[idx].capacity;
      in_s[v] = 1;
      pi_s += w[v];
      ++size_s;
    } else {
      in_s[v] = 0;
      pi_s -= w[v];
      --size_s;
      for (int idx : g.out_edges(v))
        if (!in_s[g.edges()[idx].head]) cut_cap -= g.edges()[idx].capacity;
      for (int idx : g.in_edges(v))
        if (in_s[g.edges()[idx].tail]) cut_cap += g.edges()[idx].capacity;
    }
    if (size_s == 0 || size_s == n) return;
    const double denom = pi_s * (pi_total - pi_s);
    if (!(denom > 0.0)) return;
    const double sparsity = cut_cap / denom;
    if (sparsity < best_sparsity) {
      best_sparsity = sparsity;
      best_cap = cut_cap;
      best_s = collect(in_s, n);
    } else if (sparsity == best_sparsity && lex_less(in_s, best_s, n)) {
      best_cap = cut_cap;
      best_s = collect(in_s, n);
    }
  });

  return Cut{std::move(best_s), best_cap, best_sparsity};
}

namespace {

// Second-smallest Laplacian eigenvector of the symmetrized capacity matrix,
// by power iteration on (sigma I - L) deflated against the constant vector.
std::vector<double> fiedler_vector(const CapGraph& g) {
  const int n = g.node_count();
  std::vector<double> deg(n, 0.0);
  for (const Edge& e : g.edges()) {
    deg[e.tail] += e.capacity;
    deg[e.head] += e.capacity;
  }
  const double sigma = 2.0 * (*std::max_element(deg.begin(), deg.end())) + 1.0;

  std::vector<double> x(n), y(n);
  for (int i = 0; i < n; ++i) x[i] = std::sin(1.0 + i * 0.7);  // fixed start
  auto orthogonalize = [&](std::vector<double>& v) {
    double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    for (double& t : v) t -= mean;
    double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    if (norm > 0) for (double& t : v) t /= norm;
  };
  orthogonalize(x);
  for (int iter = 0; iter < 400; ++iter) {
    // y = (sigma I - L) x = sigma x - deg.x + W_sym x
    for (int i = 0; i < n; ++i) y[i] = (sigma - deg[i]) * x[i];
    for (const Edge& e : g.edges()) {
      y[e.head] += e.capacity * x[e.tail];
      y[e.tail] += e.capacity * x[e.head];
    }
    orthogonalize(y);
    x.swap(y);
  }
  return x;
}

}  // namespace

CutSearchResult sparsest_cut(const CapGraph& g, const WeightVector& w, const Limits& limits) {
  const int n = g.node_count();
  if (n <= limits.enum_cap) return {sparsest_cut_exact(g, w, limits), false};
  if (w.positive_count() < 2) throw std::domain_error("sparsest cut needs p_pi >= 2");

  std::vector<double> fv = fiedler_vector(g);
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return fv[a] < fv[b]; });

  double pi_total = 0.0;
  for (double v : w.pi()) pi_total += v;

  std::vector<char> in_s(n, 0);
  double fwd = 0.0, bwd = 0.0, pi_s = 0.0;
  double best = std::numeric_limits<double>::infinity();
  int best_prefix = 0;
  bool best_forward = true;
  for (int k = 0; k + 1 < n; ++k) {
    NodeId v = order[k];
    for (int idx : g.out_edges(v)) {
      const Edge& e = g.edges()[idx];
      if (in_s[e.head]) bwd -= e.capacity; else fwd += e.capacity;
    }
    for (int idx : g.in_edges(v)) {
      const Edge& e = g.edges()[idx];
      if (in_s[e.tail]) fwd -= e.capacity; else bwd += e.capacity;
    }
    in_s[v] = 1;
    pi_s += w[v];
    const double denom = pi_s * (pi_total - pi_s);
    if (!(denom > 0.0)) continue;
    if (fwd / denom < best) best = fwd / denom, best_prefix = k + 1, best_forward = true;
    if (bwd / denom < best) best = bwd / denom, best_prefix = k + 1, best_forward = false;
  }

  std::vector<NodeId> side;
  if (best_forward) {
    side.assign(order.begin(), order.begin() + best_prefix);
  } else {
    side.assign(order.begin() + best_prefix, order.end());
  }
  std::sort(side.begin(), side.end());
  // Recompute the reported capacity directly from the side.
  std::vector<char> mark(n, 0);
  for (NodeId v : side) mark[v] = 1;
  double cap = 0.0, ps = 0.0;
  for (const Edge& e : g.edges())
    if (mark[e.tail] && !mark[e.head]) cap += e.capacity;
  for (NodeId v : side) ps += w[v];
  return {Cut{std::move(side), cap, cap / (ps * (pi_total - ps))}, true};
}

ConductanceResult conductance(const CapGraph& g, const Limits& limits) {
  const int n = g.node_count();
  if (n > limits.enum_cap)
    throw CapabilityError("conductance: n=" + std::to_string(n) +
                          " exceeds the enumeration limit " + std::to_string(limits.enum_cap));
  if (n < 2) throw std::domain_error("conductance needs at least two nodes");

  if (!g.connected_undirected()) {
    return ConductanceResult{g.component_of(0), 0.0, true};
  }

  std::vector<char> in_u(n, 0);
  std::int64_t cross = 0;
  int size_u = 0;
  double best = std::numeric_limits<double>::infinity();
  std::vector<NodeId> best_u;

  enumerate_subsets(n, [&](int v) {
    if (!in_u[v]) {
      for (int idx : g.out_edges(v))
        if (!in_u[g.edges()[idx].head]) ++cross;
      for (int idx : g.in_edges(v))
        if (in_u[g.edges()[idx].tail]) --cross;
      in_u[v] = 1;
      ++size_u;
    } else {
      in_u[v] = 0;
      --size_u;
      for (int idx : g.out_edges(v))
        if (!in_u[g.edges()[idx].head]) --cross;
      for (int idx : g.in_edges(v))
        if (in_u[g.edges()[idx].tail]) ++cross;
    }
    if (size_u < 1 || 2 * size_u > n) return;
    const double value = static_cast<double>(cross) / size_u;
    if (value < best) {
      best = value;
      best_u = collect(in_u, n);
    } else if (value == best && lex_less(in_u, best_u, n)) {
      best_u = collect(in_u, n);
    }
  });

  return ConductanceResult{std::move(best_u), best, false};
}

CapGraph grid_graph(int m) {
  if (m < 2) throw std::domain_error("grid_graph needs m >= 2");
  const int n = m * m;
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(4) * m * (m - 1));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      NodeId a = grid_node(m, i, j);
      if (i + 1 < m) {
        NodeId b = grid_node(m, i + 1, j);
        edges.push_back({a, b, 1.0});
        edges.push_back({b, a, 1.0});
      }
      if (j + 1 < m) {
        NodeId b = grid_node(m, i, j + 1);
        edges.push_back({a, b, 1.0});
        edges.push_back({b, a, 1.0});
      }
    }
  }
  return CapGraph(n, std::move(edges));
}

std::vector<Point> grid_points(int m, double side) {
  if (m < 2) throw std::domain_error("grid_points needs m >= 2");
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(m) * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      pts.push_back({side * i / m, side * j / m});
  return pts;
}

double connectivity_radius(std::span<const Point> points, const Region& region) {
  const int n = static_cast<int>(points.size());
  if (n < 2) throw std::domain_error("connectivity_radius needs at least two points");
  // Prim with the longest tree edge tracked.
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  std::vector<char> done(n, 0);
  dist[0] = 0.0;
  double longest = 0.0;
  for (int step = 0; step < n; ++step) {
    int v = -1;
    for (int i = 0; i < n; ++i)
      if (!done[i] && (v < 0 || dist[i] < dist[v])) v = i;
    done[v] = 1;
    longest = std::max(longest, dist[v]);
    for (int i = 0; i < n; ++i) {
      if (done[i]) continue;
      double d = region.distance(points[v], points[i]);
      if (d < dist[i]) dist[i] = d;
    }
  }
  return longest;
}

}  // namespace pmflab
