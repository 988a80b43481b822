#include "pmflab/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "pmflab/detail/simplex.hpp"

namespace pmflab {

TrafficMatrix::TrafficMatrix(int n, std::vector<double> row_major) : n_(n), lam_(std::move(row_major)) {
  if (static_cast<int>(lam_.size()) != n * n) throw std::invalid_argument("traffic matrix size mismatch");
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      const double v = (*this)(i, j);
      if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("traffic entries must be finite and nonnegative");
      if (i == j && v != 0.0) throw std::invalid_argument("traffic matrix diagonal must be zero");
    }
  }
}

void TrafficMatrix::set(int i, int j, double v) {
  if (i == j && v != 0.0) throw std::invalid_argument("traffic matrix diagonal must be zero");
  if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("traffic entries must be finite and nonnegative");
  lam_[static_cast<std::size_t>(i) * n_ + j] = v;
}

double TrafficMatrix::row_sum(int i) const {
  double s = 0.0;
  for (int j = 0; j < n_; ++j) s += (*this)(i, j);
  return s;
}

double TrafficMatrix::col_sum(int j) const {
  double s = 0.0;
  for (int i = 0; i < n_; ++i) s += (*this)(i, j);
  return s;
}

double TrafficMatrix::total() const {
  double s = 0.0;
  for (double v : lam_) s += v;
  return s;
}

TrafficMatrix& TrafficMatrix::operator+=(const TrafficMatrix& other) {
  if (other.n_ != n_) throw std::invalid_argument("traffic matrix size mismatch");
  for (std::size_t k = 0; k < lam_.size(); ++k) lam_[k] += other.lam_[k];
  return *this;
}

TrafficMatrix TrafficMatrix::scaled(double c) const {
  TrafficMatrix out = *this;
  for (double& v : out.lam_) v *= c;
  return out;
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::LimitExceeded: return "limit_exceeded";
  }
  return "unknown";
}

BoundReport BoundReport::make(double lower, double upper) {
  if (!(lower <= upper + 1e-6 * std::max(1.0, upper)))
    throw std::logic_error("bound report violates lower <= upper: lower=" + std::to_string(lower) +
                           " upper=" + std::to_string(upper));
  BoundReport r;
  r.lower = lower;
  r.upper = upper;
  r.gap_factor = lower > 0.0 ? upper / lower : std::numeric_limits<double>::infinity();
  return r;
}

namespace {

std::vector<char> reachable_from(const CapGraph& g, NodeId start) {
  std::vector<char> seen(g.node_count(), 0);
  std::vector<NodeId> stack{start};
  seen[start] = 1;
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    for (int idx : g.out_edges(v)) {
      NodeId u = g.edges()[idx].head;
      if (!seen[u]) seen[u] = 1, stack.push_back(u);
    }
  }
  return seen;
}

// Shared LP skeleton: one commodity per source, conservation rows at every
// node except the source, then one capacity row per edge. The per-source
// demand into node v is given by demand(k, v).
template <class Demand>
detail::LpModel build_flow_lp(const CapGraph& g, const std::vector<NodeId>& sources,
                              bool with_rate_var, Demand&& demand) {
  const int n = g.node_count();
  const auto& edges = g.edges();
  const int ne = static_cast<int>(edges.size());
  detail::LpModel lp;
  int var_f = -1;
  if (with_rate_var) var_f = lp.add_var(1.0);
  // x[k][e] blocks
  std::vector<int> var_base(sources.size());
  for (std::size_t s = 0; s < sources.size(); ++s) {
    var_base[s] = lp.num_vars;
    for (int e = 0; e < ne; ++e) lp.add_var(0.0);
  }
  for (std::size_t s = 0; s < sources.size(); ++s) {
    const NodeId k = sources[s];
    for (NodeId v = 0; v < n; ++v) {
      if (v == k) continue;
      const double d = demand(static_cast<int>(s), v);
      const int row = lp.add_row(with_rate_var ? 0.0 : d, with_rate_var ? 0.0 : d);
      for (int idx : g.in_edges(v)) lp.add_coeff(row, var_base[s] + idx, 1.0);
      for (int idx : g.out_edges(v)) lp.add_coeff(row, var_base[s] + idx, -1.0);
      if (with_rate_var) lp.add_coeff(row, var_f, -d);
    }
  }
  for (int e = 0; e < ne; ++e) {
    const int row = lp.add_row(-detail::kLpInf, edges[e].capacity);
    for (std::size_t s = 0; s < sources.size(); ++s) lp.add_coeff(row, var_base[s] + e, 1.0);
  }
  return lp;
}

std::vector<CommodityFlow> extract_flows(const CapGraph& g, const std::vector<NodeId>& sources,
                                         const std::vector<double>& x, int base_offset) {
  const int ne = static_cast<int>(g.edges().size());
  std::vector<CommodityFlow> flows;
  flows.reserve(sources.size());
  for (std::size_t s = 0; s < sources.size(); ++s) {
    CommodityFlow cf;
    cf.source = sources[s];
    cf.edge_flow.assign(ne, 0.0);
    for (int e = 0; e < ne; ++e) cf.edge_flow[e] = x[base_offset + s * ne + e];
    flows.push_back(std::move(cf));
  }
  return flows;
}

// Multiplicative-weights approximation of the maximum concurrent flow
// (Fleischer-style source grouping). The returned flow is rescaled to be
// feasible, so its value is always a certified lower bound. Capacities and
// demand bundles are normalized to unit scale internally; the optimum maps
// back exactly through (cap_scale / demand_scale).
FlowSolution approx_concurrent_pmf(const CapGraph& g, const WeightVector& w, double eps) {
  const int n = g.node_count();
  const auto& edges = g.edges();
  const int ne = static_cast<int>(edges.size());

  std::vector<NodeId> sources;
  for (NodeId v = 0; v < n; ++v)
    if (w[v] > 0.0) sources.push_back(v);

  FlowSolution sol;
  sol.approximate = true;

  double cap_scale = 0.0;
  for (const Edge& e : edges) cap_scale = std::max(cap_scale, e.capacity);
  double pi_sum = 0.0;
  for (NodeId v : sources) pi_sum += w[v];
  double demand_scale = 0.0;
  for (NodeId k : sources) demand_scale = std::max(demand_scale, w[k] * (pi_sum - w[k]));
  if (cap_scale <= 0.0 || demand_scale <= 0.0) {
    sol.f = 0.0;
    return sol;
  }
  std::vector<double> cap(ne);
  for (int e = 0; e < ne; ++e) cap[e] = edges[e].capacity / cap_scale;

  std::vector<double> length(ne);
  const double delta = std::pow(static_cast<double>(ne) / (1.0 - eps), -1.0 / eps);
  double dual = 0.0;  // sum cap(e) length(e)
  for (int e = 0; e < ne; ++e) {
    length[e] = delta / cap[e];
    dual += delta;
  }

  std::vector<std::vector<double>> flow(sources.size(), std::vector<double>(ne, 0.0));
  std::vector<double> routed_fraction(sources.size(), 0.0);

  std::vector<double> dist(n);
  std::vector<int> parent_edge(n);
  std::vector<int> order(n);
  using QItem = std::pair<double, int>;

  auto dijkstra = [&](NodeId src) {
    std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
    std::fill(parent_edge.begin(), parent_edge.end(), -1);
    std::priority_queue<QItem, std::vector<QItem>, std::greater<>> pq;
    dist[src] = 0.0;
    pq.emplace(0.0, src);
    while (!pq.empty()) {
      auto [d, v] = pq.top();
      pq.pop();
      if (d > dist[v]) continue;
      for (int idx : g.out_edges(v)) {
        const Edge& e = edges[idx];
        const double nd = d + length[idx];
        if (nd < dist[e.head]) {
          dist[e.head] = nd;
          parent_edge[e.head] = idx;
          pq.emplace(nd, e.head);
        }
      }
    }
  };

  std::vector<double> subtree(n), tree_flow(ne);
  const int max_phases =
      2 + static_cast<int>(3.0 * std::log(static_cast<double>(ne) + 2.0) / (eps * eps));
  const int inner_cap = 2000;

  // The dual termination test runs at phase boundaries only, so every source
  // routes its full bundle the same number of times.
  for (int phase = 0; phase < max_phases && dual < 1.0; ++phase) {
    for (std::size_t s = 0; s < sources.size(); ++s) {
      const NodeId k = sources[s];
      double rem = 1.0;  // fraction of this source's bundle left this phase
      for (int iter = 0; rem > 1e-12 && iter < inner_cap; ++iter) {
        dijkstra(k);
        for (NodeId v = 0; v < n; ++v) {
          if (v == k || w[v] <= 0.0) continue;
          if (!std::isfinite(dist[v])) {
            sol.f = 0.0;  // disconnected demand support
            sol.status = SolveStatus::Optimal;
            return sol;
          }
        }
        // Tree flows of the full normalized bundle pushed toward the source.
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) { return dist[a] > dist[b]; });
        std::fill(subtree.begin(), subtree.end(), 0.0);
        std::fill(tree_flow.begin(), tree_flow.end(), 0.0);
        for (NodeId v : order) {
          if (v == k) continue;
          const double demand_v = (w[v] > 0.0) ? w[k] * w[v] / demand_scale : 0.0;
          const double carry = subtree[v] + demand_v;
          if (carry <= 0.0) continue;
          const int pe = parent_edge[v];
          tree_flow[pe] += carry;
          subtree[edges[pe].tail] += carry;
        }
        // Fraction of the bundle that fits before the first edge saturates;
        // the last inner iteration force-routes the remainder and lets the
        // final rescale absorb any overshoot.
        double theta = rem;
        if (iter + 1 < inner_cap)
          for (int e = 0; e < ne; ++e)
            if (tree_flow[e] > 0.0) theta = std::min(theta, cap[e] / tree_flow[e]);
        for (int e = 0; e < ne; ++e) {
          if (tree_flow[e] <= 0.0) continue;
          const double amount = theta * tree_flow[e];
          flow[s][e] += amount;
          const double growth = eps * amount / cap[e];
          dual += cap[e] * length[e] * growth;
          length[e] = std::min(length[e] * (1.0 + growth), 1e250);
        }
        routed_fraction[s] += theta;
        rem -= theta;
      }
    }
  }

  // Rescale to feasibility (all in normalized units).
  double max_util = 0.0;
  for (int e = 0; e < ne; ++e) {
    double total = 0.0;
    for (std::size_t s = 0; s < sources.size(); ++s) total += flow[s][e];
    max_util = std::max(max_util, total / cap[e]);
  }
  double min_fraction = std::numeric_limits<double>::infinity();
  for (double fr : routed_fraction) min_fraction = std::min(min_fraction, fr);
  if (max_util <= 0.0 || !(min_fraction > 0.0) || !std::isfinite(min_fraction)) {
    sol.f = 0.0;
    return sol;
  }
  sol.f = (min_fraction / max_util) * (cap_scale / demand_scale);
  sol.flows.reserve(sources.size());
  for (std::size_t s = 0; s < sources.size(); ++s) {
    CommodityFlow cf;
    cf.source = sources[s];
    cf.edge_flow = std::move(flow[s]);
    // Bring every commodity to the common concurrent fraction, undo the
    // utilization overshoot, then map back to external units.
    const double scale =
        (min_fraction / routed_fraction[s]) / max_util * cap_scale;
    for (double& v : cf.edge_flow) v *= scale;
    sol.flows.push_back(std::move(cf));
  }
  return sol;
}

}  // namespace

FlowSolution max_concurrent_pmf(const CapGraph& g, const WeightVector& w, const SolveOptions& options) {
  const int n = g.node_count();
  if (n < 2) throw std::domain_error("max_concurrent_pmf needs at least two nodes");
  if (n != w.size()) throw std::invalid_argument("weight vector size must match node count");
  if (w.positive_count() < 2) throw std::domain_error("max_concurrent_pmf needs p_pi >= 2");

  std::vector<NodeId> sources;
  for (NodeId v = 0; v < n; ++v)
    if (w[v] > 0.0) sources.push_back(v);

  // Disconnected demand support short-circuits to f = 0.
  for (NodeId k : sources) {
    std::vector<char> seen = reachable_from(g, k);
    for (NodeId j : sources)
      if (j != k && !seen[j]) {
        FlowSolution sol;
        sol.f = 0.0;
        sol.status = SolveStatus::Optimal;
        return sol;
      }
  }

  const long long rows = static_cast<long long>(sources.size()) * (n - 1) +
                         static_cast<long long>(g.edges().size());
  if (rows > options.limits.lp_row_cap || options.mode == SolveOptions::Mode::Approx) {
    if (options.mode == SolveOptions::Mode::Exact) {
      FlowSolution sol;
      sol.status = SolveStatus::LimitExceeded;
      return sol;
    }
    return approx_concurrent_pmf(g, w, options.epsilon);
  }

  detail::LpModel lp = build_flow_lp(g, sources, /*with_rate_var=*/true,
                                     [&](int s, NodeId v) { return w[sources[s]] * w[v]; });
  detail::LpSolution lps = detail::solve_lp(lp);
  FlowSolution sol;
  sol.lp_iterations = lps.iterations;
  if (lps.status == detail::LpStatus::Infeasible) {
    // f = 0 is always feasible for the rate LP, so this cannot happen.
    throw std::logic_error("concurrent flow LP reported infeasible");
  }
  if (lps.status != detail::LpStatus::Optimal) {
    sol.status = SolveStatus::LimitExceeded;
    return sol;
  }
  sol.f = lps.objective;
  sol.flows = extract_flows(g, sources, lps.x, 1);
  sol.status = SolveStatus::Optimal;
  return sol;
}

FeasibilityResult check_feasible(const CapGraph& g, const TrafficMatrix& lam, const SolveOptions& options) {
  const int n = g.node_count();
  if (lam.size() != n) throw std::invalid_argument("traffic matrix size must match node count");
  FeasibilityResult result;

  std::vector<NodeId> sources;
  for (NodeId k = 0; k < n; ++k)
    if (lam.row_sum(k) > 0.0) sources.push_back(k);
  if (sources.empty()) {
    result.feasible = true;
    result.routing.f = 1.0;
    return result;
  }

  // Unreachable positive demand yields an immediate cut certificate.
  for (NodeId k : sources) {
    std::vector<char> seen = reachable_from(g, k);
    for (NodeId j = 0; j < n; ++j) {
      if (lam(k, j) > 0.0 && !seen[j]) {
        result.feasible = false;
        result.status = SolveStatus::Optimal;
        Cut cut;
        for (NodeId v = 0; v < n; ++v)
          if (seen[v]) cut.side_s.push_back(v);
        cut.cut_capacity = 0.0;
        cut.sparsity = 0.0;
        result.violated_cut = cut;
        return result;
      }
    }
  }

  const long long rows = static_cast<long long>(sources.size()) * (n - 1) +
                         static_cast<long long>(g.edges().size());
  if (rows > options.limits.lp_row_cap) {
    result.status = SolveStatus::LimitExceeded;
    return result;
  }

  detail::LpModel lp = build_flow_lp(g, sources, /*with_rate_var=*/false,
                                     [&](int s, NodeId v) { return lam(sources[s], v); });
  detail::LpSolution lps = detail::solve_lp(lp);
  result.routing.lp_iterations = lps.iterations;
  if (lps.status == detail::LpStatus::Optimal) {
    result.feasible = true;
    result.routing.f = 1.0;
    result.routing.status = SolveStatus::Optimal;
    result.routing.flows = extract_flows(g, sources, lps.x, 0);
    return result;
  }
  result.feasible = false;
  result.routing.status = SolveStatus::Infeasible;

  // Look for a cut whose crossing demand exceeds its capacity.
  if (n <= options.limits.enum_cap) {
    const std::uint64_t total = std::uint64_t{1} << n;
    double best_violation = 1e-9;
    std::optional<Cut> best;
    for (std::uint64_t mask = 1; mask + 1 < total; ++mask) {
      double cap = 0.0;
      for (const Edge& e : g.edges())
        if ((mask >> e.tail & 1) && !(mask >> e.head & 1)) cap += e.capacity;
      double demand = 0.0;
      for (NodeId i = 0; i < n; ++i) {
        if (!(mask >> i & 1)) continue;
        for (NodeId j = 0; j < n; ++j)
          if (!(mask >> j & 1)) demand += lam(i, j);
      }
      if (demand - cap > best_violation) {
        best_violation = demand - cap;
        Cut cut;
        for (NodeId v = 0; v < n; ++v)
          if (mask >> v & 1) cut.side_s.push_back(v);
        cut.cut_capacity = cap;
        cut.sparsity = demand > 0.0 ? cap / demand : 0.0;
        best = std::move(cut);
      }
    }
    result.violated_cut = best;
  }
  return result;
}

BoundReport pmf_bounds_wireline(const CapGraph& g, const WeightVector& w, const SolveOptions& options) {
  FlowSolution flow = max_concurrent_pmf(g, w, options);
  if (flow.status != SolveStatus::Optimal)
    throw CapabilityError("pmf_bounds_wireline: flow solve hit the size limit");
  Cut cut = sparsest_cut_exact(g, w, options.limits);
  BoundReport report = BoundReport::make(flow.f, cut.sparsity);
  report.metadata["lr_ratio"] = flow.f > 0.0 ? cut.sparsity / flow.f : 0.0;
  report.metadata["p_pi"] = w.positive_count();
  report.lower_witness = std::move(flow);
  report.upper_witness = std::move(cut);
  return report;
}

FlowAudit audit_flow(const CapGraph& g, const WeightVector& w, const FlowSolution& sol) {
  FlowAudit audit;
  const int n = g.node_count();
  const auto& edges = g.edges();
  std::vector<double> edge_total(edges.size(), 0.0);
  for (const CommodityFlow& cf : sol.flows) {
    const NodeId k = cf.source;
    for (NodeId v = 0; v < n; ++v) {
      if (v == k) continue;
      double net_in = 0.0;
      for (int idx : g.in_edges(v)) net_in += cf.edge_flow[idx];
      for (int idx : g.out_edges(v)) net_in -= cf.edge_flow[idx];
      const double expected = sol.approximate ? -1.0 : sol.f * w[k] * w[v];
      if (!sol.approximate)
        audit.conservation_residual = std::max(audit.conservation_residual, std::fabs(net_in - expected));
      else if (net_in < 0.0)
        audit.conservation_residual = std::max(audit.conservation_residual, -net_in);
    }
    for (std::size_t e = 0; e < edges.size(); ++e) edge_total[e] += cf.edge_flow[e];
  }
  for (std::size_t e = 0; e < edges.size(); ++e)
    audit.capacity_overshoot = std::max(audit.capacity_overshoot, edge_total[e] - edges[e].capacity);
  return audit;
}

}  // namespace pmflab
