#include "pmflab/interference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pmflab {
namespace {

std::vector<Edge> radius_edges(const Network& net, double r) {
  std::vector<Edge> edges;
  const int n = net.size();
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = 0; j < n; ++j)
      if (i != j && net.distance(i, j) <= r) edges.push_back({i, j, 1.0});
  return edges;
}

void add_endpoint_sharing_conflicts(const CapGraph& g, std::vector<std::vector<int>>& interferes) {
  const auto& edges = g.edges();
  const int ne = static_cast<int>(edges.size());
  std::vector<std::vector<int>> touching(g.node_count());
  for (int e = 0; e < ne; ++e) {
    touching[edges[e].tail].push_back(e);
    touching[edges[e].head].push_back(e);
  }
  for (int e = 0; e < ne; ++e) {
    for (NodeId v : {edges[e].tail, edges[e].head})
      for (int other : touching[v])
        if (other != e) interferes[e].push_back(other);
  }
  for (auto& set : interferes) {
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
  }
}

}  // namespace

ConflictModel protocol_model(const Network& net, double r, double eta, bool restricted,
                             bool half_duplex) {
  if (!(r > 0.0)) throw std::domain_error("protocol_model needs r > 0");
  if (!(eta >= 0.0)) throw std::domain_error("protocol_model needs eta >= 0");
  ConflictModel model;
  model.graph = CapGraph(net.size(), radius_edges(net, r));
  const auto& edges = model.graph.edges();
  const int ne = static_cast<int>(edges.size());
  model.interferes.assign(ne, {});
  for (int e = 0; e < ne; ++e) {
    const NodeId rx = edges[e].head;
    const double threshold =
        (1.0 + eta) * (restricted ? r : net.distance(edges[e].tail, edges[e].head));
    for (int other = 0; other < ne; ++other) {
      if (other == e) continue;
      if (net.distance(edges[other].tail, rx) <= threshold) model.interferes[e].push_back(other);
    }
  }
  if (half_duplex) add_endpoint_sharing_conflicts(model.graph, model.interferes);
  return model;
}

SinrModel sinr_threshold_model(const Network& net, double gamma, double beta, double W, double N0B) {
  if (!(gamma > 0.0) || !(beta > 0.0) || !(W > 0.0) || !(N0B > 0.0))
    throw std::domain_error("sinr_threshold_model needs positive gamma, beta, W, N0B");
  const int n = net.size();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && !(net.gain(i, j) >= 0.0))
        throw std::domain_error("sinr_threshold_model needs nonnegative channel gains");

  SinrModel out;
  std::vector<Edge> edges;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = 0; j < n; ++j)
      if (i != j && net.gain(j, i) >= gamma) edges.push_back({i, j, 1.0});
  out.model.graph = CapGraph(n, std::move(edges));
  const auto& e_gamma = out.model.graph.edges();
  const int ne = static_cast<int>(e_gamma.size());
  out.model.interferes.assign(ne, {});
  for (int e = 0; e < ne; ++e) {
    const NodeId rx = e_gamma[e].head;
    for (int other = 0; other < ne; ++other) {
      if (other == e) continue;
      if (net.gain(rx, e_gamma[other].tail) >= beta) out.model.interferes[e].push_back(other);
    }
  }
  out.beta_threshold =
      (net.power * gamma / (std::pow(2.0, W) - 1.0) - N0B) / (n * net.power);
  out.valid_rate_w = beta <= out.beta_threshold;
  return out;
}

std::vector<std::vector<int>> dual_adjacency(const ConflictModel& model) {
  const int ne = static_cast<int>(model.graph.edges().size());
  std::vector<std::vector<int>> adj(ne);
  for (int e = 0; e < ne; ++e)
    for (int other : model.interferes[e]) {
      adj[e].push_back(other);
      adj[other].push_back(e);
    }
  for (auto& list : adj) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return adj;
}

int dual_max_degree(const ConflictModel& model) {
  int deg = 0;
  for (const auto& list : dual_adjacency(model)) deg = std::max(deg, static_cast<int>(list.size()));
  return deg;
}

Schedule conflict_coloring(const ConflictModel& model) {
  const auto adj = dual_adjacency(model);
  const int ne = static_cast<int>(adj.size());
  std::vector<int> order(ne);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return adj[a].size() > adj[b].size(); });

  std::vector<int> color(ne, -1);
  std::vector<int> used;  // color -> marker stamp
  int num_colors = 0;
  for (int v : order) {
    used.assign(num_colors, 0);
    for (int u : adj[v])
      if (color[u] >= 0) used[color[u]] = 1;
    int c = 0;
    while (c < num_colors && used[c]) ++c;
    color[v] = c;
    num_colors = std::max(num_colors, c + 1);
  }

  Schedule schedule;
  schedule.kappa_hat = std::max(num_colors, 1);
  schedule.classes.assign(schedule.kappa_hat, {});
  for (int e = 0; e < ne; ++e) schedule.classes[color[e] < 0 ? 0 : color[e]].push_back(e);
  schedule.cap_vector.assign(ne, 1.0 / schedule.kappa_hat);
  return schedule;
}

BoundReport umf_bounds_combinatorial(const ConflictModel& model, const WeightVector& w,
                                     const SolveOptions& options) {
  Schedule schedule = conflict_coloring(model);
  const double inv_kappa = 1.0 / schedule.kappa_hat;

  FlowSolution f1 = max_concurrent_pmf(model.graph.with_uniform_capacity(1.0), w, options);
  FlowSolution f2 = max_concurrent_pmf(model.graph.with_uniform_capacity(inv_kappa), w, options);
  if (f1.status != SolveStatus::Optimal || f2.status != SolveStatus::Optimal)
    throw CapabilityError("umf_bounds_combinatorial: LP exceeds the configured size limit");

  BoundReport report = BoundReport::make(f2.f, f1.f);
  report.metadata["kappa_hat"] = schedule.kappa_hat;
  report.metadata["Delta_dual"] = dual_max_degree(model);
  report.metadata["f1"] = f1.f;
  report.metadata["f2"] = f2.f;
  report.lower_witness = std::move(f2);
  return report;
}

BoundReport psi_bounds(const ConflictModel& model, const WeightVector& w,
                       const SolveOptions& options) {
  Schedule schedule = conflict_coloring(model);
  const double inv_kappa = 1.0 / schedule.kappa_hat;

  Cut psi_upper = sparsest_cut_exact(model.graph.with_uniform_capacity(1.0), w, options.limits);
  Cut psi_lower = sparsest_cut_exact(model.graph.with_uniform_capacity(inv_kappa), w, options.limits);

  FlowSolution f2 = max_concurrent_pmf(model.graph.with_uniform_capacity(inv_kappa), w, options);
  if (f2.status != SolveStatus::Optimal)
    throw CapabilityError("psi_bounds: LP exceeds the configured size limit");

  BoundReport report = BoundReport::make(psi_lower.sparsity, psi_upper.sparsity);
  report.metadata["kappa_hat"] = schedule.kappa_hat;
  report.metadata["f2"] = f2.f;
  report.metadata["p_pi"] = w.positive_count();
  report.upper_witness = std::move(psi_upper);
  report.lower_witness = std::move(f2);
  return report;
}

}  // namespace pmflab
