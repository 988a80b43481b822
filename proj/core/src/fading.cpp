#include "pmflab/fading.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "pmflab/detail/quadrature.hpp"
#include "pmflab/rng.hpp"

namespace pmflab {

double expected_log_capacity(double s) {
  if (!(s >= 0.0) || !std::isfinite(s)) throw std::domain_error("expected_log_capacity needs s >= 0");
  if (s == 0.0) return 0.0;
  constexpr double kCutoff = 60.0;
  const double body = detail::integrate_adaptive(
      [s](double x) { return std::exp(-x) * std::log1p(s * x); }, 0.0, kCutoff, 1e-10);
  // exact tail head: int_T^inf e^-x log1p(sx) dx = e^-T log1p(sT) + O(e^-T s/(1+sT))
  const double tail = std::exp(-kCutoff) * std::log1p(s * kCutoff);
  return body + tail;
}

double expected_log_capacity_rayleigh(double a) {
  if (!(a >= 0.0) || !std::isfinite(a)) throw std::domain_error("expected_log_capacity_rayleigh needs a >= 0");
  if (a == 0.0) return 0.0;
  constexpr double kCutoff = 9.0;  // exp(-81) tail
  return detail::integrate_adaptive(
      [a](double v) { return 2.0 * v * std::exp(-v * v) * std::log1p(a * v); }, 0.0, kCutoff, 1e-10);
}

CapGraph build_upper_graph_rx_csi(const Network& net) {
  const int n = net.size();
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) * (n - 1));
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = 0; j < n; ++j) {
      if (i == j) continue;
      edges.push_back({i, j, expected_log_capacity(net.power * net.gain(i, j))});
    }
  return CapGraph(n, std::move(edges));
}

LowerGraphRxCsi build_lower_graph_rx_csi(const Network& net, double r, double eta) {
  if (!(eta >= 0.0)) throw std::domain_error("eta must be nonnegative");
  const double rs = network_connectivity_radius(net);
  if (r < rs)
    throw std::domain_error("build_lower_graph_rx_csi requires r >= r* = " + std::to_string(rs));
  const int n = net.size();
  const int delta_r = degree_at_radius(net, r);
  const int delta_r_eta = degree_at_radius(net, r * (1.0 + eta));
  const double tdma = 1.0 / (1.0 + static_cast<double>(delta_r) * delta_r_eta);
  const double denominator = 1.0 + n * net.power * net.pathloss(r * (1.0 + eta));

  std::vector<Edge> edges;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = 0; j < n; ++j) {
      if (i == j || net.distance(i, j) > r) continue;
      const double s = net.power * net.gain(i, j) / denominator;
      edges.push_back({i, j, tdma * expected_log_capacity(s)});
    }
  LowerGraphRxCsi out{CapGraph(n, std::move(edges)), {}};
  out.metadata["Delta_r"] = delta_r;
  out.metadata["Delta_r_eta"] = delta_r_eta;
  out.metadata["denominator"] = denominator;
  out.metadata["alpha_tdma"] = static_cast<double>(delta_r) * delta_r_eta + 1.0;
  return out;
}

namespace {

struct CutRatioScan {
  double gamma = 0.0;
  bool found = false;
};

// max over cuts S (pi(S) pi(S^c) > 0) of far(S) / near(S), by gray-code
// enumeration over subsets with both sums maintained incrementally.
CutRatioScan scan_cut_ratio_exact(int n, const std::vector<double>& near_cap,
                                  const std::vector<double>& far_cap, const WeightVector& w) {
  auto at = [n](const std::vector<double>& m, int i, int j) {
    return m[static_cast<std::size_t>(i) * n + j];
  };
  double pi_total = 0.0;
  for (double v : w.pi()) pi_total += v;
  std::vector<char> in_s(n, 0);
  double near_sum = 0.0, far_sum = 0.0, pi_s = 0.0;
  int size_s = 0;
  CutRatioScan scan;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < total; ++k) {
    const int v = std::countr_zero(k);
    if (!in_s[v]) {
      for (int u = 0; u < n; ++u) {
        if (u == v) continue;
        if (!in_s[u]) {
          near_sum += at(near_cap, v, u);
          far_sum += at(far_cap, v, u);
        } else {
          near_sum -= at(near_cap, u, v);
          far_sum -= at(far_cap, u, v);
        }
      }
      in_s[v] = 1;
      pi_s += w[v];
      ++size_s;
    } else {
      in_s[v] = 0;
      pi_s -= w[v];
      --size_s;
      for (int u = 0; u < n; ++u) {
        if (u == v) continue;
        if (!in_s[u]) {
          near_sum -= at(near_cap, v, u);
          far_sum -= at(far_cap, v, u);
        } else {
          near_sum += at(near_cap, u, v);
          far_sum += at(far_cap, u, v);
        }
      }
    }
    if (size_s == 0 || size_s == n) continue;
    if (!(pi_s > 0.0) || !(pi_total - pi_s > 0.0)) continue;
    if (near_sum <= 0.0) {
      if (far_sum > 0.0) scan.gamma = std::numeric_limits<double>::infinity();
      continue;
    }
    scan.found = true;
    scan.gamma = std::max(scan.gamma, far_sum / near_sum);
  }
  return scan;
}

void build_near_far(const Network& net, double r, std::vector<double>& near_cap,
                    std::vector<double>& far_cap) {
  const int n = net.size();
  near_cap.assign(static_cast<std::size_t>(n) * n, 0.0);
  far_cap.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double cap = expected_log_capacity(net.power * net.gain(i, j));
      if (net.distance(i, j) <= r)
        near_cap[static_cast<std::size_t>(i) * n + j] = cap;
      else
        far_cap[static_cast<std::size_t>(i) * n + j] = cap;
    }
}

}  // namespace

double gamma_far_ratio(const Network& net, const WeightVector& w, double r, const Limits& limits,
                       bool* heuristic) {
  const int n = net.size();
  std::vector<double> near_cap, far_cap;
  build_near_far(net, r, near_cap, far_cap);
  if (n <= limits.enum_cap) {
    if (heuristic) *heuristic = false;
    return scan_cut_ratio_exact(n, near_cap, far_cap, w).gamma;
  }
  // Sampled lower estimate over random bipartitions.
  if (heuristic) *heuristic = true;
  CounterRng rng(0x9a17u);
  double gamma = 0.0;
  for (int trial = 0; trial < 4096; ++trial) {
    double near_sum = 0.0, far_sum = 0.0, pi_s = 0.0, pi_c = 0.0;
    std::vector<char> in_s(n, 0);
    for (int v = 0; v < n; ++v)
      in_s[v] = static_cast<char>(rng.bits(static_cast<std::uint64_t>(trial) * n + v) & 1);
    for (int i = 0; i < n; ++i) {
      if (in_s[i]) pi_s += w[i]; else pi_c += w[i];
      for (int j = 0; j < n; ++j) {
        if (i == j || !in_s[i] || in_s[j]) continue;
        near_sum += near_cap[static_cast<std::size_t>(i) * n + j];
        far_sum += far_cap[static_cast<std::size_t>(i) * n + j];
      }
    }
    if (pi_s > 0.0 && pi_c > 0.0 && near_sum > 0.0) gamma = std::max(gamma, far_sum / near_sum);
  }
  return gamma;
}

BoundReport pmf_bounds_rx_csi(const Network& net, const WeightVector& w, double r,
                              const SolveOptions& options) {
  const int n = net.size();
  if (n != w.size()) throw std::invalid_argument("weights must match network size");
  const double rs = network_connectivity_radius(net);
  if (r < rs) throw std::domain_error("pmf_bounds_rx_csi requires r >= r* = " + std::to_string(rs));

  // Truncated expected-capacity graph.
  std::vector<Edge> near_edges;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = 0; j < n; ++j) {
      if (i == j || net.distance(i, j) > r) continue;
      near_edges.push_back({i, j, expected_log_capacity(net.power * net.gain(i, j))});
    }
  CapGraph near_graph(n, std::move(near_edges));

  bool heuristic = false;
  CutSearchResult upsilon = sparsest_cut(near_graph, w, options.limits);
  heuristic = upsilon.heuristic;
  bool gamma_heuristic = false;
  const double gamma = gamma_far_ratio(net, w, r, options.limits, &gamma_heuristic);
  heuristic = heuristic || gamma_heuristic;
  const double upper = (1.0 + gamma) * upsilon.cut.sparsity;

  const double delta_r = delta_interference(net, r);
  const int deg_r = degree_at_radius(net, r);
  const double tdma = 1.0 / (1.0 + static_cast<double>(deg_r) * deg_r);
  std::vector<Edge> lower_edges;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = 0; j < n; ++j) {
      if (i == j || net.distance(i, j) > r) continue;
      const double s = net.power * net.gain(i, j) / (1.0 + delta_r);
      lower_edges.push_back({i, j, tdma * expected_log_capacity(s)});
    }
  CapGraph lower_graph(n, std::move(lower_edges));
  FlowSolution flow = max_concurrent_pmf(lower_graph, w, options);
  if (flow.status == SolveStatus::LimitExceeded)
    throw CapabilityError("pmf_bounds_rx_csi: LP exceeds the configured size limit");

  BoundReport report = BoundReport::make(flow.f, upper);
  report.metadata["delta_r"] = delta_r;
  report.metadata["gamma_r"] = gamma;
  report.metadata["Delta_r"] = deg_r;
  report.metadata["r"] = r;
  report.metadata["upsilon"] = upsilon.cut.sparsity;
  report.metadata["heuristic"] = heuristic ? 1.0 : 0.0;
  std::vector<double> caps;
  caps.reserve(lower_graph.edges().size());
  for (const Edge& e : lower_graph.edges()) caps.push_back(e.capacity);
  report.lower_capacities = std::move(caps);
  report.lower_witness = std::move(flow);
  report.upper_witness = std::move(upsilon.cut);
  return report;
}

double awgn_r_of_delta(const Network& net, double delta) {
  if (!(delta > 0.0)) throw std::domain_error("delta must be positive");
  const int n = net.size();
  std::vector<double> distances;
  distances.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) distances.push_back(net.distance(i, j));
  std::sort(distances.begin(), distances.end());
  distances.erase(std::unique(distances.begin(), distances.end()), distances.end());
  for (double d : distances)
    if (delta_interference(net, d) <= delta) return d;
  return std::nextafter(distances.back(), std::numeric_limits<double>::infinity());
}

BoundReport pmf_bounds_awgn(const Network& net, const WeightVector& w, double delta,
                            const SolveOptions& options) {
  const int n = net.size();
  if (n != w.size()) throw std::invalid_argument("weights must match network size");
  if (n > options.limits.enum_cap)
    throw CapabilityError("pmf_bounds_awgn: n=" + std::to_string(n) +
                          " exceeds the enumeration limit " + std::to_string(options.limits.enum_cap));

  // Low-SNR precondition: P g(r_ij) <= 1 for every pair.
  std::string offenders;
  int offender_count = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (net.power * net.gain(i, j) > 1.0) {
        if (offender_count < 4)
          offenders += " (" + std::to_string(i) + "," + std::to_string(j) + ")";
        ++offender_count;
      }
    }
  if (offender_count > 0)
    throw std::domain_error("pmf_bounds_awgn requires P g(r_ij) <= 1; violated by" + offenders +
                            (offender_count > 4 ? " and " + std::to_string(offender_count - 4) + " more" : ""));

  const double r_delta = awgn_r_of_delta(net, delta);

  std::vector<Edge> upper_edges, lower_edges;
  const int deg = degree_at_radius(net, r_delta);
  const double tdma = 1.0 / (1.0 + static_cast<double>(deg) * deg);
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = 0; j < n; ++j) {
      if (i == j || net.distance(i, j) > r_delta) continue;
      const double pg = net.power * net.gain(i, j);
      upper_edges.push_back({i, j, 2.0 * std::log1p(std::sqrt(pg))});
      lower_edges.push_back({i, j, tdma * std::log1p(pg / (1.0 + delta))});
    }

  CapGraph upper_graph(n, std::move(upper_edges));
  Cut cut = sparsest_cut_exact(upper_graph, w, options.limits);
  double pi_s = 0.0, pi_total = 0.0;
  for (double v : w.pi()) pi_total += v;
  for (NodeId v : cut.side_s) pi_s += w[v];
  const double correction =
      static_cast<double>(cut.side_s.size()) * delta / (pi_s * (pi_total - pi_s));
  const double upper = 2.0 * cut.sparsity + correction;

  CapGraph lower_graph(n, std::move(lower_edges));
  FlowSolution flow = max_concurrent_pmf(lower_graph, w, options);
  if (flow.status == SolveStatus::LimitExceeded)
    throw CapabilityError("pmf_bounds_awgn: LP exceeds the configured size limit");

  BoundReport report = BoundReport::make(flow.f, upper);
  report.metadata["r_delta"] = r_delta;
  report.metadata["I_r_delta"] = delta_interference(net, r_delta);
  report.metadata["Delta_r_delta"] = deg;
  report.metadata["delta"] = delta;
  report.metadata["upsilon"] = cut.sparsity;
  report.lower_witness = std::move(flow);
  report.upper_witness = std::move(cut);
  return report;
}

TxRxUpperBound upper_bound_txrx_csi(const Network& net, const WeightVector& w, const Limits& limits) {
  const int n = net.size();
  if (n != w.size()) throw std::invalid_argument("weights must match network size");
  std::vector<Edge> edges;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = 0; j < n; ++j) {
      if (i == j) continue;
      const double a = std::sqrt(net.power * net.gain(i, j));
      edges.push_back({i, j, 2.0 * expected_log_capacity_rayleigh(a)});
    }
  CapGraph g(n, std::move(edges));
  if (g.edges().empty()) {
    // P = 0 leaves an empty graph; any proper cut has value 0.
    Cut cut;
    cut.side_s = {0};
    return {0.0, std::move(cut)};
  }
  Cut cut = sparsest_cut_exact(g, w, limits);
  return {cut.sparsity, std::move(cut)};
}

}  // namespace pmflab
