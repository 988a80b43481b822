#include "pmflab/random_net.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "pmflab/fading.hpp"
#include "pmflab/graph.hpp"
#include "pmflab/interference.hpp"
#include "pmflab/rng.hpp"

namespace pmflab {

Network sample_geometric(int n, const Region& region, std::uint64_t seed, double power,
                         Pathloss pathloss) {
  if (n < 2) throw std::domain_error("sample_geometric needs n >= 2");
  CounterRng rng(seed);
  Network net;
  net.region = region;
  net.power = power;
  net.pathloss = std::move(pathloss);
  net.points.reserve(n);
  const double side = region.kind == Region::Kind::UnitSquare ? 1.0 : region.side;
  for (int i = 0; i < n; ++i) {
    const double x = side * rng.uniform(2 * static_cast<std::uint64_t>(i));
    const double y = side * rng.uniform(2 * static_cast<std::uint64_t>(i) + 1);
    net.points.push_back({x, y});
  }
  return net;
}

ChernoffBound chernoff_delta(int n, double p, double delta) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("chernoff bound needs p in (0,1)");
  if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("chernoff delta mode needs delta in (0,1)");
  if (n < 1) throw std::domain_error("chernoff bound needs n >= 1");
  return {2.0 * std::exp(-delta * delta * n * p / 2.0), std::nullopt};
}

ChernoffBound chernoff_L(int n, double p, double L) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("chernoff bound needs p in (0,1)");
  if (!(L > 0.0)) throw std::domain_error("chernoff L mode needs L > 0");
  if (n < 1) throw std::domain_error("chernoff bound needs n >= 1");
  ChernoffBound b;
  b.bound = 2.0 / std::pow(static_cast<double>(n), L);
  b.deviation = std::sqrt(2.0 * L * n * p * std::log(static_cast<double>(n)));
  return b;
}

namespace {

// Augmenting-path bipartite matching restricted to pairs within radius.
struct MatchOracle {
  int n;
  const std::vector<double>& dist;  // n * n, a-major
  std::vector<int> match_a, match_b;
  std::vector<char> visited;

  explicit MatchOracle(int n, const std::vector<double>& dist) : n(n), dist(dist) {}

  bool augment(int a, double radius) {
    for (int b = 0; b < n; ++b) {
      if (visited[b] || dist[static_cast<std::size_t>(a) * n + b] > radius) continue;
      visited[b] = 1;
      if (match_b[b] < 0 || augment(match_b[b], radius)) {
        match_a[a] = b;
        match_b[b] = a;
        return true;
      }
    }
    return false;
  }

  bool perfect(double radius) {
    match_a.assign(n, -1);
    match_b.assign(n, -1);
    for (int a = 0; a < n; ++a) {
      visited.assign(n, 0);
      if (!augment(a, radius)) return false;
    }
    return true;
  }
};

}  // namespace

BottleneckMatching bottleneck_matching(std::span<const Point> a, std::span<const Point> b,
                                       const Region& region) {
  if (a.size() != b.size()) throw std::domain_error("bottleneck_matching needs |a| == |b|");
  const int n = static_cast<int>(a.size());
  if (n == 0) return {};
  std::vector<double> dist(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      dist[static_cast<std::size_t>(i) * n + j] = region.distance(a[i], b[j]);
  std::vector<double> cand = dist;
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  MatchOracle oracle(n, dist);
  int lo = 0, hi = static_cast<int>(cand.size()) - 1;
  if (!oracle.perfect(cand[hi])) throw std::logic_error("complete bipartite instance must match");
  std::vector<int> best = oracle.match_a;
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    if (oracle.perfect(cand[mid])) {
      hi = mid;
      best = oracle.match_a;
    } else {
      lo = mid + 1;
    }
  }
  return {std::move(best), cand[hi]};
}

GridEmbedding grid_embedding(const Network& net, int m) {
  if (net.size() != m * m)
    throw std::domain_error("grid_embedding needs exactly m^2 nodes, got " +
                            std::to_string(net.size()));
  const double side = net.region.kind == Region::Kind::UnitSquare ? 1.0 : net.region.side;
  const double spacing = side / m;
  const std::vector<Point> grid = grid_points(m, side);
  BottleneckMatching matching = bottleneck_matching(grid, net.points, net.region);

  GridEmbedding emb;
  emb.grid_to_net = matching.match;
  emb.r_used = matching.r_star + 2.0 * spacing;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const NodeId g = grid_node(m, i, j);
      if (i + 1 < m) emb.edges.emplace_back(matching.match[g], matching.match[grid_node(m, i + 1, j)]);
      if (j + 1 < m) emb.edges.emplace_back(matching.match[g], matching.match[grid_node(m, i, j + 1)]);
    }
  for (const auto& [u, v] : emb.edges)
    emb.max_edge_length =
        std::max(emb.max_edge_length, net.region.distance(net.points[u], net.points[v]));
  emb.certificate_ok = emb.max_edge_length <= emb.r_used + 1e-12;
  return emb;
}

DelayReport delay_report(std::span<const FlowPath> paths, const TrafficMatrix& lam) {
  const int n = lam.size();
  TrafficMatrix routed(n);
  for (const FlowPath& p : paths) {
    if (p.nodes.size() < 2) throw std::domain_error("flow path needs at least two nodes");
    if (!(p.flow >= 0.0) || !std::isfinite(p.flow)) throw std::domain_error("path flow must be finite and nonnegative");
    for (NodeId v : p.nodes)
      if (v < 0 || v >= n) throw std::domain_error("path node out of range");
    const NodeId src = p.nodes.front(), dst = p.nodes.back();
    if (src == dst) throw std::domain_error("path endpoints must differ");
    routed.set(src, dst, routed(src, dst) + p.flow);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (std::fabs(routed(i, j) - lam(i, j)) > 1e-8)
        throw std::domain_error("path flows do not decompose lambda at pair (" +
                                std::to_string(i) + "," + std::to_string(j) + ")");

  DelayReport report;
  report.lambda_bar = lam.total();
  if (!(report.lambda_bar > 0.0)) throw std::domain_error("delay is undefined for zero traffic");
  std::vector<double> per_node(n, 0.0);
  for (const FlowPath& p : paths) {
    report.s_n += static_cast<double>(p.nodes.size() - 1) * p.flow;
    for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i) per_node[p.nodes[i]] += p.flow;
  }
  report.s_n_node = std::accumulate(per_node.begin(), per_node.end(), 0.0);
  if (std::fabs(report.s_n - report.s_n_node) > 1e-9 * std::max(1.0, report.s_n))
    throw std::logic_error("path-sum and node-sum transmission counts disagree");
  report.d_n = report.s_n / report.lambda_bar;
  return report;
}

std::vector<FlowPath> grid_umf_paths(int m, double f) {
  if (m < 2) throw std::domain_error("grid_umf_paths needs m >= 2");
  if (!(f > 0.0)) throw std::domain_error("grid_umf_paths needs f > 0");
  std::vector<FlowPath> paths;
  const int n = m * m;
  paths.reserve(static_cast<std::size_t>(n) * (n - 1));
  for (int si = 0; si < m; ++si)
    for (int sj = 0; sj < m; ++sj)
      for (int ti = 0; ti < m; ++ti)
        for (int tj = 0; tj < m; ++tj) {
          if (si == ti && sj == tj) continue;
          FlowPath p;
          p.flow = f;
          int i = si, j = sj;
          p.nodes.push_back(grid_node(m, i, j));
          while (i != ti) {
            i += (ti > i) ? 1 : -1;
            p.nodes.push_back(grid_node(m, i, j));
          }
          while (j != tj) {
            j += (tj > j) ? 1 : -1;
            p.nodes.push_back(grid_node(m, i, j));
          }
          paths.push_back(std::move(p));
        }
  return paths;
}

SlopeFit fit_log_slope(std::span<const std::pair<double, double>> n_and_mean) {
  SlopeFit fit;
  std::vector<std::pair<double, double>> pts;
  for (const auto& [n, mean] : n_and_mean)
    if (n > 0.0 && mean > 0.0) pts.emplace_back(std::log(n), std::log(mean));
  fit.points = static_cast<int>(pts.size());
  if (fit.points < 2) return fit;
  double sx = 0, sy = 0;
  for (auto& [x, y] : pts) sx += x, sy += y;
  const double mx = sx / fit.points, my = sy / fit.points;
  double sxx = 0, sxy = 0, sse = 0;
  for (auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  fit.slope = sxy / sxx;
  for (auto& [x, y] : pts) {
    const double resid = y - my - fit.slope * (x - mx);
    sse += resid * resid;
  }
  if (fit.points > 2) {
    const double se = std::sqrt(sse / (fit.points - 2) / sxx);
    fit.half_width = 1.96 * se;
  }
  return fit;
}

namespace {

std::uint64_t trial_seed(std::uint64_t seed, int n, int trial) {
  CounterRng rng(seed);
  return rng.bits(static_cast<std::uint64_t>(n) * 0x10001ull + static_cast<std::uint64_t>(trial));
}

void finish_experiment(ExperimentResult& result) {
  std::map<int, std::pair<double, int>> lower_acc, upper_acc;
  for (const ExperimentRow& row : result.rows) {
    if (row.status != "ok" && row.status != "approx") {
      ++result.excluded;
      continue;
    }
    lower_acc[row.n].first += row.lower;
    lower_acc[row.n].second += 1;
    upper_acc[row.n].first += row.upper;
    upper_acc[row.n].second += 1;
  }
  auto fit_of = [](const std::map<int, std::pair<double, int>>& acc) {
    std::vector<std::pair<double, double>> means;
    for (const auto& [n, sum_count] : acc)
      means.emplace_back(static_cast<double>(n), sum_count.first / sum_count.second);
    return fit_log_slope(means);
  };
  result.slopes["lower"] = fit_of(lower_acc);
  result.slopes["upper"] = fit_of(upper_acc);
}

}  // namespace

ExperimentResult scaling_experiment_combinatorial(const CombExperimentConfig& config) {
  if (config.trials < 1) throw std::domain_error("experiment needs trials >= 1");
  ExperimentResult result;
  for (int n : config.ns) {
    const int m = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    if (m * m != n) throw std::domain_error("experiment sizes must be perfect squares, got " + std::to_string(n));
    const double r = config.c_r * std::pow(std::log(static_cast<double>(n)), 0.75) /
                     std::sqrt(static_cast<double>(n));
    for (int trial = 0; trial < config.trials; ++trial) {
      ExperimentRow row;
      row.n = n;
      row.trial = trial;
      row.slope_group = "scaling-comb";
      try {
        Network net =
            sample_geometric(n, Region::unit_square(), trial_seed(config.seed, n, trial));
        if (network_connectivity_radius(net) > r) {
          row.status = "disconnected";
          result.rows.push_back(std::move(row));
          continue;
        }
        ConflictModel model = protocol_model(net, r, config.eta, /*restricted=*/true);
        Schedule schedule = conflict_coloring(model);
        row.kappa_hat = schedule.kappa_hat;
        row.delta_r = dual_max_degree(model);

        // Central square of side 1/3.
        std::vector<char> in_s(n, 0);
        int size_s = 0;
        for (int v = 0; v < n; ++v) {
          const Point& p = net.points[v];
          if (p.x >= 1.0 / 3 && p.x <= 2.0 / 3 && p.y >= 1.0 / 3 && p.y <= 2.0 / 3)
            in_s[v] = 1, ++size_s;
        }
        if (size_s == 0 || size_s == n) {
          row.status = "degenerate";
          result.rows.push_back(std::move(row));
          continue;
        }
        std::int64_t crossing = 0;
        for (const Edge& e : model.graph.edges())
          if (in_s[e.tail] && !in_s[e.head]) ++crossing;
        row.upper = static_cast<double>(crossing) /
                    (schedule.kappa_hat * static_cast<double>(size_s) * (n - size_s));

        FlowSolution f2 = max_concurrent_pmf(
            model.graph.with_uniform_capacity(1.0 / schedule.kappa_hat),
            WeightVector::uniform(n), config.solve);
        if (f2.status != SolveStatus::Optimal) {
          row.status = "error:lp_" + to_string(f2.status);
          result.rows.push_back(std::move(row));
          continue;
        }
        row.lower = f2.f;
        row.status = f2.approximate ? "approx" : "ok";
      } catch (const std::exception& e) {
        row.status = std::string("error:") + e.what();
      }
      result.rows.push_back(std::move(row));
    }
  }
  finish_experiment(result);
  return result;
}

double annulus_interference(const Network& net, double r) {
  const int n = net.size();
  double worst = 0.0;
  for (int v = 0; v < n; ++v) {
    double iv = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == v) continue;
      const double d = net.distance(v, j);
      if (d > r) iv += net.power * net.pathloss(std::floor(d));
    }
    worst = std::max(worst, iv);
  }
  return worst;
}

ExperimentResult scaling_experiment_fading(const FadingExperimentConfig& config) {
  if (config.trials < 1) throw std::domain_error("experiment needs trials >= 1");
  if (!(config.alpha > 3.0)) throw std::domain_error("fading experiment needs alpha > 3");
  ExperimentResult result;
  for (int n : config.ns) {
    const int m = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    if (m * m != n) throw std::domain_error("experiment sizes must be perfect squares, got " + std::to_string(n));
    const double side = std::sqrt(static_cast<double>(n));
    const double r = config.c_r * std::log(static_cast<double>(n));
    for (int trial = 0; trial < config.trials; ++trial) {
      ExperimentRow row;
      row.n = n;
      row.trial = trial;
      row.slope_group = "scaling-fading";
      try {
        Network net = sample_geometric(n, Region::torus(side), trial_seed(config.seed, n, trial),
                                       /*power=*/1.0, Pathloss::inverse_poly(config.alpha));

        // Horizontal half split.
        std::vector<char> in_u(n, 0);
        int size_u = 0;
        for (int v = 0; v < n; ++v)
          if (net.points[v].y < side / 2.0) in_u[v] = 1, ++size_u;
        if (size_u == 0 || size_u == n) {
          row.status = "degenerate";
          result.rows.push_back(std::move(row));
          continue;
        }
        double cut_value = 0.0;
        for (int i = 0; i < n; ++i) {
          if (!in_u[i]) continue;
          for (int j = 0; j < n; ++j)
            if (!in_u[j]) cut_value += expected_log_capacity(net.power * net.gain(i, j));
        }
        row.upper = cut_value / (static_cast<double>(size_u) * (n - size_u));

        // Randomized-TDMA lower bound over the grid embedding.
        GridEmbedding emb = grid_embedding(net, m);
        const int delta_2r = std::max(degree_at_radius(net, 2.0 * r), 1);
        row.kappa_hat = delta_2r;
        std::vector<double> interference(n, 0.0);
        for (int v = 0; v < n; ++v) {
          for (int j = 0; j < n; ++j) {
            if (j == v) continue;
            const double d = net.distance(v, j);
            if (d > r) interference[v] += net.power * net.pathloss(std::floor(d));
          }
        }
        row.delta_r = *std::max_element(interference.begin(), interference.end());

        std::vector<Edge> edges;
        edges.reserve(emb.edges.size() * 2);
        for (const auto& [u, v] : emb.edges) {
          const double d = net.distance(u, v);
          const double g = net.pathloss(d);
          edges.push_back({u, v, expected_log_capacity(net.power * delta_2r * g /
                                                       (1.0 + interference[v])) / delta_2r});
          edges.push_back({v, u, expected_log_capacity(net.power * delta_2r * g /
                                                       (1.0 + interference[u])) / delta_2r});
        }
        FlowSolution flow = max_concurrent_pmf(CapGraph(n, std::move(edges)),
                                               WeightVector::uniform(n), config.solve);
        if (flow.status != SolveStatus::Optimal) {
          row.status = "error:lp_" + to_string(flow.status);
          result.rows.push_back(std::move(row));
          continue;
        }
        row.lower = flow.f;
        row.status = flow.approximate ? "approx" : "ok";
      } catch (const std::exception& e) {
        row.status = std::string("error:") + e.what();
      }
      result.rows.push_back(std::move(row));
    }
  }
  finish_experiment(result);
  return result;
}

}  // namespace pmflab
