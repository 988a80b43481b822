#include "pmflab/network.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>

#include "pmflab/graph.hpp"
#include "pmflab/rng.hpp"

namespace pmflab {

double Pathloss::operator()(double dist) const {
  if (!(dist >= 0.0)) throw std::domain_error("pathloss distance must be nonnegative");
  if (kind == Kind::InversePoly) return std::pow(1.0 + dist, -alpha);
  // Table: linear interpolation, clamped at the ends.
  if (dist <= table.front().first) return table.front().second;
  if (dist >= table.back().first) return table.back().second;
  auto it = std::upper_bound(table.begin(), table.end(), dist,
                             [](double d, const auto& p) { return d < p.first; });
  const auto& [x1, g1] = *it;
  const auto& [x0, g0] = *(it - 1);
  const double t = (dist - x0) / (x1 - x0);
  return g0 + t * (g1 - g0);
}

Pathloss Pathloss::inverse_poly(double alpha) {
  if (!(alpha > 0.0)) throw std::domain_error("pathloss exponent must be positive");
  Pathloss p;
  p.kind = Kind::InversePoly;
  p.alpha = alpha;
  return p;
}

Pathloss Pathloss::from_table(std::vector<std::pair<double, double>> table) {
  if (table.size() < 2) throw std::domain_error("pathloss table needs at least two points");
  for (std::size_t i = 0; i < table.size(); ++i) {
    auto [x, g] = table[i];
    if (!(x >= 0.0) || !(g >= 0.0) || g > 1.0) throw std::domain_error("pathloss table entries must have x >= 0, 0 <= g <= 1");
    if (i > 0 && (x <= table[i - 1].first || g > table[i - 1].second))
      throw std::domain_error("pathloss table must be increasing in distance and nonincreasing in gain");
  }
  Pathloss p;
  p.kind = Kind::Table;
  p.table = std::move(table);
  return p;
}

std::vector<double> Network::distance_matrix() const {
  const int n = size();
  std::vector<double> d(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double dist = distance(i, j);
      d[static_cast<std::size_t>(i) * n + j] = dist;
      d[static_cast<std::size_t>(j) * n + i] = dist;
    }
  return d;
}

int degree_at_radius(const Network& net, double r) {
  const int n = net.size();
  int max_deg = 0;
  for (int i = 0; i < n; ++i) {
    int deg = 0;
    for (int j = 0; j < n; ++j)
      if (j != i && net.distance(i, j) <= r) ++deg;
    max_deg = std::max(max_deg, deg);
  }
  return max_deg;
}

double delta_interference(const Network& net, double r) {
  const int n = net.size();
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d = net.distance(i, j);
      if (d >= r) sum += net.power * net.pathloss(d);
    }
    worst = std::max(worst, sum);
  }
  return worst;
}

double network_connectivity_radius(const Network& net) {
  return connectivity_radius(std::span<const Point>(net.points), net.region);
}

ChannelDraw draw_channel(const Network& net, std::uint64_t seed) {
  const int n = net.size();
  ChannelDraw draw;
  draw.n = n;
  draw.seed = seed;
  draw.gains2.assign(static_cast<std::size_t>(n) * n, 0.0);
  CounterRng rng(seed);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const std::uint64_t ctr = static_cast<std::uint64_t>(i) * n + j;
      const double x = -std::log(rng.uniform_pos(ctr));  // Exp(1)
      draw.gains2[static_cast<std::size_t>(i) * n + j] = net.gain(i, j) * x;
    }
  return draw;
}

}  // namespace pmflab
