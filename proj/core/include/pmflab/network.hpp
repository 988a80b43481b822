#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "pmflab/types.hpp"

namespace pmflab {

// Pathloss profile g(.): monotonically decreasing with g(x) <= 1.
struct Pathloss {
  enum class Kind { InversePoly, Table };

  Kind kind = Kind::InversePoly;
  double alpha = 3.5;                                 // g(x) = (1+x)^-alpha
  std::vector<std::pair<double, double>> table;       // (distance, gain), sorted

  double operator()(double dist) const;

  static Pathloss inverse_poly(double alpha);
  static Pathloss from_table(std::vector<std::pair<double, double>> table);
};

// Node placements plus the physical channel parameters. Noise variance is
// normalized to 1; n0b is only used by the SINR threshold model.
struct Network {
  std::vector<Point> points;
  Region region = Region::unit_square();
  double power = 1.0;  // P, linear
  Pathloss pathloss;
  std::optional<double> n0b;

  int size() const { return static_cast<int>(points.size()); }
  double distance(int i, int j) const { return region.distance(points[i], points[j]); }
  double gain(int i, int j) const { return pathloss(distance(i, j)); }
  std::vector<double> distance_matrix() const;  // n * n row-major
};

// Delta(r): max over nodes of the number of neighbors within distance r.
int degree_at_radius(const Network& net, double r);

// delta(r) = max_i sum_{j != i, r_ij >= r} P g(r_ij).
double delta_interference(const Network& net, double r);

// Longest MST edge over the network's points under its region metric.
double network_connectivity_radius(const Network& net);

// One realization of squared channel magnitudes |H_ij|^2 = g(r_ij) X with
// X ~ Exp(1) i.i.d. per ordered pair; the diagonal is zero.
struct ChannelDraw {
  int n = 0;
  std::vector<double> gains2;  // n * n row-major
  std::uint64_t seed = 0;

  double operator()(int i, int j) const { return gains2[static_cast<std::size_t>(i) * n + j]; }
};

ChannelDraw draw_channel(const Network& net, std::uint64_t seed);

}  // namespace pmflab
