#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pmflab/flow.hpp"
#include "pmflab/network.hpp"

namespace pmflab {

// n i.i.d. uniform points in the region from a counter-based generator;
// identical (seed, n, region) reproduces the network bit-for-bit.
Network sample_geometric(int n, const Region& region, std::uint64_t seed, double power = 1.0,
                         Pathloss pathloss = Pathloss::inverse_poly(3.5));

struct ChernoffBound {
  double bound = 0.0;
  std::optional<double> deviation;  // sqrt(2 L n p log n) in L mode
};
// P(|S - np| >= delta n p) <= 2 exp(-delta^2 n p / 2)
ChernoffBound chernoff_delta(int n, double p, double delta);
// deviation sqrt(2 L n p log n) fails with probability at most 2 / n^L
ChernoffBound chernoff_L(int n, double p, double L);

struct BottleneckMatching {
  std::vector<int> match;  // index into b for each element of a
  double r_star = 0.0;
};
// Perfect matching minimizing the maximum matched distance, by binary search
// over the distance multiset with an augmenting-path feasibility oracle.
BottleneckMatching bottleneck_matching(std::span<const Point> a, std::span<const Point> b,
                                       const Region& region);

struct GridEmbedding {
  std::vector<std::pair<NodeId, NodeId>> edges;  // undirected net-node pairs
  double r_used = 0.0;                           // r_star + 2 * spacing
  std::vector<int> grid_to_net;                  // grid node -> net node
  double max_edge_length = 0.0;
  bool certificate_ok = false;  // max_edge_length <= r_used
};
// Matches the network onto the m x m grid scaled to its region and relabels
// grid adjacency through the matching. Requires |net| == m^2.
GridEmbedding grid_embedding(const Network& net, int m);

struct FlowPath {
  std::vector<NodeId> nodes;
  double flow = 0.0;
};

struct DelayReport {
  double s_n = 0.0;          // transmissions per unit time, path sum
  double s_n_node = 0.0;     // same quantity counted per transmitting node
  double lambda_bar = 0.0;   // sum of all demands
  double d_n = 0.0;          // s_n / lambda_bar
};
// Requires the per-pair path flows to sum to lam within 1e-8.
DelayReport delay_report(std::span<const FlowPath> paths, const TrafficMatrix& lam);

// Dimension-ordered (row-then-column) routing of the uniform flow U(f) on
// the m x m grid.
std::vector<FlowPath> grid_umf_paths(int m, double f);

struct ExperimentRow {
  int n = 0;
  int trial = 0;
  double lower = 0.0;
  double upper = 0.0;
  double kappa_hat = 0.0;
  double delta_r = 0.0;
  std::string slope_group;
  std::string status;  // ok | approx | disconnected | degenerate | error:<detail>
};

struct SlopeFit {
  double slope = 0.0;
  double half_width = 0.0;  // 95% confidence half-width of the slope
  int points = 0;
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;
  std::map<std::string, SlopeFit> slopes;  // keys "lower", "upper"
  int excluded = 0;
};

// Least-squares slope of log(value) vs log(n), fitted on per-n means.
SlopeFit fit_log_slope(std::span<const std::pair<double, double>> n_and_mean);

struct CombExperimentConfig {
  std::vector<int> ns;       // perfect squares
  int trials = 1;
  std::uint64_t seed = 0;
  double c_r = 1.0;          // r = c_r log^(3/4)(n) / sqrt(n)
  double eta = 0.1;
  SolveOptions solve{Limits{}, SolveOptions::Mode::Auto, 0.3};
};
// Restricted protocol model on uniform points in the unit square: lower
// column f2*, upper column the central-square cut at the 1/kappa time-share.
ExperimentResult scaling_experiment_combinatorial(const CombExperimentConfig& config);

struct FadingExperimentConfig {
  std::vector<int> ns;       // perfect squares
  double alpha = 3.5;        // pathloss exponent, > 3
  int trials = 1;
  std::uint64_t seed = 0;
  double c_r = 1.0;          // r = c_r log n
  SolveOptions solve{Limits{}, SolveOptions::Mode::Auto, 0.3};
};
// Unit-density torus with Rayleigh fading: upper column the horizontal
// half-split cut of the expected-capacity graph, lower column the LP value
// on the grid embedding under the randomized TDMA rate formula.
ExperimentResult scaling_experiment_fading(const FadingExperimentConfig& config);

// Annulus-discretized residual interference: per receiver, interferers
// beyond r are charged P g(floor(d)); returns the worst node's total. This
// is the fading experiment's delta_r diagnostic.
double annulus_interference(const Network& net, double r);

}  // namespace pmflab
