#pragma once

#include <map>
#include <string>

#include "pmflab/flow.hpp"
#include "pmflab/network.hpp"

namespace pmflab {

// E[log(1 + s X)] in nats, X ~ Exp(1) (the squared magnitude of a unit
// circularly-symmetric complex Gaussian). Absolute accuracy 1e-6 or better.
double expected_log_capacity(double s);

// E[log(1 + a V)], V Rayleigh with E[V^2] = 1 (the magnitude of the same
// Gaussian). Used by the CSI-at-both-ends upper bound.
double expected_log_capacity_rayleigh(double a);

// Complete graph with capacity E log(1 + P |H_ji|^2) per directed edge; the
// sparsest cut of this graph upper-bounds the PMF with receiver-only CSI.
CapGraph build_upper_graph_rx_csi(const Network& net);

struct LowerGraphRxCsi {
  CapGraph graph;
  std::map<std::string, double> metadata;  // Delta_r, Delta_r_eta, denominator, alpha_tdma
};

// Edges of G_r with the TDMA-discounted achievable rate
//   (1 / (1 + Delta(r) Delta(r(1+eta)))) E log(1 + P|H_ji|^2 / (1 + n P g(r(1+eta)))).
// Requires r >= r*.
LowerGraphRxCsi build_lower_graph_rx_csi(const Network& net, double r, double eta);

// Sandwich for receiver-only CSI: upper = (1 + gamma(r)) Upsilon on the
// distance-truncated expected-capacity graph, lower = LP value on the
// truncated graph with interference denominator 1 + delta(r).
BoundReport pmf_bounds_rx_csi(const Network& net, const WeightVector& w, double r,
                              const SolveOptions& options = {});

// Low-SNR AWGN sandwich; requires P g(r_ij) <= 1 for every pair.
BoundReport pmf_bounds_awgn(const Network& net, const WeightVector& w, double delta,
                            const SolveOptions& options = {});

struct TxRxUpperBound {
  double value = 0.0;
  Cut cut;
};
TxRxUpperBound upper_bound_txrx_csi(const Network& net, const WeightVector& w,
                                    const Limits& limits = {});

// gamma(r): max over cuts of the far-edge / near-edge expected-capacity
// ratio. Exact by enumeration for n <= limits.enum_cap, otherwise a sampled
// lower estimate (flagged by the caller).
double gamma_far_ratio(const Network& net, const WeightVector& w, double r, const Limits& limits,
                       bool* heuristic = nullptr);

// r(delta): smallest pairwise distance d with delta_interference(net, d) <=
// delta; just beyond the largest distance when no grid point qualifies.
double awgn_r_of_delta(const Network& net, double delta);

}  // namespace pmflab
