#pragma once

#include <vector>

#include "pmflab/flow.hpp"
#include "pmflab/network.hpp"

namespace pmflab {

// Link set E (unit rates, W(e) = 1) together with the interference sets
// I(e), stored as edge indices into graph.edges(). The reverse of every edge
// is present, and e never interferes with itself.
struct ConflictModel {
  CapGraph graph;
  std::vector<std::vector<int>> interferes;
};

// Conflict-free link classes from a greedy coloring of the dual graph; the
// induced uniform time-share gives every link capacity 1/kappa_hat.
struct Schedule {
  std::vector<std::vector<int>> classes;
  int kappa_hat = 0;
  std::vector<double> cap_vector;
};

// Protocol interference model: E = pairs within distance r. The standard
// variant silences transmitters within (1+eta) r_ij of the receiver, the
// restricted variant within (1+eta) r. half_duplex additionally conflicts
// all links sharing an endpoint.
ConflictModel protocol_model(const Network& net, double r, double eta, bool restricted,
                             bool half_duplex = true);

struct SinrModel {
  ConflictModel model;
  bool valid_rate_w = false;   // beta <= (P gamma / (2^W - 1) - N0B) / (n P)
  double beta_threshold = 0.0;
};

// SINR threshold model: E_gamma keeps links with gain >= gamma; a link
// interferes with e when its transmitter reaches e's receiver with gain >=
// beta. W is the per-link rate, N0B the noise-bandwidth product.
SinrModel sinr_threshold_model(const Network& net, double gamma, double beta, double W, double N0B);

// Symmetrized dual conflict graph adjacency (e ~ ehat when either interferes
// with the other) and its maximum degree.
std::vector<std::vector<int>> dual_adjacency(const ConflictModel& model);
int dual_max_degree(const ConflictModel& model);

// Greedy descending-degree coloring of the dual graph; kappa_hat <=
// dual_max_degree + 1.
Schedule conflict_coloring(const ConflictModel& model);

// f1* (all capacities 1) and f2* (capacities 1/kappa_hat); lower = f2*,
// upper = f1* = kappa_hat f2* by LP scaling.
BoundReport umf_bounds_combinatorial(const ConflictModel& model, const WeightVector& w,
                                     const SolveOptions& options = {});

// Cut-based bracket: lower = Psi_pi at the 1/kappa_hat time-share vector,
// upper = Psi_pi at all-ones capacities; metadata carries f2*.
BoundReport psi_bounds(const ConflictModel& model, const WeightVector& w,
                       const SolveOptions& options = {});

}  // namespace pmflab
