#pragma once

#include <cstdint>
#include <vector>

#include "pmflab/flow.hpp"

namespace pmflab {

struct PmfSpec {
  double f = 0.0;
  WeightVector weights;
};

struct PermutationFlow {
  std::vector<int> perm;  // bijection on [0, n)
  double f = 0.0;
  bool allow_fixed_points = false;
};

// lambda_ij = f pi(i) pi(j) for i != j, zero diagonal. With uniform weights
// this is the uniform flow U(f).
TrafficMatrix pmf_matrix(const PmfSpec& spec);
TrafficMatrix pmf_matrix(double f, const WeightVector& w);

// f * Sigma with the diagonal dropped; fixed points require the explicit flag.
TrafficMatrix permutation_flow_matrix(const PermutationFlow& pf);

// max over nodes of total outgoing or incoming demand.
double rho(const TrafficMatrix& lam);

// Uniform two-stage spreading: stage1_ij = row_i(lam)/n, stage2_ij = col_j(lam)/n
// for i != j. Requires rho(lam) <= n f / 2.
struct TwoStageRoute {
  TrafficMatrix stage1, stage2;
};
TwoStageRoute two_stage_route(const TrafficMatrix& lam, double f);

// Time-sharing deficit ||U_n(f) - Gamma_n|| <= (1 - feasible/total) n f.
double time_share_deficit(int n, std::int64_t feasible_count, std::int64_t total_perms, double f);

// Census of permutations Sigma with S(f, Sigma) feasible on g: exhaustive for
// n <= 5, Monte Carlo otherwise.
struct PermutationCensus {
  std::int64_t feasible = 0;
  std::int64_t total = 0;
  bool exact = true;
};
PermutationCensus count_feasible_permutations(const CapGraph& g, double f, std::uint64_t seed,
                                              int mc_samples = 200, const SolveOptions& options = {});

}  // namespace pmflab
