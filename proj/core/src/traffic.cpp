#include "pmflab/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pmflab/rng.hpp"

namespace pmflab {

TrafficMatrix pmf_matrix(const PmfSpec& spec) { return pmf_matrix(spec.f, spec.weights); }

TrafficMatrix pmf_matrix(double f, const WeightVector& w) {
  if (!(f >= 0.0) || !std::isfinite(f)) throw std::domain_error("pmf rate must be finite and nonnegative");
  const int n = w.size();
  TrafficMatrix lam(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) lam.set(i, j, f * w[i] * w[j]);
  return lam;
}

TrafficMatrix permutation_flow_matrix(const PermutationFlow& pf) {
  const int n = static_cast<int>(pf.perm.size());
  if (!(pf.f >= 0.0)) throw std::domain_error("permutation flow rate must be nonnegative");
  std::vector<char> hit(n, 0);
  for (int i = 0; i < n; ++i) {
    const int t = pf.perm[i];
    if (t < 0 || t >= n || hit[t]) throw std::domain_error("perm must be a bijection on [0, n)");
    hit[t] = 1;
    if (t == i && !pf.allow_fixed_points)
      throw std::domain_error("permutation has a fixed point at " + std::to_string(i));
  }
  TrafficMatrix lam(n);
  for (int i = 0; i < n; ++i)
    if (pf.perm[i] != i) lam.set(i, pf.perm[i], pf.f);
  return lam;
}

double rho(const TrafficMatrix& lam) {
  double r = 0.0;
  for (int i = 0; i < lam.size(); ++i) r = std::max({r, lam.row_sum(i), lam.col_sum(i)});
  return r;
}

TwoStageRoute two_stage_route(const TrafficMatrix& lam, double f) {
  const int n = lam.size();
  const double r = rho(lam);
  if (r > n * f / 2.0)
    throw std::domain_error("two_stage_route requires rho(lam) <= n f / 2: rho=" + std::to_string(r) +
                            ", n f / 2=" + std::to_string(n * f / 2.0));
  TwoStageRoute route{TrafficMatrix(n), TrafficMatrix(n)};
  for (int i = 0; i < n; ++i) {
    const double spread = lam.row_sum(i) / n;
    for (int j = 0; j < n; ++j)
      if (i != j) route.stage1.set(i, j, spread);
  }
  for (int j = 0; j < n; ++j) {
    const double spread = lam.col_sum(j) / n;
    for (int i = 0; i < n; ++i)
      if (i != j) route.stage2.set(i, j, spread);
  }
  return route;
}

double time_share_deficit(int n, std::int64_t feasible_count, std::int64_t total_perms, double f) {
  if (total_perms < 1) throw std::domain_error("total_perms must be at least 1");
  if (feasible_count < 0 || feasible_count > total_perms)
    throw std::domain_error("feasible_count must lie in [0, total_perms]");
  const double miss = 1.0 - static_cast<double>(feasible_count) / static_cast<double>(total_perms);
  return miss * n * f;
}

PermutationCensus count_feasible_permutations(const CapGraph& g, double f, std::uint64_t seed,
                                              int mc_samples, const SolveOptions& options) {
  const int n = g.node_count();
  PermutationCensus census;
  auto feasible = [&](const std::vector<int>& perm) {
    PermutationFlow pf{perm, f, /*allow_fixed_points=*/true};
    return check_feasible(g, permutation_flow_matrix(pf), options).feasible;
  };
  if (n <= 5) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      ++census.total;
      if (feasible(perm)) ++census.feasible;
    } while (std::next_permutation(perm.begin(), perm.end()));
    census.exact = true;
  } else {
    census.exact = false;
    for (int s = 0; s < mc_samples; ++s) {
      RngStream rng(seed, static_cast<std::uint64_t>(s) + 1);
      std::vector<int> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      rng.shuffle(perm);
      ++census.total;
      if (feasible(perm)) ++census.feasible;
    }
  }
  return census;
}

}  // namespace pmflab
