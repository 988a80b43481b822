#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pmflab/graph.hpp"

namespace pmflab {

// Demand matrix: nonnegative, finite, zero diagonal.
class TrafficMatrix {
 public:
  TrafficMatrix() = default;
  explicit TrafficMatrix(int n) : n_(n), lam_(static_cast<std::size_t>(n) * n, 0.0) {}
  TrafficMatrix(int n, std::vector<double> row_major);

  int size() const { return n_; }
  double operator()(int i, int j) const { return lam_[static_cast<std::size_t>(i) * n_ + j]; }
  void set(int i, int j, double v);
  const std::vector<double>& data() const { return lam_; }

  double row_sum(int i) const;
  double col_sum(int j) const;
  double total() const;  // lambda_bar

  TrafficMatrix& operator+=(const TrafficMatrix& other);
  TrafficMatrix scaled(double c) const;

 private:
  int n_ = 0;
  std::vector<double> lam_;
};

enum class SolveStatus { Optimal, Infeasible, LimitExceeded };

std::string to_string(SolveStatus s);

// Flow of one source-aggregated commodity; edge_flow is parallel to
// CapGraph::edges().
struct CommodityFlow {
  NodeId source = 0;
  std::vector<double> edge_flow;
};

struct FlowSolution {
  double f = 0.0;
  SolveStatus status = SolveStatus::Optimal;
  std::vector<CommodityFlow> flows;
  bool approximate = false;
  std::int64_t lp_iterations = 0;
};

struct SolveOptions {
  Limits limits{};
  enum class Mode { Exact, Auto, Approx } mode = Mode::Exact;
  double epsilon = 0.1;  // accuracy parameter of the approximate mode
};

// Exact optimum of the concurrent product-flow LP: maximize f such that
// demands f pi(i) pi(j) for all ordered pairs route simultaneously within
// the edge capacities. Mode Auto falls back to the multiplicative-weights
// approximation when the LP exceeds limits.lp_row_cap.
FlowSolution max_concurrent_pmf(const CapGraph& g, const WeightVector& w,
                                const SolveOptions& options = {});

struct FeasibilityResult {
  bool feasible = false;
  SolveStatus status = SolveStatus::Optimal;
  FlowSolution routing;             // populated when feasible
  std::optional<Cut> violated_cut;  // attached when infeasible and one is found
};

FeasibilityResult check_feasible(const CapGraph& g, const TrafficMatrix& lam,
                                 const SolveOptions& options = {});

struct BoundReport {
  double lower = 0.0;
  double upper = 0.0;
  double gap_factor = 0.0;  // upper / lower, +inf when lower == 0
  std::optional<FlowSolution> lower_witness;
  std::optional<std::vector<double>> lower_capacities;
  std::optional<Cut> upper_witness;
  std::map<std::string, double> metadata;

  // Validates lower <= upper + 1e-6 max(1, upper) and fills gap_factor.
  static BoundReport make(double lower, double upper);
};

// lower = exact LP value, upper = sparsest cut; the ratio upper/lower is
// reported in metadata["lr_ratio"].
BoundReport pmf_bounds_wireline(const CapGraph& g, const WeightVector& w,
                                const SolveOptions& options = {});

// Max absolute conservation violation over non-terminal nodes, and the max
// capacity overshoot; used by tests to audit solutions.
struct FlowAudit {
  double conservation_residual = 0.0;
  double capacity_overshoot = 0.0;
};
FlowAudit audit_flow(const CapGraph& g, const WeightVector& w, const FlowSolution& sol);

}  // namespace pmflab
