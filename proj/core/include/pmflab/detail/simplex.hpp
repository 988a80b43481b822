#pragma once

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

namespace pmflab::detail {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterLimit };

constexpr double kLpInf = std::numeric_limits<double>::infinity();

// Row sense is encoded by the bounds: lo == hi is an equality, (-inf, hi] a
// <= row and [lo, inf) a >= row. Two-sided ranged rows are not supported.
struct LpRow {
  std::vector<std::pair<int, double>> coeffs;
  double lo = -kLpInf;
  double hi = kLpInf;
};

// maximize objective . x  subject to rows, x >= 0
struct LpModel {
  int num_vars = 0;
  std::vector<double> objective;
  std::vector<LpRow> rows;

  int add_var(double obj_coeff) {
    objective.push_back(obj_coeff);
    return num_vars++;
  }
  int add_row(double lo, double hi) {
    rows.push_back(LpRow{{}, lo, hi});
    return static_cast<int>(rows.size()) - 1;
  }
  void add_coeff(int row, int var, double value) {
    if (value != 0.0) rows[row].coeffs.emplace_back(var, value);
  }
};

struct LpSolution {
  LpStatus status = LpStatus::Optimal;
  double objective = 0.0;
  std::vector<double> x;
  std::int64_t iterations = 0;
  double max_residual = 0.0;
};

// Two-phase revised simplex with an explicit basis inverse, Dantzig pricing
// and a Bland fallback under degeneracy.
LpSolution solve_lp(const LpModel& model, double feas_tol = 1e-8, std::int64_t iter_limit = 0);

}  // namespace pmflab::detail
