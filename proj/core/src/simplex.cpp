#include "pmflab/detail/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pmflab::detail {
namespace {

constexpr double kPivotTol = 1e-10;
constexpr double kRedCostTol = 1e-9;
constexpr int kRefactorEvery = 400;
constexpr int kStallLimit = 80;

struct Tableau {
  int m = 0;       // rows
  int ncols = 0;   // structural + slack + artificial
  int art_begin = 0;
  std::vector<std::vector<std::pair<int, double>>> cols;  // column-sparse A
  std::vector<double> b;       // >= 0 after normalization
  std::vector<double> cost;    // phase-dependent, minimization
  std::vector<int> basis;      // var index per row
  std::vector<char> is_basic;
  std::vector<double> binv;    // m x m row-major
  std::vector<double> xb;      // basic values

  double& binv_at(int i, int j) { return binv[static_cast<std::size_t>(i) * m + j]; }

  // Rebuild binv from the basis by Gauss-Jordan, then xb = binv b.
  void refactorize() {
    std::vector<double> work(static_cast<std::size_t>(m) * 2 * m, 0.0);
    auto at = [&](int i, int j) -> double& { return work[static_cast<std::size_t>(i) * 2 * m + j]; };
    for (int r = 0; r < m; ++r) {
      for (const auto& [row, val] : cols[basis[r]]) at(row, r) = val;
      at(r, m + r) = 1.0;
    }
    for (int col = 0; col < m; ++col) {
      int piv = col;
      for (int r = col + 1; r < m; ++r)
        if (std::fabs(at(r, col)) > std::fabs(at(piv, col))) piv = r;
      if (std::fabs(at(piv, col)) < 1e-13) throw std::runtime_error("singular LP basis");
      if (piv != col)
        for (int j = 0; j < 2 * m; ++j) std::swap(at(piv, j), at(col, j));
      const double inv = 1.0 / at(col, col);
      for (int j = 0; j < 2 * m; ++j) at(col, j) *= inv;
      for (int r = 0; r < m; ++r) {
        if (r == col) continue;
        const double f = at(r, col);
        if (f == 0.0) continue;
        for (int j = col; j < 2 * m; ++j) at(r, j) -= f * at(col, j);
      }
    }
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) binv_at(i, j) = at(i, m + j);
    compute_xb();
  }

  void compute_xb() {
    xb.assign(m, 0.0);
    for (int i = 0; i < m; ++i) {
      double s = 0.0;
      const double* row = &binv[static_cast<std::size_t>(i) * m];
      for (int j = 0; j < m; ++j) s += row[j] * b[j];
      xb[i] = s;
    }
  }

  // y = c_B' binv
  void duals(std::vector<double>& y) const {
    y.assign(m, 0.0);
    for (int i = 0; i < m; ++i) {
      const double cb = cost[basis[i]];
      if (cb == 0.0) continue;
      const double* row = &binv[static_cast<std::size_t>(i) * m];
      for (int j = 0; j < m; ++j) y[j] += cb * row[j];
    }
  }

  double reduced_cost(int j, const std::vector<double>& y) const {
    double d = cost[j];
    for (const auto& [row, val] : cols[j]) d -= y[row] * val;
    return d;
  }

  // w = binv a_j
  void ftran(int j, std::vector<double>& w) const {
    w.assign(m, 0.0);
    for (const auto& [row, val] : cols[j])
      for (int i = 0; i < m; ++i) w[i] += binv[static_cast<std::size_t>(i) * m + row] * val;
  }

  void pivot(int leave_row, const std::vector<double>& w, int enter) {
    const double inv = 1.0 / w[leave_row];
    double* lrow = &binv[static_cast<std::size_t>(leave_row) * m];
    for (int j = 0; j < m; ++j) lrow[j] *= inv;
    for (int i = 0; i < m; ++i) {
      if (i == leave_row) continue;
      const double f = w[i];
      if (f == 0.0) continue;
      double* row = &binv[static_cast<std::size_t>(i) * m];
      for (int j = 0; j < m; ++j) row[j] -= f * lrow[j];
    }
    is_basic[basis[leave_row]] = 0;
    basis[leave_row] = enter;
    is_basic[enter] = 1;
  }
};

struct PhaseOutcome {
  LpStatus status = LpStatus::Optimal;
  std::int64_t iterations = 0;
};

// Minimizes tab.cost over the current basis. allow_enter(j) filters columns.
template <class Allow>
PhaseOutcome run_simplex(Tableau& tab, std::int64_t iter_limit, Allow&& allow_enter) {
  std::vector<double> y, w;
  PhaseOutcome out;
  int since_refactor = 0;
  int stall = 0;
  bool bland = false;

  for (;;) {
    if (iter_limit > 0 && out.iterations >= iter_limit) {
      out.status = LpStatus::IterLimit;
      return out;
    }
    tab.duals(y);
    int enter = -1;
    double best = -kRedCostTol;
    for (int j = 0; j < tab.ncols; ++j) {
      if (tab.is_basic[j] || !allow_enter(j)) continue;
      const double d = tab.reduced_cost(j, y);
      if (bland) {
        if (d < -kRedCostTol) { enter = j; break; }
      } else if (d < best) {
        best = d;
        enter = j;
      }
    }
    if (enter < 0) {
      out.status = LpStatus::Optimal;
      return out;
    }

    tab.ftran(enter, w);
    int leave = -1;
    double theta = 0.0;
    for (int i = 0; i < tab.m; ++i) {
      if (w[i] <= kPivotTol) continue;
      const double ratio = tab.xb[i] / w[i];
      if (leave < 0 || ratio < theta - 1e-12 ||
          (ratio < theta + 1e-12 && tab.basis[i] < tab.basis[leave])) {
        leave = i;
        theta = ratio;
      }
    }
    if (leave < 0) {
      out.status = LpStatus::Unbounded;
      return out;
    }

    for (int i = 0; i < tab.m; ++i) tab.xb[i] -= theta * w[i];
    tab.xb[leave] = theta;
    tab.pivot(leave, w, enter);
    ++out.iterations;

    if (theta <= 1e-11) {
      if (++stall > kStallLimit) bland = true;
    } else {
      stall = 0;
      bland = false;
    }
    if (++since_refactor >= kRefactorEvery) {
      tab.refactorize();
      since_refactor = 0;
    }
  }
}

}  // namespace

LpSolution solve_lp(const LpModel& model, double feas_tol, std::int64_t iter_limit) {
  const int m = static_cast<int>(model.rows.size());
  if (m == 0) {
    LpSolution empty;
    empty.x.assign(model.num_vars, 0.0);
    const bool improving = std::any_of(model.objective.begin(), model.objective.end(),
                                       [](double c) { return c > 0.0; });
    empty.status = improving ? LpStatus::Unbounded : LpStatus::Optimal;
    return empty;
  }
  Tableau tab;
  tab.m = m;
  tab.b.resize(m);
  tab.cols.assign(model.num_vars, {});
  for (int r = 0; r < m; ++r) {
    const LpRow& row = model.rows[r];
    const bool eq = row.lo == row.hi;
    const bool le = !eq && row.hi < kLpInf;
    const bool ge = !eq && row.lo > -kLpInf;
    if (eq + le + ge != 1) throw std::invalid_argument("unsupported LP row bounds");
    double rhs = eq ? row.lo : (le ? row.hi : row.lo);
    const double sign = rhs < 0.0 ? -1.0 : 1.0;
    tab.b[r] = sign * rhs;
    for (const auto& [var, val] : row.coeffs) tab.cols[var].emplace_back(r, sign * val);
    if (!eq) {
      // slack: +1 for <=, -1 for >=, then the row sign
      tab.cols.push_back({{r, sign * (le ? 1.0 : -1.0)}});
    }
  }
  const int n_struct_slack = static_cast<int>(tab.cols.size());
  tab.art_begin = n_struct_slack;

  // Initial basis: usable slacks where available, artificials elsewhere.
  tab.basis.assign(m, -1);
  {
    int col = model.num_vars;
    for (int r = 0; r < m; ++r) {
      const LpRow& row = model.rows[r];
      if (row.lo == row.hi) continue;
      if (tab.cols[col].front().second > 0.0) tab.basis[r] = col;
      ++col;
    }
  }
  for (int r = 0; r < m; ++r) {
    if (tab.basis[r] >= 0) continue;
    tab.cols.push_back({{r, 1.0}});
    tab.basis[r] = static_cast<int>(tab.cols.size()) - 1;
  }
  tab.ncols = static_cast<int>(tab.cols.size());
  tab.is_basic.assign(tab.ncols, 0);
  for (int v : tab.basis) tab.is_basic[v] = 1;

  tab.binv.assign(static_cast<std::size_t>(m) * m, 0.0);
  for (int i = 0; i < m; ++i) tab.binv_at(i, i) = 1.0;
  tab.compute_xb();

  LpSolution sol;
  const bool need_phase1 = tab.ncols > tab.art_begin &&
                           std::any_of(tab.basis.begin(), tab.basis.end(),
                                       [&](int v) { return v >= tab.art_begin; });
  if (need_phase1) {
    tab.cost.assign(tab.ncols, 0.0);
    for (int j = tab.art_begin; j < tab.ncols; ++j) tab.cost[j] = 1.0;
    PhaseOutcome p1 = run_simplex(tab, iter_limit, [](int) { return true; });
    sol.iterations += p1.iterations;
    if (p1.status != LpStatus::Optimal) {
      sol.status = p1.status;
      return sol;
    }
    double art_sum = 0.0;
    for (int i = 0; i < m; ++i)
      if (tab.basis[i] >= tab.art_begin) art_sum += std::max(tab.xb[i], 0.0);
    if (art_sum > feas_tol * (1.0 + static_cast<double>(m))) {
      sol.status = LpStatus::Infeasible;
      return sol;
    }
    // Pivot zero-level artificials out where a non-artificial column can
    // replace them; rows that admit none are redundant and keep a zero
    // artificial that is blocked from re-entering in phase 2.
    std::vector<double> w;
    for (int r = 0; r < m; ++r) {
      if (tab.basis[r] < tab.art_begin) continue;
      int replacement = -1;
      for (int j = 0; j < tab.art_begin && replacement < 0; ++j) {
        if (tab.is_basic[j]) continue;
        tab.ftran(j, w);
        if (std::fabs(w[r]) > 1e-7) replacement = j;
      }
      if (replacement >= 0) {
        tab.ftran(replacement, w);
        const double theta = tab.xb[r] / w[r];
        for (int i = 0; i < m; ++i) tab.xb[i] -= theta * w[i];
        tab.pivot(r, w, replacement);
        tab.xb[r] = theta;
      }
    }
  }

  tab.cost.assign(tab.ncols, 0.0);
  for (int j = 0; j < model.num_vars; ++j) tab.cost[j] = -model.objective[j];  // max -> min
  const int art_begin = tab.art_begin;
  PhaseOutcome p2 = run_simplex(tab, iter_limit, [art_begin](int j) { return j < art_begin; });
  sol.iterations += p2.iterations;
  if (p2.status != LpStatus::Optimal) {
    sol.status = p2.status;
    return sol;
  }

  sol.x.assign(model.num_vars, 0.0);
  for (int i = 0; i < m; ++i)
    if (tab.basis[i] < model.num_vars) sol.x[tab.basis[i]] = std::max(tab.xb[i], 0.0);
  sol.objective = 0.0;
  for (int j = 0; j < model.num_vars; ++j) sol.objective += model.objective[j] * sol.x[j];

  // Residual audit over the original rows.
  for (int r = 0; r < m; ++r) {
    const LpRow& row = model.rows[r];
    double ax = 0.0;
    for (const auto& [var, val] : row.coeffs) ax += val * sol.x[var];
    double res = 0.0;
    if (row.lo == row.hi) res = std::fabs(ax - row.lo);
    else if (row.hi < kLpInf) res = std::max(0.0, ax - row.hi);
    else res = std::max(0.0, row.lo - ax);
    sol.max_residual = std::max(sol.max_residual, res);
  }
  sol.status = LpStatus::Optimal;
  return sol;
}

}  // namespace pmflab::detail
