#pragma once

// Dense bounded-variable primal simplex. Every variable carries finite
// bounds, which keeps the method free of unbounded rays and lets slacks be
// boxed from row activity ranges. Two phases with artificials only where the
// slack cannot absorb the initial residual; Dantzig pricing with a switch to
// Bland's rule after a degeneracy streak.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace covloc {

enum class RowSense { le, eq, ge };

struct LinearProgram {
  std::vector<double> objective;           // minimize, size = #vars
  std::vector<std::vector<double>> rows;   // dense, each size = #vars
  std::vector<RowSense> senses;
  std::vector<double> rhs;
  std::vector<double> lower, upper;        // finite boxes, lower <= upper
  double objective_offset = 0.0;           // constant added to the objective

  int num_vars() const { return (int)objective.size(); }
  int num_rows() const { return (int)rows.size(); }
};

struct LpSolution {
  enum class Status { optimal, infeasible, unbounded, iteration_limit };
  Status status = Status::iteration_limit;
  std::vector<double> x;      // structural variables
  std::vector<double> duals;  // one multiplier per row
  double objective = 0.0;
  int iterations = 0;
};

inline const char* to_string(LpSolution::Status s) {
  switch (s) {
    case LpSolution::Status::optimal: return "optimal";
    case LpSolution::Status::infeasible: return "infeasible";
    case LpSolution::Status::unbounded: return "unbounded";
    default: return "iteration-limit";
  }
}

namespace lp_detail {

constexpr double kFeasTol = 1e-7;   // row feasibility
constexpr double kOptTol = 1e-9;    // reduced cost threshold
constexpr double kPivotTol = 1e-10; // smallest usable pivot
constexpr int kBlandAfter = 50;     // degenerate pivots before Bland kicks in

struct Tableau {
  int n_struct = 0, n_rows = 0, n_cols = 0;
  std::vector<std::vector<double>> t;  // n_rows x n_cols, B^{-1} * A
  std::vector<double> lo, hi, cost;    // per column
  std::vector<int> basis;              // row -> column
  std::vector<double> basic_val;       // row -> value of basic column
  std::vector<signed char> at_upper;   // nonbasic rest position
  std::vector<signed char> is_basic;
  std::vector<double> x;               // per column current value
};

inline void set_nonbasic(Tableau& tb, int j, bool upper) {
  tb.at_upper[j] = upper ? 1 : 0;
  tb.x[j] = upper ? tb.hi[j] : tb.lo[j];
}

// One price-and-pivot pass minimizing tb.cost. Returns optimal / limit.
inline bool run_simplex(Tableau& tb, int max_iters, int& iters, bool& hit_limit) {
  const int rows = tb.n_rows, cols = tb.n_cols;
  int degen_streak = 0;
  std::vector<double> cb(rows);
  std::vector<double> d(cols);
  hit_limit = false;

  while (true) {
    if (iters >= max_iters) {
      hit_limit = true;
      return false;
    }
    for (int r = 0; r < rows; ++r) cb[r] = tb.cost[tb.basis[r]];
    // reduced costs for every column (basic ones come out ~0 and are
    // skipped), accumulated row-major; rows with costless basics contribute
    // nothing and drop out entirely
    for (int j = 0; j < cols; ++j) d[j] = tb.cost[j];
    for (int r = 0; r < rows; ++r) {
      const double weight = cb[r];
      if (weight == 0.0) continue;
      const auto& row = tb.t[r];
      for (int j = 0; j < cols; ++j) d[j] -= weight * row[j];
    }
    const bool bland = degen_streak >= kBlandAfter;
    int enter = -1, dir = 0;
    double best = kOptTol;
    for (int j = 0; j < cols; ++j) {
      if (tb.is_basic[j] || tb.lo[j] == tb.hi[j]) continue;
      int cand_dir = 0;
      if (!tb.at_upper[j] && d[j] < -kOptTol) cand_dir = 1;
      else if (tb.at_upper[j] && d[j] > kOptTol) cand_dir = -1;
      if (!cand_dir) continue;
      if (bland) { enter = j; dir = cand_dir; break; }
      if (std::abs(d[j]) > best) {
        best = std::abs(d[j]);
        enter = j;
        dir = cand_dir;
      }
    }
    if (enter < 0) return true;  // optimal for this phase

    // ratio test, rows first: smallest step before some basic variable hits
    // a bound; ties go to the largest pivot (Dantzig) or the smallest basic
    // index (Bland)
    int leave_row = -1;
    double row_limit = std::numeric_limits<double>::infinity();
    double leave_pivot = 0.0;
    for (int r = 0; r < rows; ++r) {
      const double coef = tb.t[r][enter];
      const double eff = dir * coef;
      if (std::abs(eff) <= kPivotTol) continue;
      const int bj = tb.basis[r];
      double limit;
      if (eff > 0.0) limit = (tb.basic_val[r] - tb.lo[bj]) / eff;  // falls to lower
      else limit = (tb.basic_val[r] - tb.hi[bj]) / eff;            // rises to upper
      if (limit < 0.0) limit = 0.0;  // tolerate slight bound drift
      bool take;
      if (leave_row < 0 || limit < row_limit - 1e-12) take = true;
      else if (limit <= row_limit + 1e-12)
        take = bland ? tb.basis[r] < tb.basis[leave_row]
                     : std::abs(coef) > std::abs(leave_pivot) + 1e-15;
      else take = false;
      if (take) {
        row_limit = std::min(limit, row_limit);
        leave_row = r;
        leave_pivot = coef;
      }
    }
    const double flip_limit = tb.hi[enter] - tb.lo[enter];
    double t_max;
    if (leave_row >= 0 && row_limit < flip_limit) t_max = row_limit;
    else {
      t_max = flip_limit;
      leave_row = -1;  // the entering variable swaps bounds
    }

    ++iters;
    degen_streak = t_max <= 1e-12 ? degen_streak + 1 : 0;

    if (leave_row < 0) {
      // entering variable flips to its opposite bound; basis unchanged
      for (int r = 0; r < rows; ++r) {
        tb.basic_val[r] -= dir * t_max * tb.t[r][enter];
        tb.x[tb.basis[r]] = tb.basic_val[r];
      }
      set_nonbasic(tb, enter, !tb.at_upper[enter]);
      continue;
    }

    // pivot enter into leave_row
    const double enter_val = tb.x[enter] + dir * t_max;
    for (int r = 0; r < rows; ++r) {
      if (r == leave_row) continue;
      tb.basic_val[r] -= dir * t_max * tb.t[r][enter];
      tb.x[tb.basis[r]] = tb.basic_val[r];
    }
    const int leaving = tb.basis[leave_row];
    const double eff = dir * tb.t[leave_row][enter];
    tb.is_basic[leaving] = 0;
    set_nonbasic(tb, leaving, eff < 0.0);

    const double piv = tb.t[leave_row][enter];
    auto& prow = tb.t[leave_row];
    const double inv = 1.0 / piv;
    for (int j = 0; j < tb.n_cols; ++j) prow[j] *= inv;
    for (int r = 0; r < rows; ++r) {
      if (r == leave_row) continue;
      const double factor = tb.t[r][enter];
      if (factor == 0.0) continue;
      auto& row = tb.t[r];
      for (int j = 0; j < tb.n_cols; ++j) row[j] -= factor * prow[j];
    }
    tb.basis[leave_row] = enter;
    tb.is_basic[enter] = 1;
    tb.basic_val[leave_row] = enter_val;
    tb.x[enter] = enter_val;
  }
}

}  // namespace lp_detail

// Solves min c'x st rows, lo <= x <= hi. Deterministic: identical input gives
// an identical pivot sequence and solution. Never loops: Bland's rule engages
// after a degeneracy streak and an iteration cap backstops everything.
inline LpSolution solve_lp(const LinearProgram& lp, int max_iters = 20000) {
  using namespace lp_detail;
  const int n = lp.num_vars(), m = lp.num_rows();
  if ((int)lp.lower.size() != n || (int)lp.upper.size() != n)
    throw std::invalid_argument("solve_lp: bound vectors must match variable count");
  if ((int)lp.senses.size() != m || (int)lp.rhs.size() != m)
    throw std::invalid_argument("solve_lp: row metadata must match row count");
  for (int r = 0; r < m; ++r)
    if ((int)lp.rows[r].size() != n)
      throw std::invalid_argument("solve_lp: row " + std::to_string(r) + " has wrong width");
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(lp.lower[j]) || !std::isfinite(lp.upper[j]) || lp.lower[j] > lp.upper[j])
      throw std::invalid_argument("solve_lp: variable " + std::to_string(j) +
                                  " must have finite ordered bounds");
    if (!std::isfinite(lp.objective[j]))
      throw std::invalid_argument("solve_lp: objective has non-finite entry");
  }
  for (int r = 0; r < m; ++r) {
    if (!std::isfinite(lp.rhs[r]))
      throw std::invalid_argument("solve_lp: rhs has non-finite entry");
    for (double a : lp.rows[r])
      if (!std::isfinite(a)) throw std::invalid_argument("solve_lp: matrix has non-finite entry");
  }

  Tableau tb;
  tb.n_struct = n;
  tb.n_rows = m;

  // activity range of each row over the box, to bound the slacks
  std::vector<double> act_lo(m, 0.0), act_hi(m, 0.0);
  for (int r = 0; r < m; ++r)
    for (int j = 0; j < n; ++j) {
      const double a = lp.rows[r][j];
      if (a >= 0.0) {
        act_lo[r] += a * lp.lower[j];
        act_hi[r] += a * lp.upper[j];
      } else {
        act_lo[r] += a * lp.upper[j];
        act_hi[r] += a * lp.lower[j];
      }
    }

  // columns: structural | slack per row | artificials (appended on demand)
  const int slack0 = n;
  tb.lo = lp.lower;
  tb.hi = lp.upper;
  tb.lo.resize(n + m);
  tb.hi.resize(n + m);
  for (int r = 0; r < m; ++r) {
    switch (lp.senses[r]) {
      case RowSense::le:
        tb.lo[slack0 + r] = 0.0;
        tb.hi[slack0 + r] = std::max(0.0, lp.rhs[r] - act_lo[r]);
        break;
      case RowSense::ge:
        tb.lo[slack0 + r] = std::min(0.0, lp.rhs[r] - act_hi[r]);
        tb.hi[slack0 + r] = 0.0;
        break;
      case RowSense::eq:
        tb.lo[slack0 + r] = 0.0;
        tb.hi[slack0 + r] = 0.0;
        break;
    }
  }

  // initial rest point: structurals at lower bound, slacks absorbing what
  // they can; anything left over goes to an artificial
  std::vector<double> resid(m);
  for (int r = 0; r < m; ++r) {
    double act = 0.0;
    for (int j = 0; j < n; ++j) act += lp.rows[r][j] * lp.lower[j];
    resid[r] = lp.rhs[r] - act;
  }
  std::vector<int> art_col(m, -1);
  std::vector<double> art_sign(m, 1.0);
  int n_art = 0;
  std::vector<double> slack_init(m);
  for (int r = 0; r < m; ++r) {
    const double s = std::clamp(resid[r], tb.lo[slack0 + r], tb.hi[slack0 + r]);
    slack_init[r] = s;
    const double left = resid[r] - s;
    if (std::abs(left) > 1e-12) {
      art_col[r] = n + m + n_art++;
      art_sign[r] = left >= 0.0 ? 1.0 : -1.0;
      tb.lo.push_back(0.0);
      tb.hi.push_back(std::abs(left));
    }
  }
  tb.n_cols = n + m + n_art;
  tb.cost.assign(tb.n_cols, 0.0);
  tb.t.assign(m, std::vector<double>(tb.n_cols, 0.0));
  for (int r = 0; r < m; ++r) {
    // rows are pre-multiplied by B^{-1}; the initial basis is diag(sign) over
    // the artificial rows and the identity elsewhere
    const double scale = art_col[r] >= 0 ? art_sign[r] : 1.0;
    for (int j = 0; j < n; ++j) tb.t[r][j] = scale * lp.rows[r][j];
    tb.t[r][slack0 + r] = scale;
    if (art_col[r] >= 0) tb.t[r][art_col[r]] = 1.0;
  }

  tb.x.assign(tb.n_cols, 0.0);
  tb.at_upper.assign(tb.n_cols, 0);
  tb.is_basic.assign(tb.n_cols, 0);
  tb.basis.assign(m, -1);
  tb.basic_val.assign(m, 0.0);
  for (int j = 0; j < n; ++j) tb.x[j] = lp.lower[j];
  for (int r = 0; r < m; ++r) {
    if (art_col[r] >= 0) {
      tb.basis[r] = art_col[r];
      tb.basic_val[r] = std::abs(resid[r] - slack_init[r]);
      tb.x[art_col[r]] = tb.basic_val[r];
      // the clamp stopped at a bound (otherwise there would be no residual);
      // the slack rests there nonbasic
      tb.at_upper[slack0 + r] =
          slack_init[r] == tb.hi[slack0 + r] && tb.lo[slack0 + r] != tb.hi[slack0 + r];
      tb.x[slack0 + r] = slack_init[r];
    } else {
      tb.basis[r] = slack0 + r;
      tb.basic_val[r] = slack_init[r];
      tb.x[slack0 + r] = slack_init[r];
    }
    tb.is_basic[tb.basis[r]] = 1;
  }

  LpSolution sol;
  int iters = 0;
  bool hit_limit = false;

  if (n_art > 0) {
    for (int r = 0; r < m; ++r)
      if (art_col[r] >= 0) tb.cost[art_col[r]] = 1.0;
    run_simplex(tb, max_iters, iters, hit_limit);
    if (hit_limit) {
      sol.status = LpSolution::Status::iteration_limit;
      sol.iterations = iters;
      return sol;
    }
    double infeas = 0.0;
    for (int r = 0; r < m; ++r)
      if (art_col[r] >= 0) infeas += tb.x[art_col[r]];
    if (infeas > kFeasTol) {
      sol.status = LpSolution::Status::infeasible;
      sol.iterations = iters;
      return sol;
    }
    // pin artificials to zero for phase 2
    for (int r = 0; r < m; ++r)
      if (art_col[r] >= 0) {
        tb.cost[art_col[r]] = 0.0;
        tb.lo[art_col[r]] = 0.0;
        tb.hi[art_col[r]] = 0.0;
        if (!tb.is_basic[art_col[r]]) tb.x[art_col[r]] = 0.0;
      }
    // degenerate-pivot basic artificials out where a structural column can
    // take their place; a fully zero row is redundant and keeps its artificial
    for (int r = 0; r < m; ++r) {
      const int bj = tb.basis[r];
      if (bj < n + m || std::abs(tb.basic_val[r]) > kFeasTol) continue;
      int pick = -1;
      double best = kPivotTol;
      for (int j = 0; j < n + m; ++j) {
        if (tb.is_basic[j] || tb.lo[j] == tb.hi[j]) continue;
        if (std::abs(tb.t[r][j]) > best) {
          best = std::abs(tb.t[r][j]);
          pick = j;
        }
      }
      if (pick < 0) continue;
      const double piv = tb.t[r][pick];
      auto& prow = tb.t[r];
      for (int j = 0; j < tb.n_cols; ++j) prow[j] /= piv;
      for (int rr = 0; rr < m; ++rr) {
        if (rr == r) continue;
        const double factor = tb.t[rr][pick];
        if (factor == 0.0) continue;
        for (int j = 0; j < tb.n_cols; ++j) tb.t[rr][j] -= factor * prow[j];
      }
      tb.is_basic[bj] = 0;
      set_nonbasic(tb, bj, false);
      tb.basis[r] = pick;
      tb.is_basic[pick] = 1;
      tb.basic_val[r] = tb.x[pick];
    }
  }

  for (int j = 0; j < n; ++j) tb.cost[j] = lp.objective[j];
  for (int j = n; j < tb.n_cols; ++j) tb.cost[j] = 0.0;
  const bool optimal = run_simplex(tb, max_iters, iters, hit_limit);
  sol.iterations = iters;
  if (!optimal) {
    sol.status = LpSolution::Status::iteration_limit;
    return sol;
  }

  sol.status = LpSolution::Status::optimal;
  sol.x.assign(n, 0.0);
  for (int j = 0; j < n; ++j) sol.x[j] = tb.x[j];
  double obj = lp.objective_offset;
  for (int j = 0; j < n; ++j) obj += lp.objective[j] * sol.x[j];
  sol.objective = obj;

  // simplex multipliers: slack column r of the tableau carries B^{-1} e_r
  sol.duals.assign(m, 0.0);
  for (int r = 0; r < m; ++r) {
    double y = 0.0;
    for (int k = 0; k < m; ++k) y += tb.cost[tb.basis[k]] * tb.t[k][slack0 + r];
    sol.duals[r] = y;
  }
  return sol;
}

// Largest row violation and bound violation of a candidate point; tests use
// this to certify solver output independently of the pivot path.
inline std::pair<double, double> lp_residuals(const LinearProgram& lp,
                                              const std::vector<double>& x) {
  double row_viol = 0.0, bound_viol = 0.0;
  for (int j = 0; j < lp.num_vars(); ++j) {
    bound_viol = std::max(bound_viol, lp.lower[j] - x[j]);
    bound_viol = std::max(bound_viol, x[j] - lp.upper[j]);
  }
  for (int r = 0; r < lp.num_rows(); ++r) {
    double act = 0.0;
    for (int j = 0; j < lp.num_vars(); ++j) act += lp.rows[r][j] * x[j];
    switch (lp.senses[r]) {
      case RowSense::le: row_viol = std::max(row_viol, act - lp.rhs[r]); break;
      case RowSense::ge: row_viol = std::max(row_viol, lp.rhs[r] - act); break;
      case RowSense::eq: row_viol = std::max(row_viol, std::abs(act - lp.rhs[r])); break;
    }
  }
  return {row_viol, bound_viol};
}

}  // namespace covloc
