#pragma once

// The optimization model itself: first/second stage solution types, exact
// second-stage closed forms, objective evaluation through both formulations
// (with explicit operating counts, and with them eliminated via cumulative
// opens/closes), LP relaxations, the no-shortage-cost lower bound, and a
// shared MILP assembly used by the relaxations and the file exporters.

#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "covloc/instance.hpp"
#include "covloc/lp.hpp"

namespace covloc {

// Opening/closing plan fixed before uncertainty resolves.
struct FirstStageSolution {
  std::vector<std::vector<int>> opens;   // z[i][t], m x T
  std::vector<std::vector<int>> closes;  // zp[i][t], m x (T-1)
};

inline FirstStageSolution zero_first_stage(const Instance& inst) {
  FirstStageSolution fs;
  fs.opens.assign(inst.num_locations, std::vector<int>(inst.num_periods, 0));
  fs.closes.assign(inst.num_locations, std::vector<int>(std::max(0, inst.num_periods - 1), 0));
  return fs;
}

// y[i][t] = y0[i] + sum of opens up to t minus closes up to t-1.
inline std::vector<std::vector<int>> operating_counts(const Instance& inst,
                                                      const FirstStageSolution& fs) {
  const int m = inst.num_locations, T = inst.num_periods;
  std::vector<std::vector<int>> y(m, std::vector<int>(T, 0));
  for (int i = 0; i < m; ++i) {
    int run = inst.initial_open[i];
    for (int t = 0; t < T; ++t) {
      run += fs.opens[i][t];
      y[i][t] = run;
      if (t < T - 1) run -= fs.closes[i][t];
    }
  }
  return y;
}

// Every broken first-stage constraint, with indices; empty means feasible.
inline std::vector<std::string> first_stage_violations(const Instance& inst,
                                                       const FirstStageSolution& fs) {
  std::vector<std::string> out;
  const int m = inst.num_locations, T = inst.num_periods;
  if ((int)fs.opens.size() != m || (int)fs.closes.size() != m) {
    out.push_back("first stage has wrong location dimension");
    return out;
  }
  for (int i = 0; i < m; ++i) {
    if ((int)fs.opens[i].size() != T || (int)fs.closes[i].size() != std::max(0, T - 1)) {
      out.push_back("first stage has wrong period dimension at location " + std::to_string(i));
      return out;
    }
    for (int t = 0; t < T; ++t)
      if (fs.opens[i][t] < 0 || fs.opens[i][t] > inst.cap_per_location[i])
        out.push_back("z[" + std::to_string(i) + "][" + std::to_string(t) + "] outside box");
    for (int t = 0; t + 1 < T; ++t)
      if (fs.closes[i][t] < 0 || fs.closes[i][t] > inst.cap_per_location[i])
        out.push_back("zp[" + std::to_string(i) + "][" + std::to_string(t) + "] outside box");
  }
  const auto y = operating_counts(inst, fs);
  for (int i = 0; i < m; ++i)
    for (int t = 0; t < T; ++t)
      if (y[i][t] < 0 || y[i][t] > inst.cap_per_location[i])
        out.push_back("operating count y[" + std::to_string(i) + "][" + std::to_string(t) +
                      "] = " + std::to_string(y[i][t]) + " outside [0, e]");
  for (int t = 0; t < T; ++t) {
    int total = 0;
    for (int i = 0; i < m; ++i) total += y[i][t];
    if (total > inst.cap_per_period[t])
      out.push_back("operating total " + std::to_string(total) + " exceeds p in period " +
                    std::to_string(t));
  }
  return out;
}

inline int coverage_count(const Instance& inst, const std::vector<std::vector<int>>& y, int j,
                          int t, int s) {
  if (s < 0 || s >= inst.num_scenarios || t < 0 || t >= inst.num_periods || j < 0 ||
      j >= inst.num_demand_points)
    throw std::out_of_range("coverage_count: index out of range");
  int cov = 0;
  for (int i = 0; i < inst.num_locations; ++i)
    cov += inst.covers[s][t][i][j] * y[i][t];
  return cov;
}

// Number of operating facilities covering demand point j in (t, s).
inline int coverage_count(const Instance& inst, const FirstStageSolution& fs, int j, int t,
                          int s) {
  return coverage_count(inst, operating_counts(inst, fs), j, t, s);
}

// Surplus/shortage indicators of one (scenario, period, demand point) cell,
// in canonical prefix-of-ones form.
struct SecondStageCell {
  std::vector<std::uint8_t> surplus;   // w, length p_t - b
  std::vector<std::uint8_t> shortage;  // v, length b
};

struct SecondStageSolution {
  std::vector<std::vector<std::vector<SecondStageCell>>> cells;  // [s][t][j]
};

// Exact optimum of the per-cell second-stage subproblem given the coverage
// margin M = coverage - threshold. Sorted marginal costs make the cheapest
// pattern a prefix: M units of surplus or -M units of shortage.
inline std::pair<SecondStageCell, double> second_stage_closed_form(const Instance& inst, int M,
                                                                   int j, int t, int s) {
  const int K = inst.surplus_levels(s, t, j);
  const int Kp = inst.shortage_levels(s, t, j);
  if (M < -Kp || M > K)
    throw std::out_of_range("second_stage_closed_form: M=" + std::to_string(M) +
                            " outside [-b, p-b] at cell (" + std::to_string(s) + "," +
                            std::to_string(t) + "," + std::to_string(j) + ")");
  SecondStageCell cell;
  cell.surplus.assign(K, 0);
  cell.shortage.assign(Kp, 0);
  double cost = 0.0;
  const double pi = inst.prob[s];
  if (M > 0) {
    for (int k = 0; k < M; ++k) {
      cell.surplus[k] = 1;
      cost += pi * inst.surplus_cost[s][t][j][k];
    }
  } else if (M < 0) {
    for (int k = 0; k < -M; ++k) {
      cell.shortage[k] = 1;
      cost += pi * inst.shortage_cost[s][t][j][k];
    }
  }
  return {cell, cost};
}

enum class Formulation { gmsclp, gmsclp_prime };
enum class Linking { ww, opt2, opt3 };

struct ModelVariant {
  Linking linking = Linking::ww;
  Formulation formulation = Formulation::gmsclp_prime;
};

inline Linking linking_from_string(const std::string& s) {
  if (s == "ww") return Linking::ww;
  if (s == "opt2") return Linking::opt2;
  if (s == "opt3") return Linking::opt3;
  throw std::invalid_argument("unknown linking variant '" + s + "'");
}

inline Formulation formulation_from_string(const std::string& s) {
  if (s == "gmsclp") return Formulation::gmsclp;
  if (s == "gmsclp-prime" || s == "gmsclpp" || s == "prime") return Formulation::gmsclp_prime;
  throw std::invalid_argument("unknown formulation '" + s + "'");
}

namespace model_detail {

inline void check_second_stage(const Instance& inst, const SecondStageSolution& ss,
                               const std::vector<std::vector<int>>& y) {
  const int n = inst.num_demand_points, T = inst.num_periods, S = inst.num_scenarios;
  if ((int)ss.cells.size() != S)
    throw std::invalid_argument("second stage has wrong scenario dimension");
  for (int s = 0; s < S; ++s) {
    if ((int)ss.cells[s].size() != T)
      throw std::invalid_argument("second stage has wrong period dimension");
    for (int t = 0; t < T; ++t) {
      if ((int)ss.cells[s][t].size() != n)
        throw std::invalid_argument("second stage has wrong demand dimension");
      for (int j = 0; j < n; ++j) {
        const auto& cell = ss.cells[s][t][j];
        const std::string at =
            "(" + std::to_string(s) + "," + std::to_string(t) + "," + std::to_string(j) + ")";
        if ((int)cell.surplus.size() != inst.surplus_levels(s, t, j) ||
            (int)cell.shortage.size() != inst.shortage_levels(s, t, j))
          throw std::invalid_argument("second stage cell " + at + " has wrong level count");
        auto prefix_len = [&](const std::vector<std::uint8_t>& bits, const char* which) {
          int len = 0;
          bool done = false;
          for (auto b : bits) {
            if (b != 0 && b != 1)
              throw std::invalid_argument(std::string(which) + " not binary at cell " + at);
            if (b && done)
              throw std::invalid_argument(std::string(which) + " breaks prefix form at cell " + at);
            if (b) ++len;
            else done = true;
          }
          return len;
        };
        const int nw = prefix_len(cell.surplus, "surplus");
        const int nv = prefix_len(cell.shortage, "shortage");
        if (nw > 0 && nv > 0)
          throw std::invalid_argument("surplus and shortage both active at cell " + at);
        const int margin = coverage_count(inst, y, j, t, s) - inst.threshold[s][t][j];
        if (nw - nv != margin)
          throw std::invalid_argument("covering equality violated at cell " + at + ": w-v = " +
                                      std::to_string(nw - nv) + ", coverage - b = " +
                                      std::to_string(margin));
      }
    }
  }
}

}  // namespace model_detail

// Total expected cost of a full solution. Both formulations price identical
// decisions and must agree to rounding error; the enum selects which
// algebraic route computes the first-stage part.
inline double evaluate(const Instance& inst, const FirstStageSolution& fs,
                       const SecondStageSolution& ss,
                       Formulation form = Formulation::gmsclp) {
  const auto violations = first_stage_violations(inst, fs);
  if (!violations.empty()) throw std::invalid_argument("evaluate: " + violations.front());
  const auto y = operating_counts(inst, fs);
  model_detail::check_second_stage(inst, ss, y);

  const int m = inst.num_locations, T = inst.num_periods;
  double first = 0.0;
  if (form == Formulation::gmsclp) {
    for (int i = 0; i < m; ++i)
      for (int t = 0; t < T; ++t) {
        first += inst.open_cost[i][t] * fs.opens[i][t];
        first += inst.operate_cost[i][t] * y[i][t];
        if (t < T - 1) first += inst.close_cost[i][t] * fs.closes[i][t];
      }
  } else {
    for (int i = 0; i < m; ++i) {
      // operate costs folded into the open/close coefficients via suffix sums
      std::vector<double> suffix(T + 1, 0.0);
      for (int t = T - 1; t >= 0; --t) suffix[t] = suffix[t + 1] + inst.operate_cost[i][t];
      first += suffix[0] * inst.initial_open[i];
      for (int t = 0; t < T; ++t)
        first += (inst.open_cost[i][t] + suffix[t]) * fs.opens[i][t];
      for (int t = 0; t + 1 < T; ++t)
        first += (inst.close_cost[i][t] - suffix[t + 1]) * fs.closes[i][t];
    }
  }

  double second = 0.0;
  for (int s = 0; s < inst.num_scenarios; ++s) {
    double scen = 0.0;
    for (int t = 0; t < T; ++t)
      for (int j = 0; j < inst.num_demand_points; ++j) {
        const auto& cell = ss.cells[s][t][j];
        for (size_t k = 0; k < cell.surplus.size(); ++k)
          if (cell.surplus[k]) scen += inst.surplus_cost[s][t][j][k];
        for (size_t k = 0; k < cell.shortage.size(); ++k)
          if (cell.shortage[k]) scen += inst.shortage_cost[s][t][j][k];
      }
    second += inst.prob[s] * scen;
  }
  return first + second;
}

// Cost of a first-stage plan with the second stage filled in optimally: each
// cell takes its closed form at margin M = coverage - threshold. The result
// is the exact minimum over second-stage decisions for this plan.
inline std::pair<double, SecondStageSolution> evaluate_first_stage(const Instance& inst,
                                                                   const FirstStageSolution& fs) {
  const auto violations = first_stage_violations(inst, fs);
  if (!violations.empty())
    throw std::invalid_argument("evaluate_first_stage: " + violations.front());
  const auto y = operating_counts(inst, fs);

  double total = 0.0;
  for (int i = 0; i < inst.num_locations; ++i)
    for (int t = 0; t < inst.num_periods; ++t) {
      total += inst.open_cost[i][t] * fs.opens[i][t];
      total += inst.operate_cost[i][t] * y[i][t];
      if (t < inst.num_periods - 1) total += inst.close_cost[i][t] * fs.closes[i][t];
    }

  SecondStageSolution ss;
  ss.cells.assign(inst.num_scenarios,
                  std::vector<std::vector<SecondStageCell>>(
                      inst.num_periods, std::vector<SecondStageCell>(inst.num_demand_points)));
  for (int s = 0; s < inst.num_scenarios; ++s)
    for (int t = 0; t < inst.num_periods; ++t)
      for (int j = 0; j < inst.num_demand_points; ++j) {
        const int margin = coverage_count(inst, y, j, t, s) - inst.threshold[s][t][j];
        auto [cell, cost] = second_stage_closed_form(inst, margin, j, t, s);
        ss.cells[s][t][j] = std::move(cell);
        total += cost;
      }
  return {total, ss};
}

// --- MILP assembly (one source of truth for relaxations and exports) -------

struct MilpColumn {
  std::string name;
  double obj = 0.0;
  double lo = 0.0, hi = 0.0;
  bool integer = false;
};

struct MilpRow {
  std::string name;
  RowSense sense = RowSense::le;
  double rhs = 0.0;
  std::vector<std::pair<int, double>> terms;  // (column, coefficient)
};

struct MilpModel {
  std::vector<MilpColumn> cols;
  std::vector<MilpRow> rows;
  double objective_constant = 0.0;
};

namespace model_detail {

inline std::string tag(const char* stem, std::initializer_list<int> ix) {
  std::string out = stem;
  for (int v : ix) out += "_" + std::to_string(v + 1);  // 1-based names
  return out;
}

}  // namespace model_detail

// Builds the full mixed-integer model for the chosen formulation and linking
// constraints. Column and row order is fixed, so exports are byte-stable.
inline MilpModel assemble_model(const Instance& inst, const ModelVariant& variant) {
  using model_detail::tag;
  const int m = inst.num_locations, n = inst.num_demand_points;
  const int T = inst.num_periods, S = inst.num_scenarios;
  const bool prime = variant.formulation == Formulation::gmsclp_prime;

  MilpModel mm;
  std::vector<std::vector<double>> suffix(m, std::vector<double>(T + 1, 0.0));
  for (int i = 0; i < m; ++i)
    for (int t = T - 1; t >= 0; --t) suffix[i][t] = suffix[i][t + 1] + inst.operate_cost[i][t];

  auto add_col = [&](std::string name, double obj, double lo, double hi) {
    mm.cols.push_back({std::move(name), obj, lo, hi, true});
    return (int)mm.cols.size() - 1;
  };

  std::vector<std::vector<int>> z(m, std::vector<int>(T)), zp(m), yv(m);
  for (int i = 0; i < m; ++i)
    for (int t = 0; t < T; ++t)
      z[i][t] = add_col(tag("z", {i, t}),
                        prime ? inst.open_cost[i][t] + suffix[i][t] : inst.open_cost[i][t], 0.0,
                        inst.cap_per_location[i]);
  for (int i = 0; i < m; ++i) {
    zp[i].resize(std::max(0, T - 1));
    for (int t = 0; t + 1 < T; ++t)
      zp[i][t] = add_col(tag("zp", {i, t}),
                         prime ? inst.close_cost[i][t] - suffix[i][t + 1] : inst.close_cost[i][t],
                         0.0, inst.cap_per_location[i]);
  }
  if (!prime)
    for (int i = 0; i < m; ++i) {
      yv[i].resize(T);
      for (int t = 0; t < T; ++t)
        yv[i][t] = add_col(tag("y", {i, t}), inst.operate_cost[i][t], 0.0,
                           inst.cap_per_location[i]);
    }
  std::vector<std::vector<std::vector<std::vector<int>>>> w(S), v(S);
  for (int s = 0; s < S; ++s) {
    w[s].assign(T, std::vector<std::vector<int>>(n));
    for (int t = 0; t < T; ++t)
      for (int j = 0; j < n; ++j) {
        const int K = inst.surplus_levels(s, t, j);
        w[s][t][j].resize(K);
        for (int k = 0; k < K; ++k)
          w[s][t][j][k] = add_col(tag("w", {s, t, j, k}),
                                  inst.prob[s] * inst.surplus_cost[s][t][j][k], 0.0, 1.0);
      }
  }
  for (int s = 0; s < S; ++s) {
    v[s].assign(T, std::vector<std::vector<int>>(n));
    for (int t = 0; t < T; ++t)
      for (int j = 0; j < n; ++j) {
        const int Kp = inst.shortage_levels(s, t, j);
        v[s][t][j].resize(Kp);
        for (int k = 0; k < Kp; ++k)
          v[s][t][j][k] = add_col(tag("v", {s, t, j, k}),
                                  inst.prob[s] * inst.shortage_cost[s][t][j][k], 0.0, 1.0);
      }
  }
  if (prime) {
    double c0 = 0.0;
    for (int i = 0; i < m; ++i) c0 += suffix[i][0] * inst.initial_open[i];
    mm.objective_constant = c0;
  }

  auto add_row = [&](std::string name, RowSense sense, double rhs) -> MilpRow& {
    mm.rows.push_back({std::move(name), sense, rhs, {}});
    return mm.rows.back();
  };
  // coefficient pattern of y_it written through cumulative opens/closes
  auto add_cum_terms = [&](MilpRow& row, int i, int t, double scale) {
    for (int tau = 0; tau <= t; ++tau) row.terms.push_back({z[i][tau], scale});
    for (int tau = 0; tau < t; ++tau) row.terms.push_back({zp[i][tau], -scale});
  };

  int total_initial = 0;
  for (int i = 0; i < m; ++i) total_initial += inst.initial_open[i];

  if (!prime) {
    for (int t = 0; t < T; ++t) {
      auto& row = add_row(tag("cap", {t}), RowSense::le, inst.cap_per_period[t]);
      for (int i = 0; i < m; ++i) row.terms.push_back({yv[i][t], 1.0});
    }
    for (int i = 0; i < m; ++i)
      for (int t = 0; t < T; ++t) {
        auto& row = add_row(tag("bal", {i, t}), RowSense::eq,
                            t == 0 ? (double)inst.initial_open[i] : 0.0);
        row.terms.push_back({yv[i][t], 1.0});
        row.terms.push_back({z[i][t], -1.0});
        if (t > 0) {
          row.terms.push_back({yv[i][t - 1], -1.0});
          row.terms.push_back({zp[i][t - 1], 1.0});
        }
      }
  } else {
    for (int t = 0; t < T; ++t) {
      auto& row = add_row(tag("cap", {t}), RowSense::le,
                          (double)(inst.cap_per_period[t] - total_initial));
      for (int i = 0; i < m; ++i) add_cum_terms(row, i, t, 1.0);
    }
    for (int i = 0; i < m; ++i)
      for (int t = 0; t < T; ++t) {
        auto& row = add_row(tag("ub", {i, t}), RowSense::le,
                            (double)(inst.cap_per_location[i] - inst.initial_open[i]));
        add_cum_terms(row, i, t, 1.0);
      }
    for (int i = 0; i < m; ++i)
      for (int t = 0; t < T; ++t) {
        auto& row = add_row(tag("lb", {i, t}), RowSense::ge, (double)(-inst.initial_open[i]));
        add_cum_terms(row, i, t, 1.0);
      }
  }

  for (int s = 0; s < S; ++s)
    for (int t = 0; t < T; ++t)
      for (int j = 0; j < n; ++j) {
        double rhs = inst.threshold[s][t][j];
        if (prime)
          for (int i = 0; i < m; ++i)
            rhs -= (double)inst.covers[s][t][i][j] * inst.initial_open[i];
        auto& row = add_row(tag("cov", {s, t, j}), RowSense::eq, rhs);
        for (int i = 0; i < m; ++i) {
          if (!inst.covers[s][t][i][j]) continue;
          if (prime) add_cum_terms(row, i, t, 1.0);
          else row.terms.push_back({yv[i][t], 1.0});
        }
        for (int col : w[s][t][j]) row.terms.push_back({col, -1.0});
        for (int col : v[s][t][j]) row.terms.push_back({col, 1.0});
      }

  for (int s = 0; s < S; ++s)
    for (int t = 0; t < T; ++t)
      for (int j = 0; j < n; ++j) {
        const int K = inst.surplus_levels(s, t, j);
        const int Kp = inst.shortage_levels(s, t, j);
        switch (variant.linking) {
          case Linking::ww: {
            if (K >= 1 && Kp >= 1) {
              auto& row = add_row(tag("mux", {s, t, j}), RowSense::le, 1.0);
              row.terms.push_back({w[s][t][j][0], 1.0});
              row.terms.push_back({v[s][t][j][0], 1.0});
            }
            for (int k = 1; k < K; ++k) {
              auto& row = add_row(tag("wlk", {s, t, j, k}), RowSense::le, 0.0);
              row.terms.push_back({w[s][t][j][k], 1.0});
              row.terms.push_back({w[s][t][j][0], -1.0});
            }
            for (int k = 1; k < Kp; ++k) {
              auto& row = add_row(tag("vlk", {s, t, j, k}), RowSense::le, 0.0);
              row.terms.push_back({v[s][t][j][k], 1.0});
              row.terms.push_back({v[s][t][j][0], -1.0});
            }
            break;
          }
          case Linking::opt2: {
            if (K >= 1 && Kp >= 1) {
              auto& row = add_row(tag("agg", {s, t, j}), RowSense::le, (double)K);
              for (int col : w[s][t][j]) row.terms.push_back({col, 1.0});
              row.terms.push_back({v[s][t][j][0], (double)K});
            }
            for (int k = 1; k < Kp; ++k) {
              auto& row = add_row(tag("vlk", {s, t, j, k}), RowSense::le, 0.0);
              row.terms.push_back({v[s][t][j][k], 1.0});
              row.terms.push_back({v[s][t][j][0], -1.0});
            }
            break;
          }
          case Linking::opt3: {
            if (K >= 1 && Kp >= 1) {
              auto& row = add_row(tag("agg", {s, t, j}), RowSense::le, (double)Kp);
              for (int col : v[s][t][j]) row.terms.push_back({col, 1.0});
              row.terms.push_back({w[s][t][j][0], (double)Kp});
            }
            for (int k = 1; k < K; ++k) {
              auto& row = add_row(tag("wlk", {s, t, j, k}), RowSense::le, 0.0);
              row.terms.push_back({w[s][t][j][k], 1.0});
              row.terms.push_back({w[s][t][j][0], -1.0});
            }
            break;
          }
        }
      }
  return mm;
}

// Continuous relaxation of an assembled model.
inline LinearProgram to_linear_program(const MilpModel& mm) {
  LinearProgram lp;
  const int n = (int)mm.cols.size();
  lp.objective.resize(n);
  lp.lower.resize(n);
  lp.upper.resize(n);
  for (int j = 0; j < n; ++j) {
    lp.objective[j] = mm.cols[j].obj;
    lp.lower[j] = mm.cols[j].lo;
    lp.upper[j] = mm.cols[j].hi;
  }
  lp.rows.assign(mm.rows.size(), std::vector<double>(n, 0.0));
  lp.senses.resize(mm.rows.size());
  lp.rhs.resize(mm.rows.size());
  for (size_t r = 0; r < mm.rows.size(); ++r) {
    lp.senses[r] = mm.rows[r].sense;
    lp.rhs[r] = mm.rows[r].rhs;
    for (auto [col, coef] : mm.rows[r].terms) lp.rows[r][col] += coef;
  }
  lp.objective_offset = mm.objective_constant;
  return lp;
}

// LP relaxation whose optimum is the "LP" bound of the chosen variant.
inline LinearProgram build_lp_relaxation(const Instance& inst, const ModelVariant& variant) {
  return to_linear_program(assemble_model(inst, variant));
}

// LP relaxation with the expected shortage cost deleted from the objective
// (shortage variables and all constraints stay). Its optimum is a valid
// lower bound even when the true optimum is negative; every percentage gap
// uses it as the denominator anchor.
inline LinearProgram build_lb0(const Instance& inst) {
  MilpModel mm = assemble_model(inst, {Linking::ww, Formulation::gmsclp_prime});
  for (auto& col : mm.cols)
    if (col.name[0] == 'v') col.obj = 0.0;
  return to_linear_program(mm);
}

// Per-term cost breakdown of a full solution, as a report object.
inline json evaluation_report(const Instance& inst, const FirstStageSolution& fs,
                              const SecondStageSolution& ss) {
  const double objective = evaluate(inst, fs, ss);
  const auto y = operating_counts(inst, fs);
  double open = 0.0, close = 0.0, operate = 0.0, surplus = 0.0, shortage = 0.0;
  for (int i = 0; i < inst.num_locations; ++i)
    for (int t = 0; t < inst.num_periods; ++t) {
      open += inst.open_cost[i][t] * fs.opens[i][t];
      operate += inst.operate_cost[i][t] * y[i][t];
      if (t < inst.num_periods - 1) close += inst.close_cost[i][t] * fs.closes[i][t];
    }
  for (int s = 0; s < inst.num_scenarios; ++s)
    for (int t = 0; t < inst.num_periods; ++t)
      for (int j = 0; j < inst.num_demand_points; ++j) {
        const auto& cell = ss.cells[s][t][j];
        for (size_t k = 0; k < cell.surplus.size(); ++k)
          if (cell.surplus[k]) surplus += inst.prob[s] * inst.surplus_cost[s][t][j][k];
        for (size_t k = 0; k < cell.shortage.size(); ++k)
          if (cell.shortage[k]) shortage += inst.prob[s] * inst.shortage_cost[s][t][j][k];
      }
  return json{{"objective", objective}, {"open", open},       {"close", close},
              {"operate", operate},     {"surplus", surplus}, {"shortage", shortage}};
}

}  // namespace covloc
