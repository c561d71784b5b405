#pragma once

// Lagrangian relaxation of the covering equalities. Relaxing them splits the
// model into a pure first-stage problem over opens/closes (solved as an LP,
// integral by total unimodularity) and one tiny indicator subproblem per
// (scenario, period, demand point) cell solved by inspection. A subgradient
// loop drives the multipliers; each iteration also produces a feasible plan
// and with it an upper bound.

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "covloc/instance.hpp"
#include "covloc/lp.hpp"
#include "covloc/model.hpp"

namespace covloc {

// One real multiplier per covering equality, i.e. per (s, t, j).
struct Multipliers {
  int num_scenarios = 0, num_periods = 0, num_demand_points = 0;
  std::vector<double> val;  // scenario-major, then period, then demand point

  static Multipliers zeros(const Instance& inst) {
    Multipliers a;
    a.num_scenarios = inst.num_scenarios;
    a.num_periods = inst.num_periods;
    a.num_demand_points = inst.num_demand_points;
    a.val.assign((size_t)inst.num_scenarios * inst.num_periods * inst.num_demand_points, 0.0);
    return a;
  }
  double& at(int s, int t, int j) {
    return val[((size_t)s * num_periods + t) * num_demand_points + j];
  }
  double at(int s, int t, int j) const {
    return val[((size_t)s * num_periods + t) * num_demand_points + j];
  }
  bool matches(const Instance& inst) const {
    return num_scenarios == inst.num_scenarios && num_periods == inst.num_periods &&
           num_demand_points == inst.num_demand_points &&
           val.size() == (size_t)num_scenarios * num_periods * num_demand_points;
  }
};

// Objective of the first-stage subproblem: multiplier-adjusted operate costs
// folded into the open/close coefficients via suffix sums, plus the constant
// contributed by initially open facilities.
struct Lr1Costs {
  std::vector<std::vector<double>> open_coef;   // per z[i][t]
  std::vector<std::vector<double>> close_coef;  // per zp[i][t]
  double constant = 0.0;
};

inline Lr1Costs lr1_costs(const Instance& inst, const Multipliers& alpha) {
  if (!alpha.matches(inst)) throw std::invalid_argument("lr1_costs: multiplier shape mismatch");
  const int m = inst.num_locations, T = inst.num_periods;
  // phi[i][t] = f[i][t] + sum_{j,s} alpha * a
  std::vector<std::vector<double>> phi(m, std::vector<double>(T, 0.0));
  for (int i = 0; i < m; ++i)
    for (int t = 0; t < T; ++t) {
      double acc = inst.operate_cost[i][t];
      for (int s = 0; s < inst.num_scenarios; ++s)
        for (int j = 0; j < inst.num_demand_points; ++j)
          if (inst.covers[s][t][i][j]) acc += alpha.at(s, t, j);
      phi[i][t] = acc;
    }
  Lr1Costs out;
  out.open_coef.assign(m, std::vector<double>(T, 0.0));
  out.close_coef.assign(m, std::vector<double>(std::max(0, T - 1), 0.0));
  for (int i = 0; i < m; ++i) {
    std::vector<double> suffix(T + 1, 0.0);
    for (int t = T - 1; t >= 0; --t) suffix[t] = suffix[t + 1] + phi[i][t];
    for (int t = 0; t < T; ++t) out.open_coef[i][t] = inst.open_cost[i][t] + suffix[t];
    for (int t = 0; t + 1 < T; ++t) out.close_coef[i][t] = inst.close_cost[i][t] - suffix[t + 1];
    out.constant += suffix[0] * inst.initial_open[i];
  }
  return out;
}

// First-stage polytope: period capacity plus operating-count boxes written
// through cumulative opens/closes. Shared by the subproblem solver and the
// unimodularity spot checks.
inline LinearProgram build_lr1_lp(const Instance& inst, const Lr1Costs& costs) {
  const int m = inst.num_locations, T = inst.num_periods;
  const int nz = m * T, nzp = m * (T - 1);
  LinearProgram lp;
  lp.objective.resize(nz + nzp);
  lp.lower.assign(nz + nzp, 0.0);
  lp.upper.resize(nz + nzp);
  auto zcol = [&](int i, int t) { return i * T + t; };
  auto zpcol = [&](int i, int t) { return nz + i * (T - 1) + t; };
  for (int i = 0; i < m; ++i) {
    for (int t = 0; t < T; ++t) {
      lp.objective[zcol(i, t)] = costs.open_coef[i][t];
      lp.upper[zcol(i, t)] = inst.cap_per_location[i];
    }
    for (int t = 0; t + 1 < T; ++t) {
      lp.objective[zpcol(i, t)] = costs.close_coef[i][t];
      lp.upper[zpcol(i, t)] = inst.cap_per_location[i];
    }
  }
  int total_initial = 0;
  for (int i = 0; i < m; ++i) total_initial += inst.initial_open[i];
  auto add_row = [&](RowSense sense, double rhs) -> std::vector<double>& {
    lp.rows.emplace_back(nz + nzp, 0.0);
    lp.senses.push_back(sense);
    lp.rhs.push_back(rhs);
    return lp.rows.back();
  };
  for (int t = 0; t < T; ++t) {
    auto& row = add_row(RowSense::le, inst.cap_per_period[t] - total_initial);
    for (int i = 0; i < m; ++i) {
      for (int tau = 0; tau <= t; ++tau) row[zcol(i, tau)] = 1.0;
      for (int tau = 0; tau < t; ++tau) row[zpcol(i, tau)] = -1.0;
    }
  }
  for (int i = 0; i < m; ++i)
    for (int t = 0; t < T; ++t) {
      auto& row = add_row(RowSense::le, inst.cap_per_location[i] - inst.initial_open[i]);
      for (int tau = 0; tau <= t; ++tau) row[zcol(i, tau)] = 1.0;
      for (int tau = 0; tau < t; ++tau) row[zpcol(i, tau)] = -1.0;
    }
  for (int i = 0; i < m; ++i)
    for (int t = 0; t < T; ++t) {
      auto& row = add_row(RowSense::ge, (double)-inst.initial_open[i]);
      for (int tau = 0; tau <= t; ++tau) row[zcol(i, tau)] = 1.0;
      for (int tau = 0; tau < t; ++tau) row[zpcol(i, tau)] = -1.0;
    }
  lp.objective_offset = costs.constant;
  return lp;
}

// Solves the first-stage subproblem. The LP optimum is integral (the
// constraint matrix is totally unimodular); a fractional vertex beyond
// rounding noise signals a simplex defect and is raised loudly.
inline std::pair<FirstStageSolution, double> solve_lr1(const Instance& inst,
                                                       const Multipliers& alpha,
                                                       int lp_iter_cap = 20000) {
  const auto costs = lr1_costs(inst, alpha);
  const auto lp = build_lr1_lp(inst, costs);
  const auto sol = solve_lp(lp, lp_iter_cap);
  if (sol.status != LpSolution::Status::optimal)
    throw std::runtime_error(std::string("solve_lr1: LP solve ended with status ") +
                             to_string(sol.status));
  double worst_frac = 0.0;
  for (double xv : sol.x) worst_frac = std::max(worst_frac, std::abs(xv - std::round(xv)));
  if (worst_frac > 1e-7)
    throw std::logic_error("solve_lr1: fractional vertex (max frac " +
                           std::to_string(worst_frac) + ") from a unimodular system");
  const int m = inst.num_locations, T = inst.num_periods;
  FirstStageSolution fs = zero_first_stage(inst);
  for (int i = 0; i < m; ++i) {
    for (int t = 0; t < T; ++t) fs.opens[i][t] = (int)std::llround(sol.x[i * T + t]);
    for (int t = 0; t + 1 < T; ++t)
      fs.closes[i][t] = (int)std::llround(sol.x[m * T + i * (T - 1) + t]);
  }
  double value = costs.constant;
  for (int i = 0; i < m; ++i) {
    for (int t = 0; t < T; ++t) value += costs.open_coef[i][t] * fs.opens[i][t];
    for (int t = 0; t + 1 < T; ++t) value += costs.close_coef[i][t] * fs.closes[i][t];
  }
  return {fs, value};
}

// One cell of the indicator subproblem, solved by inspection. ell counts the
// surplus levels whose adjusted coefficient pi*g - alpha is negative (the
// half-open interval rule; an alpha/pi beyond the last level takes them all),
// ell' the analogue for shortage levels against -alpha/pi. The cheaper of the
// two prefixes wins if it beats zero, with ties on the surplus side.
inline std::pair<SecondStageCell, double> solve_lr2_cell(const Instance& inst,
                                                         const Multipliers& alpha, int j, int t,
                                                         int s) {
  const int K = inst.surplus_levels(s, t, j);
  const int Kp = inst.shortage_levels(s, t, j);
  const double a = alpha.at(s, t, j);
  const double pi = inst.prob[s];
  const auto& g = inst.surplus_cost[s][t][j];
  const auto& h = inst.shortage_cost[s][t][j];

  int ell = 0;
  const double ratio = a / pi;
  if (K > 0) {
    if (ratio >= g[K - 1]) ell = K;
    else {
      while (ell < K && g[ell] < ratio) ++ell;
    }
  }
  int ellp = 0;
  const double ratiop = -a / pi;
  if (Kp > 0) {
    if (ratiop >= h[Kp - 1]) ellp = Kp;
    else {
      while (ellp < Kp && h[ellp] < ratiop) ++ellp;
    }
  }
  double w_sum = 0.0;
  for (int k = 0; k < ell; ++k) w_sum += pi * g[k] - a;
  double v_sum = 0.0;
  for (int k = 0; k < ellp; ++k) v_sum += pi * h[k] + a;

  SecondStageCell cell;
  cell.surplus.assign(K, 0);
  cell.shortage.assign(Kp, 0);
  double value;
  if (w_sum <= std::min(0.0, v_sum)) {
    for (int k = 0; k < ell; ++k) cell.surplus[k] = 1;
    value = w_sum;
  } else if (std::min(0.0, w_sum) > v_sum) {
    for (int k = 0; k < ellp; ++k) cell.shortage[k] = 1;
    value = v_sum;
  } else {
    value = 0.0;
  }
  return {cell, value - a * inst.threshold[s][t][j]};
}

struct LagrangianPoint {
  double value = 0.0;              // V(LR1) + V(LR2), a valid lower bound
  FirstStageSolution first_stage;  // LR1 optimum
  SecondStageSolution relaxed_second;  // LR2 optimum (need not be feasible)
};

// Full relaxation value at one multiplier vector; weak duality makes it a
// lower bound on the optimum for every alpha.
inline LagrangianPoint lagrangian_value(const Instance& inst, const Multipliers& alpha,
                                        int lp_iter_cap = 20000) {
  if (!alpha.matches(inst))
    throw std::invalid_argument("lagrangian_value: multiplier shape mismatch");
  LagrangianPoint pt;
  auto [fs, v1] = solve_lr1(inst, alpha, lp_iter_cap);
  pt.first_stage = std::move(fs);
  pt.value = v1;
  pt.relaxed_second.cells.assign(
      inst.num_scenarios,
      std::vector<std::vector<SecondStageCell>>(inst.num_periods,
                                                std::vector<SecondStageCell>(
                                                    inst.num_demand_points)));
  for (int s = 0; s < inst.num_scenarios; ++s)
    for (int t = 0; t < inst.num_periods; ++t)
      for (int j = 0; j < inst.num_demand_points; ++j) {
        auto [cell, val] = solve_lr2_cell(inst, alpha, j, t, s);
        pt.relaxed_second.cells[s][t][j] = std::move(cell);
        pt.value += val;
      }
  return pt;
}

// Feasible-plan cost for the first stage found by LR1: the exact second
// stage fills in via the closed forms.
inline std::pair<double, SecondStageSolution> upper_bound_from(const Instance& inst,
                                                               const FirstStageSolution& fs) {
  return evaluate_first_stage(inst, fs);
}

// Subgradient of the dual function at the current iterate: covering slack of
// the relaxed solution, one component per (s, t, j).
inline Multipliers compute_gamma(const Instance& inst, const FirstStageSolution& fs,
                                 const SecondStageSolution& relaxed_second) {
  Multipliers gamma = Multipliers::zeros(inst);
  const auto y = operating_counts(inst, fs);
  for (int s = 0; s < inst.num_scenarios; ++s)
    for (int t = 0; t < inst.num_periods; ++t)
      for (int j = 0; j < inst.num_demand_points; ++j) {
        const auto& cell = relaxed_second.cells[s][t][j];
        if ((int)cell.surplus.size() != inst.surplus_levels(s, t, j) ||
            (int)cell.shortage.size() != inst.shortage_levels(s, t, j))
          throw std::invalid_argument("compute_gamma: cell dimension mismatch");
        int active = 0;
        for (auto b : cell.surplus) active += b;
        for (auto b : cell.shortage) active -= b;
        gamma.at(s, t, j) =
            coverage_count(inst, y, j, t, s) - inst.threshold[s][t][j] - active;
      }
  return gamma;
}

// alpha' = alpha + eps * (ub - lb) / ||gamma||^2 * gamma. A zero subgradient
// leaves the multipliers unchanged; the caller treats it as convergence of
// the dual step.
inline Multipliers subgradient_step(const Multipliers& alpha, double ub, double lb,
                                    const Multipliers& gamma, double eps) {
  double norm2 = 0.0;
  for (double gv : gamma.val) norm2 += gv * gv;
  if (norm2 == 0.0) return alpha;
  Multipliers next = alpha;
  const double scale = eps * (ub - lb) / norm2;
  for (size_t k = 0; k < next.val.size(); ++k) next.val[k] += scale * gamma.val[k];
  return next;
}

struct Gap {
  double pct = 0.0;
  bool degenerate = false;  // denominator vanished; value pinned to 0
};

namespace lagr_detail {
inline Gap make_gap(double numer, double denom) {
  if (denom < 1e-12) return {0.0, true};
  return {numer / denom * 100.0, false};
}
}  // namespace lagr_detail

inline Gap gap_lb_ub(double ub, double lb, double lb0) {
  return lagr_detail::make_gap(ub - lb, ub - lb0);
}
inline Gap gap_ub_opt(double ub, double opt, double lb0) {
  return lagr_detail::make_gap(ub - opt, ub - lb0);
}
inline Gap gap_lp_lb(double lp, double lb, double lb0) {
  return lagr_detail::make_gap(lp - lb, lp - lb0);
}
// integrality gap of the relaxation itself, anchored at the no-shortage bound
inline Gap lp_gap(double opt, double lp, double lb0) {
  return lagr_detail::make_gap(opt - lp, opt - lb0);
}

struct HeuristicConfig {
  enum class StopRule { iters50, iters150, iters500, eps_floor };
  double eps0 = 1.5;
  int halve_after = 10;  // iterations without a better lower bound
  StopRule stop_rule = StopRule::iters500;
  double eps_floor = 0.005;
  double gap_stop_pct = 0.01;  // stop when (UB-LB)/|UB|*100 falls below
  int lr1_iter_cap = 20000;
  int eps_floor_iter_cap = 5000;  // safety valve for the eps-floor rule

  int iteration_limit() const {
    switch (stop_rule) {
      case StopRule::iters50: return 50;
      case StopRule::iters150: return 150;
      case StopRule::iters500: return 500;
      case StopRule::eps_floor: return eps_floor_iter_cap;
    }
    return 500;
  }
};

// Named variants: family 1 halves eps after 10 stale iterations, family 2
// after 5; suffixes i/ii/iii run 50/150/500 iterations, iv runs until eps
// drops below 0.005.
inline HeuristicConfig variant_config(const std::string& name) {
  HeuristicConfig cfg;
  const auto dot = name.find('.');
  if (dot == std::string::npos)
    throw std::invalid_argument("unknown heuristic variant '" + name + "'");
  const std::string family = name.substr(0, dot), rule = name.substr(dot + 1);
  if (family == "1") cfg.halve_after = 10;
  else if (family == "2") cfg.halve_after = 5;
  else throw std::invalid_argument("unknown heuristic variant '" + name + "'");
  if (rule == "i") cfg.stop_rule = HeuristicConfig::StopRule::iters50;
  else if (rule == "ii") cfg.stop_rule = HeuristicConfig::StopRule::iters150;
  else if (rule == "iii") cfg.stop_rule = HeuristicConfig::StopRule::iters500;
  else if (rule == "iv") cfg.stop_rule = HeuristicConfig::StopRule::eps_floor;
  else throw std::invalid_argument("unknown heuristic variant '" + name + "'");
  return cfg;
}

inline const std::vector<std::string>& all_variants() {
  static const std::vector<std::string> names = {"1.i",  "1.ii", "1.iii", "1.iv",
                                                 "2.i",  "2.ii", "2.iii", "2.iv"};
  return names;
}

struct IterationLog {
  double lb = 0.0, ub = 0.0, eps = 0.0, gamma_norm2 = 0.0;
};

struct RunReport {
  double best_lb = -std::numeric_limits<double>::infinity();
  double best_ub = std::numeric_limits<double>::infinity();
  FirstStageSolution incumbent_first;
  SecondStageSolution incumbent_second;
  std::vector<IterationLog> log;
  int iterations = 0;
  double seconds = 0.0;
  std::string stop_reason;  // iterations | eps-floor | gap | zero-subgradient
  std::string variant;
};

// Subgradient optimization of the Lagrangian dual, keeping the best bounds
// and the incumbent feasible plan. Multipliers start at zero; the step uses
// the incumbent upper bound and the current iteration's lower bound.
inline RunReport run_heuristic(const Instance& inst, const HeuristicConfig& cfg,
                               const std::string& variant_name = "") {
  const auto t0 = std::chrono::steady_clock::now();
  RunReport rep;
  rep.variant = variant_name;
  Multipliers alpha = Multipliers::zeros(inst);
  double eps = cfg.eps0;
  int stale = 0;
  const int limit = cfg.iteration_limit();

  for (int iter = 0; iter < limit; ++iter) {
    LagrangianPoint pt;
    try {
      pt = lagrangian_value(inst, alpha, cfg.lr1_iter_cap);
    } catch (const std::exception& e) {
      // a failed subproblem solve ends the run with whatever was gathered
      rep.stop_reason = std::string("lr1-failure: ") + e.what();
      break;
    }
    if (pt.value > rep.best_lb) {
      rep.best_lb = pt.value;
      stale = 0;
    } else {
      ++stale;
    }
    auto [ub, feasible_second] = upper_bound_from(inst, pt.first_stage);
    if (ub < rep.best_ub) {
      rep.best_ub = ub;
      rep.incumbent_first = pt.first_stage;
      rep.incumbent_second = std::move(feasible_second);
    }
    if (stale >= cfg.halve_after) {
      eps *= 0.5;
      stale = 0;
    }
    const auto gamma = compute_gamma(inst, pt.first_stage, pt.relaxed_second);
    double norm2 = 0.0;
    for (double gv : gamma.val) norm2 += gv * gv;
    rep.log.push_back({pt.value, ub, eps, norm2});
    rep.iterations = iter + 1;

    const double gap_pct =
        (rep.best_ub - rep.best_lb) / std::max(std::abs(rep.best_ub), 1e-12) * 100.0;
    if (gap_pct <= cfg.gap_stop_pct) {
      rep.stop_reason = "gap";
      break;
    }
    if (norm2 == 0.0) {
      rep.stop_reason = "zero-subgradient";
      break;
    }
    if (cfg.stop_rule == HeuristicConfig::StopRule::eps_floor && eps < cfg.eps_floor) {
      rep.stop_reason = "eps-floor";
      break;
    }
    if (iter + 1 >= limit) {
      rep.stop_reason = "iterations";
      break;
    }
    alpha = subgradient_step(alpha, rep.best_ub, pt.value, gamma, eps);
  }
  rep.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

inline json run_report_json(const RunReport& rep) {
  json log = json::array();
  for (const auto& row : rep.log)
    log.push_back({{"lb", row.lb}, {"ub", row.ub}, {"eps", row.eps},
                   {"gamma_norm2", row.gamma_norm2}});
  json z = json::array(), zp = json::array();
  for (const auto& row : rep.incumbent_first.opens) z.push_back(row);
  for (const auto& row : rep.incumbent_first.closes) zp.push_back(row);
  return json{{"variant", rep.variant},
              {"best_lb", rep.best_lb},
              {"best_ub", rep.best_ub},
              {"iterations", rep.iterations},
              {"seconds", rep.seconds},
              {"stop_reason", rep.stop_reason},
              {"incumbent", {{"z", z}, {"zp", zp}}},
              {"log", log}};
}

}  // namespace covloc
