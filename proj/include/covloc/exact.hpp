#pragma once

// Brute-force exact solver for tiny instances, plus the perfect-information
// and static-plan comparison measures built on top of it. Enumerates every
// integer open/close plan inside the boxes, filters by the first-stage
// constraints, and prices each survivor with the exact second-stage closed
// forms. Deliberately refuses anything beyond its candidate budget.

#include <chrono>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "covloc/instance.hpp"
#include "covloc/model.hpp"

namespace covloc {

struct ExactResult {
  double opt = std::numeric_limits<double>::infinity();
  FirstStageSolution best;
  long long enumerated = 0;  // candidate plans priced
  double seconds = 0.0;
};

struct ValueOfModeling {
  double sp = 0.0;      // stochastic multi-period optimum (= mps)
  double ws = 0.0;      // probability-weighted single-scenario optima
  double evpi = 0.0;    // sp - ws
  double mps = 0.0;     // multi-period optimum
  double one_ps = 0.0;  // best first-period-only plan, priced in full model
  double vms = 0.0;     // one_ps - mps
  std::vector<double> per_scenario;  // DP_s
};

namespace exact_detail {

// candidate count bound: product over (i, t) of (e_i + 1)^2, saturating
inline long long enumeration_bound(const Instance& inst) {
  long long bound = 1;
  const long long cap = std::numeric_limits<long long>::max() / 4;
  for (int i = 0; i < inst.num_locations; ++i) {
    const long long base = (long long)inst.cap_per_location[i] + 1;
    for (int t = 0; t < inst.num_periods; ++t) {
      if (bound > cap / (base * base)) return std::numeric_limits<long long>::max();
      bound *= base * base;
    }
  }
  return bound;
}

// all (z, zp) schedules of one location whose operating counts stay inside
// [0, e]; optionally restricted to first-period moves only
struct Schedule {
  std::vector<int> opens, closes, operating;
};

inline std::vector<Schedule> location_schedules(const Instance& inst, int i, bool static_only) {
  const int T = inst.num_periods, e = inst.cap_per_location[i];
  std::vector<Schedule> out;
  Schedule cur;
  cur.opens.assign(T, 0);
  cur.closes.assign(std::max(0, T - 1), 0);
  cur.operating.assign(T, 0);

  // moves in schedule order z_0, zp_0, z_1, zp_1, ..., z_{T-1}
  std::function<void(int, int)> walk = [&](int t, int run) {
    if (t == T) {
      out.push_back(cur);
      return;
    }
    const int z_max = static_only && t > 0 ? 0 : e;
    for (int z = 0; z <= z_max; ++z) {
      const int after_open = run + z;
      if (after_open > e) break;
      cur.opens[t] = z;
      cur.operating[t] = after_open;
      if (t == T - 1) {
        walk(t + 1, after_open);
      } else {
        const int zp_max = static_only && t > 0 ? 0 : e;
        for (int zp = 0; zp <= std::min(zp_max, after_open); ++zp) {
          cur.closes[t] = zp;
          walk(t + 1, after_open - zp);
        }
        cur.closes[t] = 0;
      }
    }
    cur.opens[t] = 0;
    cur.operating[t] = 0;
  };
  walk(0, inst.initial_open[i]);
  return out;
}

inline double price_plan(const Instance& inst, const std::vector<const Schedule*>& plan) {
  const int m = inst.num_locations, T = inst.num_periods;
  double cost = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int t = 0; t < T; ++t) {
      cost += inst.open_cost[i][t] * plan[i]->opens[t];
      cost += inst.operate_cost[i][t] * plan[i]->operating[t];
      if (t < T - 1) cost += inst.close_cost[i][t] * plan[i]->closes[t];
    }
  }
  for (int s = 0; s < inst.num_scenarios; ++s) {
    const double pi = inst.prob[s];
    for (int t = 0; t < T; ++t)
      for (int j = 0; j < inst.num_demand_points; ++j) {
        int cov = 0;
        for (int i = 0; i < m; ++i)
          if (inst.covers[s][t][i][j]) cov += plan[i]->operating[t];
        const int margin = cov - inst.threshold[s][t][j];
        if (margin > 0) {
          const auto& g = inst.surplus_cost[s][t][j];
          for (int k = 0; k < margin; ++k) cost += pi * g[k];
        } else if (margin < 0) {
          const auto& h = inst.shortage_cost[s][t][j];
          for (int k = 0; k < -margin; ++k) cost += pi * h[k];
        }
      }
  }
  return cost;
}

inline std::vector<int> flatten_plan(const Instance& inst,
                                     const std::vector<const Schedule*>& plan) {
  std::vector<int> flat;
  for (int i = 0; i < inst.num_locations; ++i)
    for (int t = 0; t < inst.num_periods; ++t) flat.push_back(plan[i]->opens[t]);
  for (int i = 0; i < inst.num_locations; ++i)
    for (int t = 0; t + 1 < inst.num_periods; ++t) flat.push_back(plan[i]->closes[t]);
  return flat;
}

}  // namespace exact_detail

// Exact optimum by complete enumeration. Ties between plans of equal cost go
// to the lexicographically smallest (z, zp) vector, which makes the result
// independent of enumeration order. Refuses loudly when the candidate bound
// exceeds the budget or the time limit runs out; never approximates.
inline ExactResult solve_exact(const Instance& inst, long long budget = 10'000'000,
                               double time_limit_seconds = 600.0, bool static_only = false) {
  using namespace exact_detail;
  const auto t0 = std::chrono::steady_clock::now();
  if (enumeration_bound(inst) > budget)
    throw std::runtime_error(
        "solve_exact: enumeration bound exceeds budget " + std::to_string(budget) +
        "; export the model instead");

  const int m = inst.num_locations, T = inst.num_periods;
  std::vector<std::vector<Schedule>> choices(m);
  for (int i = 0; i < m; ++i) choices[i] = location_schedules(inst, i, static_only);

  ExactResult res;
  std::vector<const Schedule*> plan(m, nullptr);
  std::vector<int> best_flat;
  std::vector<int> totals(T, 0);
  long long since_clock_check = 0;

  std::function<void(int)> walk = [&](int i) {
    if (i == m) {
      ++res.enumerated;
      if (++since_clock_check >= 1024) {
        since_clock_check = 0;
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (elapsed > time_limit_seconds)
          throw std::runtime_error("solve_exact: time limit exceeded");
      }
      const double cost = price_plan(inst, plan);
      constexpr double tie_eps = 1e-12;
      if (cost < res.opt - tie_eps) {
        res.opt = cost;
        best_flat = flatten_plan(inst, plan);
      } else if (cost <= res.opt + tie_eps) {
        auto flat = flatten_plan(inst, plan);
        if (best_flat.empty() || flat < best_flat) {
          res.opt = std::min(res.opt, cost);
          best_flat = std::move(flat);
        }
      }
      return;
    }
    for (const auto& sched : choices[i]) {
      bool fits = true;
      for (int t = 0; t < T; ++t) {
        totals[t] += sched.operating[t];
        if (totals[t] > inst.cap_per_period[t]) fits = false;
      }
      if (fits) {
        plan[i] = &sched;
        walk(i + 1);
      }
      for (int t = 0; t < T; ++t) totals[t] -= sched.operating[t];
    }
  };
  walk(0);

  if (best_flat.empty())
    throw std::runtime_error("solve_exact: no feasible first stage (capacity data inconsistent)");
  res.best = zero_first_stage(inst);
  size_t at = 0;
  for (int i = 0; i < m; ++i)
    for (int t = 0; t < T; ++t) res.best.opens[i][t] = best_flat[at++];
  for (int i = 0; i < m; ++i)
    for (int t = 0; t + 1 < T; ++t) res.best.closes[i][t] = best_flat[at++];
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

// The instance seen under a single scenario, with probability one.
inline Instance single_scenario_instance(const Instance& inst, int s) {
  Instance one = inst;
  one.num_scenarios = 1;
  one.covers = {inst.covers[s]};
  one.threshold = {inst.threshold[s]};
  one.surplus_cost = {inst.surplus_cost[s]};
  one.shortage_cost = {inst.shortage_cost[s]};
  one.prob = {1.0};
  return one;
}

// Wait-and-see bound: solve each scenario to optimality as if it were known
// in advance, then weight by the scenario probabilities.
inline std::pair<double, std::vector<double>> wait_and_see(const Instance& inst,
                                                           long long budget = 10'000'000,
                                                           double time_limit_seconds = 600.0) {
  std::vector<double> per_scenario(inst.num_scenarios, 0.0);
  double ws = 0.0;
  for (int s = 0; s < inst.num_scenarios; ++s) {
    const auto res = solve_exact(single_scenario_instance(inst, s), budget, time_limit_seconds);
    per_scenario[s] = res.opt;
    ws += inst.prob[s] * res.opt;
  }
  return {ws, per_scenario};
}

// Static counterpart: opening only in the first period and closing only at
// the end of it. Its optimal plan is feasible in the full model, so its
// value (1PS) upper-bounds the multi-period optimum (MPS).
inline std::tuple<double, double, double> static_counterpart(const Instance& inst,
                                                             long long budget = 10'000'000,
                                                             double time_limit_seconds = 600.0) {
  const auto restricted = solve_exact(inst, budget, time_limit_seconds, /*static_only=*/true);
  const auto full = solve_exact(inst, budget, time_limit_seconds);
  const double one_ps = evaluate_first_stage(inst, restricted.best).first;
  return {one_ps, full.opt, one_ps - full.opt};
}

// Both relevance measures in one sweep.
inline ValueOfModeling value_of_modeling(const Instance& inst, long long budget = 10'000'000,
                                         double time_limit_seconds = 600.0) {
  ValueOfModeling out;
  const auto full = solve_exact(inst, budget, time_limit_seconds);
  out.sp = out.mps = full.opt;
  auto [ws, per_scenario] = wait_and_see(inst, budget, time_limit_seconds);
  out.ws = ws;
  out.per_scenario = std::move(per_scenario);
  out.evpi = out.sp - out.ws;
  auto [one_ps, mps, vms] = static_counterpart(inst, budget, time_limit_seconds);
  out.one_ps = one_ps;
  out.vms = vms;
  return out;
}

inline json exact_result_json(const ExactResult& res) {
  json z = json::array(), zp = json::array();
  for (const auto& row : res.best.opens) z.push_back(row);
  for (const auto& row : res.best.closes) zp.push_back(row);
  return json{{"opt", res.opt},
              {"enumerated", res.enumerated},
              {"seconds", res.seconds},
              {"first_stage", {{"z", z}, {"zp", zp}}}};
}

inline json value_of_modeling_json(const ValueOfModeling& v) {
  return json{{"sp", v.sp},       {"ws", v.ws},         {"evpi", v.evpi},
              {"mps", v.mps},     {"one_ps", v.one_ps}, {"vms", v.vms},
              {"dp_s", v.per_scenario},
              {"sp_minus_mps", v.sp - v.mps}};
}

}  // namespace covloc
