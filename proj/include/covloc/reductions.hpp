#pragma once

// Compiles the classic covering-location special cases into full instances
// so the general solver subsumes them. The general model prices coverage
// through an equality with full-range surplus/shortage levels, so variants
// stated with ">= b" covering inequalities are encoded by padding: zero-cost
// surplus levels absorb extra coverage, and mandatory thresholds carry a
// dominating penalty on every shortage level. Soft-coverage maximal-covering
// variants put their weight on the first surplus level and an objective
// offset restores the original model's value.

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "covloc/instance.hpp"

namespace covloc {

enum class CaseKind { cov, dsclp, dsclp2, dscpp, gdsclp, dmclp1, dmclp2 };

inline CaseKind case_kind_from_string(const std::string& s) {
  if (s == "cov" || s == "COV") return CaseKind::cov;
  if (s == "dsclp" || s == "DSCLP") return CaseKind::dsclp;
  if (s == "dsclp2" || s == "DSCLP2") return CaseKind::dsclp2;
  if (s == "dscpp" || s == "DSCPP") return CaseKind::dscpp;
  if (s == "gdsclp" || s == "GDSCLP") return CaseKind::gdsclp;
  if (s == "dmclp1" || s == "DMCLP1") return CaseKind::dmclp1;
  if (s == "dmclp2" || s == "DMCLP2") return CaseKind::dmclp2;
  throw std::invalid_argument("unknown special case kind '" + s + "'");
}

inline const char* to_string(CaseKind k) {
  switch (k) {
    case CaseKind::cov: return "cov";
    case CaseKind::dsclp: return "dsclp";
    case CaseKind::dsclp2: return "dsclp2";
    case CaseKind::dscpp: return "dscpp";
    case CaseKind::gdsclp: return "gdsclp";
    case CaseKind::dmclp1: return "dmclp1";
    case CaseKind::dmclp2: return "dmclp2";
  }
  return "?";
}

// Union of the data the seven cases need; each kind reads its own subset.
// All indices 0-based.
struct SpecialCase {
  CaseKind kind = CaseKind::cov;
  int m = 0, n = 0, T = 1;
  std::vector<std::vector<std::vector<std::uint8_t>>> covers;  // [t][i][j]

  // COV
  std::vector<double> facility_cost;                 // f_i
  int period_cap = 0;                                // p
  std::vector<int> coverage_threshold;               // b_j
  std::vector<std::vector<double>> surplus_benefit;  // g rows, ascending <= 0
  std::vector<int> location_cap;                     // e_i

  // DSCLP
  std::vector<int> due_period;             // t_j
  std::vector<double> open_cost_schedule;  // o_t, non-increasing

  // DSCLP2 / DSCPP / GDSCLP
  std::vector<std::vector<int>> must_cover;  // J_t

  // GDSCLP / DMCLP1
  std::vector<int> openable;  // empty sites that may open
  std::vector<int> closable;  // operating sites that may close

  // DMCLP1 / DMCLP2
  std::vector<std::vector<double>> uncovered_weight;  // [j][t], >= 0
  std::vector<int> period_caps;                       // p_t
  std::vector<double> open_sched, close_sched;        // o_t, c_t (DMCLP2)

  double big_M = 0.0;  // <= 0 means derive from the case data
};

struct Reduction {
  Instance instance;
  double offset = 0.0;  // add to the reduced optimum to recover the original
};

namespace reduction_detail {

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument("reduce: " + msg);
}

// strictly dominates any finite-cost plan built from the case data: every
// cost coefficient can appear at most max-cap times per (location, period)
inline double derive_big_m(const SpecialCase& c) {
  double sum = 0.0;
  auto acc = [&](double v) { sum += std::abs(v); };
  for (double v : c.facility_cost) acc(v);
  for (const auto& row : c.surplus_benefit)
    for (double v : row) acc(v);
  for (double v : c.open_cost_schedule) acc(v);
  for (const auto& row : c.uncovered_weight)
    for (double v : row) acc(v);
  for (double v : c.open_sched) acc(v);
  for (double v : c.close_sched) acc(v);
  // unit operating costs over the horizon cover the f=1 cases
  sum += (double)c.m * std::max(1, c.T) * 2.0;
  int max_cap = 1;
  for (int e : c.location_cap) max_cap = std::max(max_cap, e);
  // schedule costs repeat per location and period when given as o_t/c_t
  const double breadth = (double)std::max(1, c.m) * std::max(1, c.T);
  return 1.0 + max_cap * breadth * sum;
}

inline void check_coverage_dims(const SpecialCase& c) {
  require((int)c.covers.size() == c.T, "coverage must have T period slices");
  for (const auto& slice : c.covers) {
    require((int)slice.size() == c.m, "coverage slice must have m rows");
    for (const auto& row : slice) require((int)row.size() == c.n, "coverage row must have n entries");
  }
}

inline Instance blank_instance(int m, int n, int T) {
  Instance inst;
  inst.num_locations = m;
  inst.num_demand_points = n;
  inst.num_periods = T;
  inst.num_scenarios = 1;
  inst.open_cost.assign(m, std::vector<double>(T, 0.0));
  inst.close_cost.assign(m, std::vector<double>(std::max(0, T - 1), 0.0));
  inst.operate_cost.assign(m, std::vector<double>(T, 0.0));
  inst.cap_per_location.assign(m, 1);
  inst.cap_per_period.assign(T, m);
  inst.initial_open.assign(m, 0);
  inst.covers.assign(1, std::vector<std::vector<std::vector<std::uint8_t>>>(
                            T, std::vector<std::vector<std::uint8_t>>(
                                   m, std::vector<std::uint8_t>(n, 0))));
  inst.threshold.assign(1, std::vector<std::vector<int>>(T, std::vector<int>(n, 0)));
  inst.surplus_cost.assign(1, std::vector<std::vector<std::vector<double>>>(
                                  T, std::vector<std::vector<double>>(n)));
  inst.shortage_cost = inst.surplus_cost;
  inst.prob = {1.0};
  return inst;
}

// fills every (t, j) cell with p_t - b zero-cost surplus levels (the first
// few optionally carrying benefits) and b shortage levels at `penalty`
inline void fill_levels(Instance& inst, double penalty,
                        const std::vector<std::vector<std::vector<double>>>* benefit = nullptr) {
  for (int t = 0; t < inst.num_periods; ++t)
    for (int j = 0; j < inst.num_demand_points; ++j) {
      const int b = inst.threshold[0][t][j];
      const int K = inst.cap_per_period[t] - b;
      auto& g = inst.surplus_cost[0][t][j];
      g.assign(K, 0.0);
      if (benefit) {
        const auto& src = (*benefit)[t][j];
        for (size_t k = 0; k < src.size(); ++k) g[k] = src[k];
      }
      inst.shortage_cost[0][t][j].assign(b, penalty);
    }
}

}  // namespace reduction_detail

// Emits the equivalent general instance and the objective offset. The
// reduced optimum plus the offset equals the original case's optimum.
inline Reduction reduce(const SpecialCase& c) {
  using namespace reduction_detail;
  require(c.m >= 1 && c.n >= 1 && c.T >= 1, "m, n, T must be at least 1");
  check_coverage_dims(c);
  const double M = c.big_M > 0.0 ? c.big_M : derive_big_m(c);

  std::set<int> openable(c.openable.begin(), c.openable.end());
  std::set<int> closable(c.closable.begin(), c.closable.end());
  for (int i : openable)
    require(!closable.count(i), "openable and closable sets must not overlap");
  for (int i : openable) require(i >= 0 && i < c.m, "openable index out of range");
  for (int i : closable) require(i >= 0 && i < c.m, "closable index out of range");

  Reduction out;
  Instance& inst = out.instance;

  switch (c.kind) {
    case CaseKind::cov: {
      require(c.T == 1, "the static case has a single period");
      require((int)c.facility_cost.size() == c.m, "facility_cost must have m entries");
      require((int)c.coverage_threshold.size() == c.n, "coverage_threshold must have n entries");
      inst = blank_instance(c.m, c.n, 1);
      inst.cap_per_period[0] = c.period_cap;
      if (!c.location_cap.empty()) {
        require((int)c.location_cap.size() == c.m, "location_cap must have m entries");
        inst.cap_per_location = c.location_cap;
      }
      for (int i = 0; i < c.m; ++i) inst.operate_cost[i][0] = c.facility_cost[i];
      inst.covers[0] = c.covers;
      for (int j = 0; j < c.n; ++j) {
        const int b = c.coverage_threshold[j];
        require(b >= 0 && b <= c.period_cap, "threshold outside [0, p]");
        inst.threshold[0][0][j] = b;
        if (j < (int)c.surplus_benefit.size())
          require((int)c.surplus_benefit[j].size() <= c.period_cap - b,
                  "more benefit levels than the surplus range allows");
      }
      std::vector<std::vector<std::vector<double>>> benefit(
          1, std::vector<std::vector<double>>(c.n));
      for (int j = 0; j < c.n && j < (int)c.surplus_benefit.size(); ++j)
        benefit[0][j] = c.surplus_benefit[j];
      fill_levels(inst, M, &benefit);
      break;
    }
    case CaseKind::dsclp: {
      require((int)c.due_period.size() == c.n, "due_period must have n entries");
      require((int)c.open_cost_schedule.size() == c.T, "open_cost_schedule must have T entries");
      for (int t = 0; t + 1 < c.T; ++t)
        require(c.open_cost_schedule[t] >= c.open_cost_schedule[t + 1],
                "opening cost schedule must be non-increasing");
      inst = blank_instance(c.m, c.n, c.T);
      inst.covers[0] = c.covers;
      for (int i = 0; i < c.m; ++i)
        for (int t = 0; t < c.T; ++t) inst.open_cost[i][t] = c.open_cost_schedule[t];
      for (int j = 0; j < c.n; ++j) {
        require(c.due_period[j] >= 0 && c.due_period[j] < c.T, "due period out of range");
        inst.threshold[0][c.due_period[j]][j] = 1;
      }
      fill_levels(inst, M);
      break;
    }
    case CaseKind::dsclp2:
    case CaseKind::dscpp:
    case CaseKind::gdsclp: {
      require((int)c.must_cover.size() == c.T, "must_cover needs one demand set per period");
      inst = blank_instance(c.m, c.n, c.T);
      inst.covers[0] = c.covers;
      for (int i = 0; i < c.m; ++i)
        for (int t = 0; t < c.T; ++t) inst.operate_cost[i][t] = 1.0;
      if (c.kind == CaseKind::dsclp2) {
        for (int i = 0; i < c.m; ++i)
          for (int t = 0; t + 1 < c.T; ++t) inst.close_cost[i][t] = M;
      } else if (c.kind == CaseKind::dscpp) {
        inst.initial_open.assign(c.m, 1);
        for (int i = 0; i < c.m; ++i)
          for (int t = 0; t < c.T; ++t) inst.open_cost[i][t] = M;
      } else {  // gdsclp
        for (int i = 0; i < c.m; ++i) {
          const bool can_open = openable.count(i) > 0;
          const bool can_close = closable.count(i) > 0;
          inst.initial_open[i] = can_close ? 1 : 0;
          for (int t = 0; t < c.T; ++t) inst.open_cost[i][t] = can_open ? 0.0 : M;
          for (int t = 0; t + 1 < c.T; ++t) inst.close_cost[i][t] = can_close ? 0.0 : M;
        }
      }
      for (int t = 0; t < c.T; ++t)
        for (int j : c.must_cover[t]) {
          require(j >= 0 && j < c.n, "must_cover index out of range");
          inst.threshold[0][t][j] = 1;
        }
      fill_levels(inst, M);
      break;
    }
    case CaseKind::dmclp1:
    case CaseKind::dmclp2: {
      require((int)c.uncovered_weight.size() == c.n, "uncovered_weight must have n rows");
      require((int)c.period_caps.size() == c.T, "period_caps must have T entries");
      inst = blank_instance(c.m, c.n, c.T);
      inst.covers[0] = c.covers;
      inst.cap_per_period = c.period_caps;
      for (int t = 0; t < c.T; ++t) require(c.period_caps[t] >= 1, "period cap must be positive");
      if (c.kind == CaseKind::dmclp1) {
        for (int i = 0; i < c.m; ++i) {
          const bool can_open = openable.count(i) > 0;
          const bool can_close = closable.count(i) > 0;
          inst.initial_open[i] = can_close ? 1 : 0;
          for (int t = 0; t < c.T; ++t) inst.open_cost[i][t] = can_open ? 0.0 : M;
          for (int t = 0; t + 1 < c.T; ++t) inst.close_cost[i][t] = can_close ? 0.0 : M;
        }
      } else {
        require((int)c.open_sched.size() == c.T, "open_sched must have T entries");
        require((int)c.close_sched.size() == std::max(0, c.T - 1) ||
                    (int)c.close_sched.size() == c.T,
                "close_sched must cover the closing periods");
        for (int i = 0; i < c.m; ++i) {
          for (int t = 0; t < c.T; ++t) inst.open_cost[i][t] = c.open_sched[t];
          for (int t = 0; t + 1 < c.T; ++t) inst.close_cost[i][t] = c.close_sched[t];
        }
      }
      // weight of covering j lands on the first surplus level; the offset
      // converts "benefit for covered" back into "penalty for uncovered"
      std::vector<std::vector<std::vector<double>>> benefit(
          c.T, std::vector<std::vector<double>>(c.n));
      for (int j = 0; j < c.n; ++j) {
        require((int)c.uncovered_weight[j].size() == c.T, "uncovered_weight rows must have T entries");
        for (int t = 0; t < c.T; ++t) {
          require(c.uncovered_weight[j][t] >= 0.0, "weights must be nonnegative");
          benefit[t][j] = {-c.uncovered_weight[j][t]};
          out.offset += c.uncovered_weight[j][t];
        }
      }
      fill_levels(inst, M, &benefit);
      break;
    }
  }

  const auto violations = validate(inst);
  if (!violations.empty())
    throw std::invalid_argument("reduce: produced invalid instance: " +
                                violations.front().field + ": " + violations.front().message);
  return out;
}

// Case files carry a `kind` discriminator plus the kind's fields, 0-indexed.
inline SpecialCase case_from_json(const json& j) {
  SpecialCase c;
  if (!j.contains("kind")) throw std::runtime_error("case file: missing 'kind'");
  c.kind = case_kind_from_string(j.at("kind").get<std::string>());
  c.m = j.value("m", 0);
  c.n = j.value("n", 0);
  c.T = j.value("T", 1);
  if (j.contains("a"))
    c.covers = j.at("a").get<std::vector<std::vector<std::vector<std::uint8_t>>>>();
  if (j.contains("f")) c.facility_cost = j.at("f").get<std::vector<double>>();
  c.period_cap = j.value("p", 0);
  if (j.contains("b")) c.coverage_threshold = j.at("b").get<std::vector<int>>();
  if (j.contains("g")) c.surplus_benefit = j.at("g").get<std::vector<std::vector<double>>>();
  if (j.contains("e")) c.location_cap = j.at("e").get<std::vector<int>>();
  if (j.contains("t_j")) c.due_period = j.at("t_j").get<std::vector<int>>();
  if (j.contains("o_t")) c.open_cost_schedule = j.at("o_t").get<std::vector<double>>();
  if (j.contains("must_cover"))
    c.must_cover = j.at("must_cover").get<std::vector<std::vector<int>>>();
  if (j.contains("openable")) c.openable = j.at("openable").get<std::vector<int>>();
  if (j.contains("closable")) c.closable = j.at("closable").get<std::vector<int>>();
  if (j.contains("weights"))
    c.uncovered_weight = j.at("weights").get<std::vector<std::vector<double>>>();
  if (j.contains("p_t")) c.period_caps = j.at("p_t").get<std::vector<int>>();
  if (j.contains("open_sched")) c.open_sched = j.at("open_sched").get<std::vector<double>>();
  if (j.contains("close_sched")) c.close_sched = j.at("close_sched").get<std::vector<double>>();
  c.big_M = j.value("big_M", 0.0);
  return c;
}

}  // namespace covloc
