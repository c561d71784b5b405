#pragma once

// Problem data for the multi-period stochastic covering location solver:
// the instance container, its validator, the random instance generator and
// the canonical JSON file format (schema_version 1).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace covloc {

using json = nlohmann::json;

// All data of one problem instance. Indices are 0-based throughout the code;
// location-major for deterministic data (open_cost[i][t]), scenario-major for
// stochastic data (covers[s][t][i][j]).
//
// Marginal costs are sorted: surplus_cost rows ascending and <= 0, shortage
// cost rows ascending and >= 0. Row lengths are pinned to the full variation
// range of the second stage: surplus rows hold p[t]-b values, shortage rows
// hold b values.
struct Instance {
  int num_locations = 0;     // m
  int num_demand_points = 0; // n
  int num_periods = 0;       // T
  int num_scenarios = 0;     // S
  std::uint64_t seed = 0;    // provenance only, not validated

  std::vector<std::vector<double>> open_cost;    // [i][t], m x T
  std::vector<std::vector<double>> close_cost;   // [i][t], m x (T-1)
  std::vector<std::vector<double>> operate_cost; // [i][t], m x T
  std::vector<int> cap_per_location;             // e_i
  std::vector<int> cap_per_period;               // p_t
  std::vector<int> initial_open;                 // facilities open before t=0

  std::vector<std::vector<std::vector<std::vector<std::uint8_t>>>> covers; // [s][t][i][j]
  std::vector<std::vector<std::vector<int>>> threshold;                    // [s][t][j]
  std::vector<std::vector<std::vector<std::vector<double>>>> surplus_cost; // [s][t][j][k]
  std::vector<std::vector<std::vector<std::vector<double>>>> shortage_cost;// [s][t][j][k]
  std::vector<double> prob;                                                // [s]

  int surplus_levels(int s, int t, int j) const {
    return cap_per_period[t] - threshold[s][t][j];
  }
  int shortage_levels(int s, int t, int j) const { return threshold[s][t][j]; }

  bool operator==(const Instance&) const = default;
};

// One failed invariant; `field` names the offending block, `message` carries
// the indices and values involved.
struct Violation {
  std::string field;
  std::string message;
};

namespace detail {

inline std::string idx(std::initializer_list<int> ix) {
  std::string out = "[";
  bool first = true;
  for (int v : ix) {
    if (!first) out += ",";
    out += std::to_string(v);
    first = false;
  }
  return out + "]";
}

}  // namespace detail

// Checks every structural and value invariant of an instance. Returns a list
// of violations; an empty list means the instance is well formed. Violations
// are data, not exceptions: the caller decides what is fatal.
inline std::vector<Violation> validate(const Instance& inst) {
  std::vector<Violation> out;
  auto bad = [&](const std::string& field, const std::string& msg) {
    out.push_back({field, msg});
  };

  const int m = inst.num_locations, n = inst.num_demand_points;
  const int T = inst.num_periods, S = inst.num_scenarios;
  if (m < 1 || n < 1 || T < 1 || S < 1) {
    bad("meta", "all of m, n, T, S must be at least 1");
    return out;  // nothing else is checkable
  }

  auto dims2 = [&](const std::vector<std::vector<double>>& a, int r, int c,
                   const std::string& field) {
    if ((int)a.size() != r) {
      bad(field, "expected " + std::to_string(r) + " rows, got " + std::to_string(a.size()));
      return false;
    }
    for (int i = 0; i < r; ++i)
      if ((int)a[i].size() != c) {
        bad(field, "row " + std::to_string(i) + " expected " + std::to_string(c) +
                       " entries, got " + std::to_string(a[i].size()));
        return false;
      }
    return true;
  };
  bool ok = true;
  ok &= dims2(inst.open_cost, m, T, "o");
  ok &= dims2(inst.close_cost, m, T > 1 ? T - 1 : 0, "c");
  ok &= dims2(inst.operate_cost, m, T, "f");
  if ((int)inst.cap_per_location.size() != m) { bad("e", "size mismatch"); ok = false; }
  if ((int)inst.cap_per_period.size() != T) { bad("p", "size mismatch"); ok = false; }
  if ((int)inst.initial_open.size() != m) { bad("y0", "size mismatch"); ok = false; }
  if ((int)inst.covers.size() != S || (int)inst.threshold.size() != S ||
      (int)inst.surplus_cost.size() != S || (int)inst.shortage_cost.size() != S ||
      (int)inst.prob.size() != S) {
    bad("stoch", "scenario dimension mismatch");
    ok = false;
  }
  if (!ok) return out;

  for (int s = 0; s < S; ++s) {
    if ((int)inst.covers[s].size() != T || (int)inst.threshold[s].size() != T ||
        (int)inst.surplus_cost[s].size() != T || (int)inst.shortage_cost[s].size() != T) {
      bad("stoch", "period dimension mismatch in scenario " + std::to_string(s));
      return out;
    }
    for (int t = 0; t < T; ++t) {
      if ((int)inst.covers[s][t].size() != m) {
        bad("a", "location dimension mismatch at " + detail::idx({s, t}));
        return out;
      }
      for (int i = 0; i < m; ++i)
        if ((int)inst.covers[s][t][i].size() != n) {
          bad("a", "demand dimension mismatch at " + detail::idx({s, t, i}));
          return out;
        }
      if ((int)inst.threshold[s][t].size() != n ||
          (int)inst.surplus_cost[s][t].size() != n ||
          (int)inst.shortage_cost[s][t].size() != n) {
        bad("stoch", "demand dimension mismatch at " + detail::idx({s, t}));
        return out;
      }
    }
  }

  for (int i = 0; i < m; ++i) {
    if (inst.cap_per_location[i] < 0)
      bad("e", "e" + detail::idx({i}) + " negative");
    if (inst.initial_open[i] < 0)
      bad("y0", "y0" + detail::idx({i}) + " negative");
    if (inst.initial_open[i] > inst.cap_per_location[i])
      bad("y0", "y0" + detail::idx({i}) + " exceeds e" + detail::idx({i}));
  }
  long long total_initial = 0;
  for (int i = 0; i < m; ++i) total_initial += inst.initial_open[i];
  for (int t = 0; t < T; ++t) {
    if (inst.cap_per_period[t] < 0) bad("p", "p" + detail::idx({t}) + " negative");
    if (total_initial > inst.cap_per_period[t])
      bad("y0", "sum of y0 exceeds p" + detail::idx({t}));
  }

  auto finite2 = [&](const std::vector<std::vector<double>>& a, const std::string& field) {
    for (size_t i = 0; i < a.size(); ++i)
      for (size_t t = 0; t < a[i].size(); ++t)
        if (!std::isfinite(a[i][t]))
          bad(field, field + detail::idx({(int)i, (int)t}) + " not finite");
  };
  finite2(inst.open_cost, "o");
  finite2(inst.close_cost, "c");
  finite2(inst.operate_cost, "f");

  double prob_sum = 0.0;
  for (int s = 0; s < S; ++s) {
    if (!(inst.prob[s] > 0.0))
      bad("prob", "prob" + detail::idx({s}) + " must be positive");
    prob_sum += inst.prob[s];
  }
  if (std::abs(prob_sum - 1.0) > 1e-9)
    bad("prob", "probabilities sum to " + std::to_string(prob_sum) + ", expected 1");

  for (int s = 0; s < S; ++s)
    for (int t = 0; t < T; ++t)
      for (int j = 0; j < n; ++j) {
        const int b = inst.threshold[s][t][j];
        if (b < 0 || b > inst.cap_per_period[t])
          bad("b", "b" + detail::idx({s, t, j}) + " outside [0, p[t]]");
        for (int i = 0; i < m; ++i) {
          const auto aij = inst.covers[s][t][i][j];
          if (aij != 0 && aij != 1)
            bad("a", "a" + detail::idx({s, t, i, j}) + " not binary");
        }
        const auto& g = inst.surplus_cost[s][t][j];
        const auto& h = inst.shortage_cost[s][t][j];
        const int want_g = std::max(0, inst.cap_per_period[t] - b);
        if ((int)g.size() != want_g)
          bad("g", "g row " + detail::idx({s, t, j}) + " has " + std::to_string(g.size()) +
                       " levels, expected p[t]-b = " + std::to_string(want_g));
        if ((int)h.size() != b)
          bad("h", "h row " + detail::idx({s, t, j}) + " has " + std::to_string(h.size()) +
                       " levels, expected b = " + std::to_string(b));
        for (size_t k = 0; k < g.size(); ++k) {
          if (!std::isfinite(g[k]) || g[k] > 0.0)
            bad("g", "g" + detail::idx({s, t, j, (int)k}) + " must be <= 0");
          if (k > 0 && g[k - 1] > g[k])
            bad("g", "g row " + detail::idx({s, t, j}) + " not sorted ascending at k=" +
                         std::to_string(k));
        }
        for (size_t k = 0; k < h.size(); ++k) {
          if (!std::isfinite(h[k]) || h[k] < 0.0)
            bad("h", "h" + detail::idx({s, t, j, (int)k}) + " must be >= 0");
          if (k > 0 && h[k - 1] > h[k])
            bad("h", "h row " + detail::idx({s, t, j}) + " not sorted ascending at k=" +
                         std::to_string(k));
        }
      }
  return out;
}

// Deterministic 64-bit-seeded random source. mt19937_64 is fully specified by
// the standard; doubles and bounded ints are derived by hand so the stream
// does not depend on library distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // uniform in [0, 1)
  double unit() { return (gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  // uniform integer in [lo, hi], inclusive
  int uniform_int(int lo, int hi) {
    const std::uint64_t span = (std::uint64_t)(hi - lo) + 1;
    return lo + (int)((unsigned __int128)gen_() * span >> 64);
  }

  // k distinct indices from {0, ..., n-1} (partial Fisher-Yates)
  std::vector<int> sample_without_replacement(int n, int k) {
    std::vector<int> pool(n);
    for (int i = 0; i < n; ++i) pool[i] = i;
    std::vector<int> pick;
    pick.reserve(k);
    for (int i = 0; i < k && i < n; ++i) {
      const int r = uniform_int(i, n - 1);
      std::swap(pool[i], pool[r]);
      pick.push_back(pool[i]);
    }
    return pick;
  }

 private:
  std::mt19937_64 gen_;
};

// Knobs of the random instance recipe. Defaults reproduce the published
// generation methodology; "round" is half-away-from-zero everywhere.
struct GeneratorConfig {
  int n = 5;  // locations = demand points
  int T = 3;
  int S = 3;
  std::uint64_t seed = 0;
  double radius = 8.0;
  double radius_decay = 0.2;       // r shrinks by this fraction each period
  double knockout_fraction = 0.2;  // locations zeroed per scenario
  double threshold_fraction = 0.3; // of total coverage, clamped to p_t
  double rect_width = 10.0;
  double rect_height = 50.0;
  double cost_min = 1.0, cost_max = 10.0;
  double g_min = -10.0, g_max = -1.0;
  double h_min = 1.0, h_max = 10.0;
  int e_default = 2;
  int y0_default = 0;
};

inline long long round_half_away(double x) { return std::llround(x); }

// Draw order is fixed: points; o,c,f per location; coverage knockouts per
// scenario; period caps (thresholds clamp against them, so they come first);
// then per cell the benefit row followed by the penalty row; probabilities
// last. Changing the order changes every generated instance, so golden files
// pin it.
inline Instance generate(const GeneratorConfig& cfg) {
  if (cfg.n < 1 || cfg.T < 1 || cfg.S < 1)
    throw std::invalid_argument("generate: n, T and S must be at least 1");
  if (cfg.radius_decay < 0.0 || cfg.radius_decay > 1.0 ||
      cfg.knockout_fraction < 0.0 || cfg.knockout_fraction > 1.0 ||
      cfg.threshold_fraction < 0.0 || cfg.threshold_fraction > 1.0)
    throw std::invalid_argument("generate: fractions must lie in [0,1]");
  if (cfg.cost_min > cfg.cost_max || cfg.g_min > cfg.g_max || cfg.h_min > cfg.h_max)
    throw std::invalid_argument("generate: cost ranges must be ordered");

  const int m = cfg.n, n = cfg.n, T = cfg.T, S = cfg.S;
  Rng rng(cfg.seed);
  Instance inst;
  inst.num_locations = m;
  inst.num_demand_points = n;
  inst.num_periods = T;
  inst.num_scenarios = S;
  inst.seed = cfg.seed;

  // customer points double as candidate locations
  std::vector<double> px(n), py(n);
  for (int j = 0; j < n; ++j) {
    px[j] = rng.uniform(0.0, cfg.rect_width);
    py[j] = rng.uniform(0.0, cfg.rect_height);
  }

  inst.open_cost.assign(m, std::vector<double>(T));
  inst.close_cost.assign(m, std::vector<double>(std::max(0, T - 1)));
  inst.operate_cost.assign(m, std::vector<double>(T));
  for (int i = 0; i < m; ++i) {
    for (int t = 0; t < T; ++t) inst.open_cost[i][t] = rng.uniform(cfg.cost_min, cfg.cost_max);
    for (int t = 0; t + 1 < T; ++t) inst.close_cost[i][t] = rng.uniform(cfg.cost_min, cfg.cost_max);
    for (int t = 0; t < T; ++t) inst.operate_cost[i][t] = rng.uniform(cfg.cost_min, cfg.cost_max);
  }

  // coverage by shrinking radius, identical across scenarios before knockout
  std::vector<double> radius(T);
  radius[0] = cfg.radius;
  for (int t = 1; t < T; ++t) radius[t] = radius[t - 1] * (1.0 - cfg.radius_decay);
  std::vector<std::vector<std::vector<std::uint8_t>>> base(
      T, std::vector<std::vector<std::uint8_t>>(m, std::vector<std::uint8_t>(n, 0)));
  for (int t = 0; t < T; ++t)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) {
        const double d = std::hypot(px[i] - px[j], py[i] - py[j]);
        base[t][i][j] = d <= radius[t] ? 1 : 0;
      }

  const int knock = (int)round_half_away(cfg.knockout_fraction * m);
  inst.covers.assign(S, base);
  for (int s = 0; s < S; ++s) {
    // one knockout set per scenario, applied to every period
    for (int i : rng.sample_without_replacement(m, knock))
      for (int t = 0; t < T; ++t)
        for (int j = 0; j < n; ++j) inst.covers[s][t][i][j] = 0;
  }

  inst.cap_per_location.assign(m, cfg.e_default);
  inst.initial_open.assign(m, cfg.y0_default);
  inst.cap_per_period.resize(T);
  const int p_lo = std::max(1, (int)round_half_away(0.1 * n));
  const int p_hi = std::max(p_lo, (int)round_half_away(cfg.threshold_fraction * n));
  for (int t = 0; t < T; ++t) inst.cap_per_period[t] = rng.uniform_int(p_lo, p_hi);

  inst.threshold.assign(S, std::vector<std::vector<int>>(T, std::vector<int>(n, 0)));
  for (int s = 0; s < S; ++s)
    for (int t = 0; t < T; ++t)
      for (int j = 0; j < n; ++j) {
        int cov = 0;
        for (int i = 0; i < m; ++i) cov += inst.covers[s][t][i][j];
        int b = (int)round_half_away(cfg.threshold_fraction * cov);
        // keep the surplus range well defined
        b = std::min(b, inst.cap_per_period[t]);
        inst.threshold[s][t][j] = b;
      }

  inst.surplus_cost.assign(
      S, std::vector<std::vector<std::vector<double>>>(T, std::vector<std::vector<double>>(n)));
  inst.shortage_cost = inst.surplus_cost;
  for (int s = 0; s < S; ++s)
    for (int t = 0; t < T; ++t)
      for (int j = 0; j < n; ++j) {
        auto& g = inst.surplus_cost[s][t][j];
        g.resize(inst.surplus_levels(s, t, j));
        for (auto& v : g) v = rng.uniform(cfg.g_min, cfg.g_max);
        std::sort(g.begin(), g.end());
        auto& h = inst.shortage_cost[s][t][j];
        h.resize(inst.shortage_levels(s, t, j));
        for (auto& v : h) v = rng.uniform(cfg.h_min, cfg.h_max);
        std::sort(h.begin(), h.end());
      }

  inst.prob.resize(S);
  double total = 0.0;
  for (int s = 0; s < S; ++s) {
    double u = rng.unit();
    while (u <= 0.0) u = rng.unit();
    inst.prob[s] = u;
    total += u;
  }
  for (int s = 0; s < S; ++s) inst.prob[s] /= total;
  return inst;
}

// --- canonical file format -------------------------------------------------

inline json instance_to_json(const Instance& inst) {
  json j;
  j["meta"] = {{"schema_version", 1},
               {"m", inst.num_locations},
               {"n", inst.num_demand_points},
               {"T", inst.num_periods},
               {"S", inst.num_scenarios},
               {"seed", inst.seed}};
  // deterministic blocks are period-major in the file
  json o = json::array(), c = json::array(), f = json::array();
  for (int t = 0; t < inst.num_periods; ++t) {
    json row = json::array();
    for (int i = 0; i < inst.num_locations; ++i) row.push_back(inst.open_cost[i][t]);
    o.push_back(row);
  }
  for (int t = 0; t + 1 < inst.num_periods; ++t) {
    json row = json::array();
    for (int i = 0; i < inst.num_locations; ++i) row.push_back(inst.close_cost[i][t]);
    c.push_back(row);
  }
  for (int t = 0; t < inst.num_periods; ++t) {
    json row = json::array();
    for (int i = 0; i < inst.num_locations; ++i) row.push_back(inst.operate_cost[i][t]);
    f.push_back(row);
  }
  j["det"] = {{"o", o},
              {"c", c},
              {"f", f},
              {"e", inst.cap_per_location},
              {"p", inst.cap_per_period},
              {"y0", inst.initial_open}};
  j["stoch"] = {{"a", inst.covers},
                {"b", inst.threshold},
                {"g", inst.surplus_cost},
                {"h", inst.shortage_cost}};
  j["prob"] = inst.prob;
  return j;
}

// Serialized canonical form: sorted keys, two-space indent, shortest
// round-trip number representation. Identical instances produce identical
// bytes, which is what the determinism tests and the content hash rely on.
inline std::string canonical_instance_text(const Instance& inst) {
  return instance_to_json(inst).dump(2) + "\n";
}

inline std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

// Short stable identifier of the instance content, used in result rows.
inline std::string content_hash(const Instance& inst) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                (unsigned long long)fnv1a64(canonical_instance_text(inst)));
  return std::string(buf);
}

inline Instance instance_from_json(const json& j) {
  auto need = [&](const json& node, const char* key) -> const json& {
    if (!node.contains(key))
      throw std::runtime_error(std::string("schema error: missing block '") + key + "'");
    return node.at(key);
  };
  const json& meta = need(j, "meta");
  if (need(meta, "schema_version").get<int>() != 1)
    throw std::runtime_error("schema error: unsupported schema_version");

  Instance inst;
  inst.num_locations = need(meta, "m").get<int>();
  inst.num_demand_points = need(meta, "n").get<int>();
  inst.num_periods = need(meta, "T").get<int>();
  inst.num_scenarios = need(meta, "S").get<int>();
  inst.seed = meta.value("seed", std::uint64_t{0});

  const json& det = need(j, "det");
  const auto o = need(det, "o").get<std::vector<std::vector<double>>>();
  const auto c = need(det, "c").get<std::vector<std::vector<double>>>();
  const auto f = need(det, "f").get<std::vector<std::vector<double>>>();
  const int m = inst.num_locations, T = inst.num_periods;
  if ((int)o.size() != T || (int)c.size() != std::max(0, T - 1) || (int)f.size() != T)
    throw std::runtime_error("schema error: det block period dimension mismatch");
  inst.open_cost.assign(m, std::vector<double>(T));
  inst.close_cost.assign(m, std::vector<double>(std::max(0, T - 1)));
  inst.operate_cost.assign(m, std::vector<double>(T));
  for (int t = 0; t < T; ++t) {
    if ((int)o[t].size() != m || (int)f[t].size() != m)
      throw std::runtime_error("schema error: det block location dimension mismatch");
    for (int i = 0; i < m; ++i) {
      inst.open_cost[i][t] = o[t][i];
      inst.operate_cost[i][t] = f[t][i];
    }
  }
  for (int t = 0; t + 1 < T; ++t) {
    if ((int)c[t].size() != m)
      throw std::runtime_error("schema error: det block location dimension mismatch");
    for (int i = 0; i < m; ++i) inst.close_cost[i][t] = c[t][i];
  }
  inst.cap_per_location = need(det, "e").get<std::vector<int>>();
  inst.cap_per_period = need(det, "p").get<std::vector<int>>();
  inst.initial_open = need(det, "y0").get<std::vector<int>>();

  const json& stoch = need(j, "stoch");
  inst.covers =
      need(stoch, "a").get<std::vector<std::vector<std::vector<std::vector<std::uint8_t>>>>>();
  inst.threshold = need(stoch, "b").get<std::vector<std::vector<std::vector<int>>>>();
  inst.surplus_cost =
      need(stoch, "g").get<std::vector<std::vector<std::vector<std::vector<double>>>>>();
  inst.shortage_cost =
      need(stoch, "h").get<std::vector<std::vector<std::vector<std::vector<double>>>>>();
  inst.prob = need(j, "prob").get<std::vector<double>>();

  const auto violations = validate(inst);
  if (!violations.empty())
    throw std::runtime_error("invalid instance: " + violations.front().field + ": " +
                             violations.front().message);
  return inst;
}

inline void write_instance(const Instance& inst, const std::string& path) {
  const auto violations = validate(inst);
  if (!violations.empty())
    throw std::invalid_argument("write_instance: invalid instance: " +
                                violations.front().field + ": " + violations.front().message);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_instance: cannot open '" + path + "'");
  out << canonical_instance_text(inst);
  if (!out) throw std::runtime_error("write_instance: write failed on '" + path + "'");
}

inline Instance read_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_instance: cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error("read_instance: parse error in '" + path + "': " + e.what());
  }
  try {
    return instance_from_json(j);
  } catch (const json::exception& e) {
    throw std::runtime_error("read_instance: schema error in '" + path + "': " + e.what());
  }
}

}  // namespace covloc
