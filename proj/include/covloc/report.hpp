#pragma once

// Result rows and aggregation. CSV output follows RFC 4180: CRLF line
// endings, mandatory header, quoting only where needed. Every row carries
// the instance content hash so later aggregation cannot silently mix
// instances.

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "covloc/instance.hpp"
#include "covloc/lagrangian.hpp"

namespace covloc {

inline std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += "\"\"";
    else out += ch;
  }
  return out + "\"";
}

inline std::string csv_line(const std::vector<std::string>& fields) {
  std::string out;
  for (size_t k = 0; k < fields.size(); ++k) {
    if (k) out += ",";
    out += csv_escape(fields[k]);
  }
  return out + "\r\n";
}

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// One heuristic run with its context bounds; `lp` and `opt` may be missing
// (reported as empty fields) when they were not computed.
struct SolveRow {
  std::string instance;  // file name or generated id
  std::string hash;
  std::string variant;
  double lb = 0.0, ub = 0.0;
  bool has_lb0 = true;
  double lb0 = 0.0;
  bool has_lp = false;
  double lp = 0.0;
  bool has_opt = false;
  double opt = 0.0;
  int iterations = 0;
  double seconds = 0.0;
};

inline const char* solve_csv_header() {
  return "instance,hash,variant,lb,ub,lb0,lp,opt,gap_lb_ub,gap_lp_lb,gap_ub_opt,iterations,"
         "seconds";
}

inline std::string solve_csv_row(const SolveRow& row) {
  // every percentage gap anchors at lb0; without it the gap fields stay empty
  const bool gaps = row.has_lb0;
  std::vector<std::string> fields = {
      row.instance,
      row.hash,
      row.variant,
      fmt_double(row.lb),
      fmt_double(row.ub),
      gaps ? fmt_double(row.lb0) : "",
      row.has_lp ? fmt_double(row.lp) : "",
      row.has_opt ? fmt_double(row.opt) : "",
      gaps ? fmt_double(gap_lb_ub(row.ub, row.lb, row.lb0).pct) : "",
      gaps && row.has_lp ? fmt_double(gap_lp_lb(row.lp, row.lb, row.lb0).pct) : "",
      gaps && row.has_opt ? fmt_double(gap_ub_opt(row.ub, row.opt, row.lb0).pct) : "",
      std::to_string(row.iterations),
      fmt_double(row.seconds)};
  return csv_line(fields);
}

inline const char* modeling_csv_header() {
  return "instance,hash,sp,ws,evpi,mps,one_ps,vms,sp_minus_mps";
}

// RFC 4180 reader, sufficient for the files this toolkit writes.
inline std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  for (size_t k = 0; k < text.size(); ++k) {
    const char ch = text[k];
    if (quoted) {
      if (ch == '"') {
        if (k + 1 < text.size() && text[k + 1] == '"') {
          field += '"';
          ++k;
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
      continue;
    }
    switch (ch) {
      case '"': quoted = true; break;
      case ',': row.push_back(field); field.clear(); break;
      case '\r': break;
      case '\n':
        row.push_back(field);
        field.clear();
        rows.push_back(row);
        row.clear();
        break;
      default: field += ch;
    }
  }
  if (!field.empty() || !row.empty()) {
    row.push_back(field);
    rows.push_back(row);
  }
  return rows;
}

// Mean gaps per (hash-distinct instance size is unknown here, so the grouping
// key is the variant) in the layout of the published comparison tables.
inline std::string aggregate_solve_csv(const std::string& csv_text) {
  const auto rows = parse_csv(csv_text);
  if (rows.empty()) throw std::runtime_error("report: empty results file");
  const auto& header = rows.front();
  auto col = [&](const std::string& name) {
    for (size_t k = 0; k < header.size(); ++k)
      if (header[k] == name) return (int)k;
    throw std::runtime_error("report: results file lacks column '" + name + "'");
  };
  const int c_variant = col("variant"), c_gap = col("gap_lb_ub"), c_gaplp = col("gap_lp_lb");
  const int c_iters = col("iterations"), c_secs = col("seconds");

  struct Acc {
    double gap = 0.0, gap_lp = 0.0, iters = 0.0, secs = 0.0;
    int count = 0, gap_count = 0, lp_count = 0;
  };
  std::map<std::string, Acc> by_variant;
  for (size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if ((int)row.size() <= std::max({c_variant, c_gap, c_gaplp, c_iters, c_secs})) continue;
    Acc& acc = by_variant[row[c_variant]];
    if (!row[c_gap].empty()) {
      acc.gap += std::stod(row[c_gap]);
      ++acc.gap_count;
    }
    if (!row[c_gaplp].empty()) {
      acc.gap_lp += std::stod(row[c_gaplp]);
      ++acc.lp_count;
    }
    acc.iters += std::stod(row[c_iters]);
    acc.secs += std::stod(row[c_secs]);
    ++acc.count;
  }

  std::string out = csv_line({"variant", "runs", "mean_gap_lb_ub", "mean_gap_lp_lb",
                              "mean_iterations", "mean_seconds"});
  for (const auto& [variant, acc] : by_variant) {
    out += csv_line({variant, std::to_string(acc.count),
                     acc.gap_count ? fmt_double(acc.gap / acc.gap_count) : "",
                     acc.lp_count ? fmt_double(acc.gap_lp / acc.lp_count) : "",
                     fmt_double(acc.iters / acc.count), fmt_double(acc.secs / acc.count)});
  }
  return out;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace covloc
