#pragma once

// MILP file writers: fixed-column MPS and CPLEX-LP text. Output is byte
// deterministic for identical input; names follow the assembly order of
// model.hpp (z_i_t, zp_i_t, y_i_t, w_s_t_j_k, v_s_t_j_k, rows cap/bal/ub/lb/
// cov/mux/wlk/vlk/agg, all 1-based).

#include <fstream>
#include <string>
#include <vector>

#include "covloc/model.hpp"

namespace covloc {

namespace export_detail {

inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string pad(const std::string& s, size_t width) {
  std::string out = s;
  if (out.size() < width) out.append(width - out.size(), ' ');
  else out += ' ';
  return out;
}

}  // namespace export_detail

inline std::string mps_text(const MilpModel& mm, const std::string& model_name = "COVLOC") {
  using export_detail::num;
  using export_detail::pad;
  std::string out;
  out += "NAME          " + model_name + "\n";
  out += "ROWS\n";
  out += " N  COST\n";
  for (const auto& row : mm.rows) {
    const char sense = row.sense == RowSense::le ? 'L' : row.sense == RowSense::ge ? 'G' : 'E';
    out += std::string(" ") + sense + "  " + row.name + "\n";
  }

  // column-major view of the coefficient matrix
  std::vector<std::vector<std::pair<int, double>>> by_col(mm.cols.size());
  for (size_t r = 0; r < mm.rows.size(); ++r)
    for (auto [col, coef] : mm.rows[r].terms) by_col[col].push_back({(int)r, coef});

  out += "COLUMNS\n";
  out += "    MARKER                 'MARKER'                 'INTORG'\n";
  for (size_t c = 0; c < mm.cols.size(); ++c) {
    // objective entry first, then the rows in model order, two per line
    std::vector<std::pair<std::string, double>> entries;
    entries.push_back({"COST", mm.cols[c].obj});
    for (auto [r, coef] : by_col[c]) entries.push_back({mm.rows[r].name, coef});
    for (size_t k = 0; k < entries.size(); k += 2) {
      out += "    " + pad(mm.cols[c].name, 10) + pad(entries[k].first, 10) +
             num(entries[k].second);
      if (k + 1 < entries.size())
        out += "   " + pad(entries[k + 1].first, 10) + num(entries[k + 1].second);
      out += "\n";
    }
  }
  out += "    MARKER                 'MARKER'                 'INTEND'\n";

  out += "RHS\n";
  {
    std::vector<std::pair<std::string, double>> entries;
    if (mm.objective_constant != 0.0) entries.push_back({"COST", -mm.objective_constant});
    for (const auto& row : mm.rows)
      if (row.rhs != 0.0) entries.push_back({row.name, row.rhs});
    for (size_t k = 0; k < entries.size(); k += 2) {
      out += "    " + pad("RHS", 10) + pad(entries[k].first, 10) + num(entries[k].second);
      if (k + 1 < entries.size())
        out += "   " + pad(entries[k + 1].first, 10) + num(entries[k + 1].second);
      out += "\n";
    }
  }

  out += "BOUNDS\n";
  for (const auto& col : mm.cols) {
    if (col.integer && col.lo == 0.0 && col.hi == 1.0)
      out += " BV " + pad("BND", 10) + col.name + "\n";
    else
      out += " UP " + pad("BND", 10) + pad(col.name, 10) + num(col.hi) + "\n";
  }
  out += "ENDATA\n";
  return out;
}

inline std::string lp_text(const MilpModel& mm) {
  using export_detail::num;
  std::string out = "\\ covering location model export\nMinimize\n";
  std::string line = " COST:";
  auto flush_term = [&](const std::string& term) {
    if (line.size() + term.size() > 76) {
      out += line + "\n";
      line = "   ";
    }
    line += term;
  };
  for (size_t c = 0; c < mm.cols.size(); ++c) {
    const double v = mm.cols[c].obj;
    if (v == 0.0) continue;
    flush_term((v < 0 ? " - " : " + ") + num(std::abs(v)) + " " + mm.cols[c].name);
  }
  if (mm.objective_constant != 0.0)
    flush_term((mm.objective_constant < 0 ? " - " : " + ") + num(std::abs(mm.objective_constant)));
  out += line + "\n";

  out += "Subject To\n";
  for (const auto& row : mm.rows) {
    line = " " + row.name + ":";
    bool first = true;
    for (auto [col, coef] : row.terms) {
      if (coef == 0.0) continue;
      std::string term;
      if (first && coef > 0) term = " " + num(coef) + " " + mm.cols[col].name;
      else term = (coef < 0 ? " - " : " + ") + num(std::abs(coef)) + " " + mm.cols[col].name;
      flush_term(term);
      first = false;
    }
    // a row can lose every term in degenerate cells; keep the line parseable
    if (first && !mm.cols.empty()) flush_term(" 0 " + mm.cols[0].name);
    const char* rel = row.sense == RowSense::le ? " <= " : row.sense == RowSense::ge ? " >= " : " = ";
    flush_term(rel + num(row.rhs));
    out += line + "\n";
  }

  out += "Bounds\n";
  for (const auto& col : mm.cols)
    out += " 0 <= " + col.name + " <= " + num(col.hi) + "\n";

  std::string generals, binaries;
  for (const auto& col : mm.cols) {
    if (!col.integer) continue;
    if (col.lo == 0.0 && col.hi == 1.0) binaries += " " + col.name + "\n";
    else generals += " " + col.name + "\n";
  }
  if (!generals.empty()) out += "Generals\n" + generals;
  if (!binaries.empty()) out += "Binaries\n" + binaries;
  out += "End\n";
  return out;
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("write failed on '" + path + "'");
}

inline void export_mps(const Instance& inst, const ModelVariant& variant,
                       const std::string& path) {
  write_text_file(path, mps_text(assemble_model(inst, variant)));
}

inline void export_lp(const Instance& inst, const ModelVariant& variant,
                      const std::string& path) {
  write_text_file(path, lp_text(assemble_model(inst, variant)));
}

}  // namespace covloc
