// Command-line front end: instance generation, heuristic and exact solving,
// MILP export, solution scoring, special-case reduction and result
// aggregation. Every run with identical flags and seeds writes identical
// files (timing fields aside).

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <thread>

#include <CLI11.hpp>

#include <covloc/covloc.hpp>

namespace fs = std::filesystem;
using namespace covloc;

namespace {

std::uint64_t effective_seed(std::uint64_t flag_seed) {
  if (const char* env = std::getenv("COVLOC_SEED")) return std::strtoull(env, nullptr, 10);
  return flag_seed;
}

std::string generated_name(const GeneratorConfig& cfg) {
  return "inst_n" + std::to_string(cfg.n) + "_T" + std::to_string(cfg.T) + "_S" +
         std::to_string(cfg.S) + "_seed" + std::to_string(cfg.seed) + ".json";
}

std::vector<std::string> split_list(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (const auto& arg : args) {
    size_t start = 0;
    while (start <= arg.size()) {
      const size_t comma = arg.find(',', start);
      const std::string piece = arg.substr(start, comma == std::string::npos ? std::string::npos
                                                                             : comma - start);
      if (!piece.empty()) out.push_back(piece);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  return out;
}

int cmd_generate(int n, int T, int S, std::uint64_t seed, const std::string& out) {
  GeneratorConfig cfg;
  cfg.n = n;
  cfg.T = T;
  cfg.S = S;
  cfg.seed = effective_seed(seed);
  const Instance inst = generate(cfg);
  fs::path path(out.empty() ? "." : out);
  if (out.empty() || fs::is_directory(path) || out.back() == '/') {
    fs::create_directories(path);
    path /= generated_name(cfg);
  } else if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  write_instance(inst, path.string());
  std::cout << path.string() << "\n";
  return 0;
}

struct SolveTask {
  size_t instance_idx, variant_idx;
};

int cmd_solve(const std::vector<std::string>& instance_args,
              const std::vector<std::string>& variant_args, const std::string& out_dir,
              int jobs, bool with_lp, bool with_lb0, double time_limit) {
  const auto t0 = std::chrono::steady_clock::now();
  auto out_of_time = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() >
           time_limit;
  };
  const auto instances = split_list(instance_args);
  auto variants = split_list(variant_args);
  if (variants.empty()) variants = {"1.iii"};
  for (const auto& v : variants) variant_config(v);  // validate names up front
  if (instances.empty()) throw std::runtime_error("solve: at least one --instance is required");

  fs::create_directories(out_dir);

  struct Loaded {
    std::string name, hash;
    Instance inst;
    bool has_lb0 = false;
    double lb0 = 0.0;
    bool has_lp = false;
    double lp = 0.0;
  };
  std::vector<Loaded> loaded;
  for (const auto& file : instances) {
    if (out_of_time()) throw std::runtime_error("solve: time limit exceeded during LP phase");
    Loaded entry;
    entry.inst = read_instance(file);
    entry.name = fs::path(file).filename().string();
    entry.hash = content_hash(entry.inst);
    if (with_lb0) {
      const auto lb0_sol = solve_lp(build_lb0(entry.inst), 200000);
      if (lb0_sol.status != LpSolution::Status::optimal)
        throw std::runtime_error("solve: LB0 relaxation did not solve for " + file);
      entry.has_lb0 = true;
      entry.lb0 = lb0_sol.objective;
    }
    if (with_lp) {
      const auto lp_sol = solve_lp(build_lp_relaxation(entry.inst, {}), 200000);
      if (lp_sol.status != LpSolution::Status::optimal)
        throw std::runtime_error("solve: LP relaxation did not solve for " + file);
      entry.has_lp = true;
      entry.lp = lp_sol.objective;
    }
    loaded.push_back(std::move(entry));
  }

  std::vector<SolveTask> tasks;
  for (size_t ii = 0; ii < loaded.size(); ++ii)
    for (size_t vi = 0; vi < variants.size(); ++vi) tasks.push_back({ii, vi});

  std::vector<SolveRow> rows(tasks.size());
  std::vector<json> reports(tasks.size());
  std::atomic<size_t> next{0};
  std::atomic<bool> timed_out{false};
  auto worker = [&]() {
    while (true) {
      const size_t k = next.fetch_add(1);
      if (k >= tasks.size()) return;
      if (out_of_time()) {
        timed_out.store(true);
        return;
      }
      const auto& task = tasks[k];
      const auto& entry = loaded[task.instance_idx];
      const auto& variant = variants[task.variant_idx];
      const RunReport rep = run_heuristic(entry.inst, variant_config(variant), variant);
      SolveRow row;
      row.instance = entry.name;
      row.hash = entry.hash;
      row.variant = variant;
      row.lb = rep.best_lb;
      row.ub = rep.best_ub;
      row.has_lb0 = entry.has_lb0;
      row.lb0 = entry.lb0;
      row.has_lp = entry.has_lp;
      row.lp = entry.lp;
      row.iterations = rep.iterations;
      row.seconds = rep.seconds;
      rows[k] = std::move(row);
      reports[k] = run_report_json(rep);
    }
  };
  const int workers = std::max(1, jobs);
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (timed_out.load()) throw std::runtime_error("solve: time limit exceeded");

  const fs::path csv_path = fs::path(out_dir) / "results.csv";
  const bool fresh = !fs::exists(csv_path);
  std::ofstream csv(csv_path, std::ios::binary | std::ios::app);
  if (!csv) throw std::runtime_error("solve: cannot open " + csv_path.string());
  if (fresh) csv << solve_csv_header() << "\r\n";
  for (size_t k = 0; k < tasks.size(); ++k) {
    csv << solve_csv_row(rows[k]);
    const auto& entry = loaded[tasks[k].instance_idx];
    const fs::path rp =
        fs::path(out_dir) / ("run_" + entry.hash + "_" + variants[tasks[k].variant_idx] + ".json");
    write_text_file(rp.string(), reports[k].dump(2) + "\n");
  }
  std::cout << csv_path.string() << "\n";
  return 0;
}

int cmd_exact(const std::string& instance_file, long long budget, double time_limit,
              bool evpi, bool vms, const std::string& out_dir) {
  const Instance inst = read_instance(instance_file);
  const std::string hash = content_hash(inst);
  fs::create_directories(out_dir);

  const auto res = solve_exact(inst, budget, time_limit);
  json out = exact_result_json(res);
  out["hash"] = hash;
  if (evpi || vms) {
    const auto v = value_of_modeling(inst, budget, time_limit);
    out["modeling"] = value_of_modeling_json(v);
    const fs::path csv_path = fs::path(out_dir) / "modeling.csv";
    const bool fresh = !fs::exists(csv_path);
    std::ofstream csv(csv_path, std::ios::binary | std::ios::app);
    if (fresh) csv << modeling_csv_header() << "\r\n";
    csv << csv_line({fs::path(instance_file).filename().string(), hash, fmt_double(v.sp),
                     fmt_double(v.ws), fmt_double(v.evpi), fmt_double(v.mps),
                     fmt_double(v.one_ps), fmt_double(v.vms), fmt_double(v.sp - v.mps)});
  }
  const fs::path json_path = fs::path(out_dir) / ("exact_" + hash + ".json");
  write_text_file(json_path.string(), out.dump(2) + "\n");
  std::cout << fmt_double(res.opt) << "\n";
  return 0;
}

int cmd_export(const std::string& instance_file, const std::string& format,
               const std::string& linking, const std::string& formulation,
               const std::string& out) {
  const Instance inst = read_instance(instance_file);
  ModelVariant variant;
  variant.linking = linking_from_string(linking);
  variant.formulation = formulation_from_string(formulation);
  if (fs::path(out).has_parent_path()) fs::create_directories(fs::path(out).parent_path());
  if (format == "mps") export_mps(inst, variant, out);
  else if (format == "lp") export_lp(inst, variant, out);
  else throw std::runtime_error("export: format must be mps or lp");
  std::cout << out << "\n";
  return 0;
}

int cmd_evaluate(const std::string& instance_file, const std::string& solution_file,
                 const std::string& out) {
  const Instance inst = read_instance(instance_file);
  json sj;
  {
    std::ifstream in(solution_file);
    if (!in) throw std::runtime_error("evaluate: cannot open '" + solution_file + "'");
    in >> sj;
  }
  FirstStageSolution fs_sol = zero_first_stage(inst);
  if (!sj.contains("z")) throw std::runtime_error("evaluate: solution file lacks 'z'");
  fs_sol.opens = sj.at("z").get<std::vector<std::vector<int>>>();
  if (sj.contains("zp")) fs_sol.closes = sj.at("zp").get<std::vector<std::vector<int>>>();
  auto [value, ss] = evaluate_first_stage(inst, fs_sol);
  json report = evaluation_report(inst, fs_sol, ss);
  report["hash"] = content_hash(inst);
  (void)value;
  if (out.empty()) std::cout << report.dump(2) << "\n";
  else {
    write_text_file(out, report.dump(2) + "\n");
    std::cout << out << "\n";
  }
  return 0;
}

int cmd_reduce(const std::string& case_file, const std::string& out) {
  json cj;
  {
    std::ifstream in(case_file);
    if (!in) throw std::runtime_error("reduce: cannot open '" + case_file + "'");
    in >> cj;
  }
  const SpecialCase sc = case_from_json(cj);
  const Reduction red = reduce(sc);
  if (fs::path(out).has_parent_path()) fs::create_directories(fs::path(out).parent_path());
  write_instance(red.instance, out);
  json meta = {{"kind", to_string(sc.kind)}, {"instance", out}, {"offset", red.offset}};
  std::cout << meta.dump() << "\n";
  return 0;
}

int cmd_report(const std::string& in_file, const std::string& out) {
  const std::string summary = aggregate_solve_csv(read_text_file(in_file));
  if (out.empty()) std::cout << summary;
  else {
    write_text_file(out, summary);
    std::cout << out << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-period stochastic covering location toolkit"};
  app.require_subcommand(1);

  // generate
  int n = 5, T = 3, S = 3;
  std::uint64_t seed = 0;
  std::string out;
  auto* gen = app.add_subcommand("generate", "write a random instance file");
  gen->add_option("--n", n, "locations = demand points");
  gen->add_option("--T", T, "periods");
  gen->add_option("--S", S, "scenarios");
  gen->add_option("--seed", seed, "generator seed (COVLOC_SEED overrides)");
  gen->add_option("--out", out, "output directory or .json path");

  // solve
  std::vector<std::string> instance_args, variant_args;
  std::string solve_out = "results";
  int jobs = 1;
  bool no_lp = false;
  double solve_time_limit = 600.0;
  bool no_lb0 = false;
  auto* solve = app.add_subcommand("solve", "run the Lagrangian heuristic");
  solve->add_option("--instance", instance_args, "instance file(s), repeat or comma-separate")
      ->required();
  solve->add_option("--variant", variant_args, "heuristic variants from 1.i..2.iv");
  solve->add_option("--out", solve_out, "output directory");
  solve->add_option("--jobs", jobs, "parallel (instance, variant) runs");
  solve->add_option("--time-limit", solve_time_limit, "seconds across all runs");
  solve->add_flag("--no-lp", no_lp, "skip the LP relaxation bound");
  solve->add_flag("--no-lb0", no_lb0,
                  "skip the gap-anchor bound too (gap columns stay empty)");

  // exact
  std::string exact_instance, exact_out = "results";
  long long budget = 10'000'000;
  double time_limit = 600.0;
  bool evpi = false, vms = false;
  auto* exact = app.add_subcommand("exact", "enumerate the exact optimum (tiny instances)");
  exact->add_option("--instance", exact_instance)->required();
  exact->add_option("--budget", budget, "max first-stage candidates");
  exact->add_option("--time-limit", time_limit, "seconds");
  exact->add_flag("--evpi", evpi, "also compute WS and EVPI");
  exact->add_flag("--vms", vms, "also compute 1PS and VMS");
  exact->add_option("--out", exact_out, "output directory");

  // export
  std::string export_instance, format = "mps", linking = "ww", formulation = "gmsclp-prime";
  std::string export_out;
  auto* exp = app.add_subcommand("export", "write the MILP as MPS or LP text");
  exp->add_option("--instance", export_instance)->required();
  exp->add_option("--format", format, "mps or lp");
  exp->add_option("--linking", linking, "ww, opt2 or opt3");
  exp->add_option("--formulation", formulation, "gmsclp or gmsclp-prime");
  exp->add_option("--out", export_out)->required();

  // evaluate
  std::string eval_instance, eval_solution, eval_out;
  auto* eval = app.add_subcommand("evaluate", "score a first-stage solution file");
  eval->add_option("--instance", eval_instance)->required();
  eval->add_option("--solution", eval_solution)->required();
  eval->add_option("--out", eval_out, "report path (stdout if omitted)");

  // reduce
  std::string case_file, reduce_out;
  auto* red = app.add_subcommand("reduce", "compile a special-case file into an instance");
  red->add_option("--case", case_file)->required();
  red->add_option("--out", reduce_out)->required();

  // report
  std::string report_in, report_out;
  auto* rep = app.add_subcommand("report", "aggregate a results.csv into mean gaps");
  rep->add_option("--in", report_in)->required();
  rep->add_option("--out", report_out, "summary path (stdout if omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_generate(n, T, S, seed, out);
    if (solve->parsed())
      return cmd_solve(instance_args, variant_args, solve_out, jobs, !no_lp, !no_lb0,
                       solve_time_limit);
    if (exact->parsed()) return cmd_exact(exact_instance, budget, time_limit, evpi, vms, exact_out);
    if (exp->parsed()) return cmd_export(export_instance, format, linking, formulation, export_out);
    if (eval->parsed()) return cmd_evaluate(eval_instance, eval_solution, eval_out);
    if (red->parsed()) return cmd_reduce(case_file, reduce_out);
    if (rep->parsed()) return cmd_report(report_in, report_out);
  } catch (const std::exception& e) {
    std::string msg = e.what();
    for (auto& ch : msg)
      if (ch == '\n' || ch == '\r') ch = ' ';
    std::cerr << "error: " << msg << "\n";
    return 1;
  }
  return 0;
}
