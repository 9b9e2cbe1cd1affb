// Command-line driver: runs one configured solve (default mode) or a sweep
// over grids and sufficient-decrease coefficients, writing iteration history
// as CSV and a full run report as JSON.

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "issng/examples.hpp"
#include "issng/kernels.hpp"
#include "issng/report.hpp"
#include "issng/solver.hpp"

namespace {

using nlohmann::json;

struct CommonOpts {
  std::string example;
  std::string file;
  int n = 32;
  double alpha = 1e-3;
  std::string variant = "issng-l";
  std::string init = "zeros";
  std::string forcing = "corrected";
  issng::SolverConfig cfg;
};

void add_common_options(CLI::App* app, CommonOpts* o) {
  app->add_option("--example", o->example, "Built-in problem: example1 or example2")
      ->check(CLI::IsMember({"example1", "example2"}));
  app->add_option("--file", o->file, "Problem description JSON file");
  app->add_option("--n", o->n, "Grid subintervals per dimension");
  app->add_option("--alpha", o->alpha, "Control regularization weight");
  app->add_option("--variant", o->variant, "Solver variant")
      ->check(CLI::IsMember({"issng-l", "issng"}));
  app->add_option("--init", o->init,
                  "Initial guess: zeros or constant:<c> (both fields set to c)");
  app->add_option("--forcing", o->forcing,
                  "example1 forcing field variant: corrected or printed")
      ->check(CLI::IsMember({"corrected", "printed"}));
  issng::SolverConfig& c = o->cfg;
  app->add_option("--c1", c.c1, "Sufficient-decrease coefficient");
  app->add_option("--theta", c.theta, "Backtracking factor");
  app->add_option("--delta0", c.delta0, "Initial trial stepsize");
  app->add_option("--eta0", c.eta0, "Forcing term at the first iteration");
  app->add_option("--eta-max", c.eta_max, "Forcing-term upper clamp");
  app->add_option("--gamma", c.gamma, "Forcing-term scale");
  app->add_option("--a1", c.a1, "Forcing-term exponent");
  app->add_option("--tol", c.tol, "Stopping tolerance");
  app->add_option("--max-newton", c.max_newton, "Outer iteration cap");
  app->add_option("--max-backtracks", c.max_backtracks, "Backtracking cap");
  app->add_option("--window", c.window,
                  "Nonmonotone memory length (0 = unbounded)");
  app->add_option("--restart", c.restart, "GMRES restart length");
  app->add_option("--gmres-max-iters", c.gmres_max_iters,
                  "GMRES total iteration cap (0 = 10*dim)");
}

bool parse_init(const std::string& s, double* value) {
  if (s == "zeros") {
    *value = 0.0;
    return true;
  }
  const std::string prefix = "constant:";
  if (s.rfind(prefix, 0) == 0) {
    try {
      *value = std::stod(s.substr(prefix.size()));
      return true;
    } catch (...) {
      return false;
    }
  }
  return false;
}

double parse_bound(const json& j, double sign_infinity) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    throw std::runtime_error("unrecognized bound string: " + s);
  }
  if (j.is_null()) return sign_infinity;
  return j.get<double>();
}

issng::ExampleCase load_problem_file(const std::string& path) {
  const json doc = json::parse(issng::read_text_file(path));
  issng::ExampleCase ec;
  ec.name = "file:" + path;
  issng::ProblemInstance& inst = ec.instance;
  inst.grid = issng::make_grid(doc.at("n").get<int>());
  inst.alpha = doc.at("alpha").get<double>();

  const std::string nl = doc.at("nonlinearity").get<std::string>();
  if (nl == "cubic") {
    inst.nl = issng::Nonlinearity{[](double y) { return y * y * y; },
                                  [](double y) { return 3.0 * y * y; },
                                  [](double y) { return 6.0 * y; },
                                  "cubic"};
  } else if (nl == "cubic_plus_linear") {
    inst.nl = issng::Nonlinearity{[](double y) { return y * y * y + y; },
                                  [](double y) { return 3.0 * y * y + 1.0; },
                                  [](double y) { return 6.0 * y; },
                                  "cubic_plus_linear"};
  } else {
    throw std::runtime_error("unrecognized nonlinearity: " + nl);
  }

  if (doc.contains("bounds")) {
    const json& b = doc.at("bounds");
    inst.bounds.lower = parse_bound(b.at(0), -std::numeric_limits<double>::infinity());
    inst.bounds.upper = parse_bound(b.at(1), std::numeric_limits<double>::infinity());
  }

  const std::size_t count = inst.grid.interior_count();
  const json& f = doc.at("f");
  if (f.is_string() && f.get<std::string>() == "zero") {
    inst.f = issng::GridFunction{inst.grid, std::vector<double>(count, 0.0)};
  } else {
    auto vals = f.get<std::vector<double>>();
    if (vals.size() != count) throw std::runtime_error("f has wrong length");
    inst.f = issng::GridFunction{inst.grid, std::move(vals)};
  }
  auto yd = doc.at("yd").get<std::vector<double>>();
  if (yd.size() != count) throw std::runtime_error("yd has wrong length");
  inst.yd = issng::GridFunction{inst.grid, std::move(yd)};
  return ec;
}

issng::ExampleCase build_case(const CommonOpts& o) {
  if (!o.file.empty()) return load_problem_file(o.file);
  if (o.example == "example1") {
    return issng::example1(o.n, o.alpha,
                           o.forcing == "printed"
                               ? issng::Example1Forcing::printed
                               : issng::Example1Forcing::corrected);
  }
  return issng::example2(o.n, o.alpha);
}

issng::State constant_state(const issng::Grid& g, double c) {
  const std::size_t count = g.interior_count();
  return issng::State{issng::GridFunction{g, std::vector<double>(count, c)},
                      issng::GridFunction{g, std::vector<double>(count, c)}};
}

json run_report_json(const CommonOpts& o, const issng::ExampleCase& ec,
                     const issng::SolveReport& rep) {
  json j;
  j["spec"] = {{"problem", ec.name},      {"n", ec.instance.grid.n},
               {"alpha", ec.instance.alpha}, {"variant", o.variant},
               {"init", o.init},          {"forcing", o.forcing}};
  j["config"] = issng::config_json(o.cfg);
  j["kernels"] = issng::kernels::isa_name(issng::kernels::active());
  j["converged"] = rep.converged;
  j["failure_reason"] = rep.failure_reason;
  j["records"] = issng::records_json(rep.iterations);
  json fin;
  if (!rep.iterations.empty()) {
    const issng::IterationRecord& last = rep.iterations.back();
    fin = {{"iterations", rep.iterations.size()},
           {"norm_ry", last.norm_ry},
           {"norm_rp", last.norm_rp},
           {"tau", last.tau}};
  } else {
    fin = {{"iterations", 0}};
  }
  j["final"] = fin;
  if (ec.exact_control.has_value() && rep.converged) {
    const issng::ControlError err =
        issng::control_error(rep.final_control, *ec.exact_control);
    j["error_metrics"] = {{"l2", err.l2},
                          {"linf", err.linf},
                          {"l2_weighted", err.l2_weighted}};
  } else {
    j["error_metrics"] = nullptr;
  }
  j["wall_time_seconds"] = rep.wall_time;
  j["peak_krylov_bytes"] = rep.peak_krylov_bytes;
  return j;
}

int do_run(const CommonOpts& o, const std::string& csv_path,
           const std::string& json_path) {
  double init_value = 0.0;
  if (!parse_init(o.init, &init_value)) {
    std::cerr << "error: --init must be 'zeros' or 'constant:<c>'\n";
    return 1;
  }
  issng::SolverConfig cfg = o.cfg;
  cfg.variant = (o.variant == "issng") ? issng::Variant::issng
                                       : issng::Variant::issng_l;

  issng::ExampleCase ec;
  try {
    ec = build_case(o);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }

  CommonOpts oo = o;
  oo.cfg = cfg;
  const issng::State z0 = constant_state(ec.instance.grid, init_value);
  const issng::SolveReport rep = issng::solve(ec.instance, z0, cfg);

  if (!csv_path.empty()) issng::write_csv(csv_path, rep.iterations);
  if (!json_path.empty()) {
    issng::write_text_file(json_path,
                           run_report_json(oo, ec, rep).dump(2) + "\n");
  }

  if (rep.converged) {
    const std::size_t iters = rep.iterations.size();
    std::cout << "converged: " << iters << " iterations";
    if (!rep.iterations.empty()) {
      std::cout << ", norm_ry=" << issng::format_double(rep.iterations.back().norm_ry)
                << ", norm_rp=" << issng::format_double(rep.iterations.back().norm_rp);
    }
    std::cout << ", wall_time=" << issng::format_double(rep.wall_time) << "s\n";
    return 0;
  }
  std::cout << "failed: " << rep.failure_reason << " after "
            << rep.iterations.size() << " iterations\n";
  return 2;
}

struct SweepJob {
  int n = 0;
  double c1 = 0.0;
};

int do_sweep(const CommonOpts& base, const std::vector<int>& grids,
             const std::vector<double>& c1s, const std::string& out_path) {
  if (grids.empty() || c1s.empty()) {
    std::cerr << "error: sweep needs nonempty --grids and --c1-list\n";
    return 1;
  }
  double init_value = 0.0;
  if (!parse_init(base.init, &init_value)) {
    std::cerr << "error: --init must be 'zeros' or 'constant:<c>'\n";
    return 1;
  }

  std::vector<SweepJob> jobs;
  for (int n : grids) {
    for (double c1 : c1s) jobs.push_back(SweepJob{n, c1});
  }

  std::size_t workers = std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  if (const char* env = std::getenv("ISSNG_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) workers = static_cast<std::size_t>(v);
  }
  workers = std::min(workers, jobs.size());

  struct Row {
    int n;
    double c1;
    issng::SolveReport rep;
    bool built = false;
    std::string error;
  };
  std::vector<Row> rows(jobs.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    while (true) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= jobs.size()) return;
      Row& row = rows[idx];
      row.n = jobs[idx].n;
      row.c1 = jobs[idx].c1;
      try {
        CommonOpts o = base;
        o.n = jobs[idx].n;
        issng::SolverConfig cfg = o.cfg;
        cfg.c1 = jobs[idx].c1;
        cfg.variant = (o.variant == "issng") ? issng::Variant::issng
                                             : issng::Variant::issng_l;
        const issng::ExampleCase ec = build_case(o);
        const issng::State z0 = constant_state(ec.instance.grid, init_value);
        row.rep = issng::solve(ec.instance, z0, cfg);
        row.built = true;
      } catch (const std::exception& ex) {
        row.error = ex.what();
      }
    }
  };

  std::vector<std::thread> pool;
  for (std::size_t w = 0; w + 1 < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  // Rows were generated in (grids, c1s) order; keep that deterministic order.
  std::ostringstream os;
  os << "h, c1, variant, norm_ry, norm_rp, iters, wall_time, "
        "peak_krylov_bytes, failure_reason\n";
  bool all_converged = true;
  for (const Row& row : rows) {
    const double h = 1.0 / static_cast<double>(row.n);
    double nry = 0.0, nrp = 0.0;
    std::size_t iters = 0;
    std::string reason;
    double wall = 0.0;
    std::size_t peak = 0;
    if (row.built) {
      iters = row.rep.iterations.size();
      if (!row.rep.iterations.empty()) {
        nry = row.rep.iterations.back().norm_ry;
        nrp = row.rep.iterations.back().norm_rp;
      }
      reason = row.rep.failure_reason;
      wall = row.rep.wall_time;
      peak = row.rep.peak_krylov_bytes;
      if (!row.rep.converged) all_converged = false;
    } else {
      reason = row.error;
      all_converged = false;
    }
    os << issng::format_double(h) << ", " << issng::format_double(row.c1)
       << ", " << base.variant << ", " << issng::format_double(nry) << ", "
       << issng::format_double(nrp) << ", " << iters << ", "
       << issng::format_double(wall) << ", " << peak << ", " << reason
       << "\n";
  }
  issng::write_text_file(out_path, os.str());
  std::cout << "wrote " << rows.size() << " rows to " << out_path << "\n";
  return all_converged ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matrix-free inexact Newton-GMRES solver with nonmonotone "
               "line search for discretized control problems"};
  app.require_subcommand(0, 1);

  CommonOpts run_opts;
  std::string csv_path, json_path;
  add_common_options(&app, &run_opts);
  app.add_option("--csv", csv_path, "Iteration-history CSV output path");
  app.add_option("--json", json_path, "Run-report JSON output path");

  CLI::App* sweep = app.add_subcommand("sweep", "Run a grid x c1 sweep");
  CommonOpts sweep_opts;
  std::vector<int> grids;
  std::vector<double> c1s;
  std::string sweep_out = "sweep.csv";
  add_common_options(sweep, &sweep_opts);
  sweep->add_option("--grids", grids, "Grid sizes (comma-separated)")
      ->delimiter(',');
  sweep->add_option("--c1-list", c1s,
                    "Sufficient-decrease coefficients (comma-separated)")
      ->delimiter(',');
  sweep->add_option("--out", sweep_out, "Sweep CSV output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (sweep->parsed()) {
      if (sweep_opts.example.empty() && sweep_opts.file.empty()) {
        std::cerr << "error: provide --example or --file\n" << sweep->help();
        return 1;
      }
      return do_sweep(sweep_opts, grids, c1s, sweep_out);
    }
    if (run_opts.example.empty() && run_opts.file.empty()) {
      std::cerr << "error: provide --example or --file\n" << app.help();
      return 1;
    }
    return do_run(run_opts, csv_path, json_path);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
}
