// Benchmark front end: generates seeded instances, runs the solvers, checks
// the convergence certificates, sweeps penalties, and renders summary tables.

#include "proxnag/certificates.hpp"
#include "proxnag/io.hpp"
#include "proxnag/problems.hpp"
#include "proxnag/solvers.hpp"
#include "proxnag/stochastic.hpp"
#include "proxnag/tuning.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

using namespace proxnag;
namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double mean_of(const std::vector<double>& xs) {
  double total = 0.0;
  for (double x : xs) total += x;
  return total / static_cast<double>(xs.size());
}

double std_of(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double mu = mean_of(xs);
  double total = 0.0;
  for (double x : xs) total += (x - mu) * (x - mu);
  return std::sqrt(total / static_cast<double>(xs.size() - 1));
}

void ensure_output_dir(const std::string& out, bool force) {
  if (fs::exists(out) && !fs::is_empty(out)) {
    if (!force)
      throw ConfigError("output directory '" + out +
                        "' exists; pass --force to overwrite");
    fs::remove_all(out);
  }
  fs::create_directories(out);
}

void echo_config(CLI::App* sub, const std::string& out) {
  std::ofstream cfg(out + "/config.txt");
  cfg << sub->config_to_str(true, false);
}

std::string seed_dir(const std::string& base, std::uint64_t seed) {
  return base + "/seed" + std::to_string(seed);
}

std::vector<std::string> list_seed_dirs(const std::string& base) {
  std::vector<std::string> dirs;
  if (!fs::is_directory(base))
    throw InputError("instance directory not found: " + base);
  for (const auto& entry : fs::directory_iterator(base))
    if (entry.is_directory() &&
        entry.path().filename().string().rfind("seed", 0) == 0)
      dirs.push_back(entry.path().string());
  std::sort(dirs.begin(), dirs.end());
  if (dirs.empty()) throw InputError("no seed directories under " + base);
  return dirs;
}

// Shared option bundle; each subcommand registers the flags it honors.
struct Options {
  std::string problem = "elastic-net";
  std::string variant = "easy";
  std::string solver = "prox-naggs";
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  std::string out = "runs/out";
  std::string instances;
  bool force = false;

  // generation
  long n = 0;  // 0 selects the per-problem default
  long d = 0;
  double cond = 1e3;
  double lambda1 = -1.0;
  double lambda2 = 0.1;
  double lambda_g = -1.0;
  long group_size = 10;
  long active = 8;
  long classes = 3;
  double separation = 2.0;

  // solving
  double mu_hat = 0.0;
  double alpha = 1.0;
  long max_iter = 20000;
  double gap_tol = 0.0;  // > 0 enables early stop on gap_v
  long certify_iters = 2000;
  double eta = 0.0;
  double sigma = 0.0;
  double tau_cp = 0.0;
  double theta_relax = 1.0;
  bool tune = false;
  long batch_size = 32;
  long epochs = 10;

  // certify / sweep
  double c_choice = -1.0;  // <= 0 selects the interval midpoint
  std::string sweep_param = "lambda1";
  std::vector<double> grid;
  std::vector<std::string> sweep_solvers{"prox-sgd", "stoch-prox-naggs"};
};

// ---------------------------------------------------------------------------
// summary rows
// ---------------------------------------------------------------------------

constexpr const char* kSummaryHeader =
    "method,seeds,final_obj_mean,final_obj_std,iters_mean,iters_std,"
    "not_reached,time_s_mean,time_s_std,active_groups_mean,sparsity_mean,"
    "test_acc_mean";

struct SummaryRow {
  std::string method;
  int seeds = 0;
  double final_obj_mean = 0.0, final_obj_std = 0.0;
  std::optional<double> iters_mean, iters_std;
  int not_reached = 0;
  double time_s_mean = 0.0, time_s_std = 0.0;
  std::optional<double> active_groups_mean;
  std::optional<double> sparsity_mean;
  std::optional<double> test_acc_mean;
};

std::string opt_field(const std::optional<double>& v) {
  return v ? fmt(*v) : std::string();
}

void write_summary_csv(const std::vector<SummaryRow>& rows,
                       const std::string& path) {
  std::ofstream out(path);
  out << kSummaryHeader << '\n';
  for (const SummaryRow& r : rows) {
    out << r.method << ',' << r.seeds << ',' << fmt(r.final_obj_mean) << ','
        << fmt(r.final_obj_std) << ',' << opt_field(r.iters_mean) << ','
        << opt_field(r.iters_std) << ',' << r.not_reached << ','
        << fmt(r.time_s_mean) << ',' << fmt(r.time_s_std) << ','
        << opt_field(r.active_groups_mean) << ',' << opt_field(r.sparsity_mean)
        << ',' << opt_field(r.test_acc_mean) << '\n';
  }
}

std::vector<SummaryRow> read_summary_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open summary: " + path);
  std::string line;
  if (!std::getline(in, line) || line != kSummaryHeader)
    throw ParseError("unexpected summary header in " + path);
  std::vector<SummaryRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    cells.resize(12);
    SummaryRow r;
    r.method = cells[0];
    r.seeds = std::stoi(cells[1]);
    r.final_obj_mean = std::stod(cells[2]);
    r.final_obj_std = std::stod(cells[3]);
    if (!cells[4].empty()) r.iters_mean = std::stod(cells[4]);
    if (!cells[5].empty()) r.iters_std = std::stod(cells[5]);
    r.not_reached = std::stoi(cells[6]);
    r.time_s_mean = std::stod(cells[7]);
    r.time_s_std = std::stod(cells[8]);
    if (!cells[9].empty()) r.active_groups_mean = std::stod(cells[9]);
    if (!cells[10].empty()) r.sparsity_mean = std::stod(cells[10]);
    if (!cells[11].empty()) r.test_acc_mean = std::stod(cells[11]);
    rows.push_back(std::move(r));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------

void cmd_gen(const Options& opt, CLI::App* sub) {
  ensure_output_dir(opt.out, opt.force);
  echo_config(sub, opt.out);

  for (std::uint64_t seed : opt.seeds) {
    const std::string dir = seed_dir(opt.out, seed);
    if (opt.problem == "elastic-net") {
      const long n = opt.n > 0 ? opt.n : 200;
      const long d = opt.d > 0 ? opt.d : 100;
      ElasticNetInstance inst = gen_elastic_net(
          n, d, opt.variant, opt.cond, opt.lambda1, opt.lambda2, seed);
      save_instance_dir(inst, compute_reference(inst.make_problem()), dir);
    } else if (opt.problem == "group-lasso") {
      const long n = opt.n > 0 ? opt.n : 400;
      const long d = opt.d > 0 ? opt.d : 200;
      GroupLassoInstance inst =
          gen_group_lasso(n, d, opt.active, opt.group_size, opt.lambda_g,
                          opt.lambda2, opt.variant, opt.cond, seed);
      save_instance_dir(inst, compute_reference(inst.make_problem()), dir);
    } else if (opt.problem == "softmax-l1" || opt.problem == "softmax-group") {
      const long n = opt.n > 0 ? opt.n : 1000;
      const long d = opt.d > 0 ? opt.d : 50;
      ClassificationInstance inst = gen_classification(
          n, d, static_cast<int>(opt.classes), opt.separation, seed);
      save_instance_dir(inst, dir);
      KeyValues meta = read_keyvalues(dir + "/meta.txt");
      meta["problem"] = opt.problem;
      meta["lambda1"] = fmt(opt.lambda1 >= 0.0 ? opt.lambda1 : 1e-4);
      meta["lambda_g"] = fmt(opt.lambda_g >= 0.0 ? opt.lambda_g : 1e-4);
      // softmax ridge defaults small; 0.1 suits the least-squares problems
      meta["lambda2"] = fmt(sub->count("--lambda2") ? opt.lambda2 : 1e-4);
      write_keyvalues(meta, dir + "/meta.txt");
    } else {
      throw ConfigError("unknown problem: " + opt.problem);
    }
    std::cout << "wrote " << dir << '\n';
  }
}

// ---------------------------------------------------------------------------
// solve (deterministic and stochastic)
// ---------------------------------------------------------------------------

bool is_stochastic_solver(const std::string& name) {
  return name == "prox-sgd" || name == "stoch-prox-naggs";
}

struct SoftmaxSetup {
  CompositeProblem problem;           // training split
  std::shared_ptr<SoftmaxLoss> full;  // all samples, for held-out accuracy
  SplitIndices split;
};

SoftmaxSetup build_softmax_problem(const std::string& dir) {
  ClassificationInstance inst = load_classification_dir(dir);
  const KeyValues meta = read_keyvalues(dir + "/meta.txt");
  const std::string problem = meta.at("problem");
  const double lambda2 = std::stod(meta.at("lambda2"));

  SoftmaxSetup setup;
  setup.split = split_indices(inst);
  Matrix X_train(static_cast<Index>(setup.split.train.size()), inst.X.cols());
  IntVector y_train(static_cast<Index>(setup.split.train.size()));
  for (size_t i = 0; i < setup.split.train.size(); ++i) {
    X_train.row(static_cast<Index>(i)) = inst.X.row(setup.split.train[i]);
    y_train[static_cast<Index>(i)] = inst.y[setup.split.train[i]];
  }
  auto train_loss =
      std::make_shared<SoftmaxLoss>(X_train, y_train, inst.classes, lambda2);

  std::shared_ptr<const Regularizer> reg;
  if (problem == "softmax-l1") {
    reg = std::make_shared<L1Penalty>(std::stod(meta.at("lambda1")));
  } else if (problem == "softmax-group") {
    reg = std::make_shared<GroupL2Penalty>(
        std::stod(meta.at("lambda_g")),
        GroupPartition::matrix_rows(inst.X.cols(), inst.classes));
  } else {
    throw ConfigError("instance at " + dir + " is not a softmax problem");
  }

  setup.full =
      std::make_shared<SoftmaxLoss>(inst.X, inst.y, inst.classes, lambda2);
  setup.problem = CompositeProblem(train_loss, reg);
  return setup;
}

EpochTrace run_stochastic_solver(const std::string& solver,
                                 const SoftmaxSetup& setup,
                                 const StochasticOptions& sopts,
                                 const Options& opt) {
  Vector x0 = Vector::Zero(setup.problem.dimension);
  if (solver == "prox-sgd") return prox_sgd_run(setup.problem, x0, sopts).epochs;
  ProxNAGGSConfig cfg;
  cfg.mu_hat = opt.mu_hat > 0.0 ? opt.mu_hat : setup.problem.f->smoothness();
  cfg.gamma0 = cfg.mu_hat;
  cfg.alpha = opt.alpha;
  return stochastic_prox_naggs_run(setup.problem, cfg, x0, sopts).epochs;
}

void solve_stochastic(const Options& opt, CLI::App* sub) {
  ensure_output_dir(opt.out, opt.force);
  echo_config(sub, opt.out);

  std::vector<double> finals, times, sparsities, accuracies;
  for (const std::string& dir : list_seed_dirs(opt.instances)) {
    SoftmaxSetup setup = build_softmax_problem(dir);
    const std::uint64_t seed =
        std::stoull(read_keyvalues(dir + "/meta.txt").at("seed"));

    StochasticOptions sopts;
    sopts.eta = opt.eta > 0.0 ? opt.eta : 0.5 / setup.problem.f->smoothness();
    sopts.batch_size = static_cast<int>(opt.batch_size);
    sopts.epochs = static_cast<int>(opt.epochs);
    sopts.seed = seed;
    auto full = setup.full;
    auto test_rows = setup.split.test;
    sopts.test_accuracy = [full, test_rows](const Vector& w) {
      return full->accuracy(w, test_rows);
    };

    EpochTrace epochs = run_stochastic_solver(opt.solver, setup, sopts, opt);

    const std::string out_dir = seed_dir(opt.out, seed);
    fs::create_directories(out_dir);
    write_epoch_csv(epochs, out_dir + "/epochs.csv");

    const EpochRow& last = epochs.back();
    finals.push_back(last.objective);
    times.push_back(last.elapsed_s);
    sparsities.push_back(last.sparsity);
    if (last.test_accuracy) accuracies.push_back(*last.test_accuracy);
  }

  SummaryRow row;
  row.method = opt.solver;
  row.seeds = static_cast<int>(finals.size());
  row.final_obj_mean = mean_of(finals);
  row.final_obj_std = std_of(finals);
  row.time_s_mean = mean_of(times);
  row.time_s_std = std_of(times);
  row.sparsity_mean = mean_of(sparsities);
  if (!accuracies.empty()) row.test_acc_mean = mean_of(accuracies);
  write_summary_csv({row}, opt.out + "/summary.csv");
  std::cout << "summary: " << opt.out << "/summary.csv\n";
}

void solve_deterministic(const Options& opt, CLI::App* sub) {
  ensure_output_dir(opt.out, opt.force);
  echo_config(sub, opt.out);
  const SolverKind kind = solver_from_name(opt.solver);

  std::vector<std::string> dirs = list_seed_dirs(opt.instances);

  DeterministicOptions dopts;
  dopts.max_iter = opt.max_iter;
  dopts.gap_tol = opt.gap_tol;
  dopts.mu_hat = opt.mu_hat;
  dopts.alpha = opt.alpha;
  dopts.eta = opt.eta;
  dopts.sigma = opt.sigma;
  dopts.tau_cp = opt.tau_cp;
  dopts.theta_relax = opt.theta_relax;

  double tuned_scale = 0.0;
  if (opt.tune && kind == SolverKind::ProxNAGGS) {
    std::vector<CompositeProblem> problems;
    for (const std::string& dir : dirs)
      problems.push_back(load_instance_dir(dir).problem);
    TunedProxNAGGS tuned = tune_prox_naggs(problems, 5000, 1e-6);
    tuned_scale = tuned.mu_hat_scale;
    dopts.alpha = tuned.alpha;
    std::cout << "tuned: mu_hat_scale=" << tuned.mu_hat_scale
              << " alpha=" << tuned.alpha
              << " mean_iters=" << tuned.mean_iterations << '\n';
  }

  std::vector<double> finals, iters, times, actives, sparsities;
  int not_reached = 0;
  for (const std::string& dir : dirs) {
    LoadedInstance inst = load_instance_dir(dir);
    if (tuned_scale > 0.0)
      dopts.mu_hat = tuned_scale * inst.problem.f->smoothness();

    SolverRun run = run_solver(kind, inst.problem,
                               Vector::Zero(inst.problem.dimension), dopts);

    const std::string out_dir =
        seed_dir(opt.out, std::stoull(inst.meta.at("seed")));
    fs::create_directories(out_dir);
    write_trace_csv(run.trace, out_dir + "/trace.csv");

    finals.push_back(composite_value(inst.problem, run.x).as_double());
    const auto crossing = first_gap_crossing(run.trace, 1e-6);
    if (crossing) {
      iters.push_back(static_cast<double>(*crossing));
    } else {
      iters.push_back(static_cast<double>(opt.max_iter));
      ++not_reached;
    }
    times.push_back(run.trace.empty() ? 0.0 : run.trace.back().elapsed_s);
    if (inst.meta.at("problem") == "group-lasso") {
      GroupPartition part = GroupPartition::contiguous(
          run.x.size(), std::stol(inst.meta.at("group_size")));
      actives.push_back(
          static_cast<double>(active_groups(run.structured, part).count));
    }
    sparsities.push_back(sparsity(run.structured));
  }

  SummaryRow row;
  row.method = opt.solver;
  row.seeds = static_cast<int>(finals.size());
  row.final_obj_mean = mean_of(finals);
  row.final_obj_std = std_of(finals);
  row.iters_mean = mean_of(iters);
  row.iters_std = std_of(iters);
  row.not_reached = not_reached;
  row.time_s_mean = mean_of(times);
  row.time_s_std = std_of(times);
  if (!actives.empty()) row.active_groups_mean = mean_of(actives);
  row.sparsity_mean = mean_of(sparsities);
  write_summary_csv({row}, opt.out + "/summary.csv");
  std::cout << "summary: " << opt.out << "/summary.csv\n";
}

void cmd_solve(const Options& opt, CLI::App* sub) {
  if (is_stochastic_solver(opt.solver))
    solve_stochastic(opt, sub);
  else
    solve_deterministic(opt, sub);
}

// ---------------------------------------------------------------------------
// certify
// ---------------------------------------------------------------------------

void cmd_certify(const Options& opt, CLI::App* sub) {
  ensure_output_dir(opt.out, opt.force);
  echo_config(sub, opt.out);

  bool all_passed = true;
  for (const std::string& dir : list_seed_dirs(opt.instances)) {
    LoadedInstance inst = load_instance_dir(dir);
    const CompositeProblem& p = inst.problem;
    const double L = p.f->smoothness();

    ProxNAGGSConfig cfg;
    cfg.mu_hat = L;  // boundary of the sufficient condition
    cfg.gamma0 = cfg.mu_hat;
    cfg.alpha = opt.alpha;
    cfg.max_iter = opt.certify_iters;
    cfg.record_iterates = true;
    ProxNAGGSRun run = prox_naggs_run(p, cfg, Vector::Zero(p.dimension));

    CertificateReport report;
    const double mu_f = p.f->strong_convexity();
    const bool strongly_convex = mu_f + p.mu_F > 0.0;
    report.params.a = cfg.a();
    report.params.mu_hat = cfg.mu_hat;
    report.params.L = L;
    report.params.mu_f = mu_f;
    report.params.mu_F = p.mu_F;

    Trace trace = run.trace;
    annotate_convex_energy(trace, cfg.mu_hat, cfg.a());
    std::vector<double> envelope;
    if (strongly_convex) {
      report.params =
          compute_params(cfg.a(), cfg.mu_hat, L, mu_f, p.mu_F,
                         opt.c_choice > 0.0 ? std::optional<double>(opt.c_choice)
                                            : std::nullopt);
      report.outside_theory_regime = !report.params.theory_regime;
      annotate_lyapunov(trace, report.params);
      report.contraction_violations = check_contraction(trace, report.params);
      report.mismatch_violations =
          check_mismatch_absorption(trace, cfg.mu_hat, L, cfg.a());
      envelope.reserve(trace.size());
      double env = *trace.front().lyap;
      for (size_t i = 0; i < trace.size(); ++i) {
        envelope.push_back(env);
        env *= report.params.theta;
      }
    }
    ConvexDescentReport descent = check_convex_descent(
        trace, cfg.mu_hat, cfg.a(), 1e-10, &p, &run.v_history);
    report.convex_descent_violations = descent.violations;
    report.best_rate_ok = descent.best_rate_ok && descent.sum_gap_ok;
    report.ergodic_rate_ok = descent.ergodic_rate_ok;
    for (const auto* list : {&report.contraction_violations,
                             &report.mismatch_violations,
                             &report.convex_descent_violations})
      for (const Violation& v : *list)
        report.max_slack = std::max(report.max_slack, v.slack);

    const std::string out_dir =
        seed_dir(opt.out, std::stoull(inst.meta.at("seed")));
    fs::create_directories(out_dir);
    write_trace_csv(trace, out_dir + "/trace.csv");
    write_certificate_report(report, out_dir + "/report.txt");

    // gap and envelope series for external plotting
    {
      std::ofstream series(out_dir + "/series.csv");
      series << "k,gap_x,gap_v,lyap,envelope\n";
      for (size_t i = 0; i < trace.size(); ++i) {
        series << trace[i].k << ',' << fmt(*trace[i].gap_x) << ','
               << fmt(*trace[i].gap_v) << ','
               << (trace[i].lyap ? fmt(*trace[i].lyap) : std::string()) << ','
               << (envelope.empty() ? std::string() : fmt(envelope[i])) << '\n';
      }
    }

    const auto burn_in = gap_coupling_burn_in(trace);
    KeyValues extras;
    extras["gap_coupling_burn_in"] =
        burn_in ? std::to_string(*burn_in) : "unreached";
    write_keyvalues(extras, out_dir + "/coupling.txt");

    const bool passed = report.passed();
    all_passed = all_passed && passed;
    std::cout << out_dir << ": " << (passed ? "pass" : "FAIL") << " (theta="
              << (strongly_convex ? fmt(report.params.theta) : "n/a")
              << ", burn_in="
              << (burn_in ? std::to_string(*burn_in) : "unreached") << ")\n";
  }
  if (!all_passed) throw ConfigError("certificate check failed");
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

void cmd_sweep(const Options& opt, CLI::App* sub) {
  if (opt.grid.empty()) throw ConfigError("sweep: --grid must be nonempty");
  if (opt.sweep_param != "lambda1" && opt.sweep_param != "eta")
    throw ConfigError("sweep: --param must be lambda1 or eta");
  for (const std::string& solver : opt.sweep_solvers)
    if (!is_stochastic_solver(solver))
      throw ConfigError("sweep: solver must be stochastic: " + solver);

  ensure_output_dir(opt.out, opt.force);
  echo_config(sub, opt.out);

  std::vector<std::string> dirs = list_seed_dirs(opt.instances);

  std::ofstream sweep(opt.out + "/sweep.csv");
  sweep << "param,value,method,objective_mean,data_fit_mean,reg_term_mean,"
           "test_acc_mean,sparsity_mean\n";

  for (double value : opt.grid) {
    for (const std::string& solver : opt.sweep_solvers) {
      std::vector<double> objs, fits, regs, accs, sps;
      for (const std::string& dir : dirs) {
        SoftmaxSetup setup = build_softmax_problem(dir);
        if (opt.sweep_param == "lambda1") {
          const KeyValues meta = read_keyvalues(dir + "/meta.txt");
          std::shared_ptr<const Regularizer> reg;
          if (meta.at("problem") == "softmax-group") {
            reg = std::make_shared<GroupL2Penalty>(
                value, GroupPartition::matrix_rows(setup.full->features(),
                                                   setup.full->classes()));
          } else {
            reg = std::make_shared<L1Penalty>(value);
          }
          setup.problem = CompositeProblem(setup.problem.f, reg);
        }

        StochasticOptions sopts;
        sopts.eta = opt.sweep_param == "eta"
                        ? value
                        : (opt.eta > 0.0 ? opt.eta
                                         : 0.5 / setup.problem.f->smoothness());
        sopts.batch_size = static_cast<int>(opt.batch_size);
        sopts.epochs = static_cast<int>(opt.epochs);
        sopts.seed = std::stoull(read_keyvalues(dir + "/meta.txt").at("seed"));
        auto full = setup.full;
        auto test_rows = setup.split.test;
        sopts.test_accuracy = [full, test_rows](const Vector& w) {
          return full->accuracy(w, test_rows);
        };

        EpochTrace epochs = run_stochastic_solver(solver, setup, sopts, opt);
        const EpochRow& last = epochs.back();
        objs.push_back(last.objective);
        fits.push_back(last.data_fit);
        regs.push_back(last.reg_term);
        sps.push_back(last.sparsity);
        if (last.test_accuracy) accs.push_back(*last.test_accuracy);
      }
      sweep << opt.sweep_param << ',' << fmt(value) << ',' << solver << ','
            << fmt(mean_of(objs)) << ',' << fmt(mean_of(fits)) << ','
            << fmt(mean_of(regs)) << ','
            << (accs.empty() ? std::string() : fmt(mean_of(accs))) << ','
            << fmt(mean_of(sps)) << '\n';
    }
  }
  std::cout << "sweep: " << opt.out << "/sweep.csv\n";
}

// ---------------------------------------------------------------------------
// table
// ---------------------------------------------------------------------------

std::string format_pm(double mean, double stddev, int seeds) {
  char buf[80];
  if (seeds < 2)
    std::snprintf(buf, sizeof(buf), "%.4f", mean);
  else
    std::snprintf(buf, sizeof(buf), "%.4f +/- %.4f", mean, stddev);
  return buf;
}

void cmd_table(const std::vector<std::string>& run_dirs) {
  if (run_dirs.empty()) throw ConfigError("table: no run directories given");
  std::vector<SummaryRow> rows;
  for (const std::string& dir : run_dirs) {
    auto part = read_summary_csv(dir + "/summary.csv");
    rows.insert(rows.end(), part.begin(), part.end());
  }
  for (size_t i = 1; i < rows.size(); ++i)
    if (rows[i].seeds != rows[0].seeds)
      std::cerr << "warning: inconsistent seed counts between rows\n";

  // lower is better for objective/iterations/time, higher for accuracy
  auto best_index = [&](auto getter, bool lower_better) {
    size_t best = rows.size();
    for (size_t i = 0; i < rows.size(); ++i) {
      const auto v = getter(rows[i]);
      if (!v) continue;
      if (best == rows.size() ||
          (lower_better ? *v < *getter(rows[best]) : *v > *getter(rows[best])))
        best = i;
    }
    return best;
  };
  const size_t best_obj = best_index(
      [](const SummaryRow& r) { return std::optional<double>(r.final_obj_mean); },
      true);
  const size_t best_iters =
      best_index([](const SummaryRow& r) { return r.iters_mean; }, true);
  const size_t best_time = best_index(
      [](const SummaryRow& r) { return std::optional<double>(r.time_s_mean); },
      true);
  const size_t best_acc =
      best_index([](const SummaryRow& r) { return r.test_acc_mean; }, false);

  std::printf("%-18s %-26s %-30s %-26s %-8s %-10s %-10s\n", "method",
              "final_obj", "iters_to_1e-6", "time_s", "groups", "sparsity",
              "test_acc");
  for (size_t i = 0; i < rows.size(); ++i) {
    const SummaryRow& r = rows[i];
    std::string obj = format_pm(r.final_obj_mean, r.final_obj_std, r.seeds);
    if (i == best_obj) obj += " *";
    std::string iters = "-";
    if (r.iters_mean) {
      iters = format_pm(*r.iters_mean, r.iters_std.value_or(0.0), r.seeds);
      if (r.not_reached > 0)
        iters += " (" + std::to_string(r.not_reached) + " not reached)";
      if (i == best_iters) iters += " *";
    }
    std::string time = format_pm(r.time_s_mean, r.time_s_std, r.seeds);
    if (i == best_time) time += " *";
    char groups[32] = "-";
    if (r.active_groups_mean)
      std::snprintf(groups, sizeof(groups), "%.1f", *r.active_groups_mean);
    char sp[32] = "-";
    if (r.sparsity_mean) std::snprintf(sp, sizeof(sp), "%.4f", *r.sparsity_mean);
    std::string acc = "-";
    if (r.test_acc_mean) {
      char a[32];
      std::snprintf(a, sizeof(a), "%.4f", *r.test_acc_mean);
      acc = a;
      if (i == best_acc) acc += " *";
    }
    std::printf("%-18s %-26s %-30s %-26s %-8s %-10s %-10s\n", r.method.c_str(),
                obj.c_str(), iters.c_str(), time.c_str(), groups, sp,
                acc.c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"composite optimization benchmark harness"};
  app.require_subcommand(1);

  Options opt;
  std::vector<std::string> table_dirs;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seeds", opt.seeds, "seed list")->delimiter(',');
    sub->add_option("--out", opt.out, "output directory");
    sub->add_flag("--force", opt.force, "overwrite existing output");
    sub->set_config("--config", "", "flat key=value config file");
  };

  CLI::App* gen = app.add_subcommand("gen", "generate seeded instances");
  gen->add_option("--problem", opt.problem,
                  "elastic-net|group-lasso|softmax-l1|softmax-group");
  gen->add_option("--variant", opt.variant, "easy|hard");
  gen->add_option("--n", opt.n, "samples (0 = default)");
  gen->add_option("--d", opt.d, "dimension (0 = default)");
  gen->add_option("--cond", opt.cond, "target condition number (hard)");
  gen->add_option("--lambda1", opt.lambda1, "l1 weight (<0 = default)");
  gen->add_option("--lambda2", opt.lambda2, "ridge weight");
  gen->add_option("--lambda-g", opt.lambda_g, "group weight (<0 = default)");
  gen->add_option("--group-size", opt.group_size, "group size");
  gen->add_option("--active-groups", opt.active, "planted active groups");
  gen->add_option("--classes", opt.classes, "classification classes");
  gen->add_option("--separation", opt.separation, "cluster separation");
  add_common(gen);

  CLI::App* solve = app.add_subcommand("solve", "run one solver per seed");
  solve->add_option("--instances", opt.instances, "gen output directory")
      ->required();
  solve->add_option(
      "--solver", opt.solver,
      "ista|fista|chambolle-pock|prox-naggs|prox-sgd|stoch-prox-naggs");
  solve->add_option("--mu-hat", opt.mu_hat, "prox-naggs curvature (0 = L)");
  solve->add_option("--alpha", opt.alpha, "prox-naggs step parameter");
  solve->add_option("--max-iter", opt.max_iter, "iteration cap");
  solve->add_option("--gap-tol", opt.gap_tol, "stopping gap");
  solve->add_option("--eta", opt.eta, "explicit step size (0 = 1/L)");
  solve->add_option("--sigma", opt.sigma, "chambolle-pock dual step");
  solve->add_option("--tau-cp", opt.tau_cp, "chambolle-pock primal step");
  solve->add_option("--theta-relax", opt.theta_relax,
                    "chambolle-pock relaxation");
  solve->add_flag("--tune", opt.tune, "grid-tune prox-naggs first");
  solve->add_option("--batch-size", opt.batch_size, "stochastic batch size");
  solve->add_option("--epochs", opt.epochs, "stochastic epochs");
  add_common(solve);

  CLI::App* certify =
      app.add_subcommand("certify", "check the convergence certificates");
  certify->add_option("--instances", opt.instances, "gen output directory")
      ->required();
  certify->add_option("--alpha", opt.alpha,
                      "step parameter (a = alpha/(1+alpha))");
  certify->add_option("--max-iter", opt.certify_iters, "iterations");
  certify->add_option("--c", opt.c_choice, "explicit c (<=0 = midpoint)");
  add_common(certify);

  CLI::App* sweep =
      app.add_subcommand("sweep", "grid sweep for stochastic runs");
  sweep->add_option("--instances", opt.instances, "gen output directory")
      ->required();
  sweep->add_option("--param", opt.sweep_param, "lambda1|eta");
  sweep->add_option("--grid", opt.grid, "grid values")->delimiter(',')->required();
  sweep->add_option("--solvers", opt.sweep_solvers, "stochastic solvers")->delimiter(',');
  sweep->add_option("--eta", opt.eta, "step size (0 = default)");
  sweep->add_option("--mu-hat", opt.mu_hat, "prox-naggs curvature (0 = L)");
  sweep->add_option("--alpha", opt.alpha, "prox-naggs step parameter");
  sweep->add_option("--batch-size", opt.batch_size, "batch size");
  sweep->add_option("--epochs", opt.epochs, "epochs");
  add_common(sweep);

  CLI::App* table = app.add_subcommand("table", "render summary tables");
  table->add_option("dirs", table_dirs, "solve output directories")->required();

  CLI11_PARSE(app, argc, argv);

  const std::string stage = app.get_subcommands().front()->get_name();
  try {
    if (gen->parsed()) cmd_gen(opt, gen);
    if (solve->parsed()) cmd_solve(opt, solve);
    if (certify->parsed()) cmd_certify(opt, certify);
    if (sweep->parsed()) cmd_sweep(opt, sweep);
    if (table->parsed()) cmd_table(table_dirs);
  } catch (const std::exception& e) {
    std::cerr << "error (" << stage << "): " << e.what() << '\n';
    return 1;
  }
  return 0;
}
