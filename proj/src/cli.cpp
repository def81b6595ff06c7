#include "swapsort/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "swapsort/exact_markov.hpp"

namespace swapsort {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OperationalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  int n = 16;
  int r = 1;
  double p = 0.1;
  int runs = 1;
  std::uint64_t seed = 1;
  std::int64_t steps = -1;
  std::int64_t sampling = 0;
  std::int64_t window = 0;
  double epsilon = 0.05;
  double budget = 50;
  int binary_zeros = 0;
  std::string out = "-";
  std::string format = "csv";
  std::string grid;
  std::string from;
};

void check_params(const Options& o, int max_n = 1 << 22) {
  if (o.n < 2) throw UsageError("--n must be >= 2 (got " + std::to_string(o.n) + ")");
  if (o.n > max_n) throw UsageError("--n must be <= " + std::to_string(max_n) + " (got " + std::to_string(o.n) + ")");
  if (o.r < 1 || o.r > o.n) throw UsageError("--r must satisfy 1 <= r <= n (got " + std::to_string(o.r) + ")");
  if (!(o.p > 0 && o.p < 0.5)) throw UsageError("--p must satisfy 0 < p < 1/2 (got " + format_double(o.p) + ")");
}

void check_study(const Options& o) {
  if (o.runs < 2) throw UsageError("--runs must be >= 2 (got " + std::to_string(o.runs) + ")");
  if (!(o.epsilon > 0)) throw UsageError("--epsilon must be > 0");
  if (!(o.budget > 0)) throw UsageError("--budget must be > 0");
  if (o.window < 0) throw UsageError("--window must be >= 1");
  if (o.sampling < 0) throw UsageError("--sampling must be >= 1");
}

ProcessParams params_of(const Options& o) { return {o.n, o.r, o.p, o.seed}; }

ConvergenceConfig config_of(const Options& o) { return {o.epsilon, o.window, o.sampling, o.budget}; }

Format format_of(const Options& o) {
  try {
    return parse_format(o.format);
  } catch (const std::invalid_argument&) {
    throw UsageError("--format must be csv or json (got " + o.format + ")");
  }
}

std::string render(const Table& table, Format format) {
  std::ostringstream os;
  write_table(os, table, format);
  return os.str();
}

// Output is rendered fully before any file is opened, so a failing run leaves no partial file.
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw OperationalError("cannot open output file " + path);
  file << text;
  if (!file.flush()) throw OperationalError("failed writing output file " + path);
}

void emit_with_summary(const Options& o, const Table& main, const Table& summary, std::ostream& out) {
  const auto format = format_of(o);
  if (o.out == "-") {
    out << render(main, format) << '\n' << render(summary, format);
    return;
  }
  const auto main_text = render(main, format), summary_text = render(summary, format);
  emit(o.out, main_text, out);
  emit(summary_path(o.out, format), summary_text, out);
}

std::string join_state(const Sequence& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? " " : "") + std::to_string(s[i]);
  return out;
}

Cell optional_double(bool present, double v) { return present ? Cell{v} : Cell{std::monostate{}}; }

int cmd_simulate(const Options& o, std::ostream& out) {
  check_params(o);
  if (o.runs < 1) throw UsageError("--runs must be >= 1");
  if (o.sampling < 0) throw UsageError("--sampling must be >= 1");
  const double estimate = t_est(o.n, o.r, o.p);
  const std::int64_t steps = o.steps >= 0 ? o.steps : static_cast<std::int64_t>(std::ceil(2 * estimate));
  const std::int64_t every =
      o.sampling > 0 ? o.sampling : std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(estimate / 1000)));
  std::vector<Trajectory> runs(static_cast<std::size_t>(o.runs));
  for (int k = 0; k < o.runs; ++k) runs[k] = run(params_of(o), steps, {every}, static_cast<std::uint64_t>(k));
  emit(o.out, render(trajectory_table(runs), format_of(o)), out);
  return kExitOk;
}

int cmd_exact(const Options& o, std::ostream& out) {
  if (o.n > kMaxPermutationChainSize && o.binary_zeros == 0) {
    throw UsageError("--n must be <= " + std::to_string(kMaxPermutationChainSize) +
                     " for exact analysis (state-space cap), got " + std::to_string(o.n));
  }
  if (o.binary_zeros != 0) {
    check_params(o, kMaxBinaryChainSize);
    if (o.binary_zeros < 1 || o.binary_zeros >= o.n) throw UsageError("--zeros must satisfy 0 < zeros < n");
    if (o.r != 1) throw UsageError("--r must be 1 for the 0-1 chain");
  } else {
    check_params(o, kMaxPermutationChainSize);
  }
  const auto chain = o.binary_zeros ? build_binary_chain(o.n, o.binary_zeros, o.p) : build_chain(o.n, o.r, o.p);
  const auto solved = stationary(chain);
  const bool adjacent = chain.r == 1 || chain.n == 2;
  std::optional<StationaryResult<double>> closed;
  if (adjacent) closed = closed_form_stationary(chain);

  Table states;
  states.columns = {"state", "q", "q_closed_form", "I", "W", "D"};
  for (std::ptrdiff_t s = 0; s < chain.size(); ++s) {
    const auto& st = chain.unrank(s);
    Cell d = std::monostate{};
    if (chain.permutations) d = total_dislocation(Permutation(st));
    states.add_row({join_state(st), solved.q(s), optional_double(adjacent, adjacent ? closed->q(s) : 0.0),
                    sequence_inversions(st), sequence_weighted_inversions(st), d});
  }
  Table summary;
  summary.columns = {"n", "r", "p", "zeros", "states", "E_I", "E_W", "E_D",
                     "residual", "detailed_balance_violation", "closed_form_max_dev"};
  summary.add_row({std::int64_t{o.n}, std::int64_t{o.r}, o.p,
                   o.binary_zeros ? Cell{std::int64_t{o.binary_zeros}} : Cell{std::monostate{}},
                   static_cast<std::int64_t>(chain.size()), solved.expected_inversions, solved.expected_weighted,
                   optional_double(solved.expected_dislocation.has_value(), solved.expected_dislocation.value_or(0)),
                   solved.residual, detailed_balance_violation(chain, solved.q),
                   optional_double(adjacent, adjacent ? (solved.q - closed->q).cwiseAbs().maxCoeff() : 0.0)});
  emit_with_summary(o, states, summary, out);
  return kExitOk;
}

int cmd_converge(const Options& o, std::ostream& out) {
  check_params(o);
  check_study(o);
  const auto cell = study_cell(params_of(o), config_of(o), o.runs);
  emit_with_summary(o, convergence_table(cell), summary_table({cell}), out);
  return kExitOk;
}

GridConfig load_grid(const Options& o) {
  if (o.grid.empty()) throw UsageError("--grid is required for sweep");
  std::ifstream in(o.grid);
  if (!in) throw OperationalError("cannot read grid file " + o.grid);
  try {
    return parse_grid(in);
  } catch (const std::exception& e) {
    throw UsageError("--grid " + o.grid + ": " + e.what());
  }
}

int cmd_sweep(const Options& o, const CLI::App& sub, std::ostream& out) {
  auto grid = load_grid(o);
  int runs = grid.runs;
  auto config = grid.config;
  if (sub.count("--runs")) runs = o.runs;
  if (sub.count("--epsilon")) config.epsilon = o.epsilon;
  if (sub.count("--budget")) config.budget_multiplier = o.budget;
  for (auto& cell : grid.cells) {
    if (sub.count("--seed")) cell.seed = o.seed;
    Options check = o;
    check.n = cell.n;
    check.r = cell.r;
    check.p = cell.p;
    check_params(check);
  }
  Options study = o;
  study.runs = runs;
  study.epsilon = config.epsilon;
  study.budget = config.budget_multiplier;
  check_study(study);
  const auto cells = sweep(grid.cells, config, runs);
  emit(o.out, render(summary_table(cells), format_of(o)), out);
  return kExitOk;
}

Format format_for_path(const std::string& path, Format fallback) {
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) return Format::kJson;
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0) return Format::kCsv;
  return fallback;
}

int cmd_verify(const Options& o, std::ostream& out) {
  std::vector<std::pair<ProcessParams, BoundReport>> reports;
  if (!o.from.empty()) {
    std::ifstream in(o.from, std::ios::binary);
    if (!in) throw OperationalError("cannot read summary file " + o.from);
    Table summary;
    try {
      summary = read_table(in, format_for_path(o.from, format_of(o)));
    } catch (const std::exception& e) {
      throw UsageError("--from " + o.from + ": " + e.what());
    }
    for (std::size_t row = 0; row < summary.rows.size(); ++row) {
      ProcessParams params{static_cast<int>(summary.number(row, "n")), static_cast<int>(summary.number(row, "r")),
                           summary.number(row, "p"), o.seed};
      const double i = summary.number(row, "I_mean"), w = summary.number(row, "W_mean"),
                   d = summary.number(row, "D_mean");
      if (std::isnan(i)) continue;  // cell without statistics
      reports.emplace_back(params, verify_bounds(i, w, d, params.n, params.r, params.p));
    }
  } else {
    check_params(o);
    check_study(o);
    const auto cell = study_cell(params_of(o), config_of(o), o.runs);
    if (!cell.stats) throw OperationalError("no converged-phase statistics: " + cell.status);
    reports.emplace_back(params_of(o), verify_bounds(*cell.stats, o.n, o.r, o.p));
  }
  emit(o.out, render(bound_table(reports), format_of(o)), out);
  return kExitOk;
}

}  // namespace

std::string summary_path(const std::string& out, Format format) {
  const auto slash = out.find_last_of('/');
  const auto dot = out.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return out + ".summary." + format_extension(format);
  }
  return out.substr(0, dot) + ".summary" + out.substr(dot);
}

Table trajectory_table(const std::vector<Trajectory>& runs) {
  Table t;
  t.columns = {"run", "step", "I", "W", "D"};
  for (std::size_t k = 0; k < runs.size(); ++k)
    for (const auto& pt : runs[k])
      t.add_row({static_cast<std::int64_t>(k), pt.step, pt.inversions, pt.weighted, pt.dislocation});
  return t;
}

Table summary_table(const std::vector<CellResult>& cells) {
  Table t;
  t.columns = {"n",       "r",      "p",      "runs",   "t_est",  "t_conv_mean", "t_conv_ci95", "I_mean",
               "I_ci95",  "W_mean", "W_ci95", "D_mean", "D_ci95", "failed_runs", "status"};
  const Cell none = std::monostate{};
  for (const auto& c : cells) {
    std::vector<Cell> row{std::int64_t{c.params.n}, std::int64_t{c.params.r}, c.params.p, std::int64_t{c.runs}};
    row.push_back(c.t_est > 0 ? Cell{c.t_est} : none);
    row.push_back(c.t_conv ? Cell{c.t_conv->mean} : none);
    row.push_back(c.t_conv ? Cell{c.t_conv->ci95} : none);
    for (const MetricSummary* m : {c.stats ? &c.stats->inversions : nullptr, c.stats ? &c.stats->weighted : nullptr,
                                   c.stats ? &c.stats->dislocation : nullptr}) {
      row.push_back(m ? Cell{m->mean} : none);
      row.push_back(m ? Cell{m->ci95} : none);
    }
    row.push_back(std::int64_t{c.failed_runs});
    row.push_back(c.status);
    t.add_row(std::move(row));
  }
  return t;
}

Table convergence_table(const CellResult& cell) {
  Table t;
  t.columns = {"run", "t_est", "t_conv", "converged", "I_est", "W_est", "D_est", "steps_simulated"};
  const Cell none = std::monostate{};
  for (std::size_t k = 0; k < cell.reports.size(); ++k) {
    const auto& r = cell.reports[k];
    const bool ok = r.converged();
    t.add_row({static_cast<std::int64_t>(k), r.t_est, ok ? Cell{*r.t_conv} : none, std::int64_t{ok ? 1 : 0},
               ok ? Cell{r.stationary_inversions} : none, ok ? Cell{r.stationary_weighted} : none,
               ok ? Cell{r.stationary_dislocation} : none, r.steps_simulated});
  }
  return t;
}

Table bound_table(const std::vector<std::pair<ProcessParams, BoundReport>>& reports) {
  Table t;
  t.columns = {"n", "r", "p", "regime", "bound", "kind", "measured", "limit", "applicable", "pass", "margin"};
  const Cell none = std::monostate{};
  for (const auto& [params, report] : reports) {
    for (const auto& c : report.checks) {
      t.add_row({std::int64_t{params.n}, std::int64_t{params.r}, params.p, c.regime, c.name,
                 std::string(c.lower ? "lower" : "upper"), c.measured, c.applicable ? Cell{c.bound} : none,
                 std::int64_t{c.applicable ? 1 : 0}, std::int64_t{c.pass ? 1 : 0},
                 c.applicable ? Cell{c.margin} : none});
    }
  }
  return t;
}

GridConfig parse_grid(std::istream& in) {
  const auto doc = nlohmann::json::parse(in);
  GridConfig grid;
  if (doc.contains("runs")) grid.runs = doc.at("runs").get<int>();
  if (doc.contains("seed")) grid.seed = doc.at("seed").get<std::uint64_t>();
  if (doc.contains("epsilon")) grid.config.epsilon = doc.at("epsilon").get<double>();
  if (doc.contains("budget")) grid.config.budget_multiplier = doc.at("budget").get<double>();
  const auto ns = doc.at("n").get<std::vector<int>>();
  const auto ps = doc.at("p").get<std::vector<double>>();
  const auto& rs = doc.at("r");
  if (ns.empty() || ps.empty() || !rs.is_array() || rs.empty()) throw std::invalid_argument("n, r and p must be non-empty arrays");
  for (int n : ns) {
    for (const auto& r : rs) {
      int range = 0;
      if (r.is_string()) {
        if (r.get<std::string>() != "n") throw std::invalid_argument("r entries must be integers or \"n\"");
        range = n;
      } else {
        range = r.get<int>();
      }
      // Ranges beyond n are skipped so mixed n/r grids stay rectangular where they can.
      if (range > n) continue;
      for (double p : ps) grid.cells.push_back({n, range, p, grid.seed});
    }
  }
  if (grid.cells.empty()) throw std::invalid_argument("grid produced no valid cells");
  return grid;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulate and analyse sorting by random swaps with noisy comparisons"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--n", o.n, "Number of elements");
    sub->add_option("--r", o.r, "Swap range (positions at distance <= r)");
    sub->add_option("--p", o.p, "Comparison error probability, 0 < p < 1/2");
    sub->add_option("--seed", o.seed, "Seed for every random stream");
    sub->add_option("--out", o.out, "Output path, - for stdout");
    sub->add_option("--format", o.format, "csv or json");
  };
  auto add_study = [&](CLI::App* sub) {
    sub->add_option("--runs", o.runs, "Independent runs");
    sub->add_option("--epsilon", o.epsilon, "Relative convergence tolerance");
    sub->add_option("--budget", o.budget, "Step budget as a multiple of T_est");
    sub->add_option("--window", o.window, "Window length in steps (default ceil(0.05 T_est))");
    sub->add_option("--sampling", o.sampling, "Sampling interval in steps (default ceil(T_est/1000))");
  };

  auto* simulate = app.add_subcommand("simulate", "Write sampled (run, step, I, W, D) trajectories");
  add_common(simulate);
  simulate->add_option("--runs", o.runs, "Independent runs");
  simulate->add_option("--steps", o.steps, "Steps per run (default ceil(2 T_est))");
  simulate->add_option("--sampling", o.sampling, "Record every s steps (default ceil(T_est/1000))");

  auto* exact = app.add_subcommand("exact", "Exact stationary analysis for small n");
  add_common(exact);
  exact->add_option("--zeros", o.binary_zeros, "Analyse the 0-1 chain with this many zeros instead");

  auto* converge = app.add_subcommand("converge", "Convergence detection and converged-phase statistics");
  add_common(converge);
  add_study(converge);

  auto* sweep_cmd = app.add_subcommand("sweep", "Run converge over a grid of (n, r, p)");
  add_common(sweep_cmd);
  add_study(sweep_cmd);
  sweep_cmd->add_option("--grid", o.grid, "Grid document (JSON)")->required();

  auto* verify = app.add_subcommand("verify", "Check stationary-quality bounds");
  add_common(verify);
  add_study(verify);
  verify->add_option("--from", o.from, "Verify rows of an existing summary table instead of running");

  // Study commands default to the full 300-run mode; simulate to a single run.
  converge->preparse_callback([&](std::size_t) { o.runs = 300; });
  sweep_cmd->preparse_callback([&](std::size_t) { o.runs = 300; });
  verify->preparse_callback([&](std::size_t) { o.runs = 300; });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*simulate) return cmd_simulate(o, out);
    if (*exact) return cmd_exact(o, out);
    if (*converge) return cmd_converge(o, out);
    if (*sweep_cmd) return cmd_sweep(o, *sweep_cmd, out);
    if (*verify) return cmd_verify(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitOperational;
  }
  return kExitUsage;
}

}  // namespace swapsort
