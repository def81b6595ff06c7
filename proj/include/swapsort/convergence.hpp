#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "swapsort/process.hpp"

namespace swapsort {

/// Mean selected swap distance: sum_{d<=r'} d(n-d) / sum_{d<=r'} (n-d), r' = min(r, n-1).
double mean_swap_distance(int n, int r);

/// Heuristic convergence time n^2 / (rbar (1 - 2p)). Throws for p outside (0, 1/2).
double t_est(int n, int r, double p);

struct ConvergenceConfig {
  double epsilon = 0.05;
  std::int64_t window = 0;    // 0: ceil(0.05 * T_est)
  std::int64_t sampling = 0;  // 0: ceil(T_est / 1000)
  double budget_multiplier = 50;

  void validate() const;
};

/// Config with the automatic values filled in for a concrete T_est.
struct ResolvedConvergence {
  double t_est = 0;
  double epsilon = 0.05;
  std::int64_t window = 1;
  std::int64_t sampling = 1;
  std::int64_t min_t = 3;  // checks happen at t > min_t
  std::int64_t budget = 0;
};

ResolvedConvergence resolve(const ConvergenceConfig& config, double t_est);

struct FitnessSample {
  double inversions = 0;
  double weighted = 0;
  double dislocation = 0;
};

struct WindowCheck {
  std::int64_t t = 0;
  double early = 0;  // mean I over the window starting at t
  double late = 0;   // mean I over the window starting at ceil(3t/2)
};

struct ConvergenceReport {
  double t_est = 0;
  std::optional<std::int64_t> t_conv;
  // Late-window means at detection; NaN when not converged.
  double stationary_inversions = 0;
  double stationary_weighted = 0;
  double stationary_dislocation = 0;
  std::vector<WindowCheck> window_trace;
  std::int64_t steps_simulated = 0;
  std::int64_t budget = 0;

  bool converged() const { return t_conv.has_value(); }
};

/// Sliding-window detector over any signal. `sample(t)` is called with strictly
/// increasing multiples of the sampling interval, starting at 0. Both windows
/// have length `window`; the first t (a multiple of the sampling interval,
/// t > min_t) with mean(t) <= (1 + eps) * mean(ceil(3t/2)) is reported.
ConvergenceReport detect_convergence_on(const std::function<FitnessSample(std::int64_t)>& sample,
                                        const ResolvedConvergence& config);

/// Runs the process from a uniform start (run `run` of the detection stream) until detection
/// or until the step budget is exhausted.
ConvergenceReport detect_convergence(const ProcessParams& params, const ConvergenceConfig& config,
                                     std::uint64_t run = 0);

struct MetricSummary {
  double mean = 0;
  double ci95 = 0;  // 1.96 * sd / sqrt(count)
  std::vector<double> values;

  double median() const;
};

/// Requires at least two values.
MetricSummary summarize(std::vector<double> values);

struct RunStatistics {
  int runs = 0;
  std::int64_t t_conv = 0;
  MetricSummary inversions;
  MetricSummary weighted;
  MetricSummary dislocation;
  MetricSummary max_dislocation;
};

/// Per run: mean of I, W, D and max dislocation over sampled steps in
/// [ceil(3/2 t_conv), 2 t_conv]. Runs use the converged-phase stream; runs >= 2.
RunStatistics converged_phase_stats(const ProcessParams& params, std::int64_t t_conv, int runs,
                                    std::int64_t sampling = 0);

/// Detection over `runs` runs followed by converged-phase statistics at the mean T_conv.
struct CellResult {
  ProcessParams params;
  int runs = 0;
  double t_est = 0;
  std::vector<ConvergenceReport> reports;
  int failed_runs = 0;
  std::optional<MetricSummary> t_conv;
  std::optional<RunStatistics> stats;
  std::string status;  // "ok", or the reason the cell produced no statistics
};

CellResult study_cell(const ProcessParams& params, const ConvergenceConfig& config, int runs);

/// One cell per grid entry; per-cell failures are recorded, never thrown.
std::vector<CellResult> sweep(const std::vector<ProcessParams>& grid, const ConvergenceConfig& config, int runs);

struct BoundCheck {
  std::string regime;
  std::string name;
  double measured = 0;
  double bound = 0;
  bool lower = true;  // measured >= bound, else measured <= bound
  bool applicable = true;
  bool pass = false;
  double margin = 0;  // positive when satisfied
};

struct BoundSlack {
  double upper_factor = 1.1;    // multiplies asymptotic upper bounds
  double range_constant = 1.0;  // hidden constant used for the bounded-range lower bounds
};

struct BoundReport {
  std::vector<BoundCheck> checks;

  bool all_pass() const;
  const BoundCheck* find(const std::string& name) const;
};

/// Evaluates the stationary-quality bounds that apply at (n, r, p):
/// adjacent swaps (r = 1), all pairs (r >= n-1) or bounded range otherwise.
BoundReport verify_bounds(double inversions, double weighted, double dislocation, int n, int r, double p,
                          const BoundSlack& slack = {});
BoundReport verify_bounds(const RunStatistics& stats, int n, int r, double p, const BoundSlack& slack = {});

}  // namespace swapsort
