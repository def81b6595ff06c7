#include "swapsort/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "swapsort/parallel.hpp"

namespace swapsort {

double mean_swap_distance(int n, int r) {
  if (n < 2 || r < 1) throw std::invalid_argument("mean swap distance needs n >= 2 and r >= 1");
  const int range = std::min(r, n - 1);
  double weighted = 0, count = 0;
  for (int d = 1; d <= range; ++d) {
    weighted += static_cast<double>(d) * (n - d);
    count += n - d;
  }
  return weighted / count;
}

double t_est(int n, int r, double p) {
  if (!(p > 0.0 && p < 0.5)) throw std::invalid_argument("T_est needs 0 < p < 1/2");
  return static_cast<double>(n) * n / (mean_swap_distance(n, r) * (1 - 2 * p));
}

void ConvergenceConfig::validate() const {
  if (!(epsilon > 0)) throw std::invalid_argument("epsilon must be > 0");
  if (window < 0) throw std::invalid_argument("window must be >= 1 (or 0 for automatic)");
  if (sampling < 0) throw std::invalid_argument("sampling must be >= 1 (or 0 for automatic)");
  if (!(budget_multiplier > 0)) throw std::invalid_argument("budget multiplier must be > 0");
}

ResolvedConvergence resolve(const ConvergenceConfig& config, double t_est_value) {
  config.validate();
  ResolvedConvergence out;
  out.t_est = t_est_value;
  out.epsilon = config.epsilon;
  out.window = config.window > 0 ? config.window : static_cast<std::int64_t>(std::ceil(0.05 * t_est_value));
  out.sampling = config.sampling > 0 ? config.sampling : static_cast<std::int64_t>(std::ceil(t_est_value / 1000));
  out.window = std::max<std::int64_t>(out.window, 1);
  out.sampling = std::max<std::int64_t>(out.sampling, 1);
  out.min_t = 3 * out.window;
  out.budget = static_cast<std::int64_t>(std::ceil(config.budget_multiplier * t_est_value));
  return out;
}

namespace {

class SampleBuffer {
 public:
  SampleBuffer(const std::function<FitnessSample(std::int64_t)>& source, std::int64_t sampling)
      : source_(source), sampling_(sampling) {}

  std::int64_t sampling() const { return sampling_; }
  std::int64_t count() const { return static_cast<std::int64_t>(prefix_i_.size()) - 1; }

  void ensure(std::int64_t index) {
    while (count() <= index) {
      const auto s = source_(count() * sampling_);
      prefix_i_.push_back(prefix_i_.back() + s.inversions);
      prefix_w_.push_back(prefix_w_.back() + s.weighted);
      prefix_d_.push_back(prefix_d_.back() + s.dislocation);
    }
  }

  // Sample indices covering steps [start, start + length - 1]; at least one index.
  std::pair<std::int64_t, std::int64_t> span(std::int64_t start, std::int64_t length) const {
    const std::int64_t first = (start + sampling_ - 1) / sampling_;
    const std::int64_t last = std::max(first, (start + length - 1) / sampling_);
    return {first, last};
  }

  FitnessSample mean(std::pair<std::int64_t, std::int64_t> range) {
    ensure(range.second);
    const auto k = static_cast<double>(range.second - range.first + 1);
    const auto lo = static_cast<std::size_t>(range.first), hi = static_cast<std::size_t>(range.second + 1);
    return {(prefix_i_[hi] - prefix_i_[lo]) / k, (prefix_w_[hi] - prefix_w_[lo]) / k,
            (prefix_d_[hi] - prefix_d_[lo]) / k};
  }

 private:
  const std::function<FitnessSample(std::int64_t)>& source_;
  std::int64_t sampling_;
  std::vector<double> prefix_i_{0.0}, prefix_w_{0.0}, prefix_d_{0.0};
};

}  // namespace

ConvergenceReport detect_convergence_on(const std::function<FitnessSample(std::int64_t)>& sample,
                                        const ResolvedConvergence& config) {
  ConvergenceReport report;
  report.t_est = config.t_est;
  report.budget = config.budget;
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  report.stationary_inversions = report.stationary_weighted = report.stationary_dislocation = kNaN;

  SampleBuffer buffer(sample, config.sampling);
  const std::int64_t s = config.sampling;
  for (std::int64_t t = (config.min_t / s + 1) * s;; t += s) {
    const std::int64_t late_start = (3 * t + 1) / 2;
    const auto early_span = buffer.span(t, config.window);
    const auto late_span = buffer.span(late_start, config.window);
    if (late_span.second * s > config.budget) break;
    const auto early = buffer.mean(early_span);
    const auto late = buffer.mean(late_span);
    report.window_trace.push_back({t, early.inversions, late.inversions});
    if (early.inversions <= (1 + config.epsilon) * late.inversions) {
      report.t_conv = t;
      report.stationary_inversions = late.inversions;
      report.stationary_weighted = late.weighted;
      report.stationary_dislocation = late.dislocation;
      break;
    }
  }
  report.steps_simulated = std::max<std::int64_t>(buffer.count() - 1, 0) * s;
  return report;
}

ConvergenceReport detect_convergence(const ProcessParams& params, const ConvergenceConfig& config,
                                     std::uint64_t run) {
  params.validate();
  const auto resolved = resolve(config, t_est(params.n, params.r, params.p));
  const PairSampler sampler(params.n, params.r);
  auto state = initial_state(params.n, make_rng(params.seed, Stream::kDetect, run));
  const std::function<FitnessSample(std::int64_t)> source = [&](std::int64_t t) {
    while (state.t < t) step(state, sampler, params.p);
    const auto& f = state.fitness;
    return FitnessSample{static_cast<double>(f.inversions), static_cast<double>(f.weighted),
                         static_cast<double>(f.dislocation)};
  };
  return detect_convergence_on(source, resolved);
}

double MetricSummary::median() const {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  auto sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const auto mid = sorted.size() / 2;
  return sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
}

MetricSummary summarize(std::vector<double> values) {
  if (values.size() < 2) throw std::invalid_argument("summary statistics need at least two values");
  MetricSummary out;
  const auto k = static_cast<double>(values.size());
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / k;
  double ss = 0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.ci95 = 1.96 * std::sqrt(ss / (k - 1)) / std::sqrt(k);
  out.values = std::move(values);
  return out;
}

RunStatistics converged_phase_stats(const ProcessParams& params, std::int64_t t_conv, int runs,
                                    std::int64_t sampling) {
  params.validate();
  if (t_conv <= 0) throw std::invalid_argument("t_conv must be > 0");
  if (runs < 2) throw std::invalid_argument("converged-phase statistics need runs >= 2");
  const std::int64_t s =
      sampling > 0 ? sampling : std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(t_est(params.n, params.r, params.p) / 1000)));
  const std::int64_t begin = (3 * t_conv + 1) / 2;
  const std::int64_t end = 2 * t_conv;
  // First sampled step in the phase; if the phase holds no multiple of s, its start.
  std::int64_t first = (begin + s - 1) / s * s;
  const std::int64_t stride = first > end ? 1 : s;
  if (first > end) first = begin;

  const PairSampler sampler(params.n, params.r);
  std::vector<double> mean_i(runs), mean_w(runs), mean_d(runs), mean_max(runs);
  parallel_for(static_cast<std::size_t>(runs), [&](std::size_t run) {
    auto state = initial_state(params.n, make_rng(params.seed, Stream::kConvergedPhase, run));
    double si = 0, sw = 0, sd = 0, sm = 0;
    std::int64_t count = 0;
    for (std::int64_t t = first; t <= end; t += stride) {
      while (state.t < t) step(state, sampler, params.p);
      si += static_cast<double>(state.fitness.inversions);
      sw += static_cast<double>(state.fitness.weighted);
      sd += static_cast<double>(state.fitness.dislocation);
      sm += static_cast<double>(max_dislocation(state.perm));
      ++count;
    }
    const auto c = static_cast<double>(count);
    mean_i[run] = si / c;
    mean_w[run] = sw / c;
    mean_d[run] = sd / c;
    mean_max[run] = sm / c;
  });

  RunStatistics out;
  out.runs = runs;
  out.t_conv = t_conv;
  out.inversions = summarize(std::move(mean_i));
  out.weighted = summarize(std::move(mean_w));
  out.dislocation = summarize(std::move(mean_d));
  out.max_dislocation = summarize(std::move(mean_max));
  return out;
}

CellResult study_cell(const ProcessParams& params, const ConvergenceConfig& config, int runs) {
  params.validate();
  config.validate();
  if (runs < 2) throw std::invalid_argument("runs must be >= 2");
  CellResult cell;
  cell.params = params;
  cell.runs = runs;
  cell.t_est = t_est(params.n, params.r, params.p);
  cell.reports.resize(static_cast<std::size_t>(runs));
  parallel_for(static_cast<std::size_t>(runs),
               [&](std::size_t run) { cell.reports[run] = detect_convergence(params, config, run); });

  std::vector<double> t_conv;
  for (const auto& r : cell.reports) {
    if (r.converged()) t_conv.push_back(static_cast<double>(*r.t_conv));
    else ++cell.failed_runs;
  }
  if (t_conv.size() < 2) {
    cell.status = "budget exhausted: " + std::to_string(cell.failed_runs) + " of " + std::to_string(runs) +
                  " runs did not converge";
    return cell;
  }
  cell.t_conv = summarize(std::move(t_conv));
  const auto phase_t = static_cast<std::int64_t>(std::ceil(cell.t_conv->mean));
  cell.stats = converged_phase_stats(params, phase_t, runs, resolve(config, cell.t_est).sampling);
  cell.status = "ok";
  return cell;
}

std::vector<CellResult> sweep(const std::vector<ProcessParams>& grid, const ConvergenceConfig& config, int runs) {
  if (grid.empty()) throw std::invalid_argument("sweep grid is empty");
  std::vector<CellResult> out;
  out.reserve(grid.size());
  for (const auto& params : grid) {
    try {
      out.push_back(study_cell(params, config, runs));
    } catch (const std::exception& e) {
      CellResult failed;
      failed.params = params;
      failed.runs = runs;
      failed.status = std::string("error: ") + e.what();
      out.push_back(std::move(failed));
    }
  }
  return out;
}

bool BoundReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const BoundCheck& c) { return !c.applicable || c.pass; });
}

const BoundCheck* BoundReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

namespace {

BoundCheck make_check(std::string regime, std::string name, double measured, double bound, bool lower,
                      bool applicable = true) {
  BoundCheck c{std::move(regime), std::move(name), measured, bound, lower, applicable, false, 0};
  c.margin = lower ? measured - bound : bound - measured;
  c.pass = applicable && c.margin >= 0;
  return c;
}

}  // namespace

BoundReport verify_bounds(double inversions, double weighted, double dislocation, int n, int r, double p,
                          const BoundSlack& slack) {
  BoundReport report;
  const double nd = n;
  if (r == 1) {
    report.checks.push_back(make_check("adjacent", "I_lower", inversions, p * (nd - 1), true));
    report.checks.push_back(make_check("adjacent", "I_le_W", weighted, inversions, true));
    const bool upper_applies = p < 1.0 / 3.0;
    const double upper = upper_applies ? slack.upper_factor * 2 * p * nd / (1 - 3 * p)
                                       : std::numeric_limits<double>::infinity();
    report.checks.push_back(make_check("adjacent", "W_upper", weighted, upper, false, upper_applies));
  } else if (r >= n - 1) {
    report.checks.push_back(make_check("all_pairs", "D_lower", dislocation, p * (nd * nd - 1) / 6, true));
    report.checks.push_back(make_check("all_pairs", "I_lower", inversions, p * (nd * nd - 1) / 12, true));
    report.checks.push_back(make_check("all_pairs", "W_lower", weighted, p * nd * nd * nd / 648, true));
  } else {
    const double c = slack.range_constant;
    const double rd = r;
    report.checks.push_back(make_check("bounded_range", "I_lower", inversions, c * p * rd * nd, true));
    report.checks.push_back(make_check("bounded_range", "D_lower", dislocation, c * p * rd * nd, true));
    report.checks.push_back(make_check("bounded_range", "W_lower", weighted, c * p * rd * rd * nd, true));
  }
  return report;
}

BoundReport verify_bounds(const RunStatistics& stats, int n, int r, double p, const BoundSlack& slack) {
  return verify_bounds(stats.inversions.mean, stats.weighted.mean, stats.dislocation.mean, n, r, p, slack);
}

}  // namespace swapsort
