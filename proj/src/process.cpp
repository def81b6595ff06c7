#include "swapsort/process.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace swapsort {

void ProcessParams::validate() const {
  if (n < 2) throw std::invalid_argument("n must be >= 2, got " + std::to_string(n));
  if (r < 1 || r > n) {
    throw std::invalid_argument("r must lie in 1..n (n=" + std::to_string(n) + "), got " + std::to_string(r));
  }
  if (!(p > 0.0 && p < 0.5)) throw std::invalid_argument("p must satisfy 0 < p < 1/2, got " + std::to_string(p));
}

PairSampler::PairSampler(int n, int r) : n_(n), range_(std::min(r, n - 1)), cumulative_(1, 0) {
  if (n < 2 || r < 1) throw std::invalid_argument("pair sampler needs n >= 2 and r >= 1");
  for (int d = 1; d <= range_; ++d) cumulative_.push_back(cumulative_.back() + (n - d));
}

std::pair<int, int> PairSampler::decode(std::int64_t index) const {
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), index);
  const auto distance = static_cast<int>(it - cumulative_.begin());
  const auto i = static_cast<int>(index - cumulative_[distance - 1]) + 1;
  return {i, i + distance};
}

std::pair<int, int> PairSampler::draw(Rng& rng) const {
  const auto index = static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(pair_count())));
  if (range_ == 1) return {static_cast<int>(index) + 1, static_cast<int>(index) + 2};
  return decode(index);
}

ProcessFitness recompute_fitness(const Permutation& perm) {
  return {inversions(perm), weighted_inversions(perm), total_dislocation(perm)};
}

ProcessState::ProcessState(Permutation start, Rng generator)
    : perm(std::move(start)), rng(std::move(generator)), fitness(recompute_fitness(perm)) {}

bool is_fitter(int a, int b, double p, Rng& rng) { return (a < b) != bernoulli(rng, p); }

SwapEvent draw_event(const PairSampler& sampler, double p, Rng& rng) {
  const auto [i, j] = sampler.draw(rng);
  return {i, j, bernoulli(rng, p)};
}

bool apply_event(ProcessState& state, const SwapEvent& event) {
  ++state.t;
  const int i = event.i, j = event.j;
  const int a = state.perm.at(i), b = state.perm.at(j);
  // IsFitter semantics: keep the pair iff the noisy comparison reports a < b.
  const bool fitter = (a < b) != event.comparison_error;
  if (fitter) return false;

  const int lo = std::min(a, b), hi = std::max(a, b);
  Count between = 0;
  for (int k = i + 1; k < j; ++k) {
    const int v = state.perm.at(k);
    between += (v > lo && v < hi);
  }
  const Count sign = a < b ? 1 : -1;
  auto& f = state.fitness;
  f.inversions += sign * (1 + 2 * between);
  f.weighted += static_cast<Count>(j - i) * (b - a);
  f.dislocation += std::abs(a - j) + std::abs(b - i) - std::abs(a - i) - std::abs(b - j);
  state.perm.swap_positions(i, j);
  return true;
}

SwapEvent step(ProcessState& state, const PairSampler& sampler, double p) {
  const auto [i, j] = sampler.draw(state.rng);
  const int a = state.perm.at(i), b = state.perm.at(j);
  const bool fitter = is_fitter(a, b, p, state.rng);
  // Recover the error draw from the comparison outcome so the event is replayable.
  const SwapEvent event{i, j, fitter != (a < b)};
  apply_event(state, event);
  return event;
}

ProcessState initial_state(int n, Rng rng) {
  auto perm = random_permutation(n, rng);
  return ProcessState(std::move(perm), std::move(rng));
}

Trajectory run(const ProcessParams& params, std::int64_t steps, const SamplingPlan& plan,
               std::uint64_t run_index) {
  params.validate();
  if (steps < 0) throw std::invalid_argument("steps must be >= 0");
  if (plan.every < 1) throw std::invalid_argument("sampling interval must be >= 1");
  const PairSampler sampler(params.n, params.r);
  auto state = initial_state(params.n, make_rng(params.seed, Stream::kSimulate, run_index));

  Trajectory out;
  out.reserve(static_cast<std::size_t>(steps / plan.every + 1));
  auto record = [&] {
    out.push_back({state.t, state.fitness.inversions, state.fitness.weighted, state.fitness.dislocation});
  };
  record();
  while (state.t < steps) {
    step(state, sampler, params.p);
    if (state.t % plan.every == 0) record();
  }
  return out;
}

void apply_event(BinarySequence& bits, const SwapEvent& event) {
  const auto a = bits.at(event.i), b = bits.at(event.j);
  if (a == b) return;
  const bool descending = a > b;
  if (descending != event.comparison_error) bits.swap_positions(event.i, event.j);
}

SwapEvent binary_step(BinarySequence& bits, double p, Rng& rng) {
  if (bits.size() < 2) throw std::invalid_argument("binary_step needs at least two positions");
  const auto i = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(bits.size() - 1))) + 1;
  const SwapEvent event{i, i + 1, bernoulli(rng, p)};
  apply_event(bits, event);
  return event;
}

SwapEvent coupled_step(ProcessState& state, std::vector<BinarySequence>& thresholds, double p) {
  const int n = state.perm.size();
  if (static_cast<int>(thresholds.size()) != n - 1) {
    throw std::logic_error("coupling needs n-1 = " + std::to_string(n - 1) + " threshold sequences");
  }
  for (int k = 1; k < n; ++k) {
    const auto& seq = thresholds[k - 1];
    if (seq.size() != n || seq.zeros() != k) throw std::logic_error("threshold sequence " + std::to_string(k) + " has wrong shape");
    for (int i = 1; i <= n; ++i) {
      if (seq.at(i) != (state.perm.at(i) > k ? 1 : 0)) {
        throw std::logic_error("threshold sequence " + std::to_string(k) + " does not match the permutation");
      }
    }
  }
  const auto i = static_cast<int>(uniform_below(state.rng, static_cast<std::uint64_t>(n - 1))) + 1;
  const SwapEvent event{i, i + 1, bernoulli(state.rng, p)};
  apply_event(state, event);
  for (auto& seq : thresholds) apply_event(seq, event);
  return event;
}

UpDown count_up_down(const BinarySequence& bits) {
  UpDown out;
  for (int i = 1; i < bits.size(); ++i) {
    out.up += bits.at(i) < bits.at(i + 1);
    out.down += bits.at(i) > bits.at(i + 1);
  }
  return out;
}

}  // namespace swapsort
