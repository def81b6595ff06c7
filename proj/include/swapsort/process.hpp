#pragma once

#include <cstdint>
#include <vector>

#include "swapsort/permutation.hpp"
#include "swapsort/rng.hpp"

namespace swapsort {

/// Parameters of SwapSort with swap range r and comparison error probability p.
struct ProcessParams {
  int n = 2;
  int r = 1;
  double p = 0.1;
  std::uint64_t seed = 0;

  /// min(r, n-1); ranges of n-1 and n describe the same all-pairs process.
  int effective_range() const { return r < n - 1 ? r : n - 1; }
  bool all_pairs() const { return r >= n - 1; }

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Uniform sampler over the position pairs (i, j) with 1 <= j - i <= min(r, n-1).
class PairSampler {
 public:
  PairSampler(int n, int r);

  std::int64_t pair_count() const { return cumulative_.back(); }
  /// Maps an index in [0, pair_count()) to its pair; distances ascend with the index.
  std::pair<int, int> decode(std::int64_t index) const;
  std::pair<int, int> draw(Rng& rng) const;

  int n() const { return n_; }
  int range() const { return range_; }

 private:
  int n_;
  int range_;
  // cumulative_[d] = sum_{e=1}^{d} (n - e)
  std::vector<std::int64_t> cumulative_;
};

/// One draw of the process: positions i < j and the comparison error flag.
/// With the error flag set the pair ends in descending order, otherwise ascending.
struct SwapEvent {
  int i = 1;
  int j = 2;
  bool comparison_error = false;
};

struct ProcessFitness {
  Count inversions = 0;
  Count weighted = 0;
  Count dislocation = 0;

  friend bool operator==(const ProcessFitness&, const ProcessFitness&) = default;
};

ProcessFitness recompute_fitness(const Permutation& perm);

struct ProcessState {
  Permutation perm;
  std::int64_t t = 0;
  Rng rng;
  ProcessFitness fitness;

  ProcessState(Permutation start, Rng generator);
};

/// Noisy comparison a < b: the true answer flipped with probability p.
bool is_fitter(int a, int b, double p, Rng& rng);

/// Draws a pair and an error flag; consumes exactly one pair draw and one Bernoulli draw.
SwapEvent draw_event(const PairSampler& sampler, double p, Rng& rng);

/// Applies an event to the permutation, updating the cached fitness; returns true if swapped.
bool apply_event(ProcessState& state, const SwapEvent& event);

/// One iteration of SwapSort: pick a pair, swap it unless the noisy comparison says it is ordered.
SwapEvent step(ProcessState& state, const PairSampler& sampler, double p);

struct TrajectoryPoint {
  std::int64_t step = 0;
  Count inversions = 0;
  Count weighted = 0;
  Count dislocation = 0;

  friend bool operator==(const TrajectoryPoint&, const TrajectoryPoint&) = default;
};

struct SamplingPlan {
  std::int64_t every = 1;
};

using Trajectory = std::vector<TrajectoryPoint>;

/// Starts from a uniformly random permutation and records (t, I, W, D) at every
/// multiple of `plan.every` up to `steps`, including t = 0.
Trajectory run(const ProcessParams& params, std::int64_t steps, const SamplingPlan& plan,
               std::uint64_t run_index = 0);

/// Fresh state at a uniformly random permutation, drawn from the given generator.
ProcessState initial_state(int n, Rng rng);

/// Adjacent-swap step on a 0-1 sequence (the B_{p,n,k} process).
SwapEvent binary_step(BinarySequence& bits, double p, Rng& rng);

/// Applies one event to a 0-1 sequence; equal bits are left alone.
void apply_event(BinarySequence& bits, const SwapEvent& event);

/// One shared adjacent event applied to the permutation and all n-1 threshold
/// sequences. Requires thresholds[k-1] == T_k(perm); throws std::logic_error otherwise.
SwapEvent coupled_step(ProcessState& state, std::vector<BinarySequence>& thresholds, double p);

struct UpDown {
  int up = 0;
  int down = 0;
};

/// Number of ascents (0 then 1) and descents (1 then 0) between neighbours.
UpDown count_up_down(const BinarySequence& bits);

}  // namespace swapsort
