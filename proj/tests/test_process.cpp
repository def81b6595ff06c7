#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "oracles.hpp"
#include "swapsort/process.hpp"

using namespace swapsort;

namespace {

oracle::Line line_of(const Permutation& perm) {
  auto s = perm.one_line();
  return {s.begin(), s.end()};
}

// Empirical one-step law from a fixed state, checked against exact enumeration within 4 sigma.
void expect_one_step_law(const oracle::Line& start, int r, double p, int trials, std::uint64_t seed) {
  const int n = static_cast<int>(start.size());
  const PairSampler sampler(n, r);
  ProcessState state(Permutation(start), make_rng(seed, Stream::kTest));
  std::map<oracle::Line, int> counts;
  for (int k = 0; k < trials; ++k) {
    state.perm = Permutation(start);
    step(state, sampler, p);
    ++counts[line_of(state.perm)];
  }
  const auto law = oracle::one_step_law(start, r, p);
  for (const auto& [next, c] : counts) ASSERT_TRUE(law.count(next)) << "unreachable state observed";
  for (const auto& [next, prob] : law) {
    const double sigma = std::sqrt(trials * prob * (1 - prob));
    EXPECT_NEAR(counts[next], trials * prob, 4 * sigma + 1e-9);
  }
}

}  // namespace

TEST(Params, Validation) {
  EXPECT_NO_THROW((ProcessParams{8, 1, 0.1, 0}.validate()));
  EXPECT_THROW((ProcessParams{1, 1, 0.1, 0}.validate()), std::invalid_argument);
  EXPECT_THROW((ProcessParams{8, 0, 0.1, 0}.validate()), std::invalid_argument);
  EXPECT_THROW((ProcessParams{8, 9, 0.1, 0}.validate()), std::invalid_argument);
  EXPECT_THROW((ProcessParams{8, 1, 0.5, 0}.validate()), std::invalid_argument);
  EXPECT_THROW((ProcessParams{8, 1, 0.0, 0}.validate()), std::invalid_argument);
  EXPECT_EQ((ProcessParams{8, 8, 0.1, 0}.effective_range()), 7);
}

TEST(PairSampler, DecodeEnumeratesEveryPairOnce) {
  for (int n : {2, 3, 7, 12}) {
    for (int r = 1; r <= n; ++r) {
      const PairSampler sampler(n, r);
      std::set<std::pair<int, int>> seen;
      for (std::int64_t k = 0; k < sampler.pair_count(); ++k) {
        const auto [i, j] = sampler.decode(k);
        EXPECT_GE(i, 1);
        EXPECT_LE(j, n);
        EXPECT_GE(j - i, 1);
        EXPECT_LE(j - i, std::min(r, n - 1));
        seen.insert({i, j});
      }
      std::int64_t expected = 0;
      for (int d = 1; d <= std::min(r, n - 1); ++d) expected += n - d;
      EXPECT_EQ(static_cast<std::int64_t>(seen.size()), expected);
      EXPECT_EQ(sampler.pair_count(), expected);
    }
  }
}

TEST(IsFitter, Noiseless) {
  auto rng = make_rng(3);
  EXPECT_TRUE(is_fitter(1, 2, 0.0, rng));
  EXPECT_FALSE(is_fitter(2, 1, 0.0, rng));
}

TEST(IsFitter, ErrorFrequency) {
  auto rng = make_rng(4, Stream::kTest);
  constexpr int kTrials = 1'000'000;
  int hits = 0;
  for (int k = 0; k < kTrials; ++k) hits += is_fitter(1, 2, 0.1, rng);
  const double sigma = std::sqrt(kTrials * 0.9 * 0.1);
  EXPECT_NEAR(hits, 0.9 * kTrials, 4 * sigma);
}

TEST(Step, OracleLawKnownValues) {
  EXPECT_NEAR((oracle::one_step_law({1, 2}, 1, 0.1)[{2, 1}]), 0.1, 1e-15);
  EXPECT_NEAR((oracle::one_step_law({1, 2, 3}, 1, 0.1)[{2, 1, 3}]), 0.05, 1e-15);
  EXPECT_NEAR((oracle::one_step_law({1, 2, 3}, 3, 0.3)[{3, 2, 1}]), 0.1, 1e-15);
}

TEST(Step, EmpiricalLawMatchesEnumeration) {
  expect_one_step_law({1, 2}, 1, 0.1, 200000, 1);
  expect_one_step_law({1, 2, 3}, 1, 0.1, 200000, 2);
  expect_one_step_law({1, 2, 3}, 3, 0.25, 200000, 3);
  expect_one_step_law({3, 1, 4, 2}, 2, 0.2, 200000, 4);
  expect_one_step_law({5, 3, 1, 2, 4}, 5, 0.1, 200000, 5);
}

TEST(Step, ChangesAtMostOneTranspositionInRange) {
  for (int r : {1, 3, 10}) {
    const ProcessParams params{10, r, 0.2, 11};
    const PairSampler sampler(params.n, params.r);
    auto state = initial_state(params.n, make_rng(params.seed, Stream::kTest, static_cast<std::uint64_t>(r)));
    for (int k = 0; k < 20000; ++k) {
      const auto before = state.perm;
      const auto before_fit = state.fitness;
      const auto event = step(state, sampler, params.p);
      std::vector<int> moved;
      for (int i = 1; i <= params.n; ++i)
        if (before.at(i) != state.perm.at(i)) moved.push_back(i);
      ASSERT_TRUE(moved.empty() || moved.size() == 2);
      ASSERT_LE(event.j - event.i, std::min(r, params.n - 1));
      if (moved.empty()) continue;
      ASSERT_EQ(moved[0], event.i);
      ASSERT_EQ(moved[1], event.j);
      const Count dw = state.fitness.weighted - before_fit.weighted;
      ASSERT_EQ(std::abs(dw), static_cast<Count>(event.j - event.i) * std::abs(before.at(event.i) - before.at(event.j)));
      if (r == 1) ASSERT_EQ(std::abs(state.fitness.inversions - before_fit.inversions), 1);
    }
  }
}

TEST(Step, IncrementalFitnessMatchesRecompute) {
  for (int r : {1, 7, 64}) {
    const ProcessParams params{64, r, 0.15, 5};
    const PairSampler sampler(params.n, params.r);
    auto state = initial_state(params.n, make_rng(params.seed, Stream::kTest, static_cast<std::uint64_t>(r)));
    for (int k = 1; k <= 100000; ++k) {
      step(state, sampler, params.p);
      if (k % 1000 == 0) ASSERT_EQ(state.fitness, recompute_fitness(state.perm)) << "step " << k;
    }
  }
}

TEST(Run, ZeroStepsRecordsInitialState) {
  const auto traj = run({8, 1, 0.1, 3}, 0, {10});
  ASSERT_EQ(traj.size(), 1u);
  EXPECT_EQ(traj[0].step, 0);
}

TEST(Run, SamplingRowCount) {
  const auto traj = run({8, 1, 0.1, 3}, 1000, {100});
  ASSERT_EQ(traj.size(), 11u);
  EXPECT_EQ(traj.back().step, 1000);
}

TEST(Run, NearNoiselessSorts) {
  const auto traj = run({16, 16, 1e-9, 17}, 100000, {1000});
  EXPECT_EQ(traj.back().inversions, 0);
  EXPECT_EQ(traj.back().weighted, 0);
}

TEST(Run, Deterministic) {
  const ProcessParams params{40, 4, 0.2, 123};
  EXPECT_EQ(run(params, 50000, {7}), run(params, 50000, {7}));
  EXPECT_NE(run(params, 50000, {7}), run(params, 50000, {7}, 1));
  auto other = params;
  other.seed = 124;
  EXPECT_NE(run(params, 50000, {7}), run(other, 50000, {7}));
}

TEST(BinaryStep, SinglePairFrequencies) {
  auto rng = make_rng(8, Stream::kTest);
  constexpr int kTrials = 200000;
  int up = 0, down = 0;
  for (int k = 0; k < kTrials; ++k) {
    BinarySequence a({0, 1});
    binary_step(a, 0.1, rng);
    up += a == BinarySequence({1, 0});
    BinarySequence b({1, 0});
    binary_step(b, 0.1, rng);
    down += b == BinarySequence({0, 1});
  }
  const double sigma = std::sqrt(kTrials * 0.1 * 0.9);
  EXPECT_NEAR(up, 0.1 * kTrials, 4 * sigma);
  EXPECT_NEAR(down, 0.9 * kTrials, 4 * sigma);
}

TEST(BinaryStep, EqualBitsNeverChange) {
  auto rng = make_rng(9);
  BinarySequence zeros({0, 0, 0, 0, 0});
  for (int k = 0; k < 1000; ++k) binary_step(zeros, 0.3, rng);
  EXPECT_EQ(zeros, BinarySequence({0, 0, 0, 0, 0}));
}

TEST(CountUpDown, Examples) {
  EXPECT_EQ(count_up_down(BinarySequence::sorted(7, 3)).up, 1);
  EXPECT_EQ(count_up_down(BinarySequence::sorted(7, 3)).down, 0);
  const auto rev = count_up_down(BinarySequence({1, 1, 1, 1, 0, 0, 0}));
  EXPECT_EQ(rev.up, 0);
  EXPECT_EQ(rev.down, 1);
  const auto alt = count_up_down(BinarySequence({0, 1, 0, 1}));
  EXPECT_EQ(alt.up, 2);
  EXPECT_EQ(alt.down, 1);
}

TEST(CountUpDown, DifferenceAtMostOne) {
  auto rng = make_rng(10, Stream::kTest);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 2 + static_cast<int>(uniform_below(rng, 30));
    std::vector<std::uint8_t> bits(n);
    for (auto& b : bits) b = static_cast<std::uint8_t>(uniform_below(rng, 2));
    const auto ud = count_up_down(BinarySequence(bits));
    ASSERT_LE(std::abs(ud.up - ud.down), 1);
  }
}

TEST(Coupling, IdentityStaysConsistent) {
  ProcessState state(Permutation(6), make_rng(1));
  std::vector<BinarySequence> thresholds;
  for (int k = 1; k < 6; ++k) thresholds.push_back(BinarySequence::sorted(6, k));
  coupled_step(state, thresholds, 0.2);
  for (int k = 1; k < 6; ++k) EXPECT_EQ(thresholds[k - 1], threshold_sequence(state.perm, k));
}

TEST(Coupling, LongRunKeepsThresholdsAndDecomposition) {
  const int n = 32;
  auto state = initial_state(n, make_rng(21, Stream::kTest));
  std::vector<BinarySequence> thresholds;
  for (int k = 1; k < n; ++k) thresholds.push_back(threshold_sequence(state.perm, k));
  for (int t = 0; t < 100000; ++t) {
    coupled_step(state, thresholds, 0.2);
    Count sum = 0;
    for (int k = 1; k < n; ++k) {
      ASSERT_EQ(thresholds[k - 1], threshold_sequence(state.perm, k)) << "step " << t;
      sum += inversions(thresholds[k - 1]);
    }
    ASSERT_EQ(sum, weighted_inversions(state.perm));
    ASSERT_EQ(state.fitness.weighted, sum);
  }
}

TEST(Coupling, RejectsInconsistentThresholds) {
  ProcessState state(Permutation({2, 1, 3}), make_rng(1));
  std::vector<BinarySequence> wrong{BinarySequence::sorted(3, 1), BinarySequence::sorted(3, 2)};
  EXPECT_THROW(coupled_step(state, wrong, 0.1), std::logic_error);
  std::vector<BinarySequence> too_few{threshold_sequence(state.perm, 1)};
  EXPECT_THROW(coupled_step(state, too_few, 0.1), std::logic_error);
}
