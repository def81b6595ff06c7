#include <gtest/gtest.h>

#include <map>

#include "oracles.hpp"
#include "swapsort/permutation.hpp"

using namespace swapsort;

namespace {

Permutation from(const oracle::Line& line) { return Permutation(line); }

__int128 wide(Count v) { return static_cast<__int128>(v); }

// Every fitness relation, in exact integer arithmetic.
void expect_relations(const Permutation& perm) {
  const Count n = perm.size();
  const auto I = inversions(perm);
  const auto W = weighted_inversions(perm);
  const auto D = total_dislocation(perm);
  const auto Ex = min_swaps_ex(perm);
  const Count half = n / 2;

  EXPECT_LE(I, n * (n - 1) / 2);
  EXPECT_LE(W, (n + 1) * n * (n - 1) / 6);
  EXPECT_LE(D, n * n / 2);
  EXPECT_LE(I, W);
  EXPECT_LE(2 * W, n * I);
  EXPECT_LE(wide(I) * I, wide(2 * n) * W);
  EXPECT_LE(D, 2 * W);
  EXPECT_LE(2 * W, (n - 1) * D);
  EXPECT_LE(I + Ex, D);
  EXPECT_LE(D, 2 * I);
  EXPECT_LE(D, I + Ex + half * (half - 1));
  EXPECT_EQ(W, weighted_inversions_linear(perm));
  EXPECT_EQ(W, w_decomposition_check(perm));
}

}  // namespace

TEST(Permutation, RejectsNonBijections) {
  EXPECT_THROW(Permutation({1, 1, 2}), std::invalid_argument);
  EXPECT_THROW(Permutation({0, 1}), std::invalid_argument);
  EXPECT_THROW(Permutation({1, 4, 2}), std::invalid_argument);
  EXPECT_THROW(Permutation(0), std::invalid_argument);
}

TEST(Permutation, PositionIsInverseOfAt) {
  const Permutation perm{4, 1, 3, 2};
  for (int i = 1; i <= 4; ++i) EXPECT_EQ(perm.position(perm.at(i)), i);
  EXPECT_EQ(perm.position(1), 2);
  auto copy = perm;
  copy.swap_positions(1, 4);
  EXPECT_EQ(copy, Permutation({2, 1, 3, 4}));
  for (int v = 1; v <= 4; ++v) EXPECT_EQ(copy.at(copy.position(v)), v);
}

TEST(Fitness, Inversions) {
  EXPECT_EQ(inversions(Permutation({1, 2, 3})), 0);
  EXPECT_EQ(inversions(Permutation({3, 2, 1})), 3);
  EXPECT_EQ(inversions(Permutation({4, 1, 2, 3})), 3);
}

TEST(Fitness, WeightedInversions) {
  EXPECT_EQ(weighted_inversions(Permutation({1, 2, 3})), 0);
  EXPECT_EQ(weighted_inversions(Permutation({3, 2, 1})), 4);
  EXPECT_EQ(weighted_inversions(Permutation({2, 3, 1})), 3);
  EXPECT_EQ(weighted_inversions_reference(Permutation({2, 3, 1})), 3);
}

TEST(Fitness, TotalDislocation) {
  EXPECT_EQ(total_dislocation(Permutation(5)), 0);
  EXPECT_EQ(total_dislocation(Permutation({3, 2, 1})), 4);
  EXPECT_EQ(total_dislocation(Permutation({2, 1, 3})), 2);
}

TEST(Fitness, MinSwaps) {
  EXPECT_EQ(min_swaps_ex(Permutation(4)), 0);
  EXPECT_EQ(min_swaps_ex(Permutation({2, 1, 3})), 1);
  EXPECT_EQ(min_swaps_ex(Permutation({2, 3, 1})), 2);
}

TEST(Fitness, MinSwapsMatchesSwapGraphDistance) {
  for (int n = 1; n <= 6; ++n) {
    for (const auto& [line, dist] : oracle::swap_distances(n)) EXPECT_EQ(min_swaps_ex(from(line)), dist);
  }
}

TEST(Fitness, MaxDislocation) {
  EXPECT_EQ(max_dislocation(Permutation(6)), 0);
  EXPECT_EQ(max_dislocation(Permutation({3, 2, 1})), 2);
  EXPECT_EQ(max_dislocation(Permutation({2, 3, 4, 1})), 3);
}

TEST(Threshold, SequencesAndErrors) {
  const Permutation perm{2, 3, 1};
  EXPECT_EQ(threshold_sequence(perm, 1), BinarySequence({1, 1, 0}));
  EXPECT_EQ(threshold_sequence(perm, 2), BinarySequence({0, 1, 0}));
  for (int k = 1; k < 5; ++k) EXPECT_EQ(threshold_sequence(Permutation(5), k), BinarySequence::sorted(5, k));
  EXPECT_THROW(threshold_sequence(perm, 0), std::invalid_argument);
  EXPECT_THROW(threshold_sequence(perm, 3), std::invalid_argument);
  EXPECT_EQ(threshold_sequence(perm, 2).zeros(), 2);
}

TEST(Threshold, WeightedDecomposition) {
  EXPECT_EQ(w_decomposition_check(Permutation({2, 3, 1})), 3);
  EXPECT_EQ(w_decomposition_check(Permutation(4)), 0);
  EXPECT_EQ(inversions(threshold_sequence(Permutation({3, 2, 1}), 1)), 2);
  EXPECT_EQ(inversions(threshold_sequence(Permutation({3, 2, 1}), 2)), 2);
  EXPECT_EQ(w_decomposition_check(Permutation({3, 2, 1})), 4);
}

TEST(Fitness, MatchesPairEnumerationExhaustively) {
  for (int n = 1; n <= 7; ++n) {
    for (const auto& line : oracle::all_permutations(n)) {
      const auto perm = from(line);
      ASSERT_EQ(inversions(perm), oracle::inversions(line));
      ASSERT_EQ(weighted_inversions(perm), oracle::weighted(line));
      ASSERT_EQ(total_dislocation(perm), oracle::dislocation(line));
    }
  }
}

TEST(FitnessRelations, ExhaustiveSmallN) {
  for (int n = 1; n <= 7; ++n)
    for (const auto& line : oracle::all_permutations(n)) expect_relations(from(line));
}

TEST(FitnessRelations, RandomLargerN) {
  auto rng = make_rng(2024, Stream::kTest);
  for (int n : {16, 64, 256}) {
    for (int trial = 0; trial < 300; ++trial) {
      const auto perm = random_permutation(n, rng);
      expect_relations(perm);
      ASSERT_EQ(inversions(perm), inversions_reference(perm));
    }
  }
}

TEST(FitnessRelations, TightnessWitnesses) {
  for (int n = 2; n <= 40; ++n) {
    const Count N = n;
    const auto rev = Permutation::reversed(n);
    EXPECT_EQ(inversions(rev), N * (N - 1) / 2);
    EXPECT_EQ(weighted_inversions(rev), (N + 1) * N * (N - 1) / 6);
    EXPECT_EQ(total_dislocation(rev), N * N / 2);

    std::vector<int> rotated{n};  // (n, 1, 2, ..., n-1)
    for (int v = 1; v < n; ++v) rotated.push_back(v);
    const Permutation rot(rotated);
    EXPECT_EQ(2 * weighted_inversions(rot), N * inversions(rot));

    if (n >= 3) {
      std::vector<int> ends{n};  // (n, 2, ..., n-1, 1)
      for (int v = 2; v < n; ++v) ends.push_back(v);
      ends.push_back(1);
      const Permutation e(ends);
      EXPECT_EQ(2 * weighted_inversions(e), (N - 1) * total_dislocation(e));
    }
  }
}

TEST(FitnessRelations, UniformMeans) {
  for (int n = 1; n <= 7; ++n) {
    const Count N = n;
    Count si = 0, sw = 0, sd = 0, count = 0;
    for (const auto& line : oracle::all_permutations(n)) {
      const auto perm = from(line);
      si += inversions(perm);
      sw += weighted_inversions(perm);
      sd += total_dislocation(perm);
      ++count;
    }
    // mean I = C(n,2)/2, mean W = C(n+1,3)/2, mean D = (n^2-1)/3
    EXPECT_EQ(4 * si, count * N * (N - 1));
    EXPECT_EQ(12 * sw, count * (N + 1) * N * (N - 1));
    EXPECT_EQ(3 * sd, count * (N * N - 1));
  }
}

TEST(RandomPermutation, EdgeCasesAndDeterminism) {
  auto rng = make_rng(1);
  EXPECT_EQ(random_permutation(1, rng), Permutation(1));
  EXPECT_THROW(random_permutation(0, rng), std::invalid_argument);
  auto a = make_rng(99), b = make_rng(99);
  EXPECT_EQ(random_permutation(50, a), random_permutation(50, b));
}

TEST(RandomPermutation, UniformOverS3) {
  auto rng = make_rng(7, Stream::kTest);
  std::map<std::vector<int>, int> counts;
  constexpr int kDraws = 60000;
  for (int i = 0; i < kDraws; ++i) {
    const auto perm = random_permutation(3, rng);
    auto line = perm.one_line();
    ++counts[{line.begin(), line.end()}];
  }
  ASSERT_EQ(counts.size(), 6u);
  const double expected = kDraws / 6.0;
  const double sigma = std::sqrt(kDraws * (1.0 / 6) * (5.0 / 6));
  for (const auto& [line, c] : counts) EXPECT_NEAR(c, expected, 4 * sigma);
}

TEST(BinarySequence, ZerosAndInversions) {
  const BinarySequence s({1, 0, 1, 0});
  EXPECT_EQ(s.zeros(), 2);
  EXPECT_EQ(inversions(s), 3);
  EXPECT_EQ(inversions(BinarySequence::sorted(6, 2)), 0);
  EXPECT_THROW(BinarySequence({0, 2}), std::invalid_argument);
}
