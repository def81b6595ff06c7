#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "swapsort/rng.hpp"

namespace swapsort {

using Count = std::int64_t;

/// A permutation of {1..n} in one-line notation.
///
/// All accessors are 1-based: `at(i)` is the element at position i and
/// `position(v)` is the position of element v. Both arrays are kept in sync,
/// so either direction is O(1).
class Permutation {
 public:
  /// Identity permutation on n elements.
  explicit Permutation(int n);
  /// Throws std::invalid_argument unless `one_line` is a bijection on {1..n}.
  explicit Permutation(std::span<const int> one_line);
  Permutation(std::initializer_list<int> one_line);

  static Permutation reversed(int n);

  int size() const { return static_cast<int>(elems_.size()) - 1; }
  int at(int i) const { return elems_[i]; }
  int position(int v) const { return inverse_[v]; }

  /// Elements in position order, without the unused slot 0.
  std::span<const int> one_line() const { return {elems_.data() + 1, elems_.size() - 1}; }

  /// Exchanges the elements at positions i and j.
  void swap_positions(int i, int j);

  bool is_identity() const;

  friend bool operator==(const Permutation& a, const Permutation& b) { return a.elems_ == b.elems_; }

 private:
  std::vector<int> elems_;
  std::vector<int> inverse_;
};

/// A 0-1 sequence; bits are 0-based in storage, positions in the API are 1-based.
class BinarySequence {
 public:
  BinarySequence() = default;
  explicit BinarySequence(std::vector<std::uint8_t> bits);
  /// The sorted sequence 0^k 1^(n-k).
  static BinarySequence sorted(int n, int k);

  int size() const { return static_cast<int>(bits_.size()); }
  int zeros() const { return zeros_; }
  std::uint8_t at(int i) const { return bits_[i - 1]; }
  std::span<const std::uint8_t> bits() const { return bits_; }

  void swap_positions(int i, int j);

  friend bool operator==(const BinarySequence& a, const BinarySequence& b) { return a.bits_ == b.bits_; }

 private:
  std::vector<std::uint8_t> bits_;
  int zeros_ = 0;
};

struct FitnessTriple {
  Count inversions = 0;
  Count weighted = 0;
  Count dislocation = 0;
  Count min_swaps = 0;

  friend bool operator==(const FitnessTriple&, const FitnessTriple&) = default;
};

// O(n log n) merge count.
Count inversions(const Permutation& perm);
// O(n^2) pair enumeration, kept as a cross-check for the fast path.
Count inversions_reference(const Permutation& perm);

/// Sum of value differences over inverted pairs, computed as 1/2 sum (i - pos(i))^2.
Count weighted_inversions(const Permutation& perm);
/// sum_i i * (i - pos(i)); equal to weighted_inversions for every permutation.
Count weighted_inversions_linear(const Permutation& perm);
/// Direct sum of pi_i - pi_j over inverted position pairs, O(n^2).
Count weighted_inversions_reference(const Permutation& perm);

/// Spearman's footrule: sum_v |v - pos(v)|.
Count total_dislocation(const Permutation& perm);
/// Minimum number of arbitrary transpositions that sort `perm` (n minus #cycles).
Count min_swaps_ex(const Permutation& perm);
/// max_v |v - pos(v)|.
Count max_dislocation(const Permutation& perm);

FitnessTriple fitness(const Permutation& perm);

/// Bit i is 1 iff the element at position i exceeds k. Requires 1 <= k <= n-1.
BinarySequence threshold_sequence(const Permutation& perm, int k);

/// Inversions of a 0-1 sequence: pairs (1 before 0).
Count inversions(const BinarySequence& bits);

/// Sum of I(T_k(perm)) over k = 1..n-1; always equals weighted_inversions(perm).
Count w_decomposition_check(const Permutation& perm);

/// Uniform permutation via a Fisher-Yates shuffle of positions.
Permutation random_permutation(int n, Rng& rng);

}  // namespace swapsort
