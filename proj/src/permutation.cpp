#include "swapsort/permutation.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>

namespace swapsort {

Permutation::Permutation(int n) : elems_(n + 1), inverse_(n + 1) {
  if (n < 1) throw std::invalid_argument("permutation size must be >= 1, got " + std::to_string(n));
  std::iota(elems_.begin(), elems_.end(), 0);
  std::iota(inverse_.begin(), inverse_.end(), 0);
}

Permutation::Permutation(std::span<const int> one_line) {
  const int n = static_cast<int>(one_line.size());
  if (n < 1) throw std::invalid_argument("permutation must have at least one element");
  elems_.assign(n + 1, 0);
  inverse_.assign(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    const int v = one_line[i - 1];
    if (v < 1 || v > n || inverse_[v] != 0) {
      throw std::invalid_argument("not a permutation of 1.." + std::to_string(n) + ": bad element " +
                                  std::to_string(v) + " at position " + std::to_string(i));
    }
    elems_[i] = v;
    inverse_[v] = i;
  }
}

Permutation::Permutation(std::initializer_list<int> one_line)
    : Permutation(std::span<const int>(one_line.begin(), one_line.size())) {}

Permutation Permutation::reversed(int n) {
  std::vector<int> v(n);
  std::iota(v.rbegin(), v.rend(), 1);
  return Permutation(v);
}

void Permutation::swap_positions(int i, int j) {
  std::swap(elems_[i], elems_[j]);
  inverse_[elems_[i]] = i;
  inverse_[elems_[j]] = j;
}

bool Permutation::is_identity() const {
  for (int i = 1; i <= size(); ++i)
    if (elems_[i] != i) return false;
  return true;
}

BinarySequence::BinarySequence(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto b : bits_) {
    if (b > 1) throw std::invalid_argument("binary sequence values must be 0 or 1");
    zeros_ += b == 0;
  }
}

BinarySequence BinarySequence::sorted(int n, int k) {
  if (k < 0 || k > n) throw std::invalid_argument("zero count out of range");
  std::vector<std::uint8_t> bits(n, 1);
  std::fill_n(bits.begin(), k, 0);
  return BinarySequence(std::move(bits));
}

void BinarySequence::swap_positions(int i, int j) { std::swap(bits_[i - 1], bits_[j - 1]); }

namespace {

Count merge_count(std::vector<int>& a, std::vector<int>& scratch, std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  Count count = merge_count(a, scratch, lo, mid) + merge_count(a, scratch, mid, hi);
  std::size_t i = lo, j = mid, out = lo;
  while (i < mid && j < hi) {
    if (a[j] < a[i]) {
      count += static_cast<Count>(mid - i);
      scratch[out++] = a[j++];
    } else {
      scratch[out++] = a[i++];
    }
  }
  while (i < mid) scratch[out++] = a[i++];
  while (j < hi) scratch[out++] = a[j++];
  std::copy(scratch.begin() + lo, scratch.begin() + hi, a.begin() + lo);
  return count;
}

}  // namespace

Count inversions(const Permutation& perm) {
  auto line = perm.one_line();
  std::vector<int> a(line.begin(), line.end());
  std::vector<int> scratch(a.size());
  return merge_count(a, scratch, 0, a.size());
}

Count inversions_reference(const Permutation& perm) {
  Count count = 0;
  const int n = perm.size();
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) count += perm.at(i) > perm.at(j);
  return count;
}

Count weighted_inversions(const Permutation& perm) {
  Count sum = 0;
  for (int v = 1; v <= perm.size(); ++v) {
    const Count d = v - perm.position(v);
    sum += d * d;
  }
  return sum / 2;
}

Count weighted_inversions_linear(const Permutation& perm) {
  Count sum = 0;
  for (int v = 1; v <= perm.size(); ++v) sum += static_cast<Count>(v) * (v - perm.position(v));
  return sum;
}

Count weighted_inversions_reference(const Permutation& perm) {
  Count sum = 0;
  const int n = perm.size();
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      if (perm.at(i) > perm.at(j)) sum += perm.at(i) - perm.at(j);
  return sum;
}

Count total_dislocation(const Permutation& perm) {
  Count sum = 0;
  for (int v = 1; v <= perm.size(); ++v) sum += std::abs(v - perm.position(v));
  return sum;
}

Count min_swaps_ex(const Permutation& perm) {
  const int n = perm.size();
  std::vector<bool> seen(n + 1, false);
  Count cycles = 0;
  for (int start = 1; start <= n; ++start) {
    if (seen[start]) continue;
    ++cycles;
    for (int v = start; !seen[v]; v = perm.at(v)) seen[v] = true;
  }
  return n - cycles;
}

Count max_dislocation(const Permutation& perm) {
  Count best = 0;
  for (int v = 1; v <= perm.size(); ++v) best = std::max<Count>(best, std::abs(v - perm.position(v)));
  return best;
}

FitnessTriple fitness(const Permutation& perm) {
  return {inversions(perm), weighted_inversions(perm), total_dislocation(perm), min_swaps_ex(perm)};
}

BinarySequence threshold_sequence(const Permutation& perm, int k) {
  const int n = perm.size();
  if (k < 1 || k > n - 1) {
    throw std::invalid_argument("threshold k must lie in 1.." + std::to_string(n - 1) + ", got " +
                                std::to_string(k));
  }
  std::vector<std::uint8_t> bits(n);
  for (int i = 1; i <= n; ++i) bits[i - 1] = perm.at(i) > k ? 1 : 0;
  return BinarySequence(std::move(bits));
}

Count inversions(const BinarySequence& seq) {
  Count ones = 0, count = 0;
  for (auto b : seq.bits()) {
    if (b) ++ones;
    else count += ones;
  }
  return count;
}

Count w_decomposition_check(const Permutation& perm) {
  Count sum = 0;
  for (int k = 1; k < perm.size(); ++k) sum += inversions(threshold_sequence(perm, k));
  return sum;
}

Permutation random_permutation(int n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("random_permutation needs n >= 1");
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 1);
  for (int i = n - 1; i > 0; --i) {
    const auto j = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(i) + 1));
    std::swap(v[i], v[j]);
  }
  return Permutation(v);
}

}  // namespace swapsort
