#pragma once

// Exact analysis of the SwapSort Markov chain on small state spaces: transition
// matrices, stationary distributions, reversibility diagnostics, mixing times and
// drift of the weighted inversion count.

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "swapsort/permutation.hpp"

namespace swapsort {

inline constexpr int kMaxPermutationChainSize = 8;
inline constexpr int kMaxBinaryChainSize = 16;
inline constexpr int kMaxMixingChainSize = 6;

using Sequence = std::vector<int>;

/// Inversions of an arbitrary sequence (duplicates allowed): pairs i < j with s_i > s_j.
inline Count sequence_inversions(std::span<const int> s) {
  Count count = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j) count += s[i] > s[j];
  return count;
}

/// Weighted inversions of an arbitrary sequence: sum of s_i - s_j over inverted pairs.
inline Count sequence_weighted_inversions(std::span<const int> s) {
  Count sum = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      if (s[i] > s[j]) sum += s[i] - s[j];
  return sum;
}

/// Enumerated state space with a row-stochastic sparse transition matrix.
///
/// States are all distinct arrangements of one multiset, in lexicographic order.
/// For permutations this is S_n; for 0^k 1^(n-k) it is the 0-1 chain B_{p,n,k}.
template <typename Scalar = double>
struct ChainModel {
  using Matrix = Eigen::SparseMatrix<Scalar, Eigen::RowMajor>;

  int n = 0;
  int r = 1;
  Scalar p = 0;
  bool permutations = true;
  std::vector<Sequence> states;
  Matrix transition;

  std::ptrdiff_t size() const { return static_cast<std::ptrdiff_t>(states.size()); }

  /// Lexicographic rank of `state`, or -1 if it is not in the state space.
  std::ptrdiff_t index_of(std::span<const int> state) const {
    const auto key = encode(state);
    const auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
    if (it == keys_.end() || *it != key || static_cast<int>(state.size()) != n) return -1;
    return it - keys_.begin();
  }

  const Sequence& unrank(std::ptrdiff_t index) const { return states.at(static_cast<std::size_t>(index)); }

  Scalar probability(std::span<const int> from, std::span<const int> to) const {
    const auto a = index_of(from), b = index_of(to);
    if (a < 0 || b < 0) throw std::invalid_argument("state not in chain");
    return transition.coeff(a, b);
  }

  // Nibble-packed, first element most significant, so numeric order is lexicographic.
  static std::uint64_t encode(std::span<const int> s) {
    std::uint64_t key = 0;
    for (int v : s) key = (key << 4) | static_cast<std::uint64_t>(v & 0xF);
    return key;
  }

  void index_states() {
    keys_.clear();
    keys_.reserve(states.size());
    for (const auto& s : states) keys_.push_back(encode(s));
  }

 private:
  std::vector<std::uint64_t> keys_;
};

namespace detail {

template <typename Scalar>
ChainModel<Scalar> build_over_arrangements(Sequence sorted_start, int r, Scalar p, bool permutations) {
  ChainModel<Scalar> chain;
  chain.n = static_cast<int>(sorted_start.size());
  chain.r = r;
  chain.p = p;
  chain.permutations = permutations;
  std::sort(sorted_start.begin(), sorted_start.end());
  do {
    chain.states.push_back(sorted_start);
  } while (std::next_permutation(sorted_start.begin(), sorted_start.end()));
  chain.index_states();

  const int n = chain.n;
  const int range = std::min(r, n - 1);
  std::int64_t pairs = 0;
  for (int d = 1; d <= range; ++d) pairs += n - d;
  const Scalar select = Scalar(1) / static_cast<Scalar>(pairs);

  std::vector<Eigen::Triplet<Scalar>> triplets;
  triplets.reserve(chain.states.size() * static_cast<std::size_t>(pairs + 1));
  Sequence next;
  for (std::ptrdiff_t s = 0; s < chain.size(); ++s) {
    const auto& cur = chain.states[static_cast<std::size_t>(s)];
    Scalar stay = 0;
    for (int d = 1; d <= range; ++d) {
      for (int i = 0; i + d < n; ++i) {
        const int a = cur[i], b = cur[i + d];
        if (a == b) {
          stay += select;
          continue;
        }
        // Ordered pairs swap on a comparison error, inverted pairs swap otherwise.
        const Scalar swap_prob = a < b ? p : Scalar(1) - p;
        next = cur;
        std::swap(next[i], next[i + d]);
        triplets.emplace_back(s, chain.index_of(next), select * swap_prob);
        stay += select * (Scalar(1) - swap_prob);
      }
    }
    triplets.emplace_back(s, s, stay);
  }
  chain.transition.resize(chain.size(), chain.size());
  chain.transition.setFromTriplets(triplets.begin(), triplets.end());
  chain.transition.makeCompressed();
  return chain;
}

template <typename Scalar>
void check_probability(Scalar p) {
  if (!(p > Scalar(0) && p < Scalar(1))) throw std::invalid_argument("p must lie in (0, 1)");
}

}  // namespace detail

/// Exact chain of SwapSort_{p,r} on S_n, 2 <= n <= 8.
template <typename Scalar = double>
ChainModel<Scalar> build_chain(int n, int r, Scalar p) {
  if (n < 2 || n > kMaxPermutationChainSize) {
    throw std::out_of_range("exact chain supports 2 <= n <= " + std::to_string(kMaxPermutationChainSize) +
                            ", got n=" + std::to_string(n));
  }
  if (r < 1) throw std::invalid_argument("r must be >= 1");
  detail::check_probability(p);
  Sequence start(n);
  std::iota(start.begin(), start.end(), 1);
  return detail::build_over_arrangements(std::move(start), r, p, true);
}

/// Exact adjacent-swap chain on 0-1 sequences with k zeros, 2 <= n <= 16, 0 < k < n.
template <typename Scalar = double>
ChainModel<Scalar> build_binary_chain(int n, int k, Scalar p) {
  if (n < 2 || n > kMaxBinaryChainSize) {
    throw std::out_of_range("0-1 chain supports 2 <= n <= " + std::to_string(kMaxBinaryChainSize));
  }
  if (k < 1 || k >= n) throw std::invalid_argument("zero count k must satisfy 0 < k < n");
  detail::check_probability(p);
  Sequence start(n, 1);
  std::fill_n(start.begin(), k, 0);
  return detail::build_over_arrangements(std::move(start), 1, p, false);
}

template <typename Scalar = double>
struct StationaryResult {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Vector q;
  Scalar residual = 0;
  std::optional<Scalar> normalizer;
  Scalar expected_inversions = 0;
  Scalar expected_weighted = 0;
  std::optional<Scalar> expected_dislocation;
  long iterations = 0;
};

/// max_s |(qP)(s) - q(s)|.
template <typename Scalar>
Scalar stationary_residual(const ChainModel<Scalar>& chain, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& q) {
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> next = chain.transition.transpose() * q;
  return (next - q).cwiseAbs().maxCoeff();
}

/// Fills E(I), E(W) and, for permutation chains, E(D) under q.
template <typename Scalar>
void fill_expectations(const ChainModel<Scalar>& chain, StationaryResult<Scalar>& result) {
  Scalar ei = 0, ew = 0, ed = 0;
  for (std::ptrdiff_t s = 0; s < chain.size(); ++s) {
    const auto& st = chain.states[static_cast<std::size_t>(s)];
    const Scalar qs = result.q(s);
    ei += qs * static_cast<Scalar>(sequence_inversions(st));
    ew += qs * static_cast<Scalar>(sequence_weighted_inversions(st));
    if (chain.permutations) ed += qs * static_cast<Scalar>(total_dislocation(Permutation(st)));
  }
  result.expected_inversions = ei;
  result.expected_weighted = ew;
  if (chain.permutations) result.expected_dislocation = ed;
  else result.expected_dislocation.reset();
}

struct StationaryOptions {
  double tolerance = 1e-14;
  long max_iterations = 5'000'000;
  int renormalize_every = 64;
};

/// Stationary distribution by power iteration q <- qP from the uniform vector,
/// stopping when successive iterates differ by less than `tolerance` in max norm.
/// Throws std::runtime_error if the iteration cap is hit.
template <typename Scalar>
StationaryResult<Scalar> stationary(const ChainModel<Scalar>& chain, const StationaryOptions& options = {}) {
  using Vector = typename StationaryResult<Scalar>::Vector;
  const auto size = chain.size();
  const typename ChainModel<Scalar>::Matrix transposed = chain.transition.transpose();
  Vector q = Vector::Constant(size, Scalar(1) / static_cast<Scalar>(size));
  Vector next(size);
  StationaryResult<Scalar> result;
  const auto tol = static_cast<Scalar>(options.tolerance);
  for (long it = 1;; ++it) {
    next.noalias() = transposed * q;
    if (it % options.renormalize_every == 0) next /= next.sum();
    const Scalar change = (next - q).cwiseAbs().maxCoeff();
    q.swap(next);
    if (change < tol) {
      result.iterations = it;
      break;
    }
    if (it >= options.max_iterations) {
      throw std::runtime_error("stationary solve did not converge within " + std::to_string(options.max_iterations) +
                               " iterations");
    }
  }
  q /= q.sum();
  result.q = std::move(q);
  result.residual = stationary_residual(chain, result.q);
  fill_expectations(chain, result);
  return result;
}

/// q(s) = c^{I(s)} / Z with c = p / (1 - p), valid for adjacent-swap chains.
template <typename Scalar>
StationaryResult<Scalar> closed_form_stationary(const ChainModel<Scalar>& chain) {
  if (chain.r != 1 && chain.n > 2) {
    throw std::invalid_argument("closed form holds only for adjacent swaps (r = 1)");
  }
  using Vector = typename StationaryResult<Scalar>::Vector;
  const Scalar c = chain.p / (Scalar(1) - chain.p);
  Vector q(chain.size());
  for (std::ptrdiff_t s = 0; s < chain.size(); ++s) {
    q(s) = std::pow(c, static_cast<Scalar>(sequence_inversions(chain.states[static_cast<std::size_t>(s)])));
  }
  StationaryResult<Scalar> result;
  result.normalizer = q.sum();
  q /= *result.normalizer;
  result.q = std::move(q);
  result.residual = stationary_residual(chain, result.q);
  fill_expectations(chain, result);
  return result;
}

template <typename Scalar = double>
StationaryResult<Scalar> closed_form_stationary(int n, Scalar p) {
  return closed_form_stationary(build_chain<Scalar>(n, 1, p));
}

/// max over state pairs of |q(s) P(s,s') - q(s') P(s',s)|.
template <typename Scalar>
Scalar detailed_balance_violation(const ChainModel<Scalar>& chain,
                                  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& q) {
  if (q.size() != chain.size()) throw std::invalid_argument("distribution size does not match chain");
  Scalar worst = 0;
  for (Eigen::Index s = 0; s < chain.transition.outerSize(); ++s) {
    for (typename ChainModel<Scalar>::Matrix::InnerIterator it(chain.transition, s); it; ++it) {
      const auto t = it.col();
      if (t == s) continue;
      const Scalar flow = q(s) * it.value() - q(t) * chain.transition.coeff(t, s);
      worst = std::max(worst, std::abs(flow));
    }
  }
  return worst;
}

/// Product of forward transition probabilities around the closed cycle divided by the
/// product of the reversed ones. Equal to 1 for every cycle iff the chain is reversible.
template <typename Scalar>
Scalar kolmogorov_cycle_ratio(const ChainModel<Scalar>& chain, const std::vector<Sequence>& cycle) {
  if (cycle.size() < 2) throw std::invalid_argument("cycle needs at least two states");
  Scalar forward = 1, backward = 1;
  for (std::size_t k = 0; k < cycle.size(); ++k) {
    const auto& from = cycle[k];
    const auto& to = cycle[(k + 1) % cycle.size()];
    const Scalar f = chain.probability(from, to);
    const Scalar b = chain.probability(to, from);
    if (f == Scalar(0) || b == Scalar(0)) {
      throw std::invalid_argument("cycle step " + std::to_string(k) + " is not a legal transition");
    }
    forward *= f;
    backward *= b;
  }
  return forward / backward;
}

template <typename Derived1, typename Derived2>
typename Derived1::Scalar total_variation(const Eigen::MatrixBase<Derived1>& u, const Eigen::MatrixBase<Derived2>& v) {
  if (u.size() != v.size()) throw std::invalid_argument("total variation needs equal dimensions");
  return (u - v).cwiseAbs().sum() / 2;
}

/// Smallest t with max_s ||P^t(s, .) - q||_TV <= eps, propagating every start at once.
template <typename Scalar>
long mixing_time(const ChainModel<Scalar>& chain, Scalar eps, long max_steps = 1'000'000) {
  if (chain.size() > 720) {
    throw std::out_of_range("mixing time supports at most " + std::to_string(kMaxMixingChainSize) + "! states");
  }
  using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const auto q = stationary(chain).q;
  Dense dist = Dense::Identity(chain.size(), chain.size());
  auto worst = [&] {
    return (dist.rowwise() - q.transpose()).cwiseAbs().rowwise().sum().maxCoeff() / 2;
  };
  for (long t = 0; t <= max_steps; ++t) {
    if (worst() <= eps) return t;
    dist = dist * chain.transition;
  }
  throw std::runtime_error("mixing time exceeds " + std::to_string(max_steps) + " steps");
}

/// Breadth-first reachability from state 0 over the transition graph covers every state.
template <typename Scalar>
bool is_irreducible(const ChainModel<Scalar>& chain) {
  std::vector<bool> seen(static_cast<std::size_t>(chain.size()), false);
  std::vector<Eigen::Index> frontier{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    const auto s = frontier.back();
    frontier.pop_back();
    for (typename ChainModel<Scalar>::Matrix::InnerIterator it(chain.transition, s); it; ++it) {
      const auto t = static_cast<std::size_t>(it.col());
      if (it.value() > Scalar(0) && !seen[t]) {
        seen[t] = true;
        ++reached;
        frontier.push_back(it.col());
      }
    }
  }
  return reached == seen.size();
}

struct WeightedDrift {
  double increase = 0;
  double decrease = 0;
};

/// Expected one-step increase and decrease of W under all-pairs swaps.
inline WeightedDrift w_drift(const Permutation& perm, double p) {
  const int n = perm.size();
  const double pairs = 0.5 * n * (n - 1);
  double up = 0, down = 0;
  for (int a = 1; a <= n; ++a) {
    for (int b = a + 1; b <= n; ++b) {
      const int pa = perm.position(a), pb = perm.position(b);
      const double weight = static_cast<double>(b - a) * std::abs(pb - pa);
      if (pa < pb) up += weight;
      else down += weight;
    }
  }
  return {p / pairs * up, (1 - p) / pairs * down};
}

/// Stationary mean of the dominating walk on 0..i_max with ratio c = 2p/(1-p).
/// Throws std::domain_error when p >= 1/3, where the bound form does not apply.
inline double geometric_walk_expectation(double p, long i_max) {
  if (!(p >= 0.0) || p >= 1.0 / 3.0) throw std::domain_error("geometric walk bound needs 0 <= p < 1/3");
  if (i_max < 1) throw std::invalid_argument("i_max must be >= 1");
  const double c = 2 * p / (1 - p);
  double weight = 1, numer = 0, denom = 0;
  for (long i = 0; i <= i_max; ++i) {
    numer += static_cast<double>(i) * weight;
    denom += weight;
    weight *= c;
    if (weight == 0.0) break;
  }
  return numer / denom;
}

/// Limit of geometric_walk_expectation as i_max grows: 2p / (1 - 3p).
inline double geometric_walk_limit(double p) {
  if (!(p >= 0.0) || p >= 1.0 / 3.0) throw std::domain_error("geometric walk bound needs 0 <= p < 1/3");
  return 2 * p / (1 - 3 * p);
}

}  // namespace swapsort
