// Exact integer combinatorics shared by the algebra and the oracles:
// factorials, binomials, multiset multiplicities, tuple enumeration and
// set partitions. Everything here stays in 64-bit integer arithmetic.
#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace wchaos {

inline std::int64_t factorial(int n) {
  if (n < 0 || n > 20) throw std::invalid_argument("factorial: n out of range");
  std::int64_t v = 1;
  for (int k = 2; k <= n; ++k) v *= k;
  return v;
}

inline std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t v = 1;
  for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
  return v;
}

// order! / prod(a_k!) where a_k are the entry multiplicities of a
// non-decreasing tuple: the number of distinct rearrangements.
inline std::int64_t tuple_multiplicity(const std::vector<int>& sorted_idx) {
  std::int64_t denom = 1;
  int run = 1;
  for (std::size_t i = 1; i < sorted_idx.size(); ++i) {
    if (sorted_idx[i] == sorted_idx[i - 1]) ++run; else run = 1;
    denom *= run;
  }
  return factorial(static_cast<int>(sorted_idx.size())) / denom;
}

// (entry, multiplicity) pairs of a non-decreasing tuple.
inline std::vector<std::pair<int, int>> entry_multiplicities(const std::vector<int>& sorted_idx) {
  std::vector<std::pair<int, int>> out;
  for (int e : sorted_idx) {
    if (!out.empty() && out.back().first == e) ++out.back().second;
    else out.emplace_back(e, 1);
  }
  return out;
}

// Advances a non-decreasing tuple with entries in [0, dim); returns false
// once the last tuple has been passed. Start from the all-zero tuple.
inline bool next_sorted_tuple(std::vector<int>& t, int dim) {
  for (int i = static_cast<int>(t.size()) - 1; i >= 0; --i) {
    if (t[i] + 1 < dim) {
      int v = t[i] + 1;
      for (std::size_t j = i; j < t.size(); ++j) t[j] = v;
      return true;
    }
  }
  return false;
}

namespace detail {
template <typename Fn>
void set_partitions_rec(int n, int i, std::vector<int>& a, int maxv, Fn&& fn) {
  if (i == n) {
    std::vector<std::vector<int>> blocks(maxv + 1);
    for (int k = 0; k < n; ++k) blocks[a[k]].push_back(k);
    fn(blocks);
    return;
  }
  for (int v = 0; v <= maxv + 1; ++v) {
    a[i] = v;
    set_partitions_rec(n, i + 1, a, std::max(maxv, v), fn);
  }
}
}  // namespace detail

// Enumerates every set partition of {0,..,n-1} as a list of blocks,
// via restricted growth strings (deterministic order).
template <typename Fn>
void for_each_set_partition(int n, Fn&& fn) {
  if (n <= 0) throw std::invalid_argument("for_each_set_partition: n must be positive");
  std::vector<int> a(n, 0);
  detail::set_partitions_rec(n, 1, a, 0, fn);
}

}  // namespace wchaos
