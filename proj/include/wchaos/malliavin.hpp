// The operators D, L and L^{-1} realized on finite chaos expansions, through
// the single pairing primitive
//   <D I_p(f), -D L^{-1} I_Q(g)> =
//     p sum_{r=1}^{p^Q} (r-1)! C(p-1,r-1) C(Q-1,r-1) I_{p+Q-2r}(f (x~)_r g),
// and the iterated Gamma functionals built from it. The leading factor is p,
// the order of the newly differentiated integral; this choice is pinned by
// the cumulant tests (only it reproduces kappa_3(I_2(f)) = 8 <f (x)_1 f, f>
// and the per-ordering values of the mixed desk example).
#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "wchaos/chaos.hpp"
#include "wchaos/combinatorics.hpp"
#include "wchaos/tensor.hpp"

namespace wchaos {

// Subscripts l_1..l_k of Gamma_{l_1,...,l_k}: component indices into F.
struct GammaPath {
  std::vector<int> components;

  GammaPath() = default;
  explicit GammaPath(std::vector<int> comps) : components(std::move(comps)) {
    if (components.empty()) throw std::invalid_argument("GammaPath: empty");
  }
};

// Exact chaos expansion of <D I_p(f), -D L^{-1} G>. The order-0 term of G is
// annihilated by L^{-1}.
inline ChaosExpansion pairing(const SymmetricKernel& f, const ChaosExpansion& G) {
  if (f.dim != G.dim) throw std::invalid_argument("pairing: dim mismatch");
  const int p = f.order;
  if (p < 1) throw std::invalid_argument("pairing: kernel order must be >= 1");
  ChaosExpansion out(G.dim);
  for (const auto& [Q, g] : G.terms) {
    if (Q < 1) continue;
    for (int r = 1; r <= std::min(p, Q); ++r) {
      const double c = static_cast<double>(p) *
                       static_cast<double>(factorial(r - 1) * binomial(p - 1, r - 1) *
                                           binomial(Q - 1, r - 1));
      out.add_term(contract_sym(f, g, r), c);
    }
  }
  return out;
}

// Gamma_{l_1}(F) = F_{l_1}; Gamma_{l_1,...,l_{k+1}}(F) = <DF_{l_{k+1}}, -DL^{-1} Gamma_{l_1,...,l_k}(F)>.
inline ChaosExpansion gamma(const ChaosVector& F, const GammaPath& path) {
  F.require_pure();
  for (int c : path.components)
    if (c < 0 || c >= F.size()) throw std::invalid_argument("gamma: component index out of range");
  ChaosExpansion cur = F.components[path.components.front()];
  for (std::size_t k = 1; k < path.components.size(); ++k)
    cur = pairing(F.kernel_of(path.components[k]), cur);
  return cur;
}

// Decomposition of m into unit vectors, sorted ascending (e.g. (2,1) -> 0,0,1).
inline std::vector<int> multi_index_decomposition(const std::vector<int>& m) {
  std::vector<int> slots;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] < 0) throw std::invalid_argument("multi-index entries must be non-negative");
    slots.insert(slots.end(), m[i], static_cast<int>(i));
  }
  if (slots.empty()) throw std::invalid_argument("multi-index must be nonzero");
  return slots;
}

// All distinct orderings of the decomposition, lexicographically.
inline std::vector<std::vector<int>> multi_index_orderings(const std::vector<int>& m) {
  std::vector<int> slots = multi_index_decomposition(m);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(slots);
  } while (std::next_permutation(slots.begin(), slots.end()));
  return out;
}

inline void check_path_matches(const std::vector<int>& m, const GammaPath& path) {
  std::vector<int> sorted = path.components;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != multi_index_decomposition(m))
    throw std::invalid_argument("path does not decompose the multi-index");
}

// kappa_m(F) = (|m|-1)! E[Gamma_{l_1,...,l_{|m|}}(F)] for one decomposition ordering.
inline double cumulant_via_gamma(const ChaosVector& F, const std::vector<int>& m,
                                 const GammaPath& path) {
  check_path_matches(m, path);
  const int n = static_cast<int>(path.components.size());
  return static_cast<double>(factorial(n - 1)) * expectation(gamma(F, path));
}

// Averaged mode: the definition of record. E[Gamma] is not symmetric in the
// ordering for mixed-order vectors, but its average over all distinct
// orderings matches the moment-based cumulant.
inline double cumulant_via_gamma(const ChaosVector& F, const std::vector<int>& m) {
  const auto orderings = multi_index_orderings(m);
  double acc = 0.0;
  for (const auto& ord : orderings) acc += expectation(gamma(F, GammaPath(ord)));
  const int n = static_cast<int>(orderings.front().size());
  return static_cast<double>(factorial(n - 1)) * acc / static_cast<double>(orderings.size());
}

}  // namespace wchaos
