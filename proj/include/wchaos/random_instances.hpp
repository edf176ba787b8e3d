// Seeded generators for random kernels, pure chaos vectors and multi-indices.
// Used by the property tests and by the `verify` battery, so instances are
// identical across platforms for a given seed.
#pragma once

#include <vector>

#include "wchaos/chaos.hpp"
#include "wchaos/rng.hpp"
#include "wchaos/tensor.hpp"

namespace wchaos {

// Roughly 3/4 of the canonical tuples get a uniform[-1,1] coefficient.
inline SymmetricKernel random_kernel(Rng& rng, int dim, int order) {
  SymmetricKernel k(dim, order);
  std::vector<int> idx(order, 0);
  while (true) {
    if (rng.uniform() < 0.75) k.set(idx, rng.uniform(-1.0, 1.0));
    if (!next_sorted_tuple(idx, dim)) break;
  }
  if (k.is_zero()) k.set(std::vector<int>(order, 0), 0.5);
  return k;
}

inline ChaosVector random_pure_vector(Rng& rng, int max_d, int max_q, int max_dim) {
  const int d = rng.uniform_int(1, max_d);
  const int dim = rng.uniform_int(1, max_dim);
  std::vector<SymmetricKernel> kernels;
  kernels.reserve(d);
  for (int i = 0; i < d; ++i) kernels.push_back(random_kernel(rng, dim, rng.uniform_int(1, max_q)));
  return ChaosVector::pure(kernels);
}

// Multi-index with 1 <= |m| <= max_total and total degree sum m_i q_i within
// the cap. Degenerate draws are re-rolled.
inline std::vector<int> random_multi_index(Rng& rng, const std::vector<int>& orders,
                                           int max_total, int degree_cap) {
  const int d = static_cast<int>(orders.size());
  while (true) {
    const int total = rng.uniform_int(1, max_total);
    std::vector<int> m(d, 0);
    int degree = 0;
    for (int k = 0; k < total; ++k) {
      const int i = rng.uniform_int(0, d - 1);
      ++m[i];
      degree += orders[i];
    }
    if (degree <= degree_cap) return m;
  }
}

}  // namespace wchaos
