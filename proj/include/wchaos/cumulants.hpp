// Joint cumulants of pure chaos vectors, three ways:
//
//  - cumulant_closed_form: the compact representation
//      kappa_m(F) = (q_{l_{|m|}})! (|m|-1)! sum c_{q,l}(r_2..r_{|m|-1})
//                   < f_{l_1} (x~)_{r_2} ... (x~)_{r_{|m|-1}} f_{l_{|m|-1}}, f_{l_{|m|}} >
//    over admissible contraction tuples. The admissibility condition on r_s
//    and the top of the running binomial in c_{q,l} use the running chain
//    order q_{l_1}+...+q_{l_{s-1}} - 2(r_2+...+r_{s-1}); the regression tests
//    in tests/test_cumulants.cpp pin this choice against the oracle.
//
//  - moments_via_wick + cumulants_from_moments: the ground-truth oracle.
//    Moments are complete-pairing (diagram) sums with no within-factor
//    pairings; cumulants follow by set-partition Moebius inversion
//      kappa = sum_pi (-1)^{|pi|-1} (|pi|-1)! prod_B E[prod_{i in B} F_i].
//
//  - cumulant_via_gamma lives in malliavin.hpp and is the third route.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "wchaos/chaos.hpp"
#include "wchaos/combinatorics.hpp"
#include "wchaos/malliavin.hpp"
#include "wchaos/tensor.hpp"

namespace wchaos {

struct RTuple {
  std::vector<int> r;  // r.front() is r_2
};

namespace detail {

inline void admissible_rec(const std::vector<int>& q, int j, int chain_order,
                           std::vector<int>& r, std::vector<RTuple>& out) {
  const int n = static_cast<int>(q.size());
  if (j == n - 2) {
    if (chain_order == q[n - 1]) out.push_back(RTuple{r});
    return;
  }
  const int fq = q[j + 1];
  for (int rs = 1; rs <= std::min(fq, chain_order); ++rs) {
    const int next_order = chain_order + fq - 2 * rs;
    // intermediate chain orders must stay positive until the final pairing
    if (j <= n - 4 && next_order <= 0) continue;
    r[j] = rs;
    admissible_rec(q, j + 1, next_order, r, out);
  }
}

}  // namespace detail

// All contraction tuples (r_2,..,r_{|m|-1}) compatible with the given order
// sequence: 1 <= r_s <= q_{l_s}, r_s bounded by the running chain order, the
// intermediate chain orders positive, and the final chain order equal to
// q_{l_{|m|}}. An empty list means the ordering contributes 0.
inline std::vector<RTuple> admissible_r_tuples(const std::vector<int>& q_ordering) {
  const int n = static_cast<int>(q_ordering.size());
  if (n < 3) throw std::invalid_argument("admissible_r_tuples: need at least 3 orders");
  for (int q : q_ordering)
    if (q < 1) throw std::invalid_argument("admissible_r_tuples: orders must be >= 1");
  std::vector<RTuple> out;
  std::vector<int> r(n - 2, 0);
  detail::admissible_rec(q_ordering, 0, q_ordering[0], r, out);
  return out;
}

// c_{q,l}(r_2,...,r_s), exact in integer arithmetic. Each step multiplies
//   q_{l_s} (r_s-1)! C(O_{s-1}-1, r_s-1) C(q_{l_s}-1, r_s-1)
// where O_{s-1} is the running chain order before the step.
inline std::int64_t constant_c(const std::vector<int>& q_ordering, const RTuple& t) {
  if (t.r.size() + 1 > q_ordering.size())
    throw std::invalid_argument("constant_c: tuple longer than ordering");
  std::int64_t c = 1;
  int chain_order = q_ordering[0];
  for (std::size_t j = 0; j < t.r.size(); ++j) {
    const int fq = q_ordering[j + 1];
    const int rs = t.r[j];
    c *= static_cast<std::int64_t>(fq) * factorial(rs - 1) * binomial(chain_order - 1, rs - 1) *
         binomial(fq - 1, rs - 1);
    chain_order += fq - 2 * rs;
  }
  return c;
}

// One decomposition ordering of the closed form. |m|=1 falls back to the
// mean and |m|=2 to the covariance entry.
inline double cumulant_closed_form(const ChaosVector& F, const std::vector<int>& m,
                                   const GammaPath& path) {
  F.require_pure();
  check_path_matches(m, path);
  const auto& lam = path.components;
  const int n = static_cast<int>(lam.size());
  if (n == 1) return expectation(F.components[lam[0]]);
  if (n == 2) {
    if (F.order_of(lam[0]) != F.order_of(lam[1])) return 0.0;
    return static_cast<double>(factorial(F.order_of(lam[0]))) *
           inner(F.kernel_of(lam[0]), F.kernel_of(lam[1]));
  }
  std::vector<int> q_ordering(n);
  for (int k = 0; k < n; ++k) q_ordering[k] = F.order_of(lam[k]);
  const int q_last = q_ordering[n - 1];
  double acc = 0.0;
  for (const RTuple& t : admissible_r_tuples(q_ordering)) {
    SymmetricKernel chain = F.kernel_of(lam[0]);
    for (std::size_t j = 0; j < t.r.size(); ++j)
      chain = contract_sym(chain, F.kernel_of(lam[j + 1]), t.r[j]);
    if (chain.order != q_last) continue;  // admissibility already guarantees this
    acc += static_cast<double>(constant_c(q_ordering, t)) * inner(chain, F.kernel_of(lam[n - 1]));
  }
  return static_cast<double>(factorial(q_last)) * static_cast<double>(factorial(n - 1)) * acc;
}

// Averaged mode: the definition of record (mean over all distinct orderings).
inline double cumulant_closed_form(const ChaosVector& F, const std::vector<int>& m) {
  const auto orderings = multi_index_orderings(m);
  double acc = 0.0;
  for (const auto& ord : orderings) acc += cumulant_closed_form(F, m, GammaPath(ord));
  return acc / static_cast<double>(orderings.size());
}

namespace detail {

// Value of one pairing multigraph: indices run over the edges, each factor
// contributes its dense kernel evaluated at the indices of its incident
// edges. Kernels are symmetric, so the slot order inside a factor is free.
inline double multigraph_value(const std::vector<const GeneralTensor*>& dense,
                               const std::vector<std::pair<int, int>>& edges, int dim) {
  const std::size_t n_factors = dense.size();
  std::vector<std::size_t> flat(n_factors);
  std::vector<int> idx(edges.size(), 0);
  double total = 0.0;
  while (true) {
    std::fill(flat.begin(), flat.end(), 0);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      flat[edges[e].first] = flat[edges[e].first] * dim + idx[e];
      flat[edges[e].second] = flat[edges[e].second] * dim + idx[e];
    }
    double prod = 1.0;
    for (std::size_t k = 0; k < n_factors; ++k) prod *= dense[k]->values[flat[k]];
    total += prod;
    std::size_t e = 0;
    while (e < idx.size() && idx[e] == dim - 1) idx[e++] = 0;
    if (e == idx.size()) break;
    ++idx[e];
  }
  return total;
}

struct WickState {
  const std::vector<int>* factor_of = nullptr;
  const std::vector<const GeneralTensor*>* dense = nullptr;
  int dim = 1;
  int n_factors = 0;
  std::vector<int> partner;             // leg -> matched leg or -1
  std::vector<int> rmat;                // upper-triangular pair multiplicities
  std::map<std::vector<int>, double>* memo = nullptr;
  double total = 0.0;

  int rindex(int a, int b) const {
    if (a > b) std::swap(a, b);
    return a * n_factors + b;  // coarse but fine as a key layout
  }

  void run(int a) {
    while (a < static_cast<int>(partner.size()) && partner[a] >= 0) ++a;
    if (a == static_cast<int>(partner.size())) {
      auto it = memo->find(rmat);
      if (it == memo->end()) {
        std::vector<std::pair<int, int>> edges;
        for (int i = 0; i < n_factors; ++i)
          for (int j = i + 1; j < n_factors; ++j)
            for (int c = 0; c < rmat[i * n_factors + j]; ++c) edges.emplace_back(i, j);
        it = memo->emplace(rmat, multigraph_value(*dense, edges, dim)).first;
      }
      total += it->second;
      return;
    }
    const int fa = (*factor_of)[a];
    for (int b = a + 1; b < static_cast<int>(partner.size()); ++b) {
      if (partner[b] >= 0 || (*factor_of)[b] == fa) continue;
      partner[a] = b;
      partner[b] = a;
      ++rmat[rindex(fa, (*factor_of)[b])];
      run(a + 1);
      --rmat[rindex(fa, (*factor_of)[b])];
      partner[a] = -1;
      partner[b] = -1;
    }
  }
};

}  // namespace detail

// E[F^m] as a sum over complete pairings of the integral legs with no
// within-factor pairings (Isserlis / diagram formula). Fully independent of
// the multiplication-formula moment engine.
inline double moments_via_wick(const ChaosVector& F, const std::vector<int>& m,
                               int degree_cap = kDefaultOrderCap) {
  F.require_pure();
  if (static_cast<int>(m.size()) != F.size())
    throw std::invalid_argument("moments_via_wick: multi-index length mismatch");
  std::vector<int> factor_component;
  int degree = 0;
  for (int i = 0; i < F.size(); ++i) {
    if (m[i] < 0) throw std::invalid_argument("moments_via_wick: negative entry");
    for (int k = 0; k < m[i]; ++k) {
      factor_component.push_back(i);
      degree += F.order_of(i);
    }
  }
  if (degree == 0) return 1.0;
  if (degree % 2 == 1) return 0.0;
  if (degree > degree_cap)
    throw OrderCapExceeded("moments_via_wick: total degree " + std::to_string(degree) +
                           " exceeds cap " + std::to_string(degree_cap));

  std::vector<GeneralTensor> component_dense;
  component_dense.reserve(F.size());
  for (int i = 0; i < F.size(); ++i) component_dense.push_back(densify(F.kernel_of(i)));

  const int n_factors = static_cast<int>(factor_component.size());
  std::vector<const GeneralTensor*> dense(n_factors);
  std::vector<int> factor_of;
  for (int k = 0; k < n_factors; ++k) {
    dense[k] = &component_dense[factor_component[k]];
    factor_of.insert(factor_of.end(), F.order_of(factor_component[k]), k);
  }

  std::map<std::vector<int>, double> memo;
  detail::WickState st;
  st.factor_of = &factor_of;
  st.dense = &dense;
  st.dim = F.dim();
  st.n_factors = n_factors;
  st.partner.assign(factor_of.size(), -1);
  st.rmat.assign(static_cast<std::size_t>(n_factors) * n_factors, 0);
  st.memo = &memo;
  st.run(0);
  return st.total;
}

// Moebius inversion over set partitions; block_moment maps a multi-index to
// a joint moment. Shared by the oracle and the empirical estimator.
template <typename MomentFn>
double joint_cumulant_from_moments(const std::vector<int>& slots, int d, MomentFn&& block_moment) {
  double acc = 0.0;
  for_each_set_partition(static_cast<int>(slots.size()),
                         [&](const std::vector<std::vector<int>>& blocks) {
                           double prod = 1.0;
                           for (const auto& block : blocks) {
                             std::vector<int> mb(d, 0);
                             for (int s : block) ++mb[slots[s]];
                             prod *= block_moment(mb);
                           }
                           const int nb = static_cast<int>(blocks.size());
                           const double sign = (nb % 2 == 1) ? 1.0 : -1.0;
                           acc += sign * static_cast<double>(factorial(nb - 1)) * prod;
                         });
  return acc;
}

// Ground-truth joint cumulant: Wick moments + partition inversion. Block
// moments repeat across partitions, so they are cached per call. The slot
// cap keeps the Bell-number partition count tractable.
inline double cumulants_from_moments(const ChaosVector& F, const std::vector<int>& m,
                                     int degree_cap = kDefaultOrderCap) {
  const std::vector<int> slots = multi_index_decomposition(m);
  if (slots.size() > 12)
    throw OrderCapExceeded("cumulants_from_moments: |m| = " + std::to_string(slots.size()) +
                           " exceeds the partition cap 12");
  std::map<std::vector<int>, double> cache;
  return joint_cumulant_from_moments(slots, F.size(), [&](const std::vector<int>& mb) {
    auto it = cache.find(mb);
    if (it == cache.end()) it = cache.emplace(mb, moments_via_wick(F, mb, degree_cap)).first;
    return it->second;
  });
}

}  // namespace wchaos
