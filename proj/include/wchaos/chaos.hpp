// Chaos expansions as exact random-variable representations. A ChaosExpansion
// is a finite sum of multiple integrals I_q(f_q) plus a constant term (order
// 0). Products are computed with the multiplication formula
//   I_p(f) I_q(g) = sum_{r=0}^{p^q} r! C(p,r) C(q,r) I_{p+q-2r}(f (x~)_r g),
// so moments of polynomial functionals come out exactly.
#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "wchaos/combinatorics.hpp"
#include "wchaos/matrix.hpp"
#include "wchaos/tensor.hpp"

namespace wchaos {

// Products of many integrals grow combinatorially; the cap turns a silent
// blowup into a diagnosable failure.
inline constexpr int kDefaultOrderCap = 16;

struct OrderCapExceeded : std::runtime_error {
  explicit OrderCapExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct ChaosExpansion {
  int dim = 1;
  std::map<int, SymmetricKernel> terms;  // order -> kernel; zero kernels never stored

  ChaosExpansion() = default;
  explicit ChaosExpansion(int dim_) : dim(dim_) {
    if (dim < 1) throw std::invalid_argument("ChaosExpansion: dim must be positive");
  }

  static ChaosExpansion constant(int dim, double c) {
    ChaosExpansion e(dim);
    if (c != 0.0) e.terms.emplace(0, SymmetricKernel::scalar(dim, c));
    return e;
  }

  static ChaosExpansion pure(const SymmetricKernel& f) {
    ChaosExpansion e(f.dim);
    if (!f.is_zero()) e.terms.emplace(f.order, f);
    return e;
  }

  // this += c * I_order(k)
  void add_term(const SymmetricKernel& k, double c = 1.0) {
    if (k.dim != dim) throw std::invalid_argument("ChaosExpansion::add_term: dim mismatch");
    if (k.is_zero() || c == 0.0) return;
    auto it = terms.find(k.order);
    if (it == terms.end()) {
      terms.emplace(k.order, scaled(k, c));
    } else {
      add_scaled(it->second, k, c);
      if (it->second.is_zero()) terms.erase(it);
    }
  }

  void add(const ChaosExpansion& other, double c = 1.0) {
    if (other.dim != dim) throw std::invalid_argument("ChaosExpansion::add: dim mismatch");
    for (const auto& [q, k] : other.terms) {
      (void)q;
      add_term(k, c);
    }
  }

  double constant_term() const {
    auto it = terms.find(0);
    return it == terms.end() ? 0.0 : it->second.at({});
  }

  int max_order() const { return terms.empty() ? 0 : terms.rbegin()->first; }
};

inline ChaosExpansion product(const ChaosExpansion& F, const ChaosExpansion& G,
                              int order_cap = kDefaultOrderCap) {
  if (F.dim != G.dim) throw std::invalid_argument("product: dim mismatch");
  ChaosExpansion out(F.dim);
  for (const auto& [p, f] : F.terms) {
    for (const auto& [q, g] : G.terms) {
      if (p == 0 || q == 0) {
        // constant factor: plain scaling
        const double c = (p == 0) ? f.at({}) : g.at({});
        out.add_term(p == 0 ? g : f, c);
        continue;
      }
      if (p + q > order_cap)
        throw OrderCapExceeded("product: intermediate order " + std::to_string(p + q) +
                               " exceeds cap " + std::to_string(order_cap));
      for (int r = 0; r <= std::min(p, q); ++r) {
        const double c = static_cast<double>(factorial(r) * binomial(p, r) * binomial(q, r));
        out.add_term(contract_sym(f, g, r), c);
      }
    }
  }
  return out;
}

inline double expectation(const ChaosExpansion& F) { return F.constant_term(); }

// E[F^2] = f_0^2 + sum_q q! ||f_q||^2 (orthogonality and isometry).
inline double second_moment(const ChaosExpansion& F) {
  double acc = 0.0;
  for (const auto& [q, k] : F.terms) acc += static_cast<double>(factorial(q)) * norm_sq(k);
  return acc;
}

struct ChaosVector {
  std::vector<ChaosExpansion> components;

  ChaosVector() = default;
  explicit ChaosVector(std::vector<ChaosExpansion> comps) : components(std::move(comps)) {
    if (components.empty()) throw std::invalid_argument("ChaosVector: empty");
    for (const auto& c : components)
      if (c.dim != components.front().dim)
        throw std::invalid_argument("ChaosVector: components must share dim");
  }

  static ChaosVector pure(const std::vector<SymmetricKernel>& kernels) {
    std::vector<ChaosExpansion> comps;
    comps.reserve(kernels.size());
    for (const auto& k : kernels) {
      if (k.order < 1) throw std::invalid_argument("ChaosVector::pure: order must be >= 1");
      comps.push_back(ChaosExpansion::pure(k));
    }
    return ChaosVector(std::move(comps));
  }

  int dim() const { return components.front().dim; }
  int size() const { return static_cast<int>(components.size()); }

  // pure component: a single kernel of order >= 1
  bool is_pure() const {
    for (const auto& c : components)
      if (c.terms.size() != 1 || c.terms.begin()->first < 1) return false;
    return true;
  }

  int order_of(int i) const {
    require_pure();
    return components[i].terms.begin()->first;
  }

  const SymmetricKernel& kernel_of(int i) const {
    require_pure();
    return components[i].terms.begin()->second;
  }

  void require_pure() const {
    if (!is_pure()) throw std::invalid_argument("ChaosVector: pure components required");
  }
};

// C_ij = q_i! <f_i, f_j> when the orders match; integrals of different
// orders are orthogonal.
inline Matrix covariance_matrix(const ChaosVector& F) {
  F.require_pure();
  const int d = F.size();
  Matrix C(d);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      double v = 0.0;
      if (F.order_of(i) == F.order_of(j))
        v = static_cast<double>(factorial(F.order_of(i))) * inner(F.kernel_of(i), F.kernel_of(j));
      C.at(i, j) = v;
      C.at(j, i) = v;
    }
  return C;
}

// chi_4(I_p(f)) = sum_{r=1}^{p-1} p!^2 C(p,r)^2 { ||f (x)_r f||^2
//                 + C(2p-2r, p-r) ||f (x~)_r f||^2 }  (= E[F^4] - 3 E[F^2]^2).
inline double fourth_cumulant_closed(const SymmetricKernel& f) {
  const int p = f.order;
  if (p < 1) throw std::invalid_argument("fourth_cumulant_closed: order must be >= 1");
  double acc = 0.0;
  for (int r = 1; r <= p - 1; ++r) {
    const double pf = static_cast<double>(factorial(p) * factorial(p)) *
                      static_cast<double>(binomial(p, r) * binomial(p, r));
    const double plain = contraction_norm_sq(f, f, r);
    const double sym = norm_sq(contract_sym(f, f, r));
    acc += pf * (plain + static_cast<double>(binomial(2 * p - 2 * r, p - r)) * sym);
  }
  return acc;
}

// E[F^m] by repeated products followed by expectation; exact.
inline double moment(const ChaosVector& F, const std::vector<int>& m,
                     int order_cap = kDefaultOrderCap) {
  if (static_cast<int>(m.size()) != F.size())
    throw std::invalid_argument("moment: multi-index length mismatch");
  ChaosExpansion acc = ChaosExpansion::constant(F.dim(), 1.0);
  for (int i = 0; i < F.size(); ++i) {
    if (m[i] < 0) throw std::invalid_argument("moment: negative multi-index entry");
    for (int k = 0; k < m[i]; ++k) acc = product(acc, F.components[i], order_cap);
  }
  return expectation(acc);
}

}  // namespace wchaos
