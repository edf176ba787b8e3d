// Symmetric kernels over a finite orthonormal basis and their algebra:
// contractions, symmetrization, inner products and contraction norms.
//
// A SymmetricKernel stores one value per sorted index tuple (the canonical
// representative); the value equals the underlying symmetric function at any
// rearrangement of that tuple. Inner products therefore apply the multinomial
// multiplicity explicitly. GeneralTensor is a dense, possibly unsymmetric
// tensor used for intermediates such as f (x)_r g.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <vector>

#include "wchaos/combinatorics.hpp"

namespace wchaos {

inline std::size_t pow_sz(int base, int exp) {
  std::size_t v = 1;
  for (int i = 0; i < exp; ++i) v *= static_cast<std::size_t>(base);
  return v;
}

struct SymmetricKernel {
  int dim = 1;
  int order = 0;
  // sorted tuple -> value; missing key means 0; exact zeros are not stored
  std::map<std::vector<int>, double> coeffs;

  SymmetricKernel() = default;
  SymmetricKernel(int dim_, int order_) : dim(dim_), order(order_) {
    if (dim < 1) throw std::invalid_argument("SymmetricKernel: dim must be positive");
    if (order < 0) throw std::invalid_argument("SymmetricKernel: order must be non-negative");
  }

  static SymmetricKernel scalar(int dim, double value) {
    SymmetricKernel k(dim, 0);
    k.set({}, value);
    return k;
  }

  // Value 1 at the sorted representative of idx (e.g. {0,0} is e0 (x) e0).
  static SymmetricKernel unit(int dim, std::vector<int> idx) {
    SymmetricKernel k(dim, static_cast<int>(idx.size()));
    k.set(std::move(idx), 1.0);
    return k;
  }

  double at(std::vector<int> idx) const {
    check_tuple(idx);
    std::sort(idx.begin(), idx.end());
    auto it = coeffs.find(idx);
    return it == coeffs.end() ? 0.0 : it->second;
  }

  void set(std::vector<int> idx, double value) {
    check_tuple(idx);
    if (!std::isfinite(value)) throw std::invalid_argument("SymmetricKernel: non-finite value");
    std::sort(idx.begin(), idx.end());
    if (value == 0.0) coeffs.erase(idx);
    else coeffs[std::move(idx)] = value;
  }

  void add(std::vector<int> idx, double value) { set(idx, at(idx) + value); }

  bool is_zero() const { return coeffs.empty(); }

 private:
  void check_tuple(const std::vector<int>& idx) const {
    if (static_cast<int>(idx.size()) != order)
      throw std::invalid_argument("SymmetricKernel: tuple length != order");
    for (int e : idx)
      if (e < 0 || e >= dim) throw std::invalid_argument("SymmetricKernel: index out of range");
  }
};

struct GeneralTensor {
  int dim = 1;
  int order = 0;
  std::vector<double> values;  // dim^order entries, row-major

  GeneralTensor() : values(1, 0.0) {}
  GeneralTensor(int dim_, int order_) : dim(dim_), order(order_) {
    if (dim < 1) throw std::invalid_argument("GeneralTensor: dim must be positive");
    if (order < 0) throw std::invalid_argument("GeneralTensor: order must be non-negative");
    values.assign(pow_sz(dim, order), 0.0);
  }

  std::size_t flat(const std::vector<int>& idx) const {
    std::size_t f = 0;
    for (int e : idx) f = f * static_cast<std::size_t>(dim) + static_cast<std::size_t>(e);
    return f;
  }

  double at(const std::vector<int>& idx) const { return values[flat(idx)]; }
};

inline GeneralTensor densify(const SymmetricKernel& f) {
  GeneralTensor t(f.dim, f.order);
  for (const auto& [idx, v] : f.coeffs) {
    std::vector<int> perm = idx;
    do {
      t.values[t.flat(perm)] = v;
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return t;
}

// f (x)_r g: pairs the last r slots of both kernels (any choice of slots is
// equivalent by symmetry). r=0 is the plain tensor product; r=p=q yields an
// order-0 tensor holding <f,g>.
inline GeneralTensor contract(const SymmetricKernel& f, const SymmetricKernel& g, int r) {
  if (f.dim != g.dim) throw std::invalid_argument("contract: dimension mismatch");
  const int p = f.order, q = g.order;
  if (r < 0 || r > std::min(p, q)) throw std::invalid_argument("contract: r out of range");
  const GeneralTensor df = densify(f), dg = densify(g);
  GeneralTensor out(f.dim, p + q - 2 * r);
  const std::size_t ns = pow_sz(f.dim, p - r);
  const std::size_t nt = pow_sz(f.dim, q - r);
  const std::size_t nu = pow_sz(f.dim, r);
  for (std::size_t s = 0; s < ns; ++s) {
    for (std::size_t t = 0; t < nt; ++t) {
      double acc = 0.0;
      for (std::size_t u = 0; u < nu; ++u) acc += df.values[s * nu + u] * dg.values[t * nu + u];
      out.values[s * nt + t] = acc;
    }
  }
  return out;
}

// Average of T over all order! slot permutations, stored canonically.
inline SymmetricKernel symmetrize(const GeneralTensor& t) {
  SymmetricKernel out(t.dim, t.order);
  if (t.order == 0) {
    out.set({}, t.values[0]);
    return out;
  }
  std::vector<int> idx(t.order, 0);
  do {
    double sum = 0.0;
    std::size_t count = 0;
    std::vector<int> perm = idx;
    do {
      sum += t.values[t.flat(perm)];
      ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    // sum runs over the distinct rearrangements; each appears a!/count times
    // in the full permutation average, so the average is sum/count.
    out.set(idx, sum / static_cast<double>(count));
  } while (next_sorted_tuple(idx, t.dim));
  return out;
}

inline SymmetricKernel contract_sym(const SymmetricKernel& f, const SymmetricKernel& g, int r) {
  return symmetrize(contract(f, g, r));
}

// <f,g> over all ordered tuples = sum over canonical tuples with multiplicity.
inline double inner(const SymmetricKernel& f, const SymmetricKernel& g) {
  if (f.dim != g.dim || f.order != g.order)
    throw std::invalid_argument("inner: dim/order mismatch");
  const SymmetricKernel& a = f.coeffs.size() <= g.coeffs.size() ? f : g;
  const SymmetricKernel& b = (&a == &f) ? g : f;
  double acc = 0.0;
  for (const auto& [idx, v] : a.coeffs) {
    auto it = b.coeffs.find(idx);
    if (it != b.coeffs.end())
      acc += static_cast<double>(tuple_multiplicity(idx)) * v * it->second;
  }
  return acc;
}

inline double norm_sq(const SymmetricKernel& f) { return inner(f, f); }

inline double inner(const GeneralTensor& a, const GeneralTensor& b) {
  if (a.dim != b.dim || a.order != b.order)
    throw std::invalid_argument("inner: dim/order mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) acc += a.values[i] * b.values[i];
  return acc;
}

inline double norm_sq(const GeneralTensor& a) { return inner(a, a); }

// ||f (x)_r g||^2 by direct dense summation.
inline double contraction_norm_sq(const SymmetricKernel& f, const SymmetricKernel& g, int r) {
  return norm_sq(contract(f, g, r));
}

// Same quantity through the Gram identity ||f (x)_r g||^2 = <f (x)_{p-r} f, g (x)_{q-r} g>.
inline double contraction_norm_sq_gram(const SymmetricKernel& f, const SymmetricKernel& g, int r) {
  if (f.dim != g.dim) throw std::invalid_argument("contraction_norm_sq_gram: dimension mismatch");
  if (r < 0 || r > std::min(f.order, g.order))
    throw std::invalid_argument("contraction_norm_sq_gram: r out of range");
  return inner(contract(f, f, f.order - r), contract(g, g, g.order - r));
}

inline SymmetricKernel scaled(const SymmetricKernel& f, double c) {
  SymmetricKernel out(f.dim, f.order);
  if (c == 0.0) return out;
  for (const auto& [idx, v] : f.coeffs) out.coeffs[idx] = c * v;
  return out;
}

// dst += c * src (same dim and order); exact zeros are pruned.
inline void add_scaled(SymmetricKernel& dst, const SymmetricKernel& src, double c) {
  if (dst.dim != src.dim || dst.order != src.order)
    throw std::invalid_argument("add_scaled: dim/order mismatch");
  if (c == 0.0) return;
  for (const auto& [idx, v] : src.coeffs) {
    auto it = dst.coeffs.find(idx);
    double nv = (it == dst.coeffs.end() ? 0.0 : it->second) + c * v;
    if (nv == 0.0) {
      if (it != dst.coeffs.end()) dst.coeffs.erase(it);
    } else if (it == dst.coeffs.end()) {
      dst.coeffs.emplace(idx, nv);
    } else {
      it->second = nv;
    }
  }
}

}  // namespace wchaos
