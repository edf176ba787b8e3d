// Quantitative Gaussian-approximation bounds for pure chaos vectors:
//
//   Delta_C(F) = sqrt( sum_{i,j} E[ (C_ij - <DF_i,DF_j>/q_j)^2 ] ),
//   d_2(F,N) <= Delta_C/2,
//   d_1(F,N) <= ||C^{-1}||_op ||C||_op^{1/2} Delta_C  (+inf for singular C),
//   Delta_C(F) <= psi(chi4_1, var_1, ..., chi4_d, var_d).
//
// Delta_C is computed from first-principles chaos expansions (the pairing
// primitive plus the L^2 isometry); the literal two-case expansion of
// E[(alpha - <DF,DG>/q)^2] is kept alongside as an independent cross-check,
// together with the fourth-cumulant-based estimates it chains into.
#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "wchaos/chaos.hpp"
#include "wchaos/combinatorics.hpp"
#include "wchaos/malliavin.hpp"
#include "wchaos/matrix.hpp"
#include "wchaos/tensor.hpp"

namespace wchaos {

// relative eigenvalue threshold below which C counts as singular
inline constexpr double kSingularRelTol = 1e-12;

inline double opnorm(const Matrix& m) {
  double best = 0.0;
  for (double ev : jacobi_eigenvalues(m)) best = std::max(best, std::abs(ev));
  return best;
}

// E[(C_ij - <DF_i,DF_j>/q_j)^2] for one ordered pair. The normalized bracket
// is exactly the pairing expansion of f_i against I_{q_j}(f_j); its constant
// term equals C_ij, so the difference is centered and the isometry gives the
// second moment. Note the 1/q_j scaling: (i,j) and (j,i) are distinct terms.
inline double delta_c_pair_term(const ChaosVector& F, int i, int j) {
  const Matrix C = covariance_matrix(F);
  ChaosExpansion diff = pairing(F.kernel_of(i), F.components[j]);
  diff.add(ChaosExpansion::constant(F.dim(), C.at(i, j)), -1.0);
  return second_moment(diff);
}

inline double delta_c(const ChaosVector& F) {
  F.require_pure();
  const Matrix C = covariance_matrix(F);
  const int d = F.size();
  double acc = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      ChaosExpansion diff = pairing(F.kernel_of(i), F.components[j]);
      diff.add(ChaosExpansion::constant(F.dim(), C.at(i, j)), -1.0);
      acc += second_moment(diff);
    }
  }
  return std::sqrt(acc);
}

// Literal evaluation of the two-case expansion of E[(alpha - <DF,DG>/q)^2]
// for F = I_p(f), G = I_q(g), p <= q:
//   p <  q:  alpha^2 + p^2 sum_{r=1}^{p}   [(r-1)! C(p-1,r-1) C(q-1,r-1)]^2 (p+q-2r)! ||f (x~)_r g||^2
//   p == q:  (alpha - E[FG])^2 + p^2 sum_{r=1}^{p-1} [(r-1)!]^2 C(p-1,r-1)^4 (2p-2r)!  ||f (x~)_r g||^2
inline double pair_mean_square(const SymmetricKernel& f, const SymmetricKernel& g, double alpha) {
  if (f.dim != g.dim) throw std::invalid_argument("pair_mean_square: dim mismatch");
  const int p = f.order, q = g.order;
  if (p < 1 || p > q) throw std::invalid_argument("pair_mean_square: requires 1 <= p <= q");
  const double pd = static_cast<double>(p);
  if (p < q) {
    double acc = alpha * alpha;
    for (int r = 1; r <= p; ++r) {
      const double coeff = static_cast<double>(factorial(r - 1)) *
                           static_cast<double>(binomial(p - 1, r - 1)) *
                           static_cast<double>(binomial(q - 1, r - 1));
      acc += pd * pd * coeff * coeff * static_cast<double>(factorial(p + q - 2 * r)) *
             norm_sq(contract_sym(f, g, r));
    }
    return acc;
  }
  const double efg = static_cast<double>(factorial(p)) * inner(f, g);
  double acc = (alpha - efg) * (alpha - efg);
  for (int r = 1; r <= p - 1; ++r) {
    const double b = static_cast<double>(binomial(p - 1, r - 1));
    const double coeff = static_cast<double>(factorial(r - 1)) * b * b;
    acc += pd * pd * coeff * coeff * static_cast<double>(factorial(2 * p - 2 * r)) *
           norm_sq(contract_sym(f, g, r));
  }
  return acc;
}

// psi as displayed: the first double sum covers same-order pairs (the
// summand carries no j-dependence, which is the display's own slack), the
// second the mixed-order pairs.
inline double psi_bound(const std::vector<int>& orders, const std::vector<double>& fourth_cumulants,
                        const std::vector<double>& variances) {
  const std::size_t d = orders.size();
  if (fourth_cumulants.size() != d || variances.size() != d)
    throw std::invalid_argument("psi_bound: length mismatch");
  for (double y : variances)
    if (y < 0.0) throw std::invalid_argument("psi_bound: negative variance");
  double acc = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double xi = std::abs(fourth_cumulants[i]);
    for (std::size_t j = 0; j < d; ++j) {
      if (orders[i] == orders[j]) {
        double s = 0.0;
        for (int r = 1; r <= orders[i] - 1; ++r) s += static_cast<double>(binomial(2 * r, r));
        acc += std::sqrt(2.0 * s) * std::sqrt(xi);
      } else {
        acc += std::sqrt(2.0) * std::sqrt(variances[j]) * std::pow(xi, 0.25);
        const int rmax = std::min(orders[i], orders[j]) - 1;
        for (int r = 1; r <= rmax; ++r)
          acc += std::sqrt(2.0 * static_cast<double>(factorial(orders[i] + orders[j] - 2 * r))) *
                 static_cast<double>(binomial(orders[j], r)) * std::sqrt(xi);
      }
    }
  }
  return acc;
}

inline double psi_bound(const ChaosVector& F) {
  F.require_pure();
  const int d = F.size();
  std::vector<int> orders(d);
  std::vector<double> x4(d), var(d);
  const Matrix C = covariance_matrix(F);
  for (int i = 0; i < d; ++i) {
    orders[i] = F.order_of(i);
    x4[i] = fourth_cumulant_closed(F.kernel_of(i));
    var[i] = C.at(i, i);
  }
  return psi_bound(orders, x4, var);
}

inline double d2_bound(const ChaosVector& F) { return 0.5 * delta_c(F); }

inline double d1_bound(const ChaosVector& F) {
  const Matrix C = covariance_matrix(F);
  const auto ev = jacobi_eigenvalues(C);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (double e : ev) {
    lo = std::min(lo, std::abs(e));
    hi = std::max(hi, std::abs(e));
  }
  if (lo <= kSingularRelTol * hi) return std::numeric_limits<double>::infinity();
  return (1.0 / lo) * std::sqrt(hi) * delta_c(F);
}

// Both sides of the contraction-norm estimates for the pair mean squares.
// With p = q:
//   E[(E[FG] - <DF,DG>/p)^2]
//     <= p^2/2 sum_{r=1}^{p-1} (r-1)!^2 C(p-1,r-1)^4 (2p-2r)! (||f (x)_{p-r} f||^2 + ||g (x)_{p-r} g||^2)
// and with p < q:
//   E[(<DF,DG>/q)^2]
//     <= p!^2 C(q-1,p-1)^2 (q-p)! ||f||^2 ||g (x)_{q-p} g||
//      + p^2/2 sum_{r=1}^{p-1} (r-1)!^2 C(p-1,r-1)^2 C(q-1,r-1)^2 (p+q-2r)! (||f (x)_{p-r} f||^2 + ||g (x)_{q-r} g||^2)
struct PairEstimateResult {
  bool equal_orders = false;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

inline PairEstimateResult pair_estimate_check(const SymmetricKernel& f_in,
                                              const SymmetricKernel& g_in) {
  const bool swap = f_in.order > g_in.order;
  const SymmetricKernel& f = swap ? g_in : f_in;
  const SymmetricKernel& g = swap ? f_in : g_in;
  const int p = f.order, q = g.order;
  if (p < 1) throw std::invalid_argument("pair_estimate_check: orders must be >= 1");

  PairEstimateResult res;
  res.equal_orders = (p == q);
  const double pd = static_cast<double>(p);
  if (p == q) {
    res.lhs = pair_mean_square(f, g, static_cast<double>(factorial(p)) * inner(f, g));
    double s = 0.0;
    for (int r = 1; r <= p - 1; ++r) {
      const double b = static_cast<double>(binomial(p - 1, r - 1));
      const double coeff = static_cast<double>(factorial(r - 1)) * b * b;
      s += coeff * coeff * static_cast<double>(factorial(2 * p - 2 * r)) *
           (contraction_norm_sq(f, f, p - r) + contraction_norm_sq(g, g, p - r));
    }
    res.rhs = 0.5 * pd * pd * s;
  } else {
    res.lhs = pair_mean_square(f, g, 0.0);
    const double lead = static_cast<double>(factorial(p) * factorial(p)) *
                        static_cast<double>(binomial(q - 1, p - 1) * binomial(q - 1, p - 1)) *
                        static_cast<double>(factorial(q - p)) * norm_sq(f) *
                        std::sqrt(contraction_norm_sq(g, g, q - p));
    double s = 0.0;
    for (int r = 1; r <= p - 1; ++r) {
      const double coeff = static_cast<double>(factorial(r - 1)) *
                           static_cast<double>(binomial(p - 1, r - 1)) *
                           static_cast<double>(binomial(q - 1, r - 1));
      s += coeff * coeff * static_cast<double>(factorial(p + q - 2 * r)) *
           (contraction_norm_sq(f, f, p - r) + contraction_norm_sq(g, g, q - r));
    }
    res.rhs = lead + 0.5 * pd * pd * s;
  }
  res.holds = res.lhs <= res.rhs * (1.0 + 1e-12) + 1e-12;
  return res;
}

// Fourth-cumulant-based majorants the pair mean squares chain into.
// Same orders:
//   E[(E[FG] - <DF,DG>/p)^2] <= (chi4(F) + chi4(G))/2 * sum_{r=1}^{p-1} C(2r,r).
// Different orders (either normalization):
//   <= E[F^2] sqrt(chi4(G)) + E[G^2] sqrt(chi4(F))
//    + 1/2 sum_{r=1}^{p^q-1} (p+q-2r)! [ C(q,r)^2 chi4(F) + C(p,r)^2 chi4(G) ].
inline double chi4_pair_majorant(const SymmetricKernel& f, const SymmetricKernel& g) {
  const int p = f.order, q = g.order;
  const double x4f = fourth_cumulant_closed(f);
  const double x4g = fourth_cumulant_closed(g);
  if (p == q) {
    double s = 0.0;
    for (int r = 1; r <= p - 1; ++r) s += static_cast<double>(binomial(2 * r, r));
    return 0.5 * (x4f + x4g) * s;
  }
  const double ef2 = static_cast<double>(factorial(p)) * norm_sq(f);
  const double eg2 = static_cast<double>(factorial(q)) * norm_sq(g);
  double acc = ef2 * std::sqrt(x4g) + eg2 * std::sqrt(x4f);
  for (int r = 1; r <= std::min(p, q) - 1; ++r) {
    const double bq = static_cast<double>(binomial(q, r));
    const double bp = static_cast<double>(binomial(p, r));
    acc += 0.5 * static_cast<double>(factorial(p + q - 2 * r)) * (bq * bq * x4f + bp * bp * x4g);
  }
  return acc;
}

struct BoundReport {
  double delta_c = 0.0;
  double psi = 0.0;
  double d2 = 0.0;
  double d1 = 0.0;  // +inf when the covariance is singular
  Matrix covariance;
  std::vector<double> fourth_cumulants;
};

inline BoundReport bound_report(const ChaosVector& F) {
  F.require_pure();
  BoundReport rep;
  rep.covariance = covariance_matrix(F);
  rep.fourth_cumulants.resize(F.size());
  for (int i = 0; i < F.size(); ++i)
    rep.fourth_cumulants[i] = fourth_cumulant_closed(F.kernel_of(i));
  rep.delta_c = delta_c(F);
  rep.psi = psi_bound(F);
  rep.d2 = 0.5 * rep.delta_c;
  const auto ev = jacobi_eigenvalues(rep.covariance);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (double e : ev) {
    lo = std::min(lo, std::abs(e));
    hi = std::max(hi, std::abs(e));
  }
  rep.d1 = (lo <= kSingularRelTol * hi) ? std::numeric_limits<double>::infinity()
                                        : (1.0 / lo) * std::sqrt(hi) * rep.delta_c;
  return rep;
}

}  // namespace wchaos
