// Seeded random property battery over the library invariants, shared by the
// `verify` CLI command and the test suite. Every check draws its instances
// from an independent substream of the configured seed, so adding or
// reordering checks does not perturb the others.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "wchaos/bounds.hpp"
#include "wchaos/chaos.hpp"
#include "wchaos/cumulants.hpp"
#include "wchaos/malliavin.hpp"
#include "wchaos/montecarlo.hpp"
#include "wchaos/random_instances.hpp"
#include "wchaos/rng.hpp"
#include "wchaos/tensor.hpp"

namespace wchaos {

struct VerifyConfig {
  int instances = 200;
  std::uint64_t seed = 42;
  double tol_rel = 1e-9;
  // negative-control hook: perturbs the closed-form cumulant constant so the
  // oracle-agreement checks must fail
  bool corrupt_constant = false;
};

struct CheckResult {
  std::string name;
  int instances = 0;
  int failures = 0;
  double max_rel_dev = 0.0;

  bool pass() const { return failures == 0; }
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass()) return false;
    return true;
  }
};

namespace detail {

inline bool close_rel(double a, double b, double tol_rel, double tol_abs = 1e-12) {
  return std::abs(a - b) <= std::max(tol_abs, tol_rel * std::max(std::abs(a), std::abs(b)));
}

// reported deviation; differences inside the absolute floor count as zero
inline double dev_rel(double a, double b) {
  const double diff = std::abs(a - b);
  if (diff <= 1e-12) return 0.0;
  return diff / std::max(std::abs(a), std::abs(b));
}

struct CheckRecorder {
  CheckResult result;

  explicit CheckRecorder(std::string name) { result.name = std::move(name); }

  void record(bool ok, double dev = 0.0) {
    ++result.instances;
    if (!ok) ++result.failures;
    result.max_rel_dev = std::max(result.max_rel_dev, dev);
  }
};

}  // namespace detail

inline VerifyReport run_verify(const VerifyConfig& cfg) {
  using detail::CheckRecorder;
  using detail::close_rel;
  using detail::dev_rel;

  VerifyReport report;
  const int n = std::max(1, cfg.instances);
  const double tol = cfg.tol_rel;
  auto sub_rng = [&](int check_index) { return Rng(mix64(cfg.seed ^ (0x1000ULL + check_index))); };
  int check_index = 0;

  {  // contraction is bilinear
    CheckRecorder c("tensor.bilinearity");
    Rng rng = sub_rng(check_index++);
    for (int it = 0; it < n; ++it) {
      const int dim = rng.uniform_int(1, 3);
      const int p = rng.uniform_int(1, 3), q = rng.uniform_int(1, 3);
      const int r = rng.uniform_int(0, std::min(p, q));
      const auto f1 = random_kernel(rng, dim, p), f2 = random_kernel(rng, dim, p);
      const auto g = random_kernel(rng, dim, q);
      const double a = rng.uniform(-2.0, 2.0), b = rng.uniform(-2.0, 2.0);
      SymmetricKernel combo(dim, p);
      add_scaled(combo, f1, a);
      add_scaled(combo, f2, b);
      const auto lhs = contract(combo, g, r);
      const auto t1 = contract(f1, g, r), t2 = contract(f2, g, r);
      const auto rhs = contract(g, combo, r);
      const auto u1 = contract(g, f1, r), u2 = contract(g, f2, r);
      bool ok = true;
      double dev = 0.0;
      for (std::size_t i = 0; i < lhs.values.size(); ++i) {
        const double want_l = a * t1.values[i] + b * t2.values[i];
        const double want_r = a * u1.values[i] + b * u2.values[i];
        if (!close_rel(lhs.values[i], want_l, 1e-10)) ok = false;
        if (!close_rel(rhs.values[i], want_r, 1e-10)) ok = false;
        dev = std::max({dev, dev_rel(lhs.values[i], want_l), dev_rel(rhs.values[i], want_r)});
      }
      c.record(ok, dev);
    }
    report.checks.push_back(c.result);
  }

  {  // ||f (x~)_r g|| <= ||f (x)_r g|| <= ||f|| ||g||
    CheckRecorder c("tensor.norm_chain");
    Rng rng = sub_rng(check_index++);
    for (int it = 0; it < n; ++it) {
      const int dim = rng.uniform_int(1, 4);
      const int p = rng.uniform_int(1, 3), q = rng.uniform_int(1, 3);
      const auto f = random_kernel(rng, dim, p), g = random_kernel(rng, dim, q);
      bool ok = true;
      for (int r = 0; r <= std::min(p, q); ++r) {
        const double sym_n = std::sqrt(norm_sq(contract_sym(f, g, r)));
        const double plain_n = std::sqrt(contraction_norm_sq(f, g, r));
        const double bound = std::sqrt(norm_sq(f) * norm_sq(g));
        if (sym_n > plain_n + 1e-12 || plain_n > bound * (1.0 + 1e-10) + 1e-12) ok = false;
      }
      c.record(ok);
    }
    report.checks.push_back(c.result);
  }

  {  // (2p)! ||f (x~) f||^2 = 2 (p!)^2 ||f||^4 + (p!)^2 sum C(p,r)^2 ||f (x)_r f||^2
    CheckRecorder c("tensor.symmetrization_identity");
    Rng rng = sub_rng(check_index++);
    for (int it = 0; it < n; ++it) {
      const int dim = rng.uniform_int(1, 4);
      const int p = rng.uniform_int(1, 3);
      const auto f = random_kernel(rng, dim, p);
      const double lhs = static_cast<double>(factorial(2 * p)) * norm_sq(contract_sym(f, f, 0));
      const double pf = static_cast<double>(factorial(p) * factorial(p));
      double rhs = 2.0 * pf * norm_sq(f) * norm_sq(f);
      for (int r = 1; r <= p - 1; ++r) {
        const double bin = static_cast<double>(binomial(p, r));
        rhs += pf * bin * bin * contraction_norm_sq(f, f, r);
      }
      c.record(close_rel(lhs, rhs, 1e-10), dev_rel(lhs, rhs));
    }
    report.checks.push_back(c.result);
  }

  {  // symmetrize is idempotent and norm-nonincreasing
    CheckRecorder c("tensor.symmetrize_idempotent");
    Rng rng = sub_rng(check_index++);
    for (int it = 0; it < n; ++it) {
      const int dim = rng.uniform_int(1, 3);
      GeneralTensor t(dim, rng.uniform_int(1, 4));
      for (auto& v : t.values) v = rng.uniform(-1.0, 1.0);
      const auto once = symmetrize(t);
      const auto twice = symmetrize(densify(once));
      bool ok = norm_sq(once) <= norm_sq(t) + 1e-12;
      for (const auto& [idx, v] : once.coeffs)
        if (!close_rel(twice.at(idx), v, 1e-12)) ok = false;
      c.record(ok);
    }
    report.checks.push_back(c.result);
  }

  {  // dense contraction norm equals the Gram-identity route
    CheckRecorder c("tensor.gram_identity");
    Rng rng = sub_rng(check_index++);
    for (int it = 0; it < n; ++it) {
      const int dim = rng.uniform_int(1, 4);
      const int p = rng.uniform_int(1, 3), q = rng.uniform_int(1, 3);
      const auto f = random_kernel(rng, dim, p), g = random_kernel(rng, dim, q);
      const int r = rng.uniform_int(0, std::min(p, q));
      const double a = contraction_norm_sq(f, g, r);
      const double b = contraction_norm_sq_gram(f, g, r);
      c.record(close_rel(a, b, 1e-12), dev_rel(a, b));
    }
    report.checks.push_back(c.result);
  }

  {  // E[I_p(f) I_q(g)] = delta_pq p! <f,g> via product+expectation
    CheckRecorder c("chaos.isometry");
    Rng rng = sub_rng(check_index++);
    for (int it = 0; it < n; ++it) {
      const int dim = rng.uniform_int(1, 4);
      const int p = rng.uniform_int(1, 3), q = rng.uniform_int(1, 3);
      const auto f = random_kernel(rng, dim, p), g = random_kernel(rng, dim, q);
      const double got = expectation(product(ChaosExpansion::pure(f), ChaosExpansion::pure(g)));
      const double want = (p == q) ? static_cast<double>(factorial(p)) * inner(f, g) : 0.0;
      c.record(close_rel(got, want, 1e-10), dev_rel(got, want));
    }
    report.checks.push_back(c.result);
  }

  {  // product commutes and associates
    CheckRecorder c("chaos.product_commutative_associative");
    Rng rng = sub_rng(check_index++);
    const int reps = std::max(1, n / 4);
    for (int it = 0; it < reps; ++it) {
      const int dim = rng.uniform_int(1, 3);
      auto mk = [&]() {
        ChaosExpansion e = ChaosExpansion::constant(dim, rng.uniform(-1.0, 1.0));
        e.add_term(random_kernel(rng, dim, rng.uniform_int(1, 2)), rng.uniform(-1.0, 1.0));
        return e;
      };
      const auto A = mk(), B = mk(), C = mk();
      const auto AB = product(A, B);
      ChaosExpansion comm = AB;
      comm.add(product(B, A), -1.0);
      ChaosExpansion assoc = product(AB, C);
      assoc.add(product(A, product(B, C)), -1.0);
      const double scale = 1.0 + std::sqrt(second_moment(AB));
      const bool ok = std::sqrt(second_moment(comm)) <= 1e-10 * scale &&
                      std::sqrt(second_moment(assoc)) <= 1e-10 * scale;
      c.record(ok);
    }
    report.checks.push_back(c.result);
  }

  {  // chi4(I_p(f)) >= 0
    CheckRecorder c("chaos.fourth_cumulant_nonnegative");
    Rng rng = sub_rng(check_index++);
    for (int it = 0; it < n; ++it) {
      const auto f = random_kernel(rng, rng.uniform_int(1, 4), rng.uniform_int(1, 3));
      c.record(fourth_cumulant_closed(f) >= -1e-12);
    }
    report.checks.push_back(c.result);
  }

  {  // multiplication-formula moments match the Wick oracle
    CheckRecorder c("chaos.moment_vs_wick");
    Rng rng = sub_rng(check_index++);
    const int reps = std::max(1, n / 4);
    for (int it = 0; it < reps; ++it) {
      const auto F = random_pure_vector(rng, 2, 2, 3);
      std::vector<int> orders(F.size());
      for (int i = 0; i < F.size(); ++i) orders[i] = F.order_of(i);
      const auto m = random_multi_index(rng, orders, 3, 6);
      const double a = moment(F, m), b = moments_via_wick(F, m);
      c.record(close_rel(a, b, 1e-10), dev_rel(a, b));
    }
    report.checks.push_back(c.result);
  }

  {  // L^{-1} annihilates constants
    CheckRecorder c("malliavin.pairing_annihilates_constants");
    Rng rng = sub_rng(check_index++);
    for (int it = 0; it < n; ++it) {
      const int dim = rng.uniform_int(1, 3);
      const auto f = random_kernel(rng, dim, rng.uniform_int(1, 3));
      c.record(pairing(f, ChaosExpansion::constant(dim, rng.uniform(-3.0, 3.0))).terms.empty());
    }
    report.checks.push_back(c.result);
  }

  {  // E[<DI_p(f), -DL^{-1}G>] = E[I_p(f)G] - E[I_p(f)]E[G]
    CheckRecorder c("malliavin.pairing_expectation_identity");
    Rng rng = sub_rng(check_index++);
    for (int it = 0; it < n; ++it) {
      const int dim = rng.uniform_int(1, 3);
      const int p = rng.uniform_int(1, 3);
      const auto f = random_kernel(rng, dim, p);
      ChaosExpansion G = ChaosExpansion::constant(dim, rng.uniform(-1.0, 1.0));
      G.add_term(random_kernel(rng, dim, rng.uniform_int(1, 3)), rng.uniform(-1.0, 1.0));
      const double lhs = expectation(pairing(f, G));
      const auto If = ChaosExpansion::pure(f);
      const double rhs = expectation(product(If, G)) - expectation(If) * expectation(G);
      c.record(close_rel(lhs, rhs, 1e-10), dev_rel(lhs, rhs));
    }
    report.checks.push_back(c.result);
  }

  {  // closed-form cumulant (averaged) vs the moment oracle
    CheckRecorder c("cumulant.closed_vs_oracle");
    Rng rng = sub_rng(check_index++);
    for (int it = 0; it < n; ++it) {
      const auto F = random_pure_vector(rng, 3, 3, 4);
      std::vector<int> orders(F.size());
      for (int i = 0; i < F.size(); ++i) orders[i] = F.order_of(i);
      const auto m = random_multi_index(rng, orders, 4, 10);
      double closed = cumulant_closed_form(F, m);
      if (cfg.corrupt_constant) closed *= 1.0 + 1e-3;
      const double oracle = cumulants_from_moments(F, m);
      c.record(close_rel(closed, oracle, tol), dev_rel(closed, oracle));
    }
    report.checks.push_back(c.result);
  }

  {  // gamma route == closed form, ordering by ordering
    CheckRecorder c("cumulant.gamma_vs_closed_orderings");
    Rng rng = sub_rng(check_index++);
    const int reps = std::max(1, n / 2);
    for (int it = 0; it < reps; ++it) {
      const auto F = random_pure_vector(rng, 3, 3, 3);
      std::vector<int> orders(F.size());
      for (int i = 0; i < F.size(); ++i) orders[i] = F.order_of(i);
      const auto m = random_multi_index(rng, orders, 4, 10);
      bool ok = true;
      double dev = 0.0;
      for (const auto& ord : multi_index_orderings(m)) {
        const GammaPath path(ord);
        const double a = cumulant_via_gamma(F, m, path);
        const double b = cumulant_closed_form(F, m, path);
        if (!close_rel(a, b, 1e-10)) ok = false;
        dev = std::max(dev, dev_rel(a, b));
      }
      c.record(ok, dev);
    }
    report.checks.push_back(c.result);
  }

  {  // closed fourth-cumulant identity vs the oracle at m = 4 e_i
    CheckRecorder c("cumulant.fourth_identity_vs_oracle");
    Rng rng = sub_rng(check_index++);
    for (int it = 0; it < n; ++it) {
      const auto f = random_kernel(rng, rng.uniform_int(1, 4), rng.uniform_int(1, 3));
      const auto F = ChaosVector::pure({f});
      const double a = fourth_cumulant_closed(f);
      const double b = cumulants_from_moments(F, {4});
      c.record(close_rel(a, b, 1e-10), dev_rel(a, b));
    }
    report.checks.push_back(c.result);
  }

  {  // Delta_C <= psi
    CheckRecorder c("bounds.delta_le_psi");
    Rng rng = sub_rng(check_index++);
    for (int it = 0; it < n; ++it) {
      const auto F = random_pure_vector(rng, 3, 4, 4);
      const double delta = delta_c(F);
      const double psi = psi_bound(F);
      c.record(delta <= psi * (1.0 + 1e-12) + 1e-12);
    }
    report.checks.push_back(c.result);
  }

  {  // delta pair terms equal the literal two-case expansion
    CheckRecorder c("bounds.pair_term_cross_check");
    Rng rng = sub_rng(check_index++);
    const int reps = std::max(1, n / 2);
    for (int it = 0; it < reps; ++it) {
      const auto F = random_pure_vector(rng, 3, 4, 4);
      const Matrix C = covariance_matrix(F);
      bool ok = true;
      double dev = 0.0;
      for (int i = 0; i < F.size(); ++i)
        for (int j = 0; j < F.size(); ++j) {
          const double term = delta_c_pair_term(F, i, j);
          const int qi = F.order_of(i), qj = F.order_of(j);
          double want;
          if (qi <= qj) {
            want = pair_mean_square(F.kernel_of(i), F.kernel_of(j), C.at(i, j));
          } else {
            const double s = static_cast<double>(qi) / static_cast<double>(qj);
            want = s * s * pair_mean_square(F.kernel_of(j), F.kernel_of(i), 0.0);
          }
          if (!close_rel(term, want, 1e-10)) ok = false;
          dev = std::max(dev, dev_rel(term, want));
        }
      c.record(ok, dev);
    }
    report.checks.push_back(c.result);
  }

  {  // contraction-norm estimates for the pair mean squares
    CheckRecorder c("bounds.pair_estimates");
    Rng rng = sub_rng(check_index++);
    for (int it = 0; it < n; ++it) {
      const int dim = rng.uniform_int(1, 4);
      const auto f = random_kernel(rng, dim, rng.uniform_int(1, 4));
      const auto g = random_kernel(rng, dim, rng.uniform_int(1, 4));
      c.record(pair_estimate_check(f, g).holds);
    }
    report.checks.push_back(c.result);
  }

  {  // each pair mean square is below its fourth-cumulant majorant
    CheckRecorder c("bounds.chi4_majorant_chain");
    Rng rng = sub_rng(check_index++);
    for (int it = 0; it < n; ++it) {
      const int dim = rng.uniform_int(1, 4);
      const auto f = random_kernel(rng, dim, rng.uniform_int(1, 4));
      const auto g = random_kernel(rng, dim, rng.uniform_int(1, 4));
      const auto& lo = f.order <= g.order ? f : g;
      const auto& hi = f.order <= g.order ? g : f;
      const double alpha = (lo.order == hi.order)
                               ? static_cast<double>(factorial(lo.order)) * inner(lo, hi)
                               : 0.0;
      const double m = pair_mean_square(lo, hi, alpha);
      const double maj = chi4_pair_majorant(lo, hi);
      c.record(m <= maj * (1.0 + 1e-10) + 1e-12);
    }
    report.checks.push_back(c.result);
  }

  {  // sampling determinism: prefix property across partitionings
    CheckRecorder c("montecarlo.partition_determinism");
    Rng rng = sub_rng(check_index++);
    const int reps = std::max(1, n / 20);
    for (int it = 0; it < reps; ++it) {
      const auto F = random_pure_vector(rng, 2, 3, 3);
      const std::uint64_t seed = rng.next();
      const auto small = sample(F, 64, seed);
      const auto big = sample(F, 96, seed);
      bool ok = true;
      for (std::size_t i = 0; i < small.values.size(); ++i)
        if (small.values[i] != big.values[i]) ok = false;
      c.record(ok);
    }
    report.checks.push_back(c.result);
  }

  return report;
}

}  // namespace wchaos
