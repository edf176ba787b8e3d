#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <vector>

#include "test_util.hpp"
#include "wchaos/cumulants.hpp"
#include "wchaos/malliavin.hpp"
#include "wchaos/random_instances.hpp"
#include "wchaos/rng.hpp"

using namespace wchaos;
using test_util::rel_close;

namespace {

// ---- transcription foils for the closed form ----
// Two plausible mis-transcriptions: an admissibility bound that keeps only
// the first and last orders of the running sum, and a constant recursion
// that carries the new order inside the running binomial top. Both disagree
// with the moment oracle; the tests below pin the divergence so the
// corrected forms cannot silently regress.

std::vector<std::vector<int>> admissible_foil_bound(const std::vector<int>& q) {
  const int n = static_cast<int>(q.size());
  int sum_first = 0;
  for (int k = 0; k < n - 1; ++k) sum_first += q[k];
  std::vector<std::vector<int>> out;
  const int t2 = sum_first - q[n - 1];
  if (t2 < 0 || t2 % 2 != 0) return out;
  const int target = t2 / 2;

  std::vector<int> r(n - 2, 1);
  while (true) {
    const int sum = std::accumulate(r.begin(), r.end(), 0);
    bool ok = (sum == target);
    if (ok) {  // (iii): strict partial-sum bounds for s = 2..n-2
      int ps = 0, qs = q[0];
      for (int j = 0; j <= n - 4 && ok; ++j) {
        ps += r[j];
        qs += q[j + 1];
        if (2 * ps >= qs) ok = false;
      }
    }
    if (ok) {  // foil bound: r_s <= q_{l_1} + q_{l_{s-1}} - 2(r_2+..+r_{s-1})
      int prev = r[0];
      for (int j = 1; j <= n - 3 && ok; ++j) {
        if (r[j] > q[0] + q[j] - 2 * prev) ok = false;
        prev += r[j];
      }
    }
    if (ok) out.push_back(r);
    int j = 0;
    while (j < n - 2 && r[j] == q[j + 1]) r[j++] = 1;
    if (j == n - 2) break;
    ++r[j];
  }
  return out;
}

std::int64_t constant_c_foil_top(const std::vector<int>& q, const std::vector<int>& r) {
  std::int64_t c = 1;
  int chain = q[0];
  for (std::size_t j = 0; j < r.size(); ++j) {
    const int fq = q[j + 1];
    const int rs = r[j];
    const int top = (j == 0) ? q[0] - 1 : chain + fq - 1;  // base step unchanged
    c *= static_cast<std::int64_t>(fq) * factorial(rs - 1) * binomial(top, rs - 1) *
         binomial(fq - 1, rs - 1);
    chain += fq - 2 * rs;
  }
  return c;
}

double closed_form_single_component(const std::vector<int>& q, const ChaosVector& F,
                                    bool foil_top) {
  // all orderings coincide for a single component
  const int n = static_cast<int>(q.size());
  double acc = 0.0;
  for (const RTuple& t : admissible_r_tuples(q)) {
    SymmetricKernel chain = F.kernel_of(0);
    for (std::size_t j = 0; j < t.r.size(); ++j)
      chain = contract_sym(chain, F.kernel_of(0), t.r[j]);
    const double c = foil_top ? static_cast<double>(constant_c_foil_top(q, t.r))
                                 : static_cast<double>(constant_c(q, t));
    acc += c * inner(chain, F.kernel_of(0));
  }
  return static_cast<double>(factorial(q[n - 1])) * static_cast<double>(factorial(n - 1)) * acc;
}

}  // namespace

TEST_CASE("admissible_r_tuples: worked examples") {
  const auto t222 = admissible_r_tuples({2, 2, 2});
  REQUIRE(t222.size() == 1);
  CHECK(t222[0].r == std::vector<int>({1}));

  CHECK(admissible_r_tuples({1, 1, 2}).empty());

  const auto t2222 = admissible_r_tuples({2, 2, 2, 2});
  REQUIRE(t2222.size() == 1);
  CHECK(t2222[0].r == std::vector<int>({1, 1}));

  const auto t3333 = admissible_r_tuples({3, 3, 3, 3});
  REQUIRE(t3333.size() == 2);
  CHECK(t3333[0].r == std::vector<int>({1, 2}));
  CHECK(t3333[1].r == std::vector<int>({2, 1}));
}

TEST_CASE("admissible_r_tuples: the new contraction never exceeds the chain order") {
  // with orders (1,5,2,2) the tuple (2,1) would contract two slots of an
  // order-1 kernel; only (1,2) survives
  const auto tuples = admissible_r_tuples({1, 5, 2, 2});
  REQUIRE(tuples.size() == 1);
  CHECK(tuples[0].r == std::vector<int>({1, 2}));
}

TEST_CASE("constant_c: base relation and one recursion step") {
  CHECK(constant_c({2, 2, 2}, RTuple{{1}}) == 2);
  CHECK(constant_c({2, 1, 1}, RTuple{{1}}) == 1);
  CHECK(constant_c({2, 2, 2, 2}, RTuple{{1, 1}}) == 4);
}

TEST_CASE("closed form: kappa_3 and kappa_4 of a second-chaos variable") {
  const auto F = ChaosVector::pure({SymmetricKernel::unit(1, {0, 0})});
  CHECK(rel_close(cumulant_closed_form(F, {3}), 8.0, 1e-12));
  // 2! * 3! * c(1,1)=4 * <f (x~)_1 f (x~)_1 f, f> = 48
  CHECK(rel_close(cumulant_closed_form(F, {4}), 48.0, 1e-12));
  CHECK(rel_close(cumulants_from_moments(F, {4}), 48.0, 1e-10));
}

TEST_CASE("closed form: mixed-order per-ordering values") {
  Rng rng(131);
  const auto f = random_kernel(rng, 2, 1);
  const auto g = random_kernel(rng, 2, 2);
  const auto F = ChaosVector::pure({f, g});
  const double c = inner(contract_sym(f, f, 0), g);

  const std::vector<int> m = {2, 1};
  const auto orderings = multi_index_orderings(m);
  const double v001 = cumulant_closed_form(F, m, GammaPath(orderings[0]));
  const double v010 = cumulant_closed_form(F, m, GammaPath(orderings[1]));
  const double v100 = cumulant_closed_form(F, m, GammaPath(orderings[2]));
  CHECK(rel_close(v001, 0.0, 1e-12));
  CHECK(rel_close(v010, 4.0 * c, 1e-10));
  CHECK(rel_close(v100, 2.0 * c, 1e-10));
  CHECK(rel_close(cumulant_closed_form(F, m), 2.0 * c, 1e-10));
}

TEST_CASE("closed form: Gaussian cumulants vanish beyond order 2") {
  const auto F = ChaosVector::pure({SymmetricKernel::unit(1, {0})});
  CHECK(cumulant_closed_form(F, {4}) == 0.0);
  CHECK(cumulant_closed_form(F, {3}) == 0.0);
}

TEST_CASE("moments_via_wick: basic pairings") {
  const auto gauss = ChaosVector::pure({SymmetricKernel::unit(1, {0})});
  CHECK(moments_via_wick(gauss, {2}) == 1.0);

  const auto chisq = ChaosVector::pure({SymmetricKernel::unit(1, {0, 0})});
  CHECK(moments_via_wick(chisq, {2}) == 2.0);
  CHECK(moments_via_wick(chisq, {4}) == 60.0);
  CHECK(moments_via_wick(chisq, {3}) == 8.0);
  // odd total degree vanishes
  CHECK(moments_via_wick(ChaosVector::pure({SymmetricKernel::unit(2, {0})}), {3}) == 0.0);
  // degree cap
  CHECK_THROWS_AS(moments_via_wick(chisq, {9}), OrderCapExceeded);
}

TEST_CASE("cumulants_from_moments: examples") {
  Rng rng(137);
  // second cumulant of a centered variable is its second moment
  const auto f = random_kernel(rng, 3, 2);
  const auto F = ChaosVector::pure({f});
  CHECK(rel_close(cumulants_from_moments(F, {2}), moments_via_wick(F, {2}), 1e-12));

  const auto chisq = ChaosVector::pure({SymmetricKernel::unit(1, {0, 0})});
  CHECK(rel_close(cumulants_from_moments(chisq, {4}), 48.0, 1e-12));

  const auto f1 = random_kernel(rng, 2, 1);
  const auto g2 = random_kernel(rng, 2, 2);
  const auto V = ChaosVector::pure({f1, g2});
  CHECK(rel_close(cumulants_from_moments(V, {2, 1}),
                  2.0 * inner(contract_sym(f1, f1, 0), g2), 1e-10));
}

TEST_CASE("regression: the admissibility bound needs the full running order (kappa_5)") {
  // orders (2,2,2,2,2): the foil bound drops the middle orders and
  // empties the admissible set, predicting kappa_5 = 0; the oracle says 384.
  const std::vector<int> q(5, 2);
  CHECK(admissible_foil_bound(q).empty());

  const auto corrected = admissible_r_tuples(q);
  REQUIRE(corrected.size() == 1);
  CHECK(corrected[0].r == std::vector<int>({1, 1, 1}));

  const auto F = ChaosVector::pure({SymmetricKernel::unit(1, {0, 0})});
  const double oracle = cumulants_from_moments(F, {5});
  CHECK(rel_close(oracle, 384.0, 1e-10));
  CHECK(rel_close(cumulant_closed_form(F, {5}), 384.0, 1e-10));
  CHECK(rel_close(cumulant_via_gamma(F, {5}), 384.0, 1e-10));
}

TEST_CASE("regression: the constant recursion binomial top is the running order (r_s > 1)") {
  // orders (3,3,3,3) admit the tuple (1,2); there the foil binomial top
  // evaluates C(6,1) where the running chain order gives C(3,1).
  const std::vector<int> q(4, 3);
  const auto F = ChaosVector::pure({SymmetricKernel::unit(1, {0, 0, 0})});

  const double oracle = cumulants_from_moments(F, {4});
  CHECK(rel_close(oracle, 3240.0, 1e-10));

  const double corrected = closed_form_single_component(q, F, /*foil_top=*/false);
  const double foil = closed_form_single_component(q, F, /*foil_top=*/true);
  CHECK(rel_close(corrected, 3240.0, 1e-10));
  CHECK(rel_close(foil, 5184.0, 1e-10));
  CHECK(!rel_close(foil, oracle, 1e-6));

  CHECK(rel_close(cumulant_closed_form(F, {4}), corrected, 1e-12));
}

TEST_CASE("closed form (averaged) equals the moment oracle on random instances") {
  Rng rng(139);
  for (int rep = 0; rep < 40; ++rep) {
    const auto F = random_pure_vector(rng, 3, 3, 4);
    std::vector<int> orders(F.size());
    for (int i = 0; i < F.size(); ++i) orders[i] = F.order_of(i);
    const auto m = random_multi_index(rng, orders, 4, 12);
    CHECK(rel_close(cumulant_closed_form(F, m), cumulants_from_moments(F, m), 1e-9));
  }
}

TEST_CASE("gamma route equals closed form ordering by ordering") {
  Rng rng(149);
  for (int rep = 0; rep < 25; ++rep) {
    const auto F = random_pure_vector(rng, 3, 3, 3);
    std::vector<int> orders(F.size());
    for (int i = 0; i < F.size(); ++i) orders[i] = F.order_of(i);
    const auto m = random_multi_index(rng, orders, 4, 10);
    for (const auto& ord : multi_index_orderings(m)) {
      const GammaPath path(ord);
      CHECK(rel_close(cumulant_via_gamma(F, m, path), cumulant_closed_form(F, m, path), 1e-10));
    }
  }
}

TEST_CASE("the two moment engines agree") {
  Rng rng(151);
  for (int rep = 0; rep < 20; ++rep) {
    const auto F = random_pure_vector(rng, 2, 2, 3);
    std::vector<int> orders(F.size());
    for (int i = 0; i < F.size(); ++i) orders[i] = F.order_of(i);
    const auto m = random_multi_index(rng, orders, 3, 6);
    CHECK(rel_close(moments_via_wick(F, m), moment(F, m), 1e-10));
  }
}

TEST_CASE("cumulant multilinearity under kernel scaling") {
  Rng rng(157);
  for (int rep = 0; rep < 15; ++rep) {
    const auto F = random_pure_vector(rng, 2, 2, 3);
    std::vector<int> orders(F.size());
    for (int i = 0; i < F.size(); ++i) orders[i] = F.order_of(i);
    const auto m = random_multi_index(rng, orders, 3, 8);
    const double t = rng.uniform(0.5, 2.0);

    std::vector<SymmetricKernel> kernels;
    for (int i = 0; i < F.size(); ++i) kernels.push_back(F.kernel_of(i));
    kernels[0] = scaled(kernels[0], t);
    const auto G = ChaosVector::pure(kernels);

    const double base = cumulants_from_moments(F, m);
    const double scaledv = cumulants_from_moments(G, m);
    CHECK(rel_close(scaledv, std::pow(t, m[0]) * base, 1e-9));
  }
}
