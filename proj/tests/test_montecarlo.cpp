#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "test_util.hpp"
#include "wchaos/cumulants.hpp"
#include "wchaos/montecarlo.hpp"
#include "wchaos/random_instances.hpp"
#include "wchaos/rng.hpp"

using namespace wchaos;
using test_util::rel_close;

namespace {

SymmetricKernel sym01() {
  GeneralTensor t(2, 2);
  t.values[t.flat({0, 1})] = 1.0;
  return symmetrize(t);
}

// H_4 from the derivative formula (-1)^4 e^{x^2/2} d^4/dx^4 e^{-x^2/2},
// expanded by hand: x^4 - 6x^2 + 3.
double hermite4_oracle(double x) { return x * x * x * x - 6.0 * x * x + 3.0; }

}  // namespace

TEST_CASE("hermite: recurrence values") {
  CHECK(hermite(2, 2.0) == 3.0);
  for (double x : {-3.0, 0.0, 0.7, 8.0}) CHECK(hermite(0, x) == 1.0);
  CHECK(hermite(1, 1.25) == 1.25);
  CHECK(rel_close(hermite(4, 1.5), hermite4_oracle(1.5), 1e-14));
  CHECK(hermite4_oracle(1.5) == -5.4375);
  CHECK_THROWS_AS(hermite(33, 0.0), std::invalid_argument);
}

TEST_CASE("sample: order-1 component reproduces the driving normal") {
  const auto F = ChaosVector::pure({SymmetricKernel::unit(1, {0})});
  const auto batch = sample(F, 20000, 7);
  double mean = 0.0;
  for (int s = 0; s < batch.count; ++s) {
    CHECK(batch.at(s, 0) == normal_at(7, s, 0));
    mean += batch.at(s, 0);
  }
  mean /= batch.count;
  CHECK(std::abs(mean) <= 4.0 / std::sqrt(static_cast<double>(batch.count)));
}

TEST_CASE("sample: second-chaos diagonal is xi^2 - 1") {
  const auto F = ChaosVector::pure({SymmetricKernel::unit(1, {0, 0})});
  const auto batch = sample(F, 20000, 11);
  double var = 0.0;
  for (int s = 0; s < batch.count; ++s) {
    const double xi = normal_at(11, s, 0);
    CHECK(batch.at(s, 0) == xi * xi - 1.0);
    var += batch.at(s, 0) * batch.at(s, 0);
  }
  var /= batch.count;
  // Var = 2, fourth moment 60: CI half-width 4 sqrt(60/n) is generous
  CHECK(std::abs(var - 2.0) <= 4.0 * std::sqrt(60.0 / batch.count));
}

TEST_CASE("sample: off-diagonal second chaos is the coordinate product") {
  const auto F = ChaosVector::pure({sym01()});
  const auto batch = sample(F, 5000, 13);
  for (int s = 0; s < batch.count; ++s) {
    const double x0 = normal_at(13, s, 0);
    const double x1 = normal_at(13, s, 1);
    CHECK(rel_close(batch.at(s, 0), x0 * x1, 1e-12));
  }
}

TEST_CASE("sample: bit-for-bit determinism and partition independence") {
  Rng rng(199);
  const auto F = random_pure_vector(rng, 2, 3, 3);
  const auto a = sample(F, 500, 42);
  const auto b = sample(F, 500, 42);
  CHECK(a.values == b.values);

  // prefix of a longer run is identical: per-sample substreams
  const auto longer = sample(F, 800, 42);
  bool prefix_ok = true;
  for (int s = 0; s < 500 * F.size(); ++s)
    if (a.values[s] != longer.values[s]) prefix_ok = false;
  CHECK(prefix_ok);

  const auto other_seed = sample(F, 500, 43);
  CHECK(a.values != other_seed.values);
}

TEST_CASE("empirical_cumulant: variance of a standard normal") {
  const auto F = ChaosVector::pure({SymmetricKernel::unit(1, {0})});
  const auto batch = sample(F, 100000, 42);
  const auto [est, se] = empirical_cumulant(batch, {2});
  CHECK(se > 0.0);
  CHECK(std::abs(est - 1.0) <= 4.0 * se);
}

TEST_CASE("empirical_cumulant: kappa_3 and kappa_4 of the centered chi-square") {
  const auto F = ChaosVector::pure({SymmetricKernel::unit(1, {0, 0})});
  const auto batch = sample(F, 200000, 42);
  const auto [k3, se3] = empirical_cumulant(batch, {3});
  CHECK(std::abs(k3 - 8.0) <= 4.0 * se3);
  const auto [k4, se4] = empirical_cumulant(batch, {4});
  CHECK(std::abs(k4 - 48.0) <= 4.0 * se4);
}

TEST_CASE("empirical_cumulant: mixed third cumulant against the oracle") {
  Rng rng(211);
  const auto f = random_kernel(rng, 2, 1);
  const auto g = random_kernel(rng, 2, 2);
  const auto F = ChaosVector::pure({f, g});
  const double oracle = cumulants_from_moments(F, {2, 1});

  const auto batch = sample(F, 200000, 42);
  const auto [est, se] = empirical_cumulant(batch, {2, 1});
  CHECK(std::abs(est - oracle) <= 4.0 * se);
}

TEST_CASE("empirical_cumulant: preconditions") {
  const auto F = ChaosVector::pure({SymmetricKernel::unit(1, {0})});
  const auto tiny = sample(F, 16, 1);
  CHECK_THROWS_AS(empirical_cumulant(tiny, {2}), std::invalid_argument);
  const auto batch = sample(F, 64, 1);
  CHECK_THROWS_AS(empirical_cumulant(batch, {7}), std::invalid_argument);
}

TEST_CASE("sample covariance approaches the exact covariance") {
  Rng rng(223);
  const auto F = random_pure_vector(rng, 2, 2, 3);
  const auto C = covariance_matrix(F);
  const auto batch = sample(F, 100000, 5);
  for (int i = 0; i < F.size(); ++i)
    for (int j = 0; j < F.size(); ++j) {
      double acc = 0.0;
      for (int s = 0; s < batch.count; ++s) acc += batch.at(s, i) * batch.at(s, j);
      acc /= batch.count;
      // generous CI scale from the second moments
      const double scale = std::sqrt((C.at(i, i) + 1.0) * (C.at(j, j) + 1.0));
      CHECK(std::abs(acc - C.at(i, j)) <= 5.0 * scale / std::sqrt(static_cast<double>(batch.count) / 10.0));
    }
}
