// Exact simulation of pure chaos vectors. On the finite basis, the integral
// of a canonical symmetric tensor factors into Hermite polynomials of the
// independent coordinates:
//   I_q(f) = sum_alpha f_alpha (q!/prod a_k!) prod_k H_{a_k}(xi_k),
// with H the probabilists' (monic) Hermite polynomials and a_k the entry
// multiplicities of the sorted tuple alpha. Gaussians come from a
// counter-based generator keyed on (seed, sample, draw), so any partitioning
// of the sample range reproduces the same values.
#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "wchaos/chaos.hpp"
#include "wchaos/combinatorics.hpp"
#include "wchaos/cumulants.hpp"
#include "wchaos/rng.hpp"
#include "wchaos/tensor.hpp"

namespace wchaos {

inline constexpr int kHermiteMaxDegree = 32;

// Probabilists' Hermite polynomial via H_{q+1} = x H_q - q H_{q-1}.
inline double hermite(int q, double x) {
  if (q < 0 || q > kHermiteMaxDegree)
    throw std::invalid_argument("hermite: degree out of range");
  if (q == 0) return 1.0;
  double hm = 1.0, h = x;
  for (int k = 1; k < q; ++k) {
    const double hn = x * h - static_cast<double>(k) * hm;
    hm = h;
    h = hn;
  }
  return h;
}

struct SampleBatch {
  std::uint64_t seed = 0;
  int count = 0;
  int d = 0;
  std::vector<double> values;  // count x d, row-major

  double at(int sample, int component) const {
    return values[static_cast<std::size_t>(sample) * d + component];
  }
};

namespace detail {

struct HermiteTerm {
  double weight = 0.0;                      // f_alpha * q!/prod a_k!
  std::vector<std::pair<int, int>> powers;  // (coordinate, multiplicity)
};

inline std::vector<HermiteTerm> compile_component(const SymmetricKernel& f) {
  std::vector<HermiteTerm> terms;
  const double qfact = static_cast<double>(factorial(f.order));
  for (const auto& [idx, v] : f.coeffs) {
    HermiteTerm t;
    t.powers = entry_multiplicities(idx);
    double mult_denominator = 1.0;
    for (const auto& [coord, a] : t.powers) {
      (void)coord;
      mult_denominator *= static_cast<double>(factorial(a));
    }
    t.weight = v * qfact / mult_denominator;
    terms.push_back(std::move(t));
  }
  return terms;
}

}  // namespace detail

// Draws `count` realizations of the pure vector F. Sample s only ever reads
// the counter stream (seed, s, .), independent of count or evaluation order.
inline SampleBatch sample(const ChaosVector& F, int count, std::uint64_t seed) {
  F.require_pure();
  if (count < 1) throw std::invalid_argument("sample: count must be positive");
  const int d = F.size();
  const int dim = F.dim();

  std::vector<std::vector<detail::HermiteTerm>> compiled;
  compiled.reserve(d);
  for (int i = 0; i < d; ++i) compiled.push_back(detail::compile_component(F.kernel_of(i)));

  SampleBatch batch;
  batch.seed = seed;
  batch.count = count;
  batch.d = d;
  batch.values.resize(static_cast<std::size_t>(count) * d);

  std::vector<double> xi(dim);
  for (int s = 0; s < count; ++s) {
    for (int k = 0; k < dim; ++k) xi[k] = normal_at(seed, static_cast<std::uint64_t>(s), k);
    for (int i = 0; i < d; ++i) {
      double acc = 0.0;
      for (const auto& term : compiled[i]) {
        double prod = term.weight;
        for (const auto& [coord, a] : term.powers) prod *= hermite(a, xi[coord]);
        acc += prod;
      }
      batch.values[static_cast<std::size_t>(s) * d + i] = acc;
    }
  }
  return batch;
}

namespace detail {

// mean of prod_i F_i^{m_i} over samples [begin, end)
inline double empirical_moment(const SampleBatch& b, const std::vector<int>& m, int begin,
                               int end) {
  double acc = 0.0;
  for (int s = begin; s < end; ++s) {
    double prod = 1.0;
    for (int i = 0; i < b.d; ++i)
      for (int k = 0; k < m[i]; ++k) prod *= b.at(s, i);
    acc += prod;
  }
  return acc / static_cast<double>(end - begin);
}

inline double plugin_cumulant(const SampleBatch& b, const std::vector<int>& m, int begin,
                              int end) {
  std::map<std::vector<int>, double> cache;
  const std::vector<int> slots = multi_index_decomposition(m);
  return joint_cumulant_from_moments(slots, b.d, [&](const std::vector<int>& mb) {
    auto it = cache.find(mb);
    if (it == cache.end()) it = cache.emplace(mb, empirical_moment(b, mb, begin, end)).first;
    return it->second;
  });
}

}  // namespace detail

inline constexpr int kStderrBatches = 32;

// Plug-in joint cumulant from empirical moments, with a batch-means standard
// error over 32 non-overlapping sub-batches.
inline std::pair<double, double> empirical_cumulant(const SampleBatch& b,
                                                    const std::vector<int>& m) {
  if (static_cast<int>(m.size()) != b.d)
    throw std::invalid_argument("empirical_cumulant: multi-index length mismatch");
  int total = 0;
  for (int v : m) total += v;
  if (total < 1 || total > 6)
    throw std::invalid_argument("empirical_cumulant: |m| must be between 1 and 6");
  if (b.count < kStderrBatches)
    throw std::invalid_argument("empirical_cumulant: needs at least 32 samples");

  const double estimate = detail::plugin_cumulant(b, m, 0, b.count);

  const int per = b.count / kStderrBatches;
  double mean = 0.0;
  std::vector<double> batch_vals(kStderrBatches);
  for (int k = 0; k < kStderrBatches; ++k) {
    batch_vals[k] = detail::plugin_cumulant(b, m, k * per, (k + 1) * per);
    mean += batch_vals[k];
  }
  mean /= kStderrBatches;
  double var = 0.0;
  for (double v : batch_vals) var += (v - mean) * (v - mean);
  var /= static_cast<double>(kStderrBatches - 1);
  const double stderr_est = std::sqrt(var / kStderrBatches);
  return {estimate, stderr_est};
}

}  // namespace wchaos
