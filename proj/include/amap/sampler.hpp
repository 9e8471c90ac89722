#pragma once

// Uniform A-mappings by rejection and Monte Carlo checks of the law of the
// number of cyclic points.
//
// Random streams: each block of kSamplesPerChunk samples gets its own
// std::mt19937_64 seeded through std::seed_seq with (seed, chunk index).
// Chunks are merged in index order, so statistics depend only on
// (A, n, samples, seed) and never on the number of worker threads.

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "amap/asymptotics.hpp"
#include "amap/counting.hpp"
#include "amap/cycle_set.hpp"
#include "amap/error.hpp"
#include "amap/oracle.hpp"
#include "amap/parallel.hpp"

namespace amap {

inline constexpr std::uint64_t kMaxRejections = 1'000'000;
inline constexpr std::uint64_t kSamplesPerChunk = 4096;
inline constexpr std::uint64_t kMinLambdaSamples = 1000;

using Rng = std::mt19937_64;

/// Generator for substream `stream` of `seed`.
inline Rng substream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

namespace detail {

struct Draw {
  std::uint32_t cyclic = 0;
  std::uint64_t attempts = 0;
};

// Rejection loop on 0-based scratch buffers; returns the cyclic-point count
// of the accepted mapping left in `image`.
inline Draw draw_amapping(const std::vector<bool>& member, std::uint32_t n, Rng& rng,
                          std::vector<std::uint32_t>& image,
                          std::vector<std::uint32_t>& stamp,
                          std::vector<std::uint32_t>& depth) {
  std::uniform_int_distribution<std::uint32_t> pick(0, n - 1);
  for (std::uint64_t attempt = 1; attempt <= kMaxRejections; ++attempt) {
    for (auto& x : image) x = pick(rng);
    std::uint32_t cyclic = 0;
    bool ok = true;
    walk_cycles(image, stamp, depth, [&](std::uint32_t len) {
      cyclic += len;
      ok = ok && len < member.size() && member[len];
    });
    if (ok) return {cyclic, attempt};
  }
  fail(ErrorCode::sampler_exhausted,
       "sampler: no A-mapping accepted in " + std::to_string(kMaxRejections) +
           " attempts at n=" + std::to_string(n) + " (the set of A-mappings may be empty)");
}

inline std::vector<bool> membership(const CycleSet& set, std::uint32_t n) {
  std::vector<bool> member(n + 1, false);
  for (std::uint32_t m = 1; m <= n; ++m) member[m] = set.contains(m);
  return member;
}

}  // namespace detail

/// One uniform draw from the A-mappings of an n-set: images are drawn
/// independently and uniformly and the mapping is kept iff every cycle
/// length lies in A.
inline FunctionalGraph sample_amapping(const CycleSet& set, std::uint32_t n, Rng& rng) {
  detail::require(n >= 1, ErrorCode::invalid_argument, "sampler: n must be >= 1");
  const auto member = detail::membership(set, n);
  std::vector<std::uint32_t> image(n), stamp(n), depth(n);
  detail::draw_amapping(member, n, rng, image, stamp, depth);
  for (auto& x : image) ++x;
  return analyze(image);
}

struct SampleStats {
  std::uint32_t n = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::uint64_t attempts = 0;
  double accepted_rate = 0.0;
  /// lambda_hist[k] = samples with k cyclic points, k = 0..n.
  std::vector<std::uint64_t> lambda_hist;
  /// sup over lattice points of |empirical - exact| CDF of lambda_n / sqrt(n).
  double ks_exact = 0.0;
  /// sup over z of |empirical - limit| CDF; absent for density-zero sets.
  std::optional<double> ks_limit;

  friend bool operator==(const SampleStats&, const SampleStats&) = default;
};

/// Kolmogorov distance between the empirical CDF of lambda/sqrt(n) and the
/// continuous limit law: both one-sided limits at every jump are checked.
inline double ks_to_limit(const std::vector<std::uint64_t>& hist, std::uint64_t samples,
                          double rho) {
  const std::size_t n = hist.size() - 1;
  const double root = std::sqrt(static_cast<double>(n));
  double below = 0.0, sup = 0.0;
  std::uint64_t running = 0;
  for (std::size_t k = 0; k <= n; ++k) {
    running += hist[k];
    const double above = static_cast<double>(running) / static_cast<double>(samples);
    const double g = limit_cdf(rho, static_cast<double>(k) / root);
    sup = std::max({sup, std::abs(above - g), std::abs(below - g)});
    below = above;
  }
  return sup;
}

/// Lattice-point distance between the empirical and exact CDFs of lambda.
inline double ks_to_exact(const std::vector<std::uint64_t>& hist, std::uint64_t samples,
                          const std::vector<double>& pmf) {
  double sup = 0.0, exact = 0.0;
  std::uint64_t running = 0;
  for (std::size_t k = 0; k < hist.size(); ++k) {
    running += hist[k];
    exact += pmf[k];
    sup = std::max(sup, std::abs(static_cast<double>(running) / static_cast<double>(samples) -
                                 exact));
  }
  return sup;
}

inline SampleStats lambda_stats(const CycleSet& set, std::uint32_t n, std::uint64_t samples,
                                std::uint64_t seed, unsigned threads = 1) {
  detail::require(n >= 1, ErrorCode::invalid_argument, "sampler: n must be >= 1");
  detail::require(samples >= kMinLambdaSamples, ErrorCode::invalid_argument,
                  "sampler: need at least " + std::to_string(kMinLambdaSamples) + " samples");
  // Also rejects empty V_n(A) before any sampling.
  const auto pmf = lambda_pmf(float_table(set, n), n);
  const auto member = detail::membership(set, n);

  const std::uint64_t chunks = (samples + kSamplesPerChunk - 1) / kSamplesPerChunk;
  std::vector<std::vector<std::uint64_t>> hists(chunks);
  std::vector<std::uint64_t> attempts(chunks, 0);
  parallel_for(chunks, threads, [&](std::size_t c) {
    Rng rng = substream(seed, c);
    std::vector<std::uint32_t> image(n), stamp(n), depth(n);
    std::vector<std::uint64_t> hist(n + 1, 0);
    const std::uint64_t begin = c * kSamplesPerChunk;
    const std::uint64_t end = std::min(samples, begin + kSamplesPerChunk);
    for (std::uint64_t i = begin; i < end; ++i) {
      const auto d = detail::draw_amapping(member, n, rng, image, stamp, depth);
      ++hist[d.cyclic];
      attempts[c] += d.attempts;
    }
    hists[c] = std::move(hist);
  });

  SampleStats st;
  st.n = n;
  st.samples = samples;
  st.seed = seed;
  st.lambda_hist.assign(n + 1, 0);
  for (std::uint64_t c = 0; c < chunks; ++c) {
    for (std::uint32_t k = 0; k <= n; ++k) st.lambda_hist[k] += hists[c][k];
    st.attempts += attempts[c];
  }
  st.accepted_rate = static_cast<double>(samples) / static_cast<double>(st.attempts);
  st.ks_exact = ks_to_exact(st.lambda_hist, samples, pmf);
  if (sgn(set.density()) > 0)
    st.ks_limit = ks_to_limit(st.lambda_hist, samples, set.density().get_d());
  return st;
}

}  // namespace amap
