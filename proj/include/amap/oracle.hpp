#pragma once

// Brute-force ground truth: every mapping of an n-set (n <= 8) and every
// permutation of a k-set (k <= 9) is visited and classified. Nothing here
// uses generating functions, so it stays an independent check on counting.hpp.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "amap/cycle_set.hpp"
#include "amap/error.hpp"
#include "amap/parallel.hpp"

namespace amap {

inline constexpr std::uint32_t kMaxBruteMappingN = 8;
inline constexpr std::uint32_t kMaxBrutePermutationK = 9;

/// A mapping of {1..n} into itself with its cyclic points and cycle lengths.
struct FunctionalGraph {
  std::uint32_t n = 0;
  std::vector<std::uint32_t> image;          // image[i-1] is f(i), 1-based values
  std::vector<std::uint32_t> cyclic;         // sorted, 1-based
  std::vector<std::uint32_t> cycle_lengths;  // sorted ascending

  std::uint32_t cyclic_count() const { return static_cast<std::uint32_t>(cyclic.size()); }

  bool cycles_in(const CycleSet& set) const {
    return std::all_of(cycle_lengths.begin(), cycle_lengths.end(),
                       [&](std::uint32_t len) { return set.contains(len); });
  }
};

namespace detail {

/// Walks the functional graph of a 0-based image vector. Calls on_cycle(len)
/// once per cycle and marks cyclic points in `on_cycle_point` when non-null.
/// `stamp` and `depth` are scratch buffers of size n.
template <class OnCycle>
void walk_cycles(std::span<const std::uint32_t> image, std::vector<std::uint32_t>& stamp,
                 std::vector<std::uint32_t>& depth, OnCycle&& on_cycle,
                 std::vector<bool>* on_cycle_point = nullptr) {
  const auto n = static_cast<std::uint32_t>(image.size());
  std::fill(stamp.begin(), stamp.end(), 0u);
  for (std::uint32_t start = 0; start < n; ++start) {
    if (stamp[start]) continue;
    const std::uint32_t tag = start + 1;
    std::uint32_t v = start;
    std::uint32_t steps = 0;
    while (!stamp[v]) {
      stamp[v] = tag;
      depth[v] = steps++;
      v = image[v];
    }
    if (stamp[v] == tag) {
      on_cycle(steps - depth[v]);
      if (on_cycle_point) {
        std::uint32_t u = v;
        do {
          (*on_cycle_point)[u] = true;
          u = image[u];
        } while (u != v);
      }
    }
  }
}

}  // namespace detail

/// Decomposes a mapping given by 1-based image values.
inline FunctionalGraph analyze(std::span<const std::uint32_t> image) {
  const auto n = static_cast<std::uint32_t>(image.size());
  detail::require(n >= 1, ErrorCode::invalid_argument, "analyze: empty mapping");
  std::vector<std::uint32_t> zero_based(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    detail::require(image[i] >= 1 && image[i] <= n, ErrorCode::invalid_argument,
                    "analyze: image of " + std::to_string(i + 1) + " is " +
                        std::to_string(image[i]) + ", outside 1.." + std::to_string(n));
    zero_based[i] = image[i] - 1;
  }
  FunctionalGraph g;
  g.n = n;
  g.image.assign(image.begin(), image.end());
  std::vector<std::uint32_t> stamp(n), depth(n);
  std::vector<bool> cyclic(n, false);
  detail::walk_cycles(zero_based, stamp, depth,
                      [&](std::uint32_t len) { g.cycle_lengths.push_back(len); }, &cyclic);
  for (std::uint32_t i = 0; i < n; ++i)
    if (cyclic[i]) g.cyclic.push_back(i + 1);
  std::sort(g.cycle_lengths.begin(), g.cycle_lengths.end());
  return g;
}

struct BruteCensus {
  std::uint64_t total = 0;
  /// per_k[k] = mappings with exactly k cyclic points; index 0 is always 0.
  std::vector<std::uint64_t> per_k;
};

/// Census of all n^n mappings. The index space is split into blocks by the
/// images of the first two points; block histograms are summed, so the
/// result does not depend on the thread count.
inline BruteCensus brute_count_mappings(const CycleSet& set, std::uint32_t n,
                                        unsigned threads = 1) {
  detail::require(n >= 1, ErrorCode::invalid_argument, "brute force: n must be >= 1");
  detail::require(n <= kMaxBruteMappingN, ErrorCode::cap_exceeded,
                  "brute force: n=" + std::to_string(n) + " exceeds cap " +
                      std::to_string(kMaxBruteMappingN));
  std::vector<bool> member(n + 1);
  for (std::uint32_t m = 1; m <= n; ++m) member[m] = set.contains(m);

  const std::uint32_t fixed = std::min<std::uint32_t>(2, n);
  std::size_t blocks = 1;
  for (std::uint32_t i = 0; i < fixed; ++i) blocks *= n;
  std::vector<std::vector<std::uint64_t>> partial(blocks);

  parallel_for(blocks, threads, [&](std::size_t block) {
    std::vector<std::uint64_t> hist(n + 1, 0);
    std::vector<std::uint32_t> image(n, 0), stamp(n), depth(n);
    std::size_t code = block;
    for (std::uint32_t i = 0; i < fixed; ++i) {
      image[i] = static_cast<std::uint32_t>(code % n);
      code /= n;
    }
    while (true) {
      std::uint32_t cyclic = 0;
      bool ok = true;
      detail::walk_cycles(image, stamp, depth, [&](std::uint32_t len) {
        cyclic += len;
        ok = ok && member[len];
      });
      if (ok) ++hist[cyclic];
      // odometer over positions fixed..n-1
      std::uint32_t pos = fixed;
      while (pos < n && ++image[pos] == n) image[pos++] = 0;
      if (pos == n) break;
    }
    partial[block] = std::move(hist);
  });

  BruteCensus out{0, std::vector<std::uint64_t>(n + 1, 0)};
  for (const auto& hist : partial)
    for (std::uint32_t k = 0; k <= n; ++k) out.per_k[k] += hist[k];
  out.total = std::accumulate(out.per_k.begin(), out.per_k.end(), std::uint64_t{0});
  return out;
}

/// Number of permutations of k points whose cycle lengths all lie in A.
inline std::uint64_t brute_count_permutations(const CycleSet& set, std::uint32_t k) {
  detail::require(k <= kMaxBrutePermutationK, ErrorCode::cap_exceeded,
                  "brute force: k=" + std::to_string(k) + " exceeds cap " +
                      std::to_string(kMaxBrutePermutationK));
  if (k == 0) return 1;
  std::vector<std::uint32_t> perm(k), stamp(k), depth(k);
  std::iota(perm.begin(), perm.end(), 0u);
  std::uint64_t count = 0;
  do {
    bool ok = true;
    detail::walk_cycles(perm, stamp, depth,
                        [&](std::uint32_t len) { ok = ok && set.contains(len); });
    if (ok) ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

}  // namespace amap
