// Mappings whose cycles all have even length: exact counts for small n and
// the approach of the scaled count to its leading term.

#include <cstdio>

#include "amap/amap.hpp"

int main() {
  const auto even = amap::CycleSet::multiples(2);

  for (std::uint64_t n = 1; n <= 10; ++n) {
    const auto r = amap::count_amappings(even, n);
    std::printf("n=%2llu  |V_n| = %s\n", static_cast<unsigned long long>(n),
                r.total.get_str().c_str());
  }

  const auto model = amap::an_model(2);
  const auto table = amap::float_table(even, 10000);
  for (std::uint64_t n : {100, 1000, 10000})
    std::printf("n=%5llu  S(n)/leading = %.12f\n", static_cast<unsigned long long>(n),
                amap::exact_over_asym_ratio(table, model, n));
  return 0;
}
