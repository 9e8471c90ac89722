// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "amap/amap.hpp"
#include "cli.hpp"
#include "quadrature_oracle.hpp"

using amap::CycleSet;
using Q = mpq_class;

namespace {

const std::vector<const char*> kBattery = {"all",    "mult:2", "mult:3",     "f1:2+1",
                                           "f2:2",   "f2:2,3", "finite:1,2", "finite:3"};

struct Verdict {
  bool pass = true;
  std::string detail;
};

// 1. exact counts and per-k histograms equal enumeration, n = 1..7
Verdict oracle_equivalence() {
  Verdict v;
  int cases = 0;
  for (const char* text : kBattery) {
    const auto set = amap::parse_cycle_set(text);
    const auto table = amap::exact_table(set, 7);
    for (std::uint32_t n = 1; n <= 7; ++n) {
      const auto brute = amap::brute_count_mappings(set, n, 1);
      const auto exact = amap::count_amappings(table, n);
      bool ok = exact.total == static_cast<unsigned long>(brute.total);
      for (std::uint32_t k = 1; k <= n; ++k)
        ok = ok && exact.per_k[k - 1] == static_cast<unsigned long>(brute.per_k[k]);
      if (!ok) {
        v.pass = false;
        v.detail = std::string("mismatch at ") + text + " n=" + std::to_string(n);
        return v;
      }
      ++cases;
    }
  }
  v.detail = std::to_string(cases) + " (A, n) cases, totals and histograms equal";
  return v;
}

// 2. k! p(k) equals the permutation census, k <= 8
Verdict egf_coefficients() {
  for (const char* text : kBattery) {
    const auto set = amap::parse_cycle_set(text);
    const auto table = amap::exact_table(set, 8);
    Q fact = 1;
    for (std::uint32_t k = 0; k <= 8; ++k) {
      if (k) fact *= k;
      const Q lhs = fact * table.p[k];
      if (lhs != Q(amap::brute_count_permutations(set, k)))
        return {false, std::string("mismatch at ") + text + " k=" + std::to_string(k)};
    }
  }
  return {true, "8 sets x k = 0..8 equal"};
}

// 3. exp(log_egf(mult:a)) = (1 - s^a)^{-1/a} to order 200
Verdict gf_identity() {
  for (std::uint64_t a : {2u, 3u, 5u}) {
    const auto lhs = amap::series_exp(amap::log_egf<Q>(CycleSet::multiples(a), 200));
    std::vector<Q> base(201, Q(0));
    base[0] = 1;
    base[a] = -1;
    const auto rhs =
        amap::series_pow(amap::RationalSeries(std::move(base)), Q(-1, static_cast<unsigned long>(a)));
    if (!(lhs == rhs)) return {false, "mismatch for a=" + std::to_string(a)};
  }
  return {true, "a = 2, 3, 5 equal through order 200"};
}

// 4. |V_n(N)| = n^n for n <= 20 and sum_k k a(k,n) = n for n <= 200
Verdict all_maps_identities() {
  const auto table = amap::exact_table(CycleSet::all(), 20);
  for (std::uint64_t n = 1; n <= 20; ++n)
    if (amap::count_amappings(table, n).total != amap::pow_ui(n, n))
      return {false, "count differs from n^n at n=" + std::to_string(n)};
  for (std::uint64_t n = 1; n <= 200; ++n) {
    const auto a = amap::falling_ratios(n);
    Q s = 0;
    for (std::uint64_t k = 1; k <= n; ++k) s += Q(static_cast<unsigned long>(k)) * a[k];
    if (s != Q(static_cast<unsigned long>(n)))
      return {false, "sum k a(k,n) != n at n=" + std::to_string(n)};
  }
  return {true, "n^n through n=20; sum k a(k,n) = n through n=200"};
}

// 5. summation by parts, 500 random cases
Verdict abel_identity() {
  std::vector<amap::ExactTable> tables;
  for (const char* text : kBattery) tables.push_back(amap::exact_table(amap::parse_cycle_set(text), 200));
  std::mt19937_64 rng(20260515);
  for (int trial = 0; trial < 500; ++trial) {
    const auto& t = tables[rng() % tables.size()];
    const std::uint64_t n = 1 + rng() % 200;
    const std::uint64_t m = 1 + rng() % n;
    const auto sides = amap::abel_partial_sum(t, n, m);
    if (sides.lhs != sides.rhs)
      return {false, t.set.to_string() + " n=" + std::to_string(n) + " m=" + std::to_string(m)};
  }
  return {true, "500 random (A, n, m) cases exact"};
}

// 6. a(k,n) <= sqrt(e) exp(-k^2/2n), exhaustive for 1 < k <= n <= 500
Verdict bound_lemma() {
  std::uint64_t violations = 0, checked = 0;
  long double tightest = 1e300L;
  for (std::uint64_t n = 2; n <= 500; ++n) {
    long double log_a = 0.0L;
    for (std::uint64_t k = 2; k <= n; ++k) {
      log_a += std::log1pl(-static_cast<long double>(k - 1) / static_cast<long double>(n));
      const long double log_bound =
          0.5L - static_cast<long double>(k) * static_cast<long double>(k) / (2.0L * n);
      tightest = std::min(tightest, log_bound - log_a);
      violations += log_a > log_bound;
      ++checked;
    }
  }
  std::ostringstream d;
  d << violations << " violations in " << checked << " pairs; smallest log-margin "
    << static_cast<double>(tightest);
  return {violations == 0, d.str()};
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxy / sxx;
}

// 7. |S(n)/leading - 1| decreasing for mult:2 with log-log slope in [-0.65, -0.35]
Verdict count_rate() {
  const auto model = amap::an_model(2);
  const auto grid = amap::cli::default_n_grid();
  const auto table = amap::float_table(CycleSet::multiples(2), grid.back());
  std::vector<double> ln, le;
  bool decreasing = true;
  std::ostringstream d;
  d << "errors";
  for (auto n : grid) {
    const double err = std::abs(amap::exact_over_asym_ratio(table, model, n) - 1.0);
    if (!le.empty() && !(std::log(err) < le.back())) decreasing = false;
    ln.push_back(std::log(static_cast<double>(n)));
    le.push_back(std::log(err));
    d << " " << err;
  }
  const double s = slope(ln, le);
  d << "; slope " << s;
  return {decreasing && s >= -0.65 && s <= -0.35, d.str()};
}

double sup_cdf_gap(const amap::ExactTable& table, std::uint64_t n, const std::vector<std::string>& grid) {
  const amap::LambdaDistribution dist(table, n);
  double sup = 0.0;
  for (const auto& text : grid) {
    Q z;
    amap::parse_rational(text, z);
    sup = std::max(sup, std::abs(dist.cdf(z).get_d() - amap::limit_cdf(0.5, z.get_d())));
  }
  return sup;
}

// 8. exact cdf against the limit on the 50-point grid 0.1, 0.2, ..., 5.0
Verdict distribution_side() {
  const auto grid = amap::cli::default_z_grid();
  const auto table = amap::exact_table(CycleSet::multiples(2), 2000);
  const double small = sup_cdf_gap(table, 200, grid);
  const double large = sup_cdf_gap(table, 2000, grid);
  std::ostringstream d;
  d << "sup at n=200: " << small << ", at n=2000: " << large << " (limit 0.05)";
  return {large < small && small < 0.05 && large < 0.05, d.str()};
}

// 9. constant fitting on mult:2 (K = 2e4) and all (K = 1e4)
Verdict constant_fitting() {
  const auto even = amap::fit_model(amap::float_table(CycleSet::multiples(2), 20000), 0.5);
  const auto all = amap::fit_model(amap::float_table(CycleSet::all(), 10000), 1.0);
  const bool even_ok = even.alpha >= 1.45 && even.alpha <= 1.55 && even.beta &&
                       *even.beta >= 0.8 && *even.beta <= 1.2;
  const bool all_ok = all.alpha >= 1.99 && all.alpha <= 2.01 && all.c >= 0.495 && all.c <= 0.505;
  std::ostringstream d;
  d << "mult:2 alpha=" << even.alpha << " beta=" << (even.beta ? *even.beta : NAN)
    << "; all alpha=" << all.alpha << " c=" << all.c;
  return {even_ok && all_ok, d.str()};
}

// 10. i_mu against quadrature, the shift identity, binomial-coefficient asymptotics
Verdict analytic_consistency() {
  double worst_quad = 0.0, worst_shift = 0.0, worst_lemma = 0.0;
  for (double mu : {-0.5, 0.0, 0.5, 1.0, 2.5, 4.0})
    worst_quad = std::max(worst_quad, std::abs(amap::i_mu(mu) - amap::testing::moment_by_quadrature(mu)));
  for (double rho : {0.5, 1.0 / 3.0, 0.2, 1.0})
    worst_shift =
        std::max(worst_shift, std::abs(amap::i_mu(2.0 + rho) - (1.0 + rho) * amap::i_mu(rho)));
  for (double lam : {1.0 / 3.0, 0.5, 2.0})
    for (std::uint64_t n = 10; n <= 10000; ++n) {
      const auto v = amap::lemma4_coeff(lam, n);
      worst_lemma = std::max(worst_lemma, std::abs(v.exact / v.asym - 1.0) * static_cast<double>(n));
    }
  std::ostringstream d;
  d << "quadrature err " << worst_quad << ", shift err " << worst_shift
    << ", max n*relerr " << worst_lemma << " (limit 3)";
  return {worst_quad <= 1e-10 && worst_shift <= 1e-10 && worst_lemma <= 3.0, d.str()};
}

// 11. sampler: P{lambda = 2} at n = 4 and thread-count independence
Verdict sampler_correctness() {
  const std::uint64_t samples = 100000, seed = 7;
  const auto base = amap::lambda_stats(CycleSet::multiples(2), 4, samples, seed, 1);
  bool identical = true;
  for (unsigned t : {2u, 4u})
    identical = identical && amap::lambda_stats(CycleSet::multiples(2), 4, samples, seed, t) == base;
  const double p = 16.0 / 19.0;
  const double sd = std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
  const double hat = static_cast<double>(base.lambda_hist[2]) / static_cast<double>(samples);
  std::ostringstream d;
  d << "P(lambda=2)=" << hat << " vs 16/19, " << std::abs(hat - p) / sd << " sd; reruns at 1/2/4 threads "
    << (identical ? "identical" : "differ");
  return {std::abs(hat - p) <= 3.0 * sd && identical, d.str()};
}

// 12. sandwich bounds for mu in {1/2, 5/2}, n in {1e3, 1e4, 1e5}
Verdict sandwich() {
  int held = 0;
  std::string failed;
  for (double mu : {0.5, 2.5})
    for (std::uint64_t n : {1000u, 10000u, 100000u}) {
      const auto rep = amap::diagnostics(mu, n, 0.999);
      if (rep.pass()) ++held;
      else failed += " mu=" + std::to_string(mu) + ",n=" + std::to_string(n);
    }
  return {held == 6, std::to_string(held) + "/6 cases hold" + failed};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"oracle equivalence", oracle_equivalence},
      {"EGF coefficients", egf_coefficients},
      {"generating-function identity", gf_identity},
      {"all-maps identities", all_maps_identities},
      {"summation by parts", abel_identity},
      {"bound lemma", bound_lemma},
      {"count-side rate", count_rate},
      {"distribution side", distribution_side},
      {"constant fitting", constant_fitting},
      {"analytic self-consistency", analytic_consistency},
      {"sampler correctness", sampler_correctness},
      {"diagnostics sandwich", sandwich},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !v.pass;
    std::printf("%s %2zu %-28s %s [%.1fs]\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                v.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures ? 1 : 0;
}
