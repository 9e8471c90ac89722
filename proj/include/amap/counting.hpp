#pragma once

// Exact and floating-point counting of A-mappings.
//
// p(k) = [s^k] exp(sum_{m in A} s^m/m), b(k) = k p(k), B(k) = b(1)+...+b(k),
// a(k,n) = (1 - 1/n)(1 - 2/n)...(1 - (k-1)/n).
//
// The number of A-mappings of an n-set with exactly k cyclic points is
//   T(k,n) = n^{n-1} a(k,n) b(k) = n^{n-k} C(n-1,k-1) q(k),
// where q(k) = k! p(k) counts A-permutations of k points; the total is the
// sum over k. The scaled sum S(n) = sum_k a(k,n) b(k) = total / n^{n-1} is
// what the float mode evaluates for large n.

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "amap/bignum.hpp"
#include "amap/cycle_set.hpp"
#include "amap/error.hpp"
#include "amap/qseries.hpp"

namespace amap {

enum class Mode { exact, floating };

/// Per-k values p, b, B for one cycle set, indices 0..order.
/// T = mpq_class is the exact mode, T = double the float mode.
template <SeriesCoeff T>
struct CountTable {
  CycleSet set;
  std::size_t order = 0;
  std::vector<T> p;
  std::vector<T> b;
  std::vector<T> B;
  /// q(k) = k! p(k); filled in exact mode only.
  std::vector<mpz_class> perm_counts;

  static constexpr bool is_exact = std::is_same_v<T, mpq_class>;

  void check_index(std::size_t k) const {
    detail::require(k <= order, ErrorCode::invalid_argument,
                    "index " + std::to_string(k) + " beyond coefficient table order " +
                        std::to_string(order) + " (no extrapolation)");
  }
};

using ExactTable = CountTable<mpq_class>;
using FloatTable = CountTable<double>;

namespace detail {

// q(n) = sum_{j in A, j<=n} (n-1)!/(n-j)! q(n-j), evaluated Horner-style from
// j = n down to 1 so each step is one big-by-small multiply and one add.
inline std::vector<mpz_class> permutation_counts(const CycleSet& set,
                                                 std::size_t order) {
  std::vector<bool> member(order + 1);
  for (std::size_t j = 1; j <= order; ++j) member[j] = set.contains(j);
  std::vector<mpz_class> q(order + 1);
  q[0] = 1;
  mpz_class acc;
  for (std::size_t n = 1; n <= order; ++n) {
    acc = 0;
    for (std::size_t j = n; j >= 1; --j) {
      acc *= static_cast<unsigned long>(n - j);
      if (member[j]) acc += q[n - j];
    }
    q[n] = acc;
  }
  return q;
}

template <class T>
void fill_derived(CountTable<T>& t) {
  t.b.assign(t.order + 1, T(0));
  t.B.assign(t.order + 1, T(0));
  for (std::size_t k = 1; k <= t.order; ++k) {
    t.b[k] = T(k) * t.p[k];
    t.B[k] = t.B[k - 1] + t.b[k];
  }
}

}  // namespace detail

/// Exact coefficient table. p(k) equals the coefficients of
/// series_exp(log_egf(A, K)); it is assembled from the integer counts q(k).
inline ExactTable exact_table(const CycleSet& set, std::size_t order) {
  detail::require(order >= 1, ErrorCode::invalid_argument,
                  "coefficient table order must be >= 1");
  ExactTable t{set, order, {}, {}, {}, detail::permutation_counts(set, order)};
  t.p.resize(order + 1);
  mpz_class fact = 1;
  for (std::size_t k = 0; k <= order; ++k) {
    if (k > 0) fact *= static_cast<unsigned long>(k);
    t.p[k] = ratio(t.perm_counts[k], fact);
  }
  detail::fill_derived(t);
  return t;
}

/// Double-precision table from the same exp recurrence. All terms are
/// nonnegative, so there is no cancellation.
inline FloatTable float_table(const CycleSet& set, std::size_t order) {
  detail::require(order >= 1, ErrorCode::invalid_argument,
                  "coefficient table order must be >= 1");
  const auto g = series_exp(log_egf<double>(set, order));
  FloatTable t{set, order, std::vector<double>(g.coeffs().begin(), g.coeffs().end()),
               {}, {}, {}};
  detail::fill_derived(t);
  return t;
}

template <SeriesCoeff T>
CountTable<T> coeff_table(const CycleSet& set, std::size_t order) {
  if constexpr (std::is_same_v<T, mpq_class>)
    return exact_table(set, order);
  else
    return float_table(set, order);
}

namespace detail {

inline void check_kn(std::uint64_t k, std::uint64_t n) {
  require(k >= 1 && k <= n, ErrorCode::invalid_argument,
          "need 1 <= k <= n, got k=" + std::to_string(k) + ", n=" + std::to_string(n));
}

}  // namespace detail

/// a(k,n) exactly.
inline mpq_class falling_ratio(std::uint64_t k, std::uint64_t n) {
  detail::check_kn(k, n);
  mpz_class num = 1;
  for (std::uint64_t j = 1; j < k; ++j) num *= static_cast<unsigned long>(n - j);
  return ratio(num, pow_ui(n, k - 1));
}

/// a(k,n) as exp(lnG(n) - lnG(n-k+1) - (k-1) ln n); no underflow of the
/// running product even for k near n.
inline double falling_ratio_float(std::uint64_t k, std::uint64_t n) {
  detail::check_kn(k, n);
  const double nd = static_cast<double>(n);
  return std::exp(std::lgamma(nd) - std::lgamma(nd - static_cast<double>(k) + 1.0) -
                  static_cast<double>(k - 1) * std::log(nd));
}

/// All a(k,n), k = 1..n, exactly; index 0 unused.
inline std::vector<mpq_class> falling_ratios(std::uint64_t n) {
  detail::require(n >= 1, ErrorCode::invalid_argument, "n must be >= 1");
  std::vector<mpq_class> a(n + 1);
  a[1] = 1;
  for (std::uint64_t k = 1; k < n; ++k) a[k + 1] = a[k] * ratio(n - k, n);
  return a;
}

/// Number of A-mappings of an n-set with exactly k cyclic points.
inline mpz_class term_count(std::uint64_t k, std::uint64_t n, const ExactTable& table) {
  detail::check_kn(k, n);
  table.check_index(k);
  return pow_ui(n, n - k) * binomial(n - 1, k - 1) * table.perm_counts[k];
}

struct ExactCountResult {
  std::uint64_t n = 0;
  mpz_class total;
  /// per_k[k - 1] = T(k, n), k = 1..n.
  std::vector<mpz_class> per_k;
};

inline ExactCountResult count_amappings(const ExactTable& table, std::uint64_t n) {
  detail::require(n >= 1, ErrorCode::invalid_argument, "n must be >= 1");
  table.check_index(n);
  ExactCountResult r{n, 0, {}};
  r.per_k.reserve(n);
  for (std::uint64_t k = 1; k <= n; ++k) {
    r.per_k.push_back(term_count(k, n, table));
    r.total += r.per_k.back();
  }
  return r;
}

inline ExactCountResult count_amappings(const CycleSet& set, std::uint64_t n) {
  detail::require(n >= 1, ErrorCode::invalid_argument, "n must be >= 1");
  return count_amappings(exact_table(set, n), n);
}

/// S(n) = sum_{k<=n} a(k,n) b(k), exactly.
inline mpq_class scaled_sum(const ExactTable& table, std::uint64_t n) {
  table.check_index(n);
  const auto a = falling_ratios(n);
  mpq_class s = 0;
  for (std::uint64_t k = 1; k <= n; ++k) s += a[k] * table.b[k];
  return s;
}

/// S(n) in double precision.
inline double scaled_sum(const FloatTable& table, std::uint64_t n) {
  detail::require(n >= 1, ErrorCode::invalid_argument, "n must be >= 1");
  table.check_index(n);
  double s = 0.0;
  for (std::uint64_t k = 1; k <= n; ++k)
    if (table.b[k] != 0.0) s += falling_ratio_float(k, n) * table.b[k];
  return s;
}

struct AbelSides {
  mpq_class lhs;
  mpq_class rhs;
};

/// Both sides of the summation-by-parts identity
///   sum_{k<=m} a(k,n) b(k) = a(m,n) B(m) + (1/n) sum_{k<m} a(k,n) k B(k),
/// each evaluated on its own.
inline AbelSides abel_partial_sum(const ExactTable& table, std::uint64_t n,
                                  std::uint64_t m) {
  detail::check_kn(m, n);
  table.check_index(m);
  AbelSides out{0, 0};
  mpq_class a = 1;
  mpq_class correction = 0;
  for (std::uint64_t k = 1; k <= m; ++k) {
    out.lhs += a * table.b[k];
    if (k < m) correction += a * mpq_class(static_cast<unsigned long>(k)) * table.B[k];
    else out.rhs = a * table.B[m];
    a *= ratio(n - k, n);
  }
  out.rhs += correction / mpq_class(static_cast<unsigned long>(n));
  return out;
}

/// floor(z sqrt(n)) computed with integer square roots only.
inline std::uint64_t lattice_index(const mpq_class& z, std::uint64_t n) {
  detail::require(sgn(z) >= 0, ErrorCode::invalid_argument,
                  "z must be nonnegative, got " + z.get_str());
  // largest m with m^2 <= z^2 n, i.e. isqrt(floor(z^2 n)).
  const mpq_class sq = z * z * mpq_class(static_cast<unsigned long>(n));
  mpz_class fl = sq.get_num() / sq.get_den();
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), fl.get_mpz_t());
  if (root > static_cast<unsigned long>(n)) return n;
  return root.get_ui();
}

/// Exact law of the number of cyclic points of a uniform A-mapping of an
/// n-set. The cumulative numerators come from the summation-by-parts form,
/// the denominator is S(n).
class LambdaDistribution {
 public:
  LambdaDistribution(const ExactTable& table, std::uint64_t n) : n_(n) {
    detail::require(n >= 1, ErrorCode::invalid_argument, "n must be >= 1");
    table.check_index(n);
    cumulative_.assign(n + 1, 0);
    mpq_class a = 1;
    mpq_class correction = 0;
    const mpq_class inv_n = ratio(1, n);
    for (std::uint64_t m = 1; m <= n; ++m) {
      cumulative_[m] = a * table.B[m] + correction * inv_n;
      correction += a * mpq_class(static_cast<unsigned long>(m)) * table.B[m];
      a *= ratio(n - m, n);
    }
    if (sgn(cumulative_[n]) == 0)
      detail::fail(ErrorCode::empty_mapping_set,
                   "no A-mappings of a " + std::to_string(n) + "-set for A = " +
                       table.set.to_string() + "; the distribution is undefined");
  }

  std::uint64_t n() const noexcept { return n_; }

  /// S(n).
  const mpq_class& total() const noexcept { return cumulative_[n_]; }

  /// P{lambda_n <= m}.
  mpq_class cdf_at_index(std::uint64_t m) const {
    if (m == 0) return 0;
    if (m > n_) m = n_;
    mpq_class r = cumulative_[m] / cumulative_[n_];
    return r;
  }

  /// P{lambda_n / sqrt(n) <= z}.
  mpq_class cdf(const mpq_class& z) const { return cdf_at_index(lattice_index(z, n_)); }

 private:
  std::uint64_t n_;
  std::vector<mpq_class> cumulative_;  // index m: sum_{k<=m} a(k,n) b(k)
};

inline mpq_class cdf_lambda(const CycleSet& set, std::uint64_t n, const mpq_class& z) {
  detail::require(n >= 1, ErrorCode::invalid_argument, "n must be >= 1");
  return LambdaDistribution(exact_table(set, n), n).cdf(z);
}

/// Probabilities P{lambda_n = k}, k = 0..n, in double precision.
inline std::vector<double> lambda_pmf(const FloatTable& table, std::uint64_t n) {
  const double total = scaled_sum(table, n);
  if (!(total > 0.0))
    detail::fail(ErrorCode::empty_mapping_set,
                 "no A-mappings of a " + std::to_string(n) + "-set for A = " +
                     table.set.to_string());
  std::vector<double> pmf(n + 1, 0.0);
  for (std::uint64_t k = 1; k <= n; ++k)
    if (table.b[k] != 0.0) pmf[k] = falling_ratio_float(k, n) * table.b[k] / total;
  return pmf;
}

}  // namespace amap
