#pragma once

// Truncated power series in one variable s.
//
// The same recurrences run over exact rationals (mpq_class) and over double;
// the double instantiation is the "float mode" used for large truncation
// orders. Multiplication is the plain O(K^2) convolution.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "amap/error.hpp"

namespace amap {

template <class T>
struct CoeffTraits;

template <>
struct CoeffTraits<mpq_class> {
  static bool is_zero(const mpq_class& x) { return sgn(x) == 0; }
  static bool is_one(const mpq_class& x) { return x == 1; }
  static bool is_negative(const mpq_class& x) { return sgn(x) < 0; }
};

template <>
struct CoeffTraits<double> {
  static bool is_zero(double x) { return x == 0.0; }
  static bool is_one(double x) { return x == 1.0; }
  static bool is_negative(double x) { return x < 0.0; }
};

template <class T>
concept SeriesCoeff = requires { CoeffTraits<T>::is_zero; };

/// Power series truncated at an inclusive order K: coefficients c_0..c_K.
/// Values are immutable once built.
template <SeriesCoeff T>
class Series {
 public:
  using value_type = T;

  /// Order K series with every coefficient zero.
  explicit Series(std::size_t order) : coeffs_(order + 1, T(0)) {}

  explicit Series(std::vector<T> coeffs) : coeffs_(std::move(coeffs)) {
    detail::require(!coeffs_.empty(), ErrorCode::invalid_argument,
                    "series needs at least the constant coefficient");
  }

  /// Order is taken as list size minus one.
  Series(std::initializer_list<T> coeffs) : Series(std::vector<T>(coeffs)) {}

  static Series one(std::size_t order) {
    Series s(order);
    s.coeffs_[0] = T(1);
    return s;
  }

  /// c * s^degree, truncated at `order` (zero if degree > order).
  static Series monomial(std::size_t order, std::size_t degree, const T& c) {
    Series s(order);
    if (degree <= order) s.coeffs_[degree] = c;
    return s;
  }

  std::size_t order() const noexcept { return coeffs_.size() - 1; }
  const T& operator[](std::size_t j) const { return coeffs_[j]; }
  const T& at(std::size_t j) const {
    detail::require(j <= order(), ErrorCode::invalid_argument,
                    "coefficient index " + std::to_string(j) +
                        " beyond series order " + std::to_string(order()));
    return coeffs_[j];
  }
  std::span<const T> coeffs() const noexcept { return coeffs_; }

  Series truncated(std::size_t order) const {
    std::vector<T> c(coeffs_.begin(),
                     coeffs_.begin() + std::min(order, this->order()) + 1);
    return Series(std::move(c));
  }

  friend bool operator==(const Series& a, const Series& b) {
    return a.coeffs_ == b.coeffs_;
  }

  friend Series operator+(const Series& a, const Series& b) {
    const std::size_t k = std::min(a.order(), b.order());
    std::vector<T> c(k + 1);
    for (std::size_t j = 0; j <= k; ++j) c[j] = a.coeffs_[j] + b.coeffs_[j];
    return Series(std::move(c));
  }

  friend Series operator-(const Series& a, const Series& b) {
    const std::size_t k = std::min(a.order(), b.order());
    std::vector<T> c(k + 1);
    for (std::size_t j = 0; j <= k; ++j) c[j] = a.coeffs_[j] - b.coeffs_[j];
    return Series(std::move(c));
  }

  friend Series operator*(const T& scalar, const Series& a) {
    std::vector<T> c(a.coeffs_.size());
    for (std::size_t j = 0; j < c.size(); ++j) c[j] = scalar * a.coeffs_[j];
    return Series(std::move(c));
  }

 private:
  std::vector<T> coeffs_;
};

namespace detail {

// Indices j >= 1 with f_j != 0; the series built from cycle sets are sparse.
template <class T>
std::vector<std::size_t> nonzero_tail(const Series<T>& f) {
  std::vector<std::size_t> idx;
  for (std::size_t j = 1; j <= f.order(); ++j)
    if (!CoeffTraits<T>::is_zero(f[j])) idx.push_back(j);
  return idx;
}

}  // namespace detail

/// Cauchy product, truncated to the shorter operand.
template <class T>
Series<T> series_mul(const Series<T>& f, const Series<T>& g) {
  const std::size_t k = std::min(f.order(), g.order());
  std::vector<T> c(k + 1, T(0));
  for (std::size_t i = 0; i <= k; ++i) {
    if (CoeffTraits<T>::is_zero(f[i])) continue;
    for (std::size_t j = 0; i + j <= k; ++j) c[i + j] += f[i] * g[j];
  }
  return Series<T>(std::move(c));
}

/// exp(f) for f_0 = 0, via n g_n = sum_{j=1..n} j f_j g_{n-j}.
template <class T>
Series<T> series_exp(const Series<T>& f) {
  detail::require(CoeffTraits<T>::is_zero(f[0]), ErrorCode::invalid_argument,
                  "series_exp: constant term must be zero");
  const std::size_t k = f.order();
  const auto nz = detail::nonzero_tail(f);
  std::vector<T> jf(nz.size());
  for (std::size_t t = 0; t < nz.size(); ++t) jf[t] = T(nz[t]) * f[nz[t]];

  std::vector<T> g(k + 1, T(0));
  g[0] = T(1);
  for (std::size_t n = 1; n <= k; ++n) {
    T acc(0);
    for (std::size_t t = 0; t < nz.size() && nz[t] <= n; ++t)
      acc += jf[t] * g[n - nz[t]];
    g[n] = acc / T(n);
  }
  return Series<T>(std::move(g));
}

/// log(f) for f_0 = 1, via g_n = f_n - (1/n) sum_{j=1..n-1} j g_j f_{n-j}.
template <class T>
Series<T> series_log(const Series<T>& f) {
  detail::require(CoeffTraits<T>::is_one(f[0]), ErrorCode::invalid_argument,
                  "series_log: constant term must be one");
  const std::size_t k = f.order();
  const auto nz = detail::nonzero_tail(f);

  std::vector<T> g(k + 1, T(0));
  for (std::size_t n = 1; n <= k; ++n) {
    T acc(0);
    for (std::size_t t = 0; t < nz.size() && nz[t] < n; ++t) {
      const std::size_t j = n - nz[t];
      acc += T(j) * g[j] * f[nz[t]];
    }
    g[n] = f[n] - acc / T(n);
  }
  return Series<T>(std::move(g));
}

/// f^q = exp(q log f) for f_0 = 1.
template <class T>
Series<T> series_pow(const Series<T>& f, const T& q) {
  detail::require(CoeffTraits<T>::is_one(f[0]), ErrorCode::invalid_argument,
                  "series_pow: constant term must be one");
  if (CoeffTraits<T>::is_zero(q)) return Series<T>::one(f.order());
  return series_exp(q * series_log(f));
}

using RationalSeries = Series<mpq_class>;
using FloatSeries = Series<double>;

}  // namespace amap
