#pragma once

// Leading-order asymptotics of A-mapping counts.
//
// With B(k) = c k^alpha (1 + O(k^-beta)) and alpha = rho + 1, the scaled sum
// S(n) = sum_k a(k,n) b(k) behaves like c (1 + rho) n^{(1+rho)/2} I_rho and
// lambda_n / sqrt(n) tends to the law with density x^rho e^{-x^2/2} / I_rho.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "amap/counting.hpp"
#include "amap/error.hpp"

namespace amap {

inline double gamma_fn(double x) {
  detail::require(x > 0.0, ErrorCode::invalid_argument,
                  "gamma_fn: argument must be positive, got " + std::to_string(x));
  return std::tgamma(x);
}

/// I_mu = int_0^inf x^mu exp(-x^2/2) dx = 2^{(mu-1)/2} Gamma((mu+1)/2).
inline double i_mu(double mu) {
  detail::require(mu > -1.0, ErrorCode::invalid_argument,
                  "i_mu: integral diverges for mu <= -1 (mu=" + std::to_string(mu) + ")");
  return std::exp2((mu - 1.0) / 2.0) * std::tgamma((mu + 1.0) / 2.0);
}

/// int_lo^hi x^mu exp(-x^2/2) dx for 0 <= lo <= hi, via the regularized
/// incomplete gamma function at x^2/2.
inline double truncated_moment(double mu, double lo, double hi) {
  detail::require(mu > -1.0, ErrorCode::invalid_argument, "truncated_moment: mu <= -1");
  detail::require(lo >= 0.0 && lo <= hi, ErrorCode::invalid_argument,
                  "truncated_moment: need 0 <= lo <= hi");
  const double shape = (mu + 1.0) / 2.0;
  const double tl = lo * lo / 2.0;
  const double th = hi * hi / 2.0;
  // Difference the tail that keeps both terms away from 1.
  const double mass = tl > shape
                          ? boost::math::gamma_q(shape, tl) - boost::math::gamma_q(shape, th)
                          : boost::math::gamma_p(shape, th) - boost::math::gamma_p(shape, tl);
  return i_mu(mu) * mass;
}

/// Limit law of lambda_n / sqrt(n): (1/I_rho) int_0^z x^rho e^{-x^2/2} dx.
inline double limit_cdf(double rho, double z) {
  detail::require(rho > 0.0, ErrorCode::invalid_argument,
                  "limit_cdf: density rho must be positive");
  detail::require(z >= 0.0, ErrorCode::invalid_argument, "limit_cdf: z must be >= 0");
  return boost::math::gamma_p((rho + 1.0) / 2.0, z * z / 2.0);
}

enum class Provenance { closed_form, fitted };

inline const char* to_string(Provenance p) {
  return p == Provenance::closed_form ? "closed_form" : "fitted";
}

/// Constants of B(k) = c k^alpha (1 + O(k^-beta)).
struct AsymptoticModel {
  double rho = 0.0;
  double alpha = 0.0;
  /// Absent when a fitted remainder could not be told apart from rounding.
  std::optional<double> beta;
  double c = 0.0;
  /// Constant C of p(k) ~ C k^{rho-1}, when that form holds (C = c (rho+1)).
  std::optional<double> C;
  double i_rho = 0.0;
  Provenance provenance = Provenance::closed_form;
};

/// A = aN: alpha = 1/a + 1, beta = 1, c = 1 / (a^{1/a} (1/a + 1) Gamma(1/a)).
inline AsymptoticModel an_model(std::uint64_t a) {
  detail::require(a >= 2, ErrorCode::invalid_argument,
                  "an_model: step must be >= 2, got " + std::to_string(a));
  const double inv = 1.0 / static_cast<double>(a);
  AsymptoticModel m;
  m.rho = inv;
  m.alpha = inv + 1.0;
  m.beta = 1.0;
  m.c = 1.0 / (std::pow(static_cast<double>(a), inv) * (inv + 1.0) * gamma_fn(inv));
  m.i_rho = i_mu(inv);
  m.provenance = Provenance::closed_form;
  return m;
}

/// A = N: p(k) = 1, B(k) = k(k+1)/2.
inline AsymptoticModel all_model() {
  AsymptoticModel m;
  m.rho = 1.0;
  m.alpha = 2.0;
  m.beta = 1.0;
  m.c = 0.5;
  m.C = 1.0;
  m.i_rho = i_mu(1.0);
  m.provenance = Provenance::closed_form;
  return m;
}

/// Closed-form model when one is known for the set.
inline std::optional<AsymptoticModel> closed_form_model(const CycleSet& set) {
  if (set.kind() == CycleSet::Kind::all) return all_model();
  if (set.kind() == CycleSet::Kind::multiples) return an_model(set.values()[0]);
  return std::nullopt;
}

struct IndexWindow {
  std::size_t lo = 0;
  std::size_t hi = 0;  // inclusive
};

namespace detail {

struct LineFit {
  double slope;
  double intercept;
};

inline LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

}  // namespace detail

/// Relative residuals below this are treated as rounding noise.
inline constexpr double kRemainderNoiseFloor = 1e-12;

/// Fits alpha, c and the remainder exponent beta from B(k) over `window`.
/// alpha is the log-log slope, c the geometric mean of B(k)/k^alpha, and beta
/// minus the log-log slope of |B(k)/(c k^alpha) - 1|.
inline AsymptoticModel fit_model(const FloatTable& table, double rho, IndexWindow window) {
  detail::require(rho > 0.0, ErrorCode::invalid_argument,
                  "fit_model: density must be positive");
  detail::require(window.lo >= 2 && window.lo <= window.hi && window.hi <= table.order,
                  ErrorCode::invalid_argument,
                  "fit_model: window must lie in [2, " + std::to_string(table.order) + "]");
  detail::require(window.hi - window.lo + 1 >= 50, ErrorCode::fit_failed,
                  "fit_model: window holds fewer than 50 points");

  std::vector<double> lk, lb;
  for (std::size_t k = window.lo; k <= window.hi; ++k) {
    detail::require(table.B[k] > 0.0, ErrorCode::fit_failed,
                    "fit_model: B(" + std::to_string(k) + ") is not positive");
    lk.push_back(std::log(static_cast<double>(k)));
    lb.push_back(std::log(table.B[k]));
  }
  const double alpha = detail::least_squares(lk, lb).slope;
  double mean_log_c = 0.0;
  for (std::size_t i = 0; i < lk.size(); ++i) mean_log_c += lb[i] - alpha * lk[i];
  const double c = std::exp(mean_log_c / static_cast<double>(lk.size()));

  std::vector<double> rk, rr;
  double largest = 0.0;
  for (std::size_t i = 0; i < lk.size(); ++i) {
    const double r = std::abs(std::expm1(lb[i] - std::log(c) - alpha * lk[i]));
    largest = std::max(largest, r);
    if (r > 0.0) {
      rk.push_back(lk[i]);
      rr.push_back(std::log(r));
    }
  }

  AsymptoticModel m;
  m.rho = rho;
  m.alpha = alpha;
  m.c = c;
  m.C = c * (rho + 1.0);
  m.i_rho = i_mu(rho);
  m.provenance = Provenance::fitted;
  if (largest > kRemainderNoiseFloor && rk.size() >= 2) {
    const double beta = -detail::least_squares(rk, rr).slope;
    if (std::isfinite(beta)) m.beta = beta;
  }
  return m;
}

/// Default window: upper half [K/2, K] of the table.
inline AsymptoticModel fit_model(const FloatTable& table, double rho) {
  return fit_model(table, rho, IndexWindow{std::max<std::size_t>(2, table.order / 2), table.order});
}

/// c (1 + rho) n^{(1+rho)/2} I_rho.
inline double leading_scaled_sum(const AsymptoticModel& model, std::uint64_t n) {
  detail::require(model.rho > 0.0, ErrorCode::invalid_argument,
                  "asymptotics need a set of positive density");
  return model.c * (1.0 + model.rho) *
         std::pow(static_cast<double>(n), (1.0 + model.rho) / 2.0) * model.i_rho;
}

/// S(n) divided by its leading term; tends to 1 for a correct model.
inline double exact_over_asym_ratio(const FloatTable& table, const AsymptoticModel& model,
                                    std::uint64_t n) {
  const double lead = leading_scaled_sum(model, n);
  return scaled_sum(table, n) / lead;
}

inline double exact_over_asym_ratio(const CycleSet& set, const AsymptoticModel& model,
                                    std::uint64_t n) {
  detail::require(sgn(set.density()) > 0, ErrorCode::invalid_argument,
                  "asymptotics need a set of positive density");
  return exact_over_asym_ratio(float_table(set, n), model, n);
}

struct Lemma4Value {
  double exact;
  double asym;
};

/// [s^n](1-s)^{-lambda} against n^{lambda-1} / Gamma(lambda).
inline Lemma4Value lemma4_coeff(double lambda, std::uint64_t n) {
  detail::require(lambda > 0.0, ErrorCode::invalid_argument, "lemma4: lambda must be > 0");
  detail::require(n >= 1, ErrorCode::invalid_argument, "lemma4: n must be >= 1");
  long double prod = 1.0L;
  for (std::uint64_t j = 0; j < n; ++j)
    prod *= (static_cast<long double>(lambda) + j) / static_cast<long double>(j + 1);
  return {static_cast<double>(prod),
          std::pow(static_cast<double>(n), lambda - 1.0) / gamma_fn(lambda)};
}

/// The generalized binomial coefficient prod_{j<n} (lambda + j) / n!, exactly.
inline mpq_class lemma4_exact(const mpq_class& lambda, std::uint64_t n) {
  detail::require(sgn(lambda) > 0, ErrorCode::invalid_argument, "lemma4: lambda must be > 0");
  mpq_class prod = 1;
  for (std::uint64_t j = 0; j < n; ++j)
    prod *= (lambda + static_cast<unsigned long>(j)) / mpq_class(static_cast<unsigned long>(j + 1));
  return prod;
}

/// Summation window r(n) = [ln n], s(n) = [n^{2/(3+beta)}] and
/// nu = 2/(3+beta) - 1/2, with beta clamped below 1.
struct DiagnosticWindow {
  std::uint64_t n = 0;
  double beta_eff = 0.0;
  std::uint64_t r = 0;
  std::uint64_t s = 0;
  double nu = 0.0;
};

inline constexpr double kBetaClamp = 0.999;

inline DiagnosticWindow make_window(std::uint64_t n, double beta) {
  detail::require(n >= 1, ErrorCode::invalid_argument, "window: n must be >= 1");
  detail::require(beta > 0.0, ErrorCode::invalid_argument, "window: beta must be > 0");
  DiagnosticWindow w;
  w.n = n;
  w.beta_eff = std::min(beta, kBetaClamp);
  const double ln_n = std::log(static_cast<double>(n));
  // r is the largest integer with e^r <= n.
  w.r = static_cast<std::uint64_t>(std::floor(ln_n));
  while (w.r > 0 && std::exp(static_cast<double>(w.r)) > static_cast<double>(n)) --w.r;
  while (std::exp(static_cast<double>(w.r + 1)) <= static_cast<double>(n)) ++w.r;
  const double expo = 2.0 / (3.0 + w.beta_eff);
  w.s = static_cast<std::uint64_t>(std::floor(std::exp(expo * ln_n)));
  // s is the largest integer with s^{3+beta} <= n^2.
  auto fits = [&](std::uint64_t s) {
    return (3.0 + w.beta_eff) * std::log(static_cast<double>(s)) <= 2.0 * ln_n;
  };
  while (w.s > 1 && !fits(w.s)) --w.s;
  while (fits(w.s + 1)) ++w.s;
  w.nu = expo - 0.5;
  return w;
}

struct DiagnosticReport {
  double mu = 0.0;
  DiagnosticWindow window;
  double psi = 0.0;        // sum_{k=r+1..s} e^{-k^2/2n} k^mu
  double sigma = 0.0;      // n^{-(1+mu)/2} psi
  double integral = 0.0;   // int over [(r+1)/sqrt n, (s+1)/sqrt n]
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  bool lower_ok = false;
  bool upper_ok = false;

  double difference() const { return sigma - integral; }
  bool pass() const { return lower_ok && upper_ok; }
};

/// Riemann-sum diagnostics on the window and the sandwich
///   -sum (1/sqrt n)(k/sqrt n)^mu e^{-k^2/2n}((1+1/k)^mu - 1)
///     <= Sigma_mu(n) - I_mu(n) <= (2/sqrt n) Sigma_mu(n).
inline DiagnosticReport diagnostics(double mu, std::uint64_t n, double beta) {
  detail::require(mu > -1.0, ErrorCode::invalid_argument, "diagnostics: mu must be > -1");
  DiagnosticReport rep;
  rep.mu = mu;
  rep.window = make_window(n, beta);
  const auto& w = rep.window;
  if (w.r >= w.s)
    detail::fail(ErrorCode::window_empty,
                 "window empty: r(n)=" + std::to_string(w.r) + " >= s(n)=" +
                     std::to_string(w.s) + " at n=" + std::to_string(n));

  const double nd = static_cast<double>(n);
  const double root = std::sqrt(nd);
  double correction = 0.0;
  for (std::uint64_t k = w.r + 1; k <= w.s; ++k) {
    const double kd = static_cast<double>(k);
    const double weight = std::exp(-kd * kd / (2.0 * nd));
    rep.psi += weight * std::pow(kd, mu);
    correction += std::pow(kd / root, mu) * weight * std::expm1(mu * std::log1p(1.0 / kd));
  }
  rep.sigma = std::pow(nd, -(1.0 + mu) / 2.0) * rep.psi;
  rep.integral = truncated_moment(mu, static_cast<double>(w.r + 1) / root,
                                  static_cast<double>(w.s + 1) / root);
  rep.lower_bound = -correction / root;
  rep.upper_bound = 2.0 * rep.sigma / root;
  rep.lower_ok = rep.lower_bound <= rep.difference();
  rep.upper_ok = rep.difference() <= rep.upper_bound;
  return rep;
}

}  // namespace amap
