#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace amap {

/// num/den in lowest terms.
inline mpq_class ratio(const mpz_class& num, const mpz_class& den) {
  mpq_class r(num, den);
  r.canonicalize();
  return r;
}

inline mpq_class ratio(std::uint64_t num, std::uint64_t den) {
  return ratio(mpz_class(static_cast<unsigned long>(num)),
               mpz_class(static_cast<unsigned long>(den)));
}

inline mpz_class pow_ui(std::uint64_t base, std::uint64_t exp) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
  return r;
}

inline mpz_class binomial(std::uint64_t n, std::uint64_t k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

inline mpz_class factorial(std::uint64_t n) {
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

/// Decimal integer, or "p/q" for a non-integral rational.
inline std::string to_decimal(const mpz_class& x) { return x.get_str(10); }
inline std::string to_decimal(const mpq_class& x) { return x.get_str(10); }

/// Parses "p/q" or a plain decimal such as "3" or "0.25". Exponents
/// ("1.5e2") are rejected.
inline bool parse_rational(const std::string& text, mpq_class& out) {
  if (text.empty()) return false;
  if (text.find('/') != std::string::npos) {
    mpq_class r;
    if (r.set_str(text, 10) != 0 || sgn(r.get_den()) == 0) return false;
    r.canonicalize();
    out = r;
    return true;
  }
  std::size_t start = text[0] == '-' ? 1 : 0;
  const std::size_t dot = text.find('.');
  std::string digits;
  std::size_t frac = 0;
  for (std::size_t i = start; i < text.size(); ++i) {
    if (i == dot) continue;
    if (text[i] < '0' || text[i] > '9') return false;
    digits += text[i];
    if (dot != std::string::npos && i > dot) ++frac;
  }
  if (digits.empty()) return false;
  mpz_class num(digits, 10);
  if (start) num = -num;
  out = ratio(num, pow_ui(10, frac));
  return true;
}

}  // namespace amap
