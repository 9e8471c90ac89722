#pragma once

// Cycle-length sets A and their text form:
//
//   all | mult:<a> | f1:<a1>+<b1>[,<a2>+<b2>...] | f2:<k1>[,<k2>...]
//       | finite:<m1>[,<m2>...]
//
// f1 is a disjoint union of progressions {a k + b : k >= 0} with a > 1,
// 1 <= b < a and gcd(a, b) = 1. f2 is the set of naturals divisible by none
// of a family of pairwise coprime moduli k >= 2.

#include <gmpxx.h>

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "amap/bignum.hpp"
#include "amap/error.hpp"
#include "amap/qseries.hpp"

namespace amap {

struct Progression {
  std::uint64_t modulus;
  std::uint64_t residue;

  friend bool operator==(const Progression&, const Progression&) = default;
};

class CycleSet {
 public:
  enum class Kind { all, multiples, f1, f2, finite };

  static CycleSet all() {
    CycleSet s(Kind::all);
    s.density_ = 1;
    return s;
  }

  static CycleSet multiples(std::uint64_t a) {
    detail::require(a > 1, ErrorCode::invalid_argument,
                    "mult: step must exceed 1, got " + std::to_string(a));
    CycleSet s(Kind::multiples);
    s.values_ = {a};
    s.density_ = ratio(1, a);
    return s;
  }

  static CycleSet f1(std::vector<Progression> progressions) {
    detail::require(!progressions.empty(), ErrorCode::invalid_argument,
                    "f1: at least one progression required");
    mpq_class density = 0;
    for (std::size_t i = 0; i < progressions.size(); ++i) {
      const auto [a, b] = progressions[i];
      const std::string tag = std::to_string(a) + "+" + std::to_string(b);
      detail::require(a > 1, ErrorCode::invalid_argument,
                      "f1: progression " + tag + " needs modulus > 1");
      detail::require(b >= 1 && b < a, ErrorCode::invalid_argument,
                      "f1: progression " + tag + " needs 1 <= residue < modulus");
      detail::require(std::gcd(a, b) == 1, ErrorCode::invalid_argument,
                      "f1: progression " + tag + " has gcd(modulus, residue) != 1");
      // a_i k + b_i and a_j k + b_j meet iff b_i = b_j mod gcd(a_i, a_j).
      for (std::size_t j = 0; j < i; ++j) {
        const auto [aj, bj] = progressions[j];
        const std::uint64_t g = std::gcd(a, aj);
        detail::require(b % g != bj % g, ErrorCode::invalid_argument,
                        "f1: progressions " + std::to_string(aj) + "+" +
                            std::to_string(bj) + " and " + tag + " intersect");
      }
      density += ratio(1, a);
    }
    CycleSet s(Kind::f1);
    s.progressions_ = std::move(progressions);
    s.density_ = density;
    return s;
  }

  static CycleSet f2(std::vector<std::uint64_t> moduli) {
    detail::require(!moduli.empty(), ErrorCode::invalid_argument,
                    "f2: at least one modulus required");
    mpq_class density = 1;
    for (std::size_t i = 0; i < moduli.size(); ++i) {
      detail::require(moduli[i] >= 2, ErrorCode::invalid_argument,
                      "f2: modulus " + std::to_string(moduli[i]) + " must be >= 2");
      for (std::size_t j = 0; j < i; ++j)
        detail::require(std::gcd(moduli[i], moduli[j]) == 1,
                        ErrorCode::invalid_argument,
                        "f2: moduli " + std::to_string(moduli[j]) + " and " +
                            std::to_string(moduli[i]) + " share a factor");
      density *= ratio(moduli[i] - 1, moduli[i]);
    }
    CycleSet s(Kind::f2);
    s.values_ = std::move(moduli);
    s.density_ = density;
    return s;
  }

  static CycleSet finite(std::vector<std::uint64_t> members) {
    detail::require(!members.empty(), ErrorCode::invalid_argument,
                    "finite: at least one member required");
    for (std::size_t i = 0; i < members.size(); ++i) {
      detail::require(members[i] >= 1, ErrorCode::invalid_argument,
                      "finite: members must be positive");
      detail::require(i == 0 || members[i - 1] < members[i],
                      ErrorCode::invalid_argument,
                      "finite: members must be strictly increasing at " +
                          std::to_string(members[i]));
    }
    CycleSet s(Kind::finite);
    s.values_ = std::move(members);
    s.density_ = 0;
    return s;
  }

  Kind kind() const noexcept { return kind_; }

  /// Natural density of the set (exact).
  const mpq_class& density() const noexcept { return density_; }

  /// Step for multiples, moduli for f2, members for finite; empty otherwise.
  const std::vector<std::uint64_t>& values() const noexcept { return values_; }
  const std::vector<Progression>& progressions() const noexcept {
    return progressions_;
  }

  bool contains(std::uint64_t m) const {
    if (m == 0) return false;
    switch (kind_) {
      case Kind::all:
        return true;
      case Kind::multiples:
        return m % values_[0] == 0;
      case Kind::f1:
        for (const auto& p : progressions_)
          if (m % p.modulus == p.residue) return true;
        return false;
      case Kind::f2:
        for (auto k : values_)
          if (m % k == 0) return false;
        return true;
      case Kind::finite:
        return std::binary_search(values_.begin(), values_.end(), m);
    }
    return false;
  }

  /// Canonical text form, accepted back by parse_cycle_set.
  std::string to_string() const {
    auto join = [](const std::vector<std::uint64_t>& v) {
      std::string out;
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(v[i]);
      }
      return out;
    };
    switch (kind_) {
      case Kind::all: return "all";
      case Kind::multiples: return "mult:" + std::to_string(values_[0]);
      case Kind::f2: return "f2:" + join(values_);
      case Kind::finite: return "finite:" + join(values_);
      case Kind::f1: {
        std::string out = "f1:";
        for (std::size_t i = 0; i < progressions_.size(); ++i) {
          if (i) out += ',';
          out += std::to_string(progressions_[i].modulus) + "+" +
                 std::to_string(progressions_[i].residue);
        }
        return out;
      }
    }
    return {};
  }

 private:
  explicit CycleSet(Kind kind) : kind_(kind) {}

  Kind kind_;
  std::vector<std::uint64_t> values_;
  std::vector<Progression> progressions_;
  mpq_class density_;
};

namespace detail {

inline std::uint64_t parse_natural(std::string_view text, std::string_view whole) {
  std::uint64_t value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc{} || ptr != last)
    fail(ErrorCode::parse, "cycle set '" + std::string(whole) +
                               "': bad integer '" + std::string(text) + "'");
  return value;
}

inline std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace detail

/// Parses the set mini-language. Syntax problems raise ErrorCode::parse,
/// violated set invariants raise ErrorCode::invalid_argument.
inline CycleSet parse_cycle_set(std::string_view text) {
  using detail::parse_natural;
  if (text == "all") return CycleSet::all();
  const std::size_t colon = text.find(':');
  if (colon == std::string_view::npos)
    detail::fail(ErrorCode::parse,
                 "cycle set '" + std::string(text) + "': expected <kind>:<args> or 'all'");
  const std::string_view kind = text.substr(0, colon);
  const std::string_view args = text.substr(colon + 1);

  std::vector<std::uint64_t> numbers;
  if (kind == "mult" || kind == "f2" || kind == "finite") {
    for (auto part : detail::split(args, ','))
      numbers.push_back(parse_natural(part, text));
    if (kind == "mult") {
      if (numbers.size() != 1)
        detail::fail(ErrorCode::parse,
                     "cycle set '" + std::string(text) + "': mult takes one step");
      return CycleSet::multiples(numbers[0]);
    }
    return kind == "f2" ? CycleSet::f2(std::move(numbers))
                        : CycleSet::finite(std::move(numbers));
  }
  if (kind == "f1") {
    std::vector<Progression> progs;
    for (auto part : detail::split(args, ',')) {
      const std::size_t plus = part.find('+');
      if (plus == std::string_view::npos)
        detail::fail(ErrorCode::parse, "cycle set '" + std::string(text) +
                                           "': progression '" + std::string(part) +
                                           "' must be <a>+<b>");
      progs.push_back({parse_natural(part.substr(0, plus), text),
                       parse_natural(part.substr(plus + 1), text)});
    }
    return CycleSet::f1(std::move(progs));
  }
  detail::fail(ErrorCode::parse,
               "cycle set '" + std::string(text) + "': unknown kind '" +
                   std::string(kind) + "'");
}

/// |{m in A : m <= n}| / n, exact.
inline mpq_class density_empirical(const CycleSet& set, std::uint64_t n) {
  detail::require(n >= 1, ErrorCode::invalid_argument,
                  "density_empirical: n must be >= 1");
  std::uint64_t count = 0;
  for (std::uint64_t m = 1; m <= n; ++m) count += set.contains(m) ? 1 : 0;
  return ratio(count, n);
}

/// sum_{m in A, m <= K} s^m / m.
template <class T>
Series<T> log_egf(const CycleSet& set, std::size_t order) {
  detail::require(order >= 1, ErrorCode::invalid_argument,
                  "log_egf: order must be >= 1");
  std::vector<T> c(order + 1, T(0));
  for (std::size_t m = 1; m <= order; ++m)
    if (set.contains(m)) c[m] = T(1) / T(m);
  return Series<T>(std::move(c));
}

}  // namespace amap
