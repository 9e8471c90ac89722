#pragma once

// Command-line front end. Every command builds a Report (fixed columns, rows,
// named checks) that is rendered as CSV or JSON:
//
//   {"command": ..., "params": {...}, <extras>, "rows": [...],
//    "checks": [{"name", "pass", "detail"}]}
//
// Big integers and rationals are decimal strings ("57", "16/19"); floats are
// JSON numbers in shortest round-trip form, or %.17g in CSV.
//
// Exit status: 0 ok, 1 module error, 2 usage / parameter error, 3 failed check.

#include <CLI11.hpp>
#include <json.hpp>

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "amap/amap.hpp"

namespace amap::cli {

using Cell = std::variant<std::string, double, std::int64_t, bool>;

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct Report {
  std::string command;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  nlohmann::ordered_json extras = nlohmann::ordered_json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<Check> checks;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

/// Raised for bad parameter values found after flag parsing (exit 2).
struct UsageError {
  std::string parameter;
  std::string reason;
};

inline std::string format_float(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline nlohmann::ordered_json to_json(const Cell& cell) {
  return std::visit([](const auto& v) { return nlohmann::ordered_json(v); }, cell);
}

inline std::string to_csv(const Cell& cell) {
  if (const auto* s = std::get_if<std::string>(&cell)) return *s;
  if (const auto* d = std::get_if<double>(&cell)) return format_float(*d);
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  return std::get<bool>(cell) ? "true" : "false";
}

inline void render(const Report& rep, const std::string& format, std::ostream& out) {
  if (format == "csv") {
    for (std::size_t i = 0; i < rep.columns.size(); ++i)
      out << (i ? "," : "") << rep.columns[i];
    out << '\n';
    for (const auto& row : rep.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << to_csv(row[i]);
      out << '\n';
    }
    for (const auto& [key, value] : rep.extras.items())
      out << "# " << key << '=' << (value.is_string() ? value.get<std::string>() : value.dump())
          << '\n';
    for (const auto& c : rep.checks)
      out << "# check " << c.name << ' ' << (c.pass ? "pass" : "FAIL") << ' ' << c.detail
          << '\n';
    return;
  }
  nlohmann::ordered_json doc;
  doc["command"] = rep.command;
  doc["params"] = rep.params;
  for (const auto& [key, value] : rep.extras.items()) doc[key] = value;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : rep.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < row.size(); ++i) obj[rep.columns[i]] = to_json(row[i]);
    doc["rows"].push_back(std::move(obj));
  }
  doc["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : rep.checks)
    doc["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  out << doc.dump(2) << '\n';
}

struct Options {
  std::string set_spec = "all";
  std::string mode = "exact";
  std::string output = "csv";
  unsigned threads = default_threads();
  std::uint64_t n = 10;
  std::uint64_t order = 20;
  std::uint64_t max_n = 6;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
  double mu = 2.5;
  double beta = 0.999;
  std::string window;
  std::vector<std::string> z_grid;
  std::vector<std::uint64_t> n_grid;
};

inline std::vector<std::string> default_z_grid() {
  // "0.1", "0.2", ..., "5.0"
  std::vector<std::string> z;
  for (int i = 1; i <= 50; ++i) z.push_back(std::to_string(i / 10) + "." + std::to_string(i % 10));
  return z;
}

inline std::vector<std::uint64_t> default_n_grid() { return {100, 316, 1000, 3162, 10000}; }

inline CycleSet parse_set(const std::string& spec) {
  try {
    return parse_cycle_set(spec);
  } catch (const Error& e) {
    throw UsageError{"--set", e.what()};
  }
}

inline double density_of(const CycleSet& set) { return set.density().get_d(); }

inline void require_positive_density(const CycleSet& set) {
  if (sgn(set.density()) <= 0)
    throw UsageError{"--set", "asymptotics need a set of positive density, got " +
                                  set.to_string()};
}

inline Report cmd_coeffs(const Options& o) {
  const CycleSet set = parse_set(o.set_spec);
  if (o.order < 1) throw UsageError{"--K", "order must be >= 1"};
  Report rep;
  rep.command = "coeffs";
  rep.params = {{"set", set.to_string()}, {"K", o.order}, {"mode", o.mode}};
  rep.columns = {"k", "p", "b", "B"};
  if (o.mode == "exact") {
    const auto t = exact_table(set, o.order);
    for (std::size_t k = 0; k <= t.order; ++k)
      rep.rows.push_back({static_cast<std::int64_t>(k), to_decimal(t.p[k]), to_decimal(t.b[k]),
                          to_decimal(t.B[k])});
  } else {
    const auto t = float_table(set, o.order);
    for (std::size_t k = 0; k <= t.order; ++k)
      rep.rows.push_back({static_cast<std::int64_t>(k), t.p[k], t.b[k], t.B[k]});
  }
  return rep;
}

inline Report cmd_count(const Options& o) {
  const CycleSet set = parse_set(o.set_spec);
  if (o.n < 1) throw UsageError{"--n", "n must be >= 1"};
  Report rep;
  rep.command = "count";
  rep.params = {{"set", set.to_string()}, {"n", o.n}, {"mode", o.mode}};
  if (o.mode == "exact") {
    const auto r = count_amappings(set, o.n);
    rep.extras["total"] = to_decimal(r.total);
    nlohmann::ordered_json per_k = nlohmann::ordered_json::object();
    rep.columns = {"k", "count"};
    for (std::uint64_t k = 1; k <= o.n; ++k) {
      const auto& c = r.per_k[k - 1];
      if (sgn(c) != 0) per_k[std::to_string(k)] = to_decimal(c);
      rep.rows.push_back({static_cast<std::int64_t>(k), to_decimal(c)});
    }
    rep.extras["per_k"] = per_k;
  } else {
    const auto t = float_table(set, o.n);
    const double s = scaled_sum(t, o.n);
    rep.columns = {"n", "scaled_sum", "log_total"};
    // ln |V_n| = (n-1) ln n + ln S(n)
    const double log_total = static_cast<double>(o.n - 1) * std::log(static_cast<double>(o.n)) +
                             std::log(s);
    rep.rows.push_back({static_cast<std::int64_t>(o.n), s, log_total});
  }
  return rep;
}

inline std::vector<mpq_class> parse_z_grid(const std::vector<std::string>& grid) {
  std::vector<mpq_class> zs;
  for (const auto& text : grid) {
    mpq_class z;
    if (!parse_rational(text, z) || sgn(z) < 0)
      throw UsageError{"--z", "z values must be nonnegative decimals or p/q, got '" + text + "'"};
    zs.push_back(z);
  }
  return zs;
}

inline Report cmd_cdf(const Options& o) {
  const CycleSet set = parse_set(o.set_spec);
  if (o.n < 1) throw UsageError{"--n", "n must be >= 1"};
  const auto grid = o.z_grid.empty() ? default_z_grid() : o.z_grid;
  const auto zs = parse_z_grid(grid);
  const bool has_limit = sgn(set.density()) > 0;
  Report rep;
  rep.command = "cdf";
  rep.params = {{"set", set.to_string()}, {"n", o.n}, {"mode", o.mode}, {"z", grid}};
  rep.columns = {"z", "m", "cdf", "cdf_float", "limit_cdf", "abs_diff"};

  std::vector<double> cdf_float(zs.size());
  std::vector<std::string> cdf_text(zs.size());
  if (o.mode == "exact") {
    const LambdaDistribution dist(exact_table(set, o.n), o.n);
    for (std::size_t i = 0; i < zs.size(); ++i) {
      const mpq_class v = dist.cdf(zs[i]);
      cdf_text[i] = to_decimal(v);
      cdf_float[i] = v.get_d();
    }
  } else {
    const auto pmf = lambda_pmf(float_table(set, o.n), o.n);
    std::vector<double> cum(pmf.size());
    double run = 0.0;
    for (std::size_t k = 0; k < pmf.size(); ++k) cum[k] = run += pmf[k];
    for (std::size_t i = 0; i < zs.size(); ++i) {
      cdf_float[i] = cum[lattice_index(zs[i], o.n)];
      cdf_text[i] = format_float(cdf_float[i]);
    }
  }
  double sup = 0.0;
  for (std::size_t i = 0; i < zs.size(); ++i) {
    const auto m = static_cast<std::int64_t>(lattice_index(zs[i], o.n));
    if (has_limit) {
      const double g = limit_cdf(density_of(set), zs[i].get_d());
      sup = std::max(sup, std::abs(cdf_float[i] - g));
      rep.rows.push_back({grid[i], m, cdf_text[i], cdf_float[i], g, std::abs(cdf_float[i] - g)});
    } else {
      rep.rows.push_back({grid[i], m, cdf_text[i], cdf_float[i], std::string(), std::string()});
    }
  }
  if (has_limit) rep.extras["sup_abs_diff"] = sup;
  return rep;
}

inline AsymptoticModel model_for(const CycleSet& set, const FloatTable& table) {
  if (auto m = closed_form_model(set)) return *m;
  return fit_model(table, density_of(set));
}

inline nlohmann::ordered_json model_json(const AsymptoticModel& m) {
  nlohmann::ordered_json j;
  j["rho"] = m.rho;
  j["alpha"] = m.alpha;
  j["beta"] = m.beta ? nlohmann::ordered_json(*m.beta) : nlohmann::ordered_json(nullptr);
  j["c"] = m.c;
  j["C"] = m.C ? nlohmann::ordered_json(*m.C) : nlohmann::ordered_json(nullptr);
  j["i_rho"] = m.i_rho;
  j["provenance"] = to_string(m.provenance);
  return j;
}

inline Report cmd_asym(const Options& o) {
  const CycleSet set = parse_set(o.set_spec);
  require_positive_density(set);
  const auto grid = o.n_grid.empty() ? default_n_grid() : o.n_grid;
  std::uint64_t top = 0;
  for (auto n : grid) {
    if (n < 1) throw UsageError{"--n-grid", "grid values must be >= 1"};
    top = std::max(top, n);
  }
  const auto table = float_table(set, std::max<std::uint64_t>(top, 100));
  const auto model = model_for(set, table);

  std::vector<double> sums(grid.size());
  parallel_for(grid.size(), o.threads, [&](std::size_t i) { sums[i] = scaled_sum(table, grid[i]); });

  Report rep;
  rep.command = "asym";
  rep.params = {{"set", set.to_string()}, {"n_grid", grid}};
  rep.extras["model"] = model_json(model);
  rep.columns = {"n", "scaled_sum", "leading", "ratio", "abs_err"};
  std::vector<double> ln_n, ln_err;
  bool decreasing = true;
  double prev = INFINITY;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double lead = leading_scaled_sum(model, grid[i]);
    const double ratio = sums[i] / lead;
    const double err = std::abs(ratio - 1.0);
    rep.rows.push_back({static_cast<std::int64_t>(grid[i]), sums[i], lead, ratio, err});
    decreasing = decreasing && err < prev;
    prev = err;
    if (err > 0.0) {
      ln_n.push_back(std::log(static_cast<double>(grid[i])));
      ln_err.push_back(std::log(err));
    }
  }
  rep.checks.push_back({"error_decreasing", decreasing, "|ratio-1| strictly decreasing in n"});
  if (ln_n.size() >= 2) {
    const double slope = detail::least_squares(ln_n, ln_err).slope;
    rep.extras["log_log_slope"] = slope;
    if (model.beta)
      rep.extras["expected_slope"] = -*model.beta / 2.0;
  }
  return rep;
}

inline IndexWindow parse_window(const std::string& text, std::size_t order) {
  if (text.empty()) return {std::max<std::size_t>(2, order / 2), order};
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) throw std::invalid_argument("no colon");
    return {std::stoull(text.substr(0, colon)), std::stoull(text.substr(colon + 1))};
  } catch (const std::exception&) {
    throw UsageError{"--window", "expected <lo>:<hi>, got '" + text + "'"};
  }
}

inline Report cmd_fit(const Options& o) {
  const CycleSet set = parse_set(o.set_spec);
  require_positive_density(set);
  if (o.order < 100) throw UsageError{"--K", "fitting needs K >= 100"};
  const auto table = float_table(set, o.order);
  const auto window = parse_window(o.window, o.order);
  const auto model = fit_model(table, density_of(set), window);
  Report rep;
  rep.command = "fit";
  rep.params = {{"set", set.to_string()}, {"K", o.order}, {"window", {window.lo, window.hi}}};
  rep.columns = {"rho", "alpha", "beta", "c", "C", "i_rho", "provenance"};
  rep.rows.push_back({model.rho, model.alpha,
                      model.beta ? Cell(*model.beta) : Cell(std::string()), model.c,
                      model.C ? Cell(*model.C) : Cell(std::string()), model.i_rho,
                      std::string(to_string(model.provenance))});
  rep.checks.push_back({"remainder_resolved", model.beta.has_value(),
                        model.beta ? "beta fitted" : "remainder below rounding noise"});
  if (auto exact = closed_form_model(set)) {
    rep.extras["closed_form"] = model_json(*exact);
  }
  return rep;
}

inline Report cmd_verify(const Options& o) {
  const CycleSet set = parse_set(o.set_spec);
  if (o.max_n < 1 || o.max_n > kMaxBruteMappingN)
    throw UsageError{"--max-n", "must lie in 1.." + std::to_string(kMaxBruteMappingN)};
  const auto table = exact_table(set, o.max_n);
  Report rep;
  rep.command = "verify";
  rep.params = {{"set", set.to_string()}, {"max_n", o.max_n}};
  rep.columns = {"kind", "n", "formula", "brute", "match"};
  bool maps_ok = true, perms_ok = true;
  for (std::uint64_t n = 1; n <= o.max_n; ++n) {
    const auto formula = count_amappings(table, n);
    const auto brute = brute_count_mappings(set, static_cast<std::uint32_t>(n), o.threads);
    bool match = formula.total == static_cast<unsigned long>(brute.total);
    for (std::uint64_t k = 1; k <= n; ++k)
      match = match && formula.per_k[k - 1] == static_cast<unsigned long>(brute.per_k[k]);
    maps_ok = maps_ok && match;
    rep.rows.push_back({std::string("mappings"), static_cast<std::int64_t>(n),
                        to_decimal(formula.total), std::to_string(brute.total), match});
  }
  const std::uint64_t kmax = std::min<std::uint64_t>(o.max_n, kMaxBrutePermutationK);
  for (std::uint64_t k = 1; k <= kmax; ++k) {
    const auto brute = brute_count_permutations(set, static_cast<std::uint32_t>(k));
    const bool match = table.perm_counts[k] == static_cast<unsigned long>(brute);
    perms_ok = perms_ok && match;
    rep.rows.push_back({std::string("permutations"), static_cast<std::int64_t>(k),
                        to_decimal(table.perm_counts[k]), std::to_string(brute), match});
  }
  rep.checks.push_back({"mapping_census", maps_ok, "totals and per-k histograms vs enumeration"});
  rep.checks.push_back({"permutation_census", perms_ok, "k! p(k) vs enumeration"});
  return rep;
}

inline Report cmd_sample(const Options& o) {
  const CycleSet set = parse_set(o.set_spec);
  if (o.n < 1 || o.n > 1'000'000) throw UsageError{"--n", "n must lie in 1..1000000"};
  if (o.samples < kMinLambdaSamples)
    throw UsageError{"--samples", "need at least " + std::to_string(kMinLambdaSamples)};
  const auto st = lambda_stats(set, static_cast<std::uint32_t>(o.n), o.samples, o.seed, o.threads);
  Report rep;
  rep.command = "sample";
  rep.params = {{"set", set.to_string()}, {"n", o.n}, {"samples", o.samples}, {"seed", o.seed}};
  rep.extras["attempts"] = st.attempts;
  rep.extras["accepted_rate"] = st.accepted_rate;
  rep.extras["ks_exact"] = st.ks_exact;
  rep.extras["ks_limit"] =
      st.ks_limit ? nlohmann::ordered_json(*st.ks_limit) : nlohmann::ordered_json(nullptr);
  rep.columns = {"k", "count", "freq"};
  for (std::size_t k = 0; k < st.lambda_hist.size(); ++k)
    if (st.lambda_hist[k])
      rep.rows.push_back({static_cast<std::int64_t>(k), static_cast<std::int64_t>(st.lambda_hist[k]),
                          static_cast<double>(st.lambda_hist[k]) / static_cast<double>(st.samples)});
  return rep;
}

inline Report cmd_diag(const Options& o) {
  if (!(o.mu > -1.0)) throw UsageError{"--mu", "mu must be > -1"};
  if (!(o.beta > 0.0 && o.beta <= 1.0)) throw UsageError{"--beta", "beta must lie in (0, 1]"};
  const auto d = diagnostics(o.mu, o.n, o.beta);
  Report rep;
  rep.command = "diag";
  rep.params = {{"mu", o.mu}, {"n", o.n}, {"beta", o.beta}};
  rep.columns = {"n", "r", "s", "nu", "psi", "sigma", "integral", "difference",
                 "lower_bound", "upper_bound"};
  rep.rows.push_back({static_cast<std::int64_t>(o.n), static_cast<std::int64_t>(d.window.r),
                      static_cast<std::int64_t>(d.window.s), d.window.nu, d.psi, d.sigma,
                      d.integral, d.difference(), d.lower_bound, d.upper_bound});
  rep.checks.push_back({"sandwich_lower", d.lower_ok, "lower bound <= Sigma - I"});
  rep.checks.push_back({"sandwich_upper", d.upper_ok, "Sigma - I <= 2 Sigma / sqrt(n)"});
  return rep;
}

inline constexpr const char* kColumnsHelp = R"(CSV columns per command:
  coeffs : k,p,b,B
  count  : k,count               (exact)   n,scaled_sum,log_total (float)
  cdf    : z,m,cdf,cdf_float,limit_cdf,abs_diff
  asym   : n,scaled_sum,leading,ratio,abs_err
  fit    : rho,alpha,beta,c,C,i_rho,provenance
  verify : kind,n,formula,brute,match
  sample : k,count,freq
  diag   : n,r,s,nu,psi,sigma,integral,difference,lower_bound,upper_bound
Scalar results follow as '# <key>=<value>' lines (e.g. '# total=3125'),
then checks as '# check <name> pass|FAIL <detail>' lines.
Environment: AMAP_THREADS sets the default worker count.
Exit status: 0 ok, 1 computation error, 2 usage error, 3 failed check.)";

/// Runs one command line; returns the process exit status.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact and asymptotic enumeration of mappings with restricted cycle lengths",
               "amap"};
  app.footer(kColumnsHelp);
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--output", o.output, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
  };
  auto add_set = [&](CLI::App* sub) {
    sub->add_option("--set", o.set_spec,
                    "Cycle set: all | mult:a | f1:a+b,... | f2:k,... | finite:m,...")
        ->required();
  };
  auto add_mode = [&](CLI::App* sub) {
    sub->add_option("--mode", o.mode, "Arithmetic mode")->check(CLI::IsMember({"exact", "float"}));
  };

  auto* coeffs = app.add_subcommand("coeffs", "Coefficient table p(k), b(k), B(k)");
  add_set(coeffs);
  add_mode(coeffs);
  coeffs->add_option("--K", o.order, "Truncation order");
  add_common(coeffs);

  auto* count = app.add_subcommand("count", "Number of A-mappings of an n-set, by cyclic points");
  add_set(count);
  add_mode(count);
  count->add_option("--n", o.n, "Set size")->required();
  add_common(count);

  auto* cdf = app.add_subcommand("cdf", "Law of cyclic points: exact CDF against the limit");
  add_set(cdf);
  add_mode(cdf);
  cdf->add_option("--n", o.n, "Set size")->required();
  cdf->add_option("--z", o.z_grid, "z grid (decimals or p/q); default 0.1,0.2,...,5.0")
      ->delimiter(',');
  add_common(cdf);

  auto* asym = app.add_subcommand("asym", "Scaled sum over its leading term on an n-grid");
  add_set(asym);
  asym->add_option("--n-grid", o.n_grid, "n values; default 100,316,1000,3162,10000")
      ->delimiter(',');
  add_common(asym);

  auto* fit = app.add_subcommand("fit", "Fit c, alpha, beta from B(k) in float mode");
  add_set(fit);
  fit->add_option("--K", o.order, "Truncation order")->required();
  fit->add_option("--window", o.window, "Index window lo:hi; default K/2:K");
  add_common(fit);

  auto* verify = app.add_subcommand("verify", "Formulas against exhaustive enumeration");
  add_set(verify);
  verify->add_option("--max-n", o.max_n, "Largest n to enumerate (<= 8)");
  add_common(verify);

  auto* sample = app.add_subcommand("sample", "Monte Carlo law of cyclic points");
  add_set(sample);
  sample->add_option("--n", o.n, "Set size")->required();
  sample->add_option("--samples", o.samples, "Accepted samples");
  sample->add_option("--seed", o.seed, "Seed");
  add_common(sample);

  auto* diag = app.add_subcommand("diag", "Riemann-sum window diagnostics and sandwich bounds");
  diag->add_option("--mu", o.mu, "Exponent mu > -1");
  diag->add_option("--n", o.n, "n")->required();
  diag->add_option("--beta", o.beta, "Remainder exponent in (0, 1]; clamped to 0.999");
  add_common(diag);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "amap: " << e.what() << "\n" << app.help();
    return 2;
  }

  CLI::App* active = app.get_subcommands().front();
  const std::string name = active->get_name();
  try {
    Report rep;
    if (name == "coeffs") rep = cmd_coeffs(o);
    else if (name == "count") rep = cmd_count(o);
    else if (name == "cdf") rep = cmd_cdf(o);
    else if (name == "asym") rep = cmd_asym(o);
    else if (name == "fit") rep = cmd_fit(o);
    else if (name == "verify") rep = cmd_verify(o);
    else if (name == "sample") rep = cmd_sample(o);
    else rep = cmd_diag(o);
    render(rep, o.output, out);
    return rep.all_pass() ? 0 : 3;
  } catch (const UsageError& e) {
    err << "amap: error command=" << name << " parameter=" << e.parameter
        << " reason=" << e.reason << "\n" << active->help();
    return 2;
  } catch (const Error& e) {
    err << "amap: error command=" << name << " code=" << to_string(e.code())
        << " reason=" << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "amap: error command=" << name << " reason=" << e.what() << "\n";
    return 1;
  }
}

}  // namespace amap::cli
