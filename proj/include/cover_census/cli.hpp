#pragma once

// Command-line front end. Exit codes: 0 success, 1 verification mismatch,
// 2 argument or usage error.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cover_census/asymptotics.hpp"
#include "cover_census/cover_counts.hpp"
#include "cover_census/oracle.hpp"
#include "cover_census/sampler.hpp"

namespace cover_census {

inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 1;
inline constexpr int kExitUsage = 2;

inline constexpr const char* kOracleLimitEnv = "COVER_CENSUS_ORACLE_LIMIT";
inline constexpr std::size_t kDefaultExactReportMax = 256;

enum class Command { table, oracle, asymptotics, sample };
enum class Format { csv, json, text };
enum class SampleStat { p_x0, moment, p_collision };

struct RunConfig {
  Command command = Command::table;
  long long max_n = -1;
  long long n = -1;
  Format format = Format::csv;
  std::string out;
  std::uint64_t seed = 0;
  std::uint64_t trials = 100000;
  bool slow_mode = false;
  unsigned workers = 1;
  SampleStat stat = SampleStat::p_x0;
  long long r = 1;
  long long exact_max = static_cast<long long>(kDefaultExactReportMax);
  std::size_t oracle_limit = kDefaultOracleLimit;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Json = nlohmann::ordered_json;

namespace cli_detail {

inline std::string format_double(double x) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

inline std::string format_optional(const std::optional<double>& x) { return x ? format_double(*x) : std::string(); }

inline Json json_optional(const std::optional<double>& x) {
  if (!x || !std::isfinite(*x)) return nullptr;
  return *x;
}

inline const char* format_name(Format f) {
  switch (f) {
    case Format::csv: return "csv";
    case Format::json: return "json";
    case Format::text: return "text";
  }
  return "?";
}

inline const char* stat_name(SampleStat s) {
  switch (s) {
    case SampleStat::p_x0: return "p-x0";
    case SampleStat::moment: return "moment";
    case SampleStat::p_collision: return "p-collision";
  }
  return "?";
}

// Writes to cfg.out when set, otherwise to `out`.
inline void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.out, std::ios::binary);
  if (!file) throw UsageError("cannot open output file " + cfg.out);
  file << text;
}

inline std::size_t require_nonnegative(long long value, const char* flag) {
  if (value < 0) throw UsageError(std::string(flag) + " must be a nonnegative integer");
  return static_cast<std::size_t>(value);
}

}  // namespace cli_detail

/// Oracle cap from COVER_CENSUS_ORACLE_LIMIT, else the default.
inline std::size_t oracle_limit_from_env() {
  const char* raw = std::getenv(kOracleLimitEnv);
  if (raw == nullptr || *raw == '\0') return kDefaultOracleLimit;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(raw, &end, 10);
  if (end == raw || *end != '\0' || value > kMaxGroundSize / 2)
    throw UsageError(std::string(kOracleLimitEnv) + " must be an integer in [0, 32]");
  return static_cast<std::size_t>(value);
}

inline int run_table(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const std::size_t max_n = cli_detail::require_nonnegative(cfg.max_n, "--max-n");
  SequenceTable table;
  try {
    table = full_table(max_n);
  } catch (const IdentityMismatch& e) {
    err << "FAIL " << e.what() << '\n';
    return kExitMismatch;
  }
  std::string text;
  if (cfg.format == Format::json) {
    Json rows = Json::array();
    for (const auto& r : table.rows)
      rows.push_back({{"n", r.n}, {"s", r.s.get_str()}, {"t", r.t.get_str()}, {"u", r.u.get_str()},
                      {"v", r.v.get_str()}, {"l", r.l.get_str()}, {"bell2n", r.bell2n.get_str()}});
    Json doc = {{"command", "table"}, {"params", {{"max_n", max_n}, {"format", "json"}}}, {"rows", rows}};
    text = doc.dump(2) + "\n";
  } else {
    std::ostringstream os;
    os << "n,s,t,u,v,l,bell2n\n";
    for (const auto& r : table.rows)
      os << r.n << ',' << r.s << ',' << r.t << ',' << r.u << ',' << r.v << ',' << r.l << ',' << r.bell2n << '\n';
    text = os.str();
  }
  cli_detail::emit(cfg, out, text);
  return kExitOk;
}

struct OracleCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Every exact identity the oracle can check at one n.
inline std::vector<OracleCheck> oracle_checks(const OracleCensus& census, const OracleCounts* counts,
                                              const std::string& counts_error) {
  const std::size_t n = census.n;
  std::vector<OracleCheck> checks;
  const FiberReport fibers = fiber_check(census);

  std::size_t proper_bad = 0, all_bad = 0;
  for (const auto& m : fibers.mismatches) {
    ++all_bad;
    if (m.cover.proper()) ++proper_bad;
  }
  checks.push_back({"proper covers have fiber 2^n and phi(C_n) is onto them",
                    proper_bad == 0 && fibers.c_maps_onto_proper,
                    std::to_string(fibers.proper_covers) + " proper covers, " +
                        std::to_string(fibers.proper_images_of_c) + " images of C_n"});
  checks.push_back({"every cover with rho duplicate pairs has fiber 2^(n-rho)", all_bad == 0,
                    std::to_string(fibers.covers_checked) + " covers, " + std::to_string(all_bad) + " mismatches"});

  const bool counts_ok = counts != nullptr;
  checks.push_back({"t_n 2^n = |C_n| and s_n 2^n = sum_rho |D_rho,n| 2^rho", counts_ok,
                    counts_ok ? "exact" : counts_error});

  const auto sums = moment_sums(census);
  bool moments_ok = true;
  for (std::size_t r = 0; r <= n; ++r)
    if (sums[r] != falling_factorial(n, r) * bell(2 * n - r)) moments_ok = false;
  checks.push_back({"sum over partitions of (X)_r = (n)_r B_(2n-r), r = 0..n", moments_ok, ""});

  const Natural e1 = e1_count(n);
  checks.push_back({"|E_1,n| = sum_r (-1)^r C(n,r) B_(2n-r)", e1 == Natural(static_cast<unsigned long>(census.e1)),
                    "|E_1,n| = " + std::to_string(census.e1)});

  const Rational collision = ratio(bell(2 * n) - static_cast<unsigned long>(census.e2), bell(2 * n));
  const Rational bound = collision_bound(n);
  checks.push_back({"1 - |E_2,n|/B_2n <= sum_k C(n,k) 2^k B_(2n-2k)/B_2n", collision <= bound,
                    collision.get_str() + " <= " + bound.get_str()});

  if (counts_ok) {
    const auto table = full_table(n);
    const auto& row = table.rows[n];
    const std::uint64_t lines = oracle_line_count(census);
    const bool agree = row.s == static_cast<unsigned long>(counts->s) && row.t == static_cast<unsigned long>(counts->t) &&
                       row.u == static_cast<unsigned long>(counts->u) && row.v == static_cast<unsigned long>(counts->v) &&
                       row.l == static_cast<unsigned long>(lines);
    checks.push_back({"oracle (s,t,u,v,l) equals the generating-function table", agree,
                      "table " + row.s.get_str() + "," + row.t.get_str() + "," + row.u.get_str() + "," +
                          row.v.get_str() + "," + row.l.get_str()});
  }
  return checks;
}

inline int run_oracle(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const std::size_t n = cli_detail::require_nonnegative(cfg.n, "--n");
  OracleOptions options;
  options.limit = cfg.oracle_limit;
  options.slow_mode = cfg.slow_mode;
  options.workers = cfg.workers;
  if (n > effective_oracle_limit(options) || 2 * n > kMaxGroundSize)
    throw UsageError("--n " + std::to_string(n) + " exceeds the oracle limit " +
                     std::to_string(effective_oracle_limit(options)) + (cfg.slow_mode ? "" : " (use --slow for one more)"));

  const OracleCensus census = oracle_census(n, options);
  std::optional<OracleCounts> counts;
  std::string counts_error;
  try {
    counts = oracle_counts(census);
  } catch (const OracleIdentityViolation& e) {
    counts_error = e.what();
  }
  const auto checks = oracle_checks(census, counts ? &*counts : nullptr, counts_error);
  const std::uint64_t lines = oracle_line_count(census);
  bool all_pass = true;
  for (const auto& c : checks) all_pass = all_pass && c.pass;

  std::string text;
  if (cfg.format == Format::json) {
    Json jchecks = Json::array();
    for (const auto& c : checks) jchecks.push_back({{"name", c.name}, {"status", c.pass ? "PASS" : "FAIL"}, {"detail", c.detail}});
    Json row = {{"n", n},
                {"partitions", std::to_string(census.partitions)},
                {"s", counts ? std::to_string(counts->s) : ""},
                {"t", counts ? std::to_string(counts->t) : ""},
                {"u", counts ? std::to_string(counts->u) : ""},
                {"v", counts ? std::to_string(counts->v) : ""},
                {"l", std::to_string(lines)},
                {"e1", std::to_string(census.e1)},
                {"e2", std::to_string(census.e2)},
                {"c", std::to_string(census.c)},
                {"d_histogram", Json::array()},
                {"checks", jchecks}};
    for (auto d : census.d_histogram) row["d_histogram"].push_back(std::to_string(d));
    Json doc = {{"command", "oracle"},
                {"params", {{"n", n}, {"slow", cfg.slow_mode}, {"workers", cfg.workers}, {"limit", options.limit}}},
                {"rows", Json::array({row})}};
    text = doc.dump(2) + "\n";
  } else {
    std::ostringstream os;
    os << "oracle n=" << n << " partitions of [" << 2 * n << "]: " << census.partitions << '\n';
    if (counts)
      os << "s=" << counts->s << " t=" << counts->t << " u=" << counts->u << " v=" << counts->v << " l=" << lines << '\n';
    os << "|E1|=" << census.e1 << " |E2|=" << census.e2 << " |C|=" << census.c << '\n';
    os << "D histogram (rho=0..n):";
    for (auto d : census.d_histogram) os << ' ' << d;
    os << '\n';
    for (const auto& c : checks) {
      os << (c.pass ? "PASS " : "FAIL ") << c.name;
      if (!c.detail.empty()) os << " [" << c.detail << ']';
      os << '\n';
    }
    text = os.str();
  }
  cli_detail::emit(cfg, out, text);
  if (!all_pass) err << "oracle: verification failed\n";
  return all_pass ? kExitOk : kExitMismatch;
}

/// Range check on every exact/estimate ratio, as a warning.
inline TrendCheck ratio_range_check(const AsymptoticReport& report, double lo = 0.2, double hi = 2.0) {
  TrendCheck c{"ratios within (" + cli_detail::format_double(lo) + ", " + cli_detail::format_double(hi) + ")",
               CheckStatus::pass, ""};
  for (const auto& row : report.rows)
    for (const auto& ratio : {row.ratio_s, row.ratio_t, row.ratio_u, row.ratio_v, row.ratio_l})
      if (ratio && !(*ratio > lo && *ratio < hi)) {
        c.status = CheckStatus::warn;
        c.detail = "n=" + std::to_string(row.n) + " ratio " + cli_detail::format_double(*ratio);
      }
  return c;
}

inline int run_asymptotics(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const std::size_t max_n = cli_detail::require_nonnegative(cfg.max_n, "--max-n");
  const std::size_t exact_max = cli_detail::require_nonnegative(cfg.exact_max, "--exact-max");
  if (max_n < 2) throw UsageError("--max-n must be at least 2 for the asymptotic estimators");
  SequenceTable table;
  try {
    table = full_table(std::min(max_n, exact_max));
  } catch (const IdentityMismatch& e) {
    err << "FAIL " << e.what() << '\n';
    return kExitMismatch;
  }
  const AsymptoticReport report = build_asymptotic_report(max_n, &table);
  using cli_detail::format_double;
  using cli_detail::format_optional;

  std::string text;
  if (cfg.format == Format::json) {
    Json rows = Json::array();
    for (const auto& r : report.rows) {
      rows.push_back({{"n", r.n},
                      {"bell_source", to_string(r.bell_source)},
                      {"log_bell2n", r.log_bell2n},
                      {"m0", r.m0},
                      {"log_est_st", r.log_est_st},
                      {"log_est_uvl", r.log_est_uvl},
                      {"log_saddle", r.log_saddle},
                      {"log_s", cli_detail::json_optional(r.log_s)},
                      {"log_t", cli_detail::json_optional(r.log_t)},
                      {"log_u", cli_detail::json_optional(r.log_u)},
                      {"log_v", cli_detail::json_optional(r.log_v)},
                      {"log_l", cli_detail::json_optional(r.log_l)},
                      {"ratio_s", cli_detail::json_optional(r.ratio_s)},
                      {"ratio_t", cli_detail::json_optional(r.ratio_t)},
                      {"ratio_u", cli_detail::json_optional(r.ratio_u)},
                      {"ratio_v", cli_detail::json_optional(r.ratio_v)},
                      {"ratio_l", cli_detail::json_optional(r.ratio_l)},
                      {"ratio_saddle_v", cli_detail::json_optional(r.ratio_saddle_v)},
                      {"e1_ratio", cli_detail::json_optional(r.e1_ratio)}});
    }
    Json doc = {{"command", "asymptotics"},
                {"params", {{"max_n", max_n}, {"exact_max", exact_max}, {"format", "json"}}},
                {"note", kAsymptoticNote},
                {"rows", rows}};
    text = doc.dump(2) + "\n";
  } else {
    std::ostringstream os;
    os << "# " << kAsymptoticNote << '\n';
    os << "n,bell_source,log_bell2n,m0,log_est_st,log_est_uvl,log_saddle,log_s,log_t,log_u,log_v,log_l,"
          "ratio_s,ratio_t,ratio_u,ratio_v,ratio_l,ratio_saddle_v,e1_ratio\n";
    for (const auto& r : report.rows) {
      os << r.n << ',' << to_string(r.bell_source) << ',' << format_double(r.log_bell2n) << ',' << r.m0 << ','
         << format_double(r.log_est_st) << ',' << format_double(r.log_est_uvl) << ',' << format_double(r.log_saddle)
         << ',' << format_optional(r.log_s) << ',' << format_optional(r.log_t) << ',' << format_optional(r.log_u)
         << ',' << format_optional(r.log_v) << ',' << format_optional(r.log_l) << ',' << format_optional(r.ratio_s)
         << ',' << format_optional(r.ratio_t) << ',' << format_optional(r.ratio_u) << ','
         << format_optional(r.ratio_v) << ',' << format_optional(r.ratio_l) << ','
         << format_optional(r.ratio_saddle_v) << ',' << format_optional(r.e1_ratio) << '\n';
    }
    text = os.str();
  }
  cli_detail::emit(cfg, out, text);
  auto checks = trend_checks(report);
  checks.push_back(ratio_range_check(report));
  for (const auto& c : checks) err << to_string(c.status) << ' ' << c.name << (c.detail.empty() ? "" : ": " + c.detail) << '\n';
  return kExitOk;
}

struct SampleRecord {
  std::size_t n = 0;
  Estimate estimate;
  std::optional<Rational> exact;
  std::optional<double> z_score;  ///< absent when it is undefined
};

/// z uses the null-hypothesis standard error sqrt(p(1-p)/T) for the two
/// proportions and the sample standard error for the moment.
inline SampleRecord sample_record(const RunConfig& cfg) {
  const std::size_t n = cli_detail::require_nonnegative(cfg.n, "--n");
  if (n < 1) throw UsageError("--n must be at least 1");
  if (2 * n > kMaxGroundSize) throw UsageError("--n too large for the sampler");
  if (cfg.trials < 1) throw UsageError("--trials must be at least 1");
  SamplerConfig sc;
  sc.ground_size = 2 * n;
  sc.trials = cfg.trials;
  sc.seed = cfg.seed;
  sc.workers = cfg.workers;

  SampleRecord rec;
  rec.n = n;
  const bool bell_exact = 2 * n <= default_tables().cap();
  switch (cfg.stat) {
    case SampleStat::p_x0:
      rec.estimate = estimate_p_x0(n, sc);
      if (bell_exact) rec.exact = p_x0_exact(n);
      break;
    case SampleStat::moment: {
      const std::size_t r = cli_detail::require_nonnegative(cfg.r, "--r");
      if (r > n) throw UsageError("--r must not exceed --n");
      rec.estimate = estimate_moment(n, r, sc);
      if (bell_exact) rec.exact = moment_E_X_r(n, r);
      break;
    }
    case SampleStat::p_collision:
      rec.estimate = estimate_p_collision(n, sc);
      if (n <= cfg.oracle_limit) {
        const auto census = oracle_census(n, OracleOptions{cfg.oracle_limit, false, cfg.workers});
        rec.exact = ratio(bell(2 * n) - static_cast<unsigned long>(census.e2), bell(2 * n));
      }
      break;
  }
  if (rec.exact) {
    const double exact = rec.exact->get_d();
    double se = rec.estimate.std_error;
    if (cfg.stat != SampleStat::moment) se = std::sqrt(exact * (1 - exact) / static_cast<double>(cfg.trials));
    const double diff = rec.estimate.estimate - exact;
    if (se > 0)
      rec.z_score = diff / se;
    else if (diff == 0)
      rec.z_score = 0.0;
  }
  return rec;
}

inline int run_sample(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const SampleRecord rec = sample_record(cfg);
  Json row = {{"n", rec.n},
              {"stat", cli_detail::stat_name(cfg.stat)},
              {"trials", cfg.trials},
              {"seed", std::to_string(cfg.seed)},
              {"estimate", rec.estimate.estimate},
              {"std_error", rec.estimate.std_error},
              {"exact", rec.exact ? Json(rec.exact->get_d()) : Json(nullptr)},
              {"exact_rational", rec.exact ? Json(rec.exact->get_str()) : Json(nullptr)},
              {"z_score", cli_detail::json_optional(rec.z_score)}};
  if (cfg.stat == SampleStat::moment) row["r"] = cfg.r;
  Json params = {{"n", rec.n}, {"stat", cli_detail::stat_name(cfg.stat)}, {"trials", cfg.trials},
                 {"seed", std::to_string(cfg.seed)}, {"workers", cfg.workers}};
  if (cfg.stat == SampleStat::moment) params["r"] = cfg.r;
  Json doc = {{"command", "sample"}, {"params", params}, {"rows", Json::array({row})}};
  cli_detail::emit(cfg, out, doc.dump(2) + "\n");
  if (rec.exact && (!rec.z_score || std::abs(*rec.z_score) > 4)) {
    err << "FAIL estimate is more than 4 standard errors from the exact value\n";
    return kExitMismatch;
  }
  return kExitOk;
}

inline int dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  switch (cfg.command) {
    case Command::table: return run_table(cfg, out, err);
    case Command::oracle: return run_oracle(cfg, out, err);
    case Command::asymptotics: return run_asymptotics(cfg, out, err);
    case Command::sample: return run_sample(cfg, out, err);
  }
  return kExitUsage;
}

/// Parses argv and runs one command.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact and asymptotic enumeration of 2-covers and labelled line graphs", "cover_census"};
  app.require_subcommand(1);
  RunConfig cfg;

  const std::map<std::string, Format> table_formats{{"csv", Format::csv}, {"json", Format::json}};
  const std::map<std::string, Format> oracle_formats{{"text", Format::text}, {"json", Format::json}};
  const std::map<std::string, SampleStat> stats{
      {"p-x0", SampleStat::p_x0}, {"moment", SampleStat::moment}, {"p-collision", SampleStat::p_collision}};

  auto* table = app.add_subcommand("table", "exact s, t, u, v, l and B_2n for n = 0..max-n");
  table->add_option("--max-n", cfg.max_n, "largest n")->required();
  table->add_option("--format", cfg.format, "csv or json")->transform(CLI::CheckedTransformer(table_formats));
  table->add_option("--out", cfg.out, "write to FILE instead of stdout");

  Format oracle_format = Format::text;
  auto* oracle = app.add_subcommand("oracle", "exhaustive verification over the partitions of [2n]");
  oracle->add_option("--n", cfg.n, "n")->required();
  oracle->add_flag("--slow", cfg.slow_mode, "admit one n beyond the oracle limit");
  oracle->add_option("--workers", cfg.workers, "enumeration threads")->check(CLI::PositiveNumber);
  oracle->add_option("--format", oracle_format, "text or json")->transform(CLI::CheckedTransformer(oracle_formats));
  oracle->add_option("--out", cfg.out, "write to FILE instead of stdout");

  auto* asym = app.add_subcommand("asymptotics", "exact vs estimated growth on n = 4, 8, ..., max-n");
  asym->add_option("--max-n", cfg.max_n, "largest n")->required();
  asym->add_option("--format", cfg.format, "csv or json")->transform(CLI::CheckedTransformer(table_formats));
  asym->add_option("--exact-max", cfg.exact_max, "largest n with exact sequence values");
  asym->add_option("--out", cfg.out, "write to FILE instead of stdout");

  auto* sample = app.add_subcommand("sample", "Monte Carlo estimate over uniform partitions of [2n]");
  sample->add_option("--n", cfg.n, "n")->required();
  sample->add_option("--stat", cfg.stat, "p-x0, moment or p-collision")
      ->required()
      ->transform(CLI::CheckedTransformer(stats));
  sample->add_option("--r", cfg.r, "falling-moment order for --stat moment");
  sample->add_option("--trials", cfg.trials, "number of samples");
  sample->add_option("--seed", cfg.seed, "base seed");
  sample->add_option("--workers", cfg.workers, "sampling threads")->check(CLI::PositiveNumber);
  sample->add_option("--out", cfg.out, "write to FILE instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (table->parsed()) cfg.command = Command::table;
  if (oracle->parsed()) {
    cfg.command = Command::oracle;
    cfg.format = oracle_format;
  }
  if (asym->parsed()) cfg.command = Command::asymptotics;
  if (sample->parsed()) cfg.command = Command::sample;

  try {
    cfg.oracle_limit = oracle_limit_from_env();
    return dispatch(cfg, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.help() << '\n';
    return kExitUsage;
  }
}

}  // namespace cover_census
