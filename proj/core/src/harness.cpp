#include "kv/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <thread>

#include "kv/csv.hpp"
#include "kv/display.hpp"
#include "kv/errors.hpp"

namespace kv::harness {
namespace {

using pricing::CdfMode;
using pricing::PricingInputs;

constexpr std::array<std::string_view, kAllFields.size()> kFieldKeys = {"d1",  "d2",       "nd1",
                                                                        "nd2", "discount", "call"};

std::size_t field_index(Field f) { return static_cast<std::size_t>(f); }

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

// Evaluates fn(i) for i in [0, n) across `threads` workers; each slot of the
// output is written by exactly one worker.
template <class Fn>
std::vector<CaseResult> evaluate_all(std::size_t n, unsigned threads, Fn fn) {
  std::vector<CaseResult> results(n);
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) results[i] = fn(i);
    return results;
  }
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < n; i += workers) results[i] = fn(i);
      });
    }
  }
  return results;
}

void tally(RegressionReport& report) {
  report.run = report.cases.size();
  report.passed = 0;
  report.failed = 0;
  report.max_diff.fill(std::nullopt);
  for (const auto& c : report.cases) {
    (c.passed ? report.passed : report.failed) += 1;
    for (const auto& f : c.fields) {
      auto& slot = report.max_diff[field_index(f.field)];
      if (!slot || f.abs_diff > *slot || std::isnan(f.abs_diff)) slot = f.abs_diff;
    }
  }
}

FieldResult compare(Field field, double observed, double expected, double tolerance) {
  const double diff = std::abs(observed - expected);
  return {field, observed, expected, diff, tolerance, within_tolerance(observed, expected, tolerance)};
}

double draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Uniform on (lo, hi].
double draw_open_closed(std::mt19937_64& rng, double lo, double hi) { return hi - draw(rng) * (hi - lo); }
// Uniform on [lo, hi).
double draw_closed_open(std::mt19937_64& rng, double lo, double hi) { return lo + draw(rng) * (hi - lo); }

}  // namespace

std::string_view field_key(Field f) { return kFieldKeys[field_index(f)]; }

double field_value(const pricing::PriceBreakdown& b, Field f) {
  switch (f) {
    case Field::D1: return b.d1;
    case Field::D2: return b.d2;
    case Field::ND1: return b.n_d1;
    case Field::ND2: return b.n_d2;
    case Field::Discount: return b.discount_factor;
    case Field::Call: return b.call_price;
  }
  return std::nan("");
}

bool within_tolerance(double observed, double expected, double tolerance) {
  return std::abs(observed - expected) <= tolerance;
}

std::vector<GoldenCase> load_golden(std::istream& in) {
  const auto rows = csv::read_table(in, kGoldenHeader);
  std::vector<GoldenCase> cases;
  cases.reserve(rows.size());
  for (const auto& row : rows) {
    const auto& f = row.fields;
    const std::size_t line = row.line_no;
    GoldenCase gc;
    gc.case_id = f[0];
    if (gc.case_id.empty()) throw ParseError(line, "case_id must not be empty");
    gc.inputs.ticker = gc.case_id;
    gc.inputs.spot = csv::parse_number(f[1], "S", line);
    gc.inputs.strike = csv::parse_number(f[2], "X", line);
    gc.inputs.time_years = csv::parse_number(f[3], "T", line);
    gc.inputs.rate = csv::parse_number(f[4], "r", line);
    gc.inputs.sigma = csv::parse_number(f[5], "sigma", line);
    bool any = false;
    for (const Field field : kAllFields) {
      const std::size_t k = field_index(field);
      const std::string expect_col = "expect_" + std::string(field_key(field));
      const std::string tol_col = "tol_" + std::string(field_key(field));
      const auto value = csv::parse_optional(f[6 + k], expect_col, line);
      const auto tol = csv::parse_optional(f[12 + k], tol_col, line);
      if (value.has_value() != tol.has_value())
        throw ParseError(line, tol_col + " must be given exactly when " + expect_col + " is");
      if (!value) continue;
      if (!(*tol > 0.0)) throw ValidationError(tol_col, "line " + std::to_string(line) + ": tolerance must be > 0");
      gc.expected[k] = Expectation{*value, *tol};
      any = true;
    }
    if (!any) throw ValidationError("expect", "line " + std::to_string(line) + ": case '" + gc.case_id +
                                                  "' asserts no expected field");
    cases.push_back(std::move(gc));
  }
  if (cases.empty()) throw ParseError(0, "no cases");
  return cases;
}

std::vector<GoldenCase> load_golden(const std::filesystem::path& path) {
  auto in = open_input(path);
  return load_golden(in);
}

RegressionReport run_golden_regression(std::span<const GoldenCase> cases, CdfMode mode, RunOptions options) {
  if (cases.empty()) throw ValidationError("cases", "no cases");
  RegressionReport report;
  report.mode = ReportMode::GoldenExpected;
  report.cdf_descriptor = pricing::to_string(mode);
  report.cases = evaluate_all(cases.size(), options.threads, [&](std::size_t i) {
    const GoldenCase& gc = cases[i];
    CaseResult result;
    result.case_id = gc.case_id;
    try {
      const auto breakdown = pricing::black_scholes_call(gc.inputs, mode);
      result.passed = true;
      for (const Field field : kAllFields) {
        const auto& exp = gc.expectation(field);
        if (!exp) continue;
        auto fr = compare(field, field_value(breakdown, field), exp->value, exp->tolerance);
        result.passed = result.passed && fr.passed;
        result.fields.push_back(fr);
      }
    } catch (const Error& e) {
      result.error = e.what();
      result.passed = false;
    }
    return result;
  });
  tally(report);
  return report;
}

RegressionReport run_dual_path_regression(std::span<const NamedInputs> inputs, double tolerance,
                                          DualPathOptions options) {
  if (!std::isfinite(tolerance) || tolerance <= 0.0) throw ValidationError("tol", "tolerance must be > 0");
  RegressionReport report;
  report.mode = ReportMode::DualPath;
  report.cdf_descriptor = pricing::to_string(options.candidate) + " vs " + pricing::to_string(options.baseline);
  report.cases = evaluate_all(inputs.size(), options.run.threads, [&](std::size_t i) {
    CaseResult result;
    result.case_id = inputs[i].case_id;
    try {
      const double baseline = pricing::black_scholes_call(inputs[i].inputs, options.baseline).call_price;
      const double candidate = pricing::black_scholes_call(inputs[i].inputs, options.candidate).call_price;
      auto fr = compare(Field::Call, candidate, baseline, tolerance);
      result.passed = fr.passed;
      result.fields.push_back(fr);
    } catch (const Error& e) {
      result.error = e.what();
      result.passed = false;
    }
    return result;
  });
  tally(report);
  return report;
}

std::vector<NamedInputs> random_inputs(std::size_t count, std::uint64_t seed, const SampleRanges& r) {
  std::mt19937_64 rng(seed);
  std::vector<NamedInputs> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    PricingInputs in;
    in.ticker = "RND";
    in.spot = draw_closed_open(rng, r.spot_min, r.spot_max);
    in.strike = draw_closed_open(rng, r.strike_min, r.strike_max);
    in.time_years = draw_open_closed(rng, r.time_min, r.time_max);
    in.rate = draw_closed_open(rng, r.rate_min, r.rate_max);
    in.sigma = draw_open_closed(rng, r.sigma_min, r.sigma_max);
    out.push_back({"rand-" + std::to_string(i + 1), std::move(in)});
  }
  return out;
}

RegressionReport run_dual_path_sample(std::size_t count, std::uint64_t seed, double tolerance,
                                      DualPathOptions options, const SampleRanges& ranges) {
  const auto sample = random_inputs(count, seed, ranges);
  auto report = run_dual_path_regression(sample, tolerance, options);
  report.seed = seed;
  return report;
}

void validate_tape(std::span<const TapeRecord> tape) {
  if (tape.empty()) throw ValidationError("tape", "tape is empty");
  for (std::size_t i = 0; i < tape.size(); ++i) {
    const std::string where = "record " + std::to_string(i + 1);
    try {
      pricing::validate(tape[i].inputs);
    } catch (const ValidationError& e) {
      throw ValidationError(e.field(), where + ": " + e.what());
    }
    if (const auto& obs = tape[i].observed_price; obs && (!std::isfinite(*obs) || *obs < 0.0))
      throw ValidationError("observed_price", where + ": must be a finite price >= 0");
    if (i > 0 && tape[i].timestamp < tape[i - 1].timestamp)
      throw ValidationError("timestamp", where + ": timestamp " + format_timestamp(tape[i].timestamp) +
                                             " is earlier than the previous record");
  }
}

Tape load_tape(std::istream& in) {
  const auto rows = csv::read_table(in, kTapeHeader);
  Tape tape;
  tape.reserve(rows.size());
  for (const auto& row : rows) {
    const auto& f = row.fields;
    TapeRecord rec;
    try {
      rec.timestamp = parse_timestamp(f[0]);
    } catch (const ParseError& e) {
      throw ParseError(row.line_no, "record " + std::to_string(tape.size() + 1) + ": " + e.what());
    }
    rec.inputs.ticker = f[1];
    rec.inputs.spot = csv::parse_number(f[2], "S", row.line_no);
    rec.inputs.strike = csv::parse_number(f[3], "X", row.line_no);
    rec.inputs.time_years = csv::parse_number(f[4], "T", row.line_no);
    rec.inputs.rate = csv::parse_number(f[5], "r", row.line_no);
    rec.inputs.sigma = csv::parse_number(f[6], "sigma", row.line_no);
    rec.observed_price = csv::parse_optional(f[7], "observed_price", row.line_no);
    tape.push_back(std::move(rec));
  }
  validate_tape(tape);
  return tape;
}

Tape load_tape(const std::filesystem::path& path) {
  auto in = open_input(path);
  return load_tape(in);
}

void write_tape(std::ostream& out, std::span<const TapeRecord> tape) {
  out << kTapeHeader << '\n';
  for (const auto& rec : tape) {
    out << format_timestamp(rec.timestamp) << ',' << rec.inputs.ticker << ',' << format_exact(rec.inputs.spot) << ','
        << format_exact(rec.inputs.strike) << ',' << format_exact(rec.inputs.time_years) << ','
        << format_exact(rec.inputs.rate) << ',' << format_exact(rec.inputs.sigma) << ',';
    if (rec.observed_price) out << format_exact(*rec.observed_price);
    out << '\n';
  }
}

DeviationSummary summarize(std::span<const double> deviations) {
  DeviationSummary s;
  s.count = deviations.size();
  if (s.count == 0) return s;
  double sum = 0.0;
  for (const double d : deviations) {
    sum += d;
    s.max_abs = std::max(s.max_abs, std::abs(d));
  }
  s.mean = sum / static_cast<double>(s.count);
  if (s.count > 1) {
    double sq = 0.0;
    for (const double d : deviations) sq += (d - s.mean) * (d - s.mean);
    s.stdev = std::sqrt(sq / static_cast<double>(s.count - 1));
  }
  return s;
}

ReplayStats replay_tape(std::span<const TapeRecord> tape, CdfMode mode) {
  validate_tape(tape);
  ReplayStats stats;
  stats.cdf_descriptor = pricing::to_string(mode);
  stats.records.reserve(tape.size());
  std::vector<double> all;
  std::map<std::string, std::vector<double>> by_ticker;
  for (std::size_t i = 0; i < tape.size(); ++i) {
    const auto& rec = tape[i];
    ReplayedRecord out;
    out.index = i + 1;
    out.timestamp = rec.timestamp;
    out.ticker = rec.inputs.ticker;
    out.model_price = pricing::black_scholes_call(rec.inputs, mode).call_price;
    out.observed_price = rec.observed_price;
    if (rec.observed_price) {
      out.deviation = out.model_price - *rec.observed_price;
      all.push_back(*out.deviation);
      by_ticker[out.ticker].push_back(*out.deviation);
    }
    stats.records.push_back(std::move(out));
  }
  stats.records_processed = stats.records.size();
  if (!all.empty()) stats.overall = summarize(all);
  for (const auto& [ticker, devs] : by_ticker) stats.per_ticker[ticker] = summarize(devs);
  return stats;
}

}  // namespace kv::harness
