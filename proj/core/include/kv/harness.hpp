#pragma once

// Regression machinery for checking a ported pricer against its prototype:
// golden-file cases, dual-path (polynomial vs reference CDF) comparison and
// timestamped tape replay with deviation statistics.

#include <array>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kv/pricing.hpp"
#include "kv/timestamp.hpp"

namespace kv::harness {

enum class Field { D1, D2, ND1, ND2, Discount, Call };

inline constexpr std::array<Field, 6> kAllFields = {Field::D1,  Field::D2,       Field::ND1,
                                                    Field::ND2, Field::Discount, Field::Call};

/// Column suffix used in golden files: d1, d2, nd1, nd2, discount, call.
std::string_view field_key(Field f);
double field_value(const pricing::PriceBreakdown& breakdown, Field f);

struct Expectation {
  double value = 0.0;
  double tolerance = 0.0;  // absolute, > 0
};

struct GoldenCase {
  std::string case_id;
  pricing::PricingInputs inputs;
  std::array<std::optional<Expectation>, kAllFields.size()> expected{};

  const std::optional<Expectation>& expectation(Field f) const {
    return expected[static_cast<std::size_t>(f)];
  }
};

inline constexpr std::string_view kGoldenHeader =
    "case_id,S,X,T,r,sigma,expect_d1,expect_d2,expect_nd1,expect_nd2,expect_discount,expect_call,"
    "tol_d1,tol_d2,tol_nd1,tol_nd2,tol_discount,tol_call";

/// Throws ParseError with the offending line, or "no cases" for an empty file.
std::vector<GoldenCase> load_golden(std::istream& in);
std::vector<GoldenCase> load_golden(const std::filesystem::path& path);

struct FieldResult {
  Field field = Field::Call;
  double observed = 0.0;
  double expected = 0.0;
  double abs_diff = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct CaseResult {
  std::string case_id;
  std::vector<FieldResult> fields;
  std::optional<std::string> error;  // kernel rejected the inputs
  bool passed = false;
};

enum class ReportMode { GoldenExpected, DualPath };

struct RegressionReport {
  ReportMode mode = ReportMode::GoldenExpected;
  std::string cdf_descriptor;         // mode(s) the kernel was run under
  std::optional<std::uint64_t> seed;  // dual-path random sample only
  std::vector<CaseResult> cases;
  std::size_t run = 0;
  std::size_t passed = 0;
  std::size_t failed = 0;
  /// Largest abs diff seen per field; nullopt when the field was never compared.
  std::array<std::optional<double>, kAllFields.size()> max_diff{};

  bool ok() const { return failed == 0; }
};

struct RunOptions {
  unsigned threads = 1;  // case evaluation fan-out; report order never depends on it
};

/// Pass iff |observed - expected| <= tolerance.
bool within_tolerance(double observed, double expected, double tolerance);

RegressionReport run_golden_regression(std::span<const GoldenCase> cases, pricing::CdfMode mode,
                                       RunOptions options = {});

struct DualPathOptions {
  pricing::CdfMode candidate = pricing::kPolynomial;
  pricing::CdfMode baseline = pricing::kReference;
  RunOptions run;
};

struct NamedInputs {
  std::string case_id;
  pricing::PricingInputs inputs;
};

RegressionReport run_dual_path_regression(std::span<const NamedInputs> inputs, double tolerance,
                                          DualPathOptions options = {});

/// Bounds for random valid inputs.
struct SampleRanges {
  double spot_min = 0.01, spot_max = 100.0;
  double strike_min = 0.01, strike_max = 100.0;
  double time_min = 0.0, time_max = 30.0;  // T drawn from (time_min, time_max]
  double rate_min = -0.05, rate_max = 0.25;
  double sigma_min = 0.0, sigma_max = 2.0;  // sigma drawn from (sigma_min, sigma_max]
};

/// Deterministic for a given seed on every platform (mt19937_64 with a
/// fixed bits-to-double mapping).
std::vector<NamedInputs> random_inputs(std::size_t count, std::uint64_t seed, const SampleRanges& ranges = {});

/// random_inputs + run_dual_path_regression, with the seed recorded in the report.
RegressionReport run_dual_path_sample(std::size_t count, std::uint64_t seed, double tolerance,
                                      DualPathOptions options = {}, const SampleRanges& ranges = {});

struct TapeRecord {
  Timestamp timestamp{};
  pricing::PricingInputs inputs;  // ticker lives in inputs.ticker
  std::optional<double> observed_price;
};

using Tape = std::vector<TapeRecord>;

inline constexpr std::string_view kTapeHeader = "timestamp,ticker,S,X,T,r,sigma,observed_price";

/// Checks the tape invariants; throws ValidationError citing the 1-based record index.
void validate_tape(std::span<const TapeRecord> tape);
Tape load_tape(std::istream& in);
Tape load_tape(const std::filesystem::path& path);
void write_tape(std::ostream& out, std::span<const TapeRecord> tape);

struct DeviationSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double stdev = 0.0;  // sample (n - 1); 0 when count < 2
  double max_abs = 0.0;
};

DeviationSummary summarize(std::span<const double> deviations);

struct ReplayedRecord {
  std::size_t index = 0;  // 1-based position in the tape
  Timestamp timestamp{};
  std::string ticker;
  double model_price = 0.0;
  std::optional<double> observed_price;
  std::optional<double> deviation;  // model - observed
};

struct ReplayStats {
  std::string cdf_descriptor;
  std::size_t records_processed = 0;
  std::vector<ReplayedRecord> records;
  std::optional<DeviationSummary> overall;  // nullopt when no record carries an observed price
  std::map<std::string, DeviationSummary> per_ticker;
};

/// Aborts with ValidationError naming the record index on any invalid record.
ReplayStats replay_tape(std::span<const TapeRecord> tape, pricing::CdfMode mode);

}  // namespace kv::harness
