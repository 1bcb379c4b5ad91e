#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "kv/errors.hpp"
#include "kv/harness.hpp"
#include "kv/report.hpp"
#include "kv/timestamp.hpp"

namespace {

using namespace kv::harness;
using namespace kv::pricing;

const std::filesystem::path kData = KV_DATA_SOURCE_DIR;

std::string header() { return std::string(kGoldenHeader) + "\n"; }

std::vector<GoldenCase> golden(const std::string& body) {
  std::istringstream in(header() + body);
  return load_golden(in);
}

Tape tape(const std::string& body) {
  std::istringstream in(std::string(kTapeHeader) + "\n" + body);
  return load_tape(in);
}

template <class Fn>
std::size_t parse_error_line(Fn&& fn) {
  try {
    fn();
  } catch (const kv::ParseError& e) {
    return e.line();
  }
  return 0;
}

TEST(LoadGolden, HullFile) {
  const auto cases = load_golden(kData / "hull.csv");
  ASSERT_EQ(cases.size(), 1u);
  EXPECT_EQ(cases[0].case_id, "hull");
  EXPECT_EQ(cases[0].inputs, (PricingInputs{"hull", 42, 40, 0.5, 0.10, 0.20}));
  ASSERT_TRUE(cases[0].expectation(Field::Call).has_value());
  EXPECT_EQ(cases[0].expectation(Field::Call)->value, 4.76);
  EXPECT_EQ(cases[0].expectation(Field::Call)->tolerance, 0.005);
}

TEST(LoadGolden, Errors) {
  std::istringstream empty("");
  EXPECT_THROW(load_golden(empty), kv::ParseError);
  try {
    golden("");
    FAIL();
  } catch (const kv::Error& e) {
    EXPECT_NE(std::string(e.what()).find("no cases"), std::string::npos);
  }
  EXPECT_THROW(golden("a,42,40,0.5,0.1,0.2,,,,,,4.76,,,,,,0\n"), kv::ValidationError);
  EXPECT_THROW(golden("a,42,40,0.5,0.1,0.2,,,,,,4.76,,,,,,-1\n"), kv::ValidationError);
  EXPECT_THROW(golden("a,42,40,0.5,0.1,0.2,,,,,,,,,,,,\n"), kv::ValidationError);
  EXPECT_EQ(parse_error_line([] { golden("a,42,40,0.5,0.1,0.2,,,,,,4.76,,,,,,0.005\nb,42,40\n"); }), 3u);
  EXPECT_EQ(parse_error_line([] { golden("a,42,forty,0.5,0.1,0.2,,,,,,4.76,,,,,,0.005\n"); }), 2u);
  EXPECT_EQ(parse_error_line([] { golden("a,42,40,0.5,0.1,0.2,,,,,,4.76,,,,,,\n"); }), 2u);
  EXPECT_EQ(parse_error_line([] { golden("a,42,40,0.5,0.1,0.2,,,,,,,,,,,,0.005\n"); }), 2u);
  std::istringstream wrong("id,S,X\n");
  EXPECT_THROW(load_golden(wrong), kv::ParseError);
  EXPECT_THROW(load_golden(kData / "does-not-exist.csv"), kv::Error);
}

TEST(GoldenRegression, HullPassesAllFields) {
  const auto cases = load_golden(kData / "hull.csv");
  const auto report = run_golden_regression(cases, kReference);
  EXPECT_TRUE(report.ok());
  ASSERT_EQ(report.cases.size(), 1u);
  EXPECT_EQ(report.cases[0].fields.size(), 6u);
  EXPECT_EQ(report.run, 1u);
  EXPECT_EQ(report.passed, 1u);
}

TEST(GoldenRegression, PerturbedCallFails) {
  const auto report = run_golden_regression(load_golden(kData / "hull_perturbed.csv"), kReference);
  EXPECT_FALSE(report.ok());
  ASSERT_EQ(report.cases[0].fields.size(), 1u);
  EXPECT_EQ(report.cases[0].fields[0].field, Field::Call);
  EXPECT_FALSE(report.cases[0].fields[0].passed);
  EXPECT_NEAR(report.cases[0].fields[0].abs_diff, 0.0406, 1e-4);
}

TEST(GoldenRegression, DegenerateCaseIsolated) {
  const auto cases = golden(
      "a,42,40,0.5,0.1,0.2,,,,,,4.76,,,,,,0.005\n"
      "flat,42,40,0.5,0.1,0,,,,,,4.76,,,,,,0.005\n"
      "c,42,40,0.5,0.1,0.2,,,,,,4.76,,,,,,0.005\n");
  const auto report = run_golden_regression(cases, kReference);
  ASSERT_EQ(report.cases.size(), 3u);
  EXPECT_TRUE(report.cases[0].passed);
  EXPECT_FALSE(report.cases[1].passed);
  ASSERT_TRUE(report.cases[1].error.has_value());
  EXPECT_NE(report.cases[1].error->find("sigma"), std::string::npos);
  EXPECT_TRUE(report.cases[2].passed);
  EXPECT_EQ(report.failed, 1u);
}

TEST(Tolerance, BoundaryEqualityPasses) {
  EXPECT_TRUE(within_tolerance(1.5, 1.0, 0.5));
  EXPECT_FALSE(within_tolerance(1.5000000000000002, 1.0, 0.5));
  EXPECT_TRUE(within_tolerance(0.5, 1.0, 0.5));
  const auto c = black_scholes_call({"a", 42, 40, 0.5, 0.1, 0.2}).call_price;
  std::ostringstream row;
  row.precision(17);
  const double expected = c + 0.25;
  const double tol = std::fabs(c - expected);
  row << "edge,42,40,0.5,0.1,0.2,,,,,," << expected << ",,,,,," << tol << "\n";
  EXPECT_TRUE(run_golden_regression(golden(row.str()), kReference).ok());
}

TEST(GoldenRegression, OrderIndependentOfThreads) {
  std::ostringstream body;
  for (int i = 0; i < 200; ++i)
    body << "case" << i << "," << 10 + i << ",50,0.5,0.05," << (i % 7 == 0 ? 0.0 : 0.3) << ",,,,,,1,,,,,,0.5\n";
  const auto cases = golden(body.str());
  const auto serial = run_golden_regression(cases, kReference, {1});
  const auto parallel = run_golden_regression(cases, kReference, {8});
  std::ostringstream a, b, c, d;
  write_table(a, serial);
  write_table(b, parallel);
  write_records(c, serial);
  write_records(d, parallel);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(c.str(), d.str());
  for (std::size_t i = 0; i < cases.size(); ++i) EXPECT_EQ(parallel.cases[i].case_id, cases[i].case_id);
}

TEST(DualPath, HullPasses) {
  const std::vector<NamedInputs> inputs{{"hull", {"hull", 42, 40, 0.5, 0.10, 0.20}}};
  const auto report = run_dual_path_regression(inputs, 5e-3);
  EXPECT_TRUE(report.ok());
  EXPECT_EQ(report.mode, ReportMode::DualPath);
}

TEST(DualPath, IdenticalEvaluatorsGiveZeroDiff) {
  const auto report = run_dual_path_sample(500, 3, 1e-12, {kReference, kReference, {}});
  EXPECT_TRUE(report.ok());
  EXPECT_EQ(report.max_diff[static_cast<std::size_t>(Field::Call)], 0.0);
}

TEST(DualPath, RandomSamplePassesAndRecordsSeed) {
  const auto report = run_dual_path_sample(10000, 1, 5e-3, {kPolynomial, kReference, {4}});
  EXPECT_TRUE(report.ok());
  EXPECT_EQ(report.seed, 1u);
  EXPECT_EQ(report.run, 10000u);
  EXPECT_LE(*report.max_diff[static_cast<std::size_t>(Field::Call)], 5e-3);
}

// C differs by at most S*eps + X*e^{-rT}*eps; with r < 0 the discount exceeds X.
TEST(DualPath, ErrorPropagationBound) {
  double cdf_err = 0.0;
  for (int i = -8000; i <= 8000; ++i) {
    const double x = i / 1000.0;
    cdf_err = std::max(cdf_err, std::fabs(normal_cdf_polynomial(x) - normal_cdf_reference(x)));
  }
  for (const auto& [id, in] : random_inputs(5000, 99)) {
    const double diff =
        std::fabs(black_scholes_call(in, kPolynomial).call_price - black_scholes_call(in).call_price);
    const double discount = in.strike * std::exp(-in.rate * in.time_years);
    ASSERT_LE(diff, (in.spot + discount) * cdf_err) << id;
  }
}

TEST(RandomInputs, DeterministicAndInRange) {
  const auto a = random_inputs(1000, 42);
  const auto b = random_inputs(1000, 42);
  ASSERT_EQ(a.size(), 1000u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_EQ(a[i].inputs, b[i].inputs);
    const auto& in = a[i].inputs;
    ASSERT_GE(in.spot, 0.01);
    ASSERT_LT(in.spot, 100.0);
    ASSERT_GT(in.time_years, 0.0);
    ASSERT_LE(in.time_years, 30.0);
    ASSERT_GT(in.sigma, 0.0);
    ASSERT_LE(in.sigma, 2.0);
  }
  EXPECT_EQ(a[0].case_id, "rand-1");
  EXPECT_NE(random_inputs(1, 43)[0].inputs, a[0].inputs);
}

TEST(Tape, LoadAndValidate) {
  const auto t = tape("2024-01-02T14:30:00Z,ABC,42,40,0.5,0.1,0.2,4.76\n2024-01-02T14:30:00Z,ABC,42,40,0.5,0.1,0.2,\n");
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[0].observed_price, 4.76);
  EXPECT_FALSE(t[1].observed_price.has_value());
  EXPECT_EQ(t[0].inputs.ticker, "ABC");
}

TEST(Tape, DecreasingTimestampCitesRecord) {
  try {
    tape("2024-01-02T14:30:01Z,A,42,40,0.5,0.1,0.2,4.76\n"
         "2024-01-02T14:30:02Z,A,42,40,0.5,0.1,0.2,4.76\n"
         "2024-01-02T14:30:00Z,A,42,40,0.5,0.1,0.2,4.76\n");
    FAIL();
  } catch (const kv::ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("record 3"), std::string::npos) << e.what();
  }
}

TEST(Tape, InvalidRecordsRejected) {
  EXPECT_THROW(tape(""), kv::Error);
  EXPECT_THROW(tape("2024-01-02T14:30:01Z,A,42,40,0.5,0.1,0,4.76\n"), kv::ValidationError);
  EXPECT_THROW(tape("2024-01-02T14:30:01Z,A,42,40,0.5,0.1,0.2,-1\n"), kv::ValidationError);
  EXPECT_THROW(tape("noon,A,42,40,0.5,0.1,0.2,1\n"), kv::ParseError);
}

TEST(Tape, WriteLoadRoundTrip) {
  const auto original = load_tape(kData / "tape_synthetic_100.csv");
  std::stringstream buf;
  write_tape(buf, original);
  const auto again = load_tape(buf);
  ASSERT_EQ(again.size(), original.size());
  for (std::size_t i = 0; i < again.size(); ++i) {
    EXPECT_EQ(again[i].timestamp, original[i].timestamp);
    EXPECT_EQ(again[i].inputs, original[i].inputs);
    EXPECT_EQ(again[i].observed_price, original[i].observed_price);
  }
}

TEST(Replay, HullSingleRecord) {
  const auto stats = replay_tape(tape("2024-01-02T14:30:00Z,HULL,42,40,0.5,0.10,0.20,4.76\n"), kReference);
  ASSERT_TRUE(stats.overall.has_value());
  EXPECT_LE(stats.overall->max_abs, 0.005);
  EXPECT_EQ(stats.records_processed, 1u);
}

TEST(Replay, SelfConsistentTapeHasZeroDeviation) {
  const auto t = load_tape(kData / "tape_synthetic_100.csv");
  const auto stats = replay_tape(t, kReference);
  ASSERT_EQ(stats.records.size(), t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_EQ(stats.records[i].index, i + 1);
    EXPECT_EQ(stats.records[i].ticker, t[i].inputs.ticker);
    EXPECT_EQ(stats.records[i].timestamp, t[i].timestamp);
  }
  EXPECT_EQ(stats.overall->mean, 0.0);
  EXPECT_EQ(stats.overall->max_abs, 0.0);
  EXPECT_EQ(stats.per_ticker.size(), 4u);
}

TEST(Replay, InvalidRecordAborts) {
  Tape t = tape("2024-01-02T14:30:00Z,HULL,42,40,0.5,0.10,0.20,4.76\n");
  t.push_back(t[0]);
  t[1].inputs.strike = -5;
  EXPECT_THROW(replay_tape(t, kReference), kv::ValidationError);
}

TEST(Summary, SampleStatistics) {
  const std::vector<double> d{1.0, -1.0, 3.0};
  const auto s = summarize(d);
  EXPECT_EQ(s.count, 3u);
  EXPECT_DOUBLE_EQ(s.mean, 1.0);
  EXPECT_DOUBLE_EQ(s.stdev, 2.0);
  EXPECT_EQ(s.max_abs, 3.0);
  const std::vector<double> one{0.25};
  EXPECT_EQ(summarize(one).stdev, 0.0);
}

TEST(Report, TableEndsWithPassCount) {
  const auto report = run_golden_regression(load_golden(kData / "hull.csv"), kReference);
  std::ostringstream out;
  write_table(out, report);
  EXPECT_NE(out.str().find("1/1 passed"), std::string::npos) << out.str();
  std::ostringstream rec;
  write_records(rec, report);
  EXPECT_NE(rec.str().find("\"summary\""), std::string::npos) << rec.str();
}

}  // namespace
