#include "kv/report.hpp"

#include <cstdio>
#include <string>

#include <json.hpp>

namespace kv::harness {
namespace {

using nlohmann::json;

std::string fmt(const char* pattern, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, value);
  return buf;
}

json summary_json(const DeviationSummary& s) {
  return {{"count", s.count}, {"mean", s.mean}, {"stdev", s.stdev}, {"max_abs", s.max_abs}};
}

void write_summary_line(std::ostream& out, const std::string& label, const DeviationSummary& s) {
  out << label << ": n=" << s.count << " mean=" << fmt("%.6g", s.mean) << " stdev=" << fmt("%.6g", s.stdev)
      << " max_abs=" << fmt("%.6g", s.max_abs) << '\n';
}

}  // namespace

std::string_view mode_name(ReportMode mode) {
  return mode == ReportMode::GoldenExpected ? "golden-expected" : "dual-path";
}

void write_table(std::ostream& out, const RegressionReport& report) {
  out << "Regression (" << mode_name(report.mode) << ", cdf=" << report.cdf_descriptor;
  if (report.seed) out << ", seed=" << *report.seed;
  out << ")\n";
  char line[256];
  std::snprintf(line, sizeof line, "%-16s %-8s %16s %16s %12s %10s  %s\n", "case_id", "field", "observed",
                "expected", "abs_diff", "tol", "result");
  out << line;
  for (const auto& c : report.cases) {
    if (c.error) {
      out << c.case_id << "  ERROR  " << *c.error << "  FAIL\n";
      continue;
    }
    for (const auto& f : c.fields) {
      std::snprintf(line, sizeof line, "%-16s %-8s %16.8f %16.8f %12.3e %10.3g  %s\n", c.case_id.c_str(),
                    std::string(field_key(f.field)).c_str(), f.observed, f.expected, f.abs_diff, f.tolerance,
                    f.passed ? "PASS" : "FAIL");
      out << line;
    }
  }
  out << "max diff:";
  bool any = false;
  for (const Field field : kAllFields) {
    if (const auto& d = report.max_diff[static_cast<std::size_t>(field)]) {
      out << ' ' << field_key(field) << '=' << fmt("%.3e", *d);
      any = true;
    }
  }
  if (!any) out << " n/a";
  out << '\n' << report.passed << '/' << report.run << " passed\n";
}

void write_records(std::ostream& out, const RegressionReport& report) {
  for (const auto& c : report.cases) {
    json fields = json::array();
    for (const auto& f : c.fields) {
      fields.push_back({{"field", field_key(f.field)},
                        {"observed", f.observed},
                        {"expected", f.expected},
                        {"abs_diff", f.abs_diff},
                        {"tolerance", f.tolerance},
                        {"passed", f.passed}});
    }
    json rec{{"record", "case"}, {"case_id", c.case_id}, {"passed", c.passed}, {"fields", fields}};
    rec["error"] = c.error ? json(*c.error) : json(nullptr);
    out << rec.dump() << '\n';
  }
  json max_diff = json::object();
  for (const Field field : kAllFields)
    if (const auto& d = report.max_diff[static_cast<std::size_t>(field)]) max_diff[std::string(field_key(field))] = *d;
  json summary{{"record", "summary"}, {"mode", mode_name(report.mode)}, {"cdf", report.cdf_descriptor},
               {"run", report.run},   {"passed", report.passed},        {"failed", report.failed},
               {"max_diff", max_diff}};
  summary["seed"] = report.seed ? json(*report.seed) : json(nullptr);
  out << summary.dump() << '\n';
}

void write_table(std::ostream& out, const ReplayStats& stats) {
  out << "Tape replay (cdf=" << stats.cdf_descriptor << ")\n";
  char line[256];
  std::snprintf(line, sizeof line, "%6s  %-27s %-8s %14s %14s %12s\n", "index", "timestamp", "ticker", "model",
                "observed", "deviation");
  out << line;
  for (const auto& r : stats.records) {
    const std::string observed = r.observed_price ? fmt("%.6f", *r.observed_price) : "-";
    const std::string deviation = r.deviation ? fmt("%.3e", *r.deviation) : "-";
    std::snprintf(line, sizeof line, "%6zu  %-27s %-8s %14.6f %14s %12s\n", r.index,
                  format_timestamp(r.timestamp).c_str(), r.ticker.c_str(), r.model_price, observed.c_str(),
                  deviation.c_str());
    out << line;
  }
  out << "records processed: " << stats.records_processed << '\n';
  if (!stats.overall) {
    out << "deviation: no observed prices on tape\n";
    return;
  }
  write_summary_line(out, "deviation (model - observed)", *stats.overall);
  for (const auto& [ticker, s] : stats.per_ticker) write_summary_line(out, "  " + ticker, s);
}

void write_records(std::ostream& out, const ReplayStats& stats) {
  for (const auto& r : stats.records) {
    json rec{{"record", "tape"},
             {"index", r.index},
             {"timestamp", format_timestamp(r.timestamp)},
             {"ticker", r.ticker},
             {"model_price", r.model_price}};
    rec["observed_price"] = r.observed_price ? json(*r.observed_price) : json(nullptr);
    rec["deviation"] = r.deviation ? json(*r.deviation) : json(nullptr);
    out << rec.dump() << '\n';
  }
  json summary{{"record", "summary"}, {"cdf", stats.cdf_descriptor}, {"records_processed", stats.records_processed}};
  summary["deviation"] = stats.overall ? summary_json(*stats.overall) : json(nullptr);
  json per = json::object();
  for (const auto& [ticker, s] : stats.per_ticker) per[ticker] = summary_json(s);
  summary["per_ticker"] = per;
  out << summary.dump() << '\n';
}

}  // namespace kv::harness
