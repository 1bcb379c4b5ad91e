// Writes a synthetic tape whose observed prices come from the reference
// pricer, so a reference-mode replay must show zero deviation.
//
//   kv_make_tape [--records N] [--seed S] > tape.csv

#include <chrono>
#include <cmath>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "kv/csv.hpp"
#include "kv/harness.hpp"
#include "kv/pricing.hpp"

namespace {

// Values are rounded to `places` and re-parsed so the file reproduces them exactly.
double quantize(double value, int places) {
  const double scale = std::pow(10.0, places);
  std::ostringstream text;
  text.precision(places);
  text << std::fixed << std::round(value * scale) / scale;
  return kv::csv::parse_number(text.str(), "value", 0);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate a synthetic pricing-input tape", "kv_make_tape"};
  std::size_t records = 100;
  std::uint64_t seed = 20240102;
  app.add_option("--records", records, "Number of records");
  app.add_option("--seed", seed, "Random seed");
  CLI11_PARSE(app, argc, argv);

  const char* tickers[] = {"IBM", "MSFT", "ABC", "XYZ"};
  const double spots[] = {42.0, 55.0, 80.0, 25.0};
  std::mt19937_64 rng(seed);
  auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  kv::harness::Tape tape;
  auto ts = kv::parse_timestamp("2024-01-02T14:30:00Z");
  for (std::size_t i = 0; i < records; ++i) {
    const std::size_t k = i % 4;
    kv::harness::TapeRecord rec;
    rec.timestamp = ts;
    rec.inputs.ticker = tickers[k];
    rec.inputs.spot = quantize(spots[k] * (0.9 + 0.2 * unit()), 2);
    rec.inputs.strike = quantize(spots[k] * (0.8 + 0.4 * unit()), 0);
    rec.inputs.time_years = quantize(0.05 + 0.95 * unit(), 4);
    rec.inputs.rate = quantize(0.01 + 0.09 * unit(), 4);
    rec.inputs.sigma = quantize(0.1 + 0.4 * unit(), 4);
    rec.observed_price = kv::pricing::black_scholes_call(rec.inputs, kv::pricing::kReference).call_price;
    tape.push_back(rec);
    ts += std::chrono::milliseconds(250 + static_cast<int>(unit() * 750));
  }
  kv::harness::validate_tape(tape);
  kv::harness::write_tape(std::cout, tape);
  return 0;
}
