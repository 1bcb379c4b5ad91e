#pragma once

// Test-only oracles, deliberately independent of the kernel's code paths.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "kv/pricing.hpp"

namespace kv::testing {

inline long double normal_density(long double t) {
  return std::exp(-0.5L * t * t) / std::sqrt(2.0L * std::numbers::pi_v<long double>);
}

namespace detail {

inline long double simpson(long double a, long double b, long double fa, long double fm, long double fb) {
  return (b - a) / 6.0L * (fa + 4.0L * fm + fb);
}

inline long double adaptive(long double a, long double b, long double fa, long double fm, long double fb,
                            long double whole, long double tol, int depth) {
  const long double m = 0.5L * (a + b);
  const long double lm = 0.5L * (a + m);
  const long double rm = 0.5L * (m + b);
  const long double flm = normal_density(lm);
  const long double frm = normal_density(rm);
  const long double left = simpson(a, m, fa, flm, fm);
  const long double right = simpson(m, b, fm, frm, fb);
  const long double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0L * tol) return left + right + delta / 15.0L;
  return adaptive(a, m, fa, flm, fm, left, tol / 2.0L, depth - 1) +
         adaptive(m, b, fm, frm, fb, right, tol / 2.0L, depth - 1);
}

}  // namespace detail

/// Standard normal CDF by adaptive Simpson quadrature of the density over
/// [0, |x|], plus one half, reflected for negative x.
inline double normal_cdf_quadrature(double x) {
  const long double hi = std::fabs(static_cast<long double>(x));
  if (hi == 0.0L) return 0.5;
  const long double fa = normal_density(0.0L);
  const long double fb = normal_density(hi);
  const long double fm = normal_density(0.5L * hi);
  const long double whole = detail::simpson(0.0L, hi, fa, fm, fb);
  const long double area = detail::adaptive(0.0L, hi, fa, fm, fb, whole, 1e-16L, 30);
  return static_cast<double>(x > 0 ? 0.5L + area : 0.5L - area);
}

/// Quadrature CDF at lo, lo + step, ..., accumulated interval by interval.
inline std::vector<double> normal_cdf_quadrature_grid(double lo, double step, std::size_t count) {
  std::vector<double> out;
  out.reserve(count);
  long double acc = normal_cdf_quadrature(lo);
  long double a = lo;
  for (std::size_t i = 0; i < count; ++i) {
    const long double b = static_cast<long double>(lo) + static_cast<long double>(i) * step;
    if (i > 0) {
      const long double fa = normal_density(a), fb = normal_density(b), fm = normal_density(0.5L * (a + b));
      acc += detail::adaptive(a, b, fa, fm, fb, detail::simpson(a, b, fa, fm, fb), 1e-20L, 20);
    }
    out.push_back(static_cast<double>(acc));
    a = b;
  }
  return out;
}

/// Cell-by-cell spreadsheet recomputation in extended precision.
struct SpreadsheetPrice {
  long double d1, d2, n_d1, n_d2, discount, call;
};

inline SpreadsheetPrice spreadsheet_call(const pricing::PricingInputs& in) {
  const long double s = in.spot, x = in.strike, t = in.time_years, r = in.rate, v = in.sigma;
  SpreadsheetPrice p{};
  p.d1 = (std::log(s / x) + (r + v * v / 2.0L) * t) / (v * std::sqrt(t));
  p.d2 = p.d1 - v * std::sqrt(t);
  p.n_d1 = 0.5L * std::erfc(-p.d1 / std::sqrt(2.0L));
  p.n_d2 = 0.5L * std::erfc(-p.d2 / std::sqrt(2.0L));
  p.discount = x * std::exp(-r * t);
  p.call = s * p.n_d1 - p.discount * p.n_d2;
  return p;
}

struct GeneratorRanges {
  double spot_min = 0.01, spot_max = 1e4;
  double strike_min = 0.01, strike_max = 1e4;
  double time_max = 30.0;  // T in (0, time_max]
  double rate_min = -0.05, rate_max = 0.25;
  double sigma_max = 2.0;  // sigma in (0, sigma_max]
};

/// Random valid pricing inputs for property tests.
class InputGenerator {
 public:
  using Ranges = GeneratorRanges;

  explicit InputGenerator(std::uint64_t seed, Ranges ranges = Ranges{}) : rng_(seed), ranges_(ranges) {}

  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + unit() * (hi - lo); }
  double open_closed(double hi) { return hi - unit() * hi; }

  pricing::PricingInputs next() {
    pricing::PricingInputs in;
    in.ticker = "GEN";
    in.spot = uniform(ranges_.spot_min, ranges_.spot_max);
    in.strike = uniform(ranges_.strike_min, ranges_.strike_max);
    in.time_years = open_closed(ranges_.time_max);
    in.rate = uniform(ranges_.rate_min, ranges_.rate_max);
    in.sigma = open_closed(ranges_.sigma_max);
    return in;
  }

 private:
  std::mt19937_64 rng_;
  Ranges ranges_;
};

}  // namespace kv::testing
