#include "kv/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kv/errors.hpp"

namespace kv::pricing {
namespace {

void require_finite(double value, const char* field) {
  if (!std::isfinite(value)) throw ValidationError(field, "must be finite");
}

void require_finite_x(double x) {
  if (!std::isfinite(x)) throw DomainError("normal CDF argument must be finite");
}

}  // namespace

void validate(const PricingInputs& in) {
  require_finite(in.spot, "S");
  require_finite(in.strike, "X");
  require_finite(in.time_years, "T");
  require_finite(in.rate, "r");
  require_finite(in.sigma, "sigma");
  if (in.spot <= 0.0) throw ValidationError("S", "must be > 0");
  if (in.strike <= 0.0) throw ValidationError("X", "must be > 0");
  if (in.time_years < 0.0) throw ValidationError("T", "must be > 0");
  if (in.sigma < 0.0) throw ValidationError("sigma", "must be > 0");
  if (in.time_years == 0.0)
    throw DegenerateInputError("T", "degenerate input T = 0; use discounted_intrinsic");
  if (in.sigma == 0.0)
    throw DegenerateInputError("sigma", "degenerate input sigma = 0; use discounted_intrinsic");
}

std::string to_string(CdfMode mode) {
  if (std::holds_alternative<ReferenceCdf>(mode)) return "reference";
  return std::get<PolynomialCdf>(mode).pi_mode == PiMode::PaperLiteral ? "poly/paper"
                                                                       : "poly/full";
}

double normal_cdf_reference(double x) {
  require_finite_x(x);
  return 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0);
}

double normal_cdf_polynomial(double x, PiMode pi_mode) {
  require_finite_x(x);
  using K = CdfPolyConstants;
  const double pi = pi_mode == PiMode::PaperLiteral ? K::paper_pi : std::numbers::pi;
  const double d = 1.0 / (1.0 + K::kappa * std::abs(x));
  double prob =
      1.0 - 1.0 / std::sqrt(2.0 * pi) * std::exp(-0.5 * x * x) * (K::a * d + K::b * d * d + K::c * d * d * d);
  if (x < 0.0) prob = 1.0 - prob;
  return prob;
}

double normal_cdf(double x, CdfMode mode) {
  if (const auto* poly = std::get_if<PolynomialCdf>(&mode))
    return normal_cdf_polynomial(x, poly->pi_mode);
  return normal_cdf_reference(x);
}

double compute_d1(const PricingInputs& in) {
  validate(in);
  return (std::log(in.spot / in.strike) + (in.rate + in.sigma * in.sigma / 2.0) * in.time_years) /
         (in.sigma * std::sqrt(in.time_years));
}

double compute_d2(double d1, double sigma, double time_years) {
  if (!std::isfinite(d1)) throw ValidationError("d1", "must be finite");
  require_finite(sigma, "sigma");
  require_finite(time_years, "T");
  if (sigma <= 0.0) throw ValidationError("sigma", "must be > 0");
  if (time_years <= 0.0) throw ValidationError("T", "must be > 0");
  const double vol_sqrt_t = sigma * std::sqrt(time_years);
  if (vol_sqrt_t == 0.0) throw ValidationError("sigma", "sigma*sqrt(T) underflows to zero");
  return d1 - vol_sqrt_t;
}

PriceBreakdown black_scholes_call(const PricingInputs& in, CdfMode mode) {
  PriceBreakdown out;
  out.cdf_mode = mode;
  out.d1 = compute_d1(in);
  out.d2 = compute_d2(out.d1, in.sigma, in.time_years);
  out.n_d1 = normal_cdf(out.d1, mode);
  out.n_d2 = normal_cdf(out.d2, mode);
  out.discount_factor = in.strike * std::exp(-in.rate * in.time_years);
  const double raw = in.spot * out.n_d1 - out.discount_factor * out.n_d2;
  // Rounding in S*N(d1) can land a few ulps outside [max(S - Xe^{-rT}, 0), S].
  out.call_price = std::clamp(raw, std::max(in.spot - out.discount_factor, 0.0), in.spot);
  return out;
}

double discounted_intrinsic(const PricingInputs& in) {
  require_finite(in.spot, "S");
  require_finite(in.strike, "X");
  require_finite(in.time_years, "T");
  require_finite(in.rate, "r");
  require_finite(in.sigma, "sigma");
  if (in.spot <= 0.0) throw ValidationError("S", "must be > 0");
  if (in.strike <= 0.0) throw ValidationError("X", "must be > 0");
  if (in.time_years < 0.0) throw ValidationError("T", "must be >= 0");
  if (in.sigma < 0.0) throw ValidationError("sigma", "must be >= 0");
  if (in.time_years > 0.0 && in.sigma > 0.0)
    throw ValidationError("", "sigma > 0 and T > 0; use black_scholes_call");
  if (in.time_years == 0.0) return std::max(in.spot - in.strike, 0.0);
  return std::max(in.spot - in.strike * std::exp(-in.rate * in.time_years), 0.0);
}

std::vector<PayoffPoint> payoff_series(double strike, std::optional<double> premium, double s_min,
                                       double s_max, int n_points) {
  require_finite(strike, "strike");
  require_finite(s_min, "min");
  require_finite(s_max, "max");
  if (strike <= 0.0) throw ValidationError("strike", "must be > 0");
  if (premium) {
    require_finite(*premium, "premium");
    if (*premium < 0.0) throw ValidationError("premium", "must be >= 0");
  }
  if (s_min < 0.0) throw ValidationError("min", "must be >= 0");
  if (!(s_min < s_max)) throw ValidationError("max", "range requires min < max");
  if (n_points < 2) throw ValidationError("points", "need at least 2 points");

  std::vector<PayoffPoint> series;
  series.reserve(static_cast<std::size_t>(n_points));
  const double step = (s_max - s_min) / static_cast<double>(n_points - 1);
  for (int i = 0; i < n_points; ++i) {
    const double s_t = i == n_points - 1 ? s_max : s_min + step * i;
    double payoff = std::max(s_t - strike, 0.0);
    if (premium) payoff -= *premium;
    series.push_back({s_t, payoff});
  }
  return series;
}

}  // namespace kv::pricing
