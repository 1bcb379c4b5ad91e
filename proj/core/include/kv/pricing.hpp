#pragma once

// Black-Scholes European call on a non-dividend stock, with two
// interchangeable normal-CDF paths: an erfc-based reference and the
// three-term polynomial approximation used by the spreadsheet port.

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace kv::pricing {

struct PricingInputs {
  std::string ticker;
  double spot = 0.0;        // S
  double strike = 0.0;      // X
  double time_years = 0.0;  // T
  double rate = 0.0;        // r, continuously compounded
  double sigma = 0.0;       // annualized volatility

  bool operator==(const PricingInputs&) const = default;
};

/// Throws ValidationError naming the first offending field. sigma == 0 or
/// T == 0 raise DegenerateInputError.
void validate(const PricingInputs& inputs);

enum class PiMode {
  PaperLiteral,   // 3.1415926, as hard-coded in the original listing
  FullPrecision,  // std::numbers::pi
};

struct ReferenceCdf {
  bool operator==(const ReferenceCdf&) const = default;
};

struct PolynomialCdf {
  PiMode pi_mode = PiMode::FullPrecision;
  bool operator==(const PolynomialCdf&) const = default;
};

using CdfMode = std::variant<ReferenceCdf, PolynomialCdf>;

inline constexpr CdfMode kReference = ReferenceCdf{};
inline constexpr CdfMode kPolynomial = PolynomialCdf{PiMode::FullPrecision};
inline constexpr CdfMode kPolynomialPaperPi = PolynomialCdf{PiMode::PaperLiteral};

/// "reference", "poly/full" or "poly/paper".
std::string to_string(CdfMode mode);

/// Coefficients of the three-term approximation; d = 1 / (1 + kappa*|x|).
struct CdfPolyConstants {
  static constexpr double a = 0.4361836;
  static constexpr double b = -0.1201676;
  static constexpr double c = 0.937298;
  static constexpr double kappa = 0.33267;
  static constexpr double paper_pi = 3.1415926;
};

/// Standard normal CDF via erfc; absolute error well under 1e-12.
double normal_cdf_reference(double x);

/// The polynomial approximation, evaluated exactly as the listing does,
/// including the reflection 1 - prob for x < 0. No clamping.
double normal_cdf_polynomial(double x, PiMode pi_mode = PiMode::FullPrecision);

double normal_cdf(double x, CdfMode mode);

double compute_d1(const PricingInputs& inputs);
double compute_d2(double d1, double sigma, double time_years);

struct PriceBreakdown {
  double d1 = 0.0;
  double d2 = 0.0;
  double n_d1 = 0.0;
  double n_d2 = 0.0;
  double discount_factor = 0.0;  // X * exp(-rT)
  double call_price = 0.0;
  CdfMode cdf_mode = kReference;

  bool operator==(const PriceBreakdown&) const = default;
};

PriceBreakdown black_scholes_call(const PricingInputs& inputs, CdfMode mode = kReference);

/// Limit value for sigma == 0 (max(S - X e^{-rT}, 0)) or T == 0
/// (max(S - X, 0)). Rejects inputs where both sigma and T are positive.
double discounted_intrinsic(const PricingInputs& inputs);

struct PayoffPoint {
  double terminal_price = 0.0;
  double payoff = 0.0;

  bool operator==(const PayoffPoint&) const = default;
};

/// Payoff at expiry over n_points evenly spaced terminal prices in
/// [s_min, s_max]. With a premium the payoff is net of it.
std::vector<PayoffPoint> payoff_series(double strike, std::optional<double> premium, double s_min,
                                       double s_max, int n_points);

}  // namespace kv::pricing
