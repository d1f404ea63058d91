#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ltepa {

/// Normalized sigmoidal utility U(P) = c * (1/(1 + e^{-a(P-b)}) - d), with the
/// normalization constants c = (1 + e^{ab})/e^{ab} and d = 1/(1 + e^{ab})
/// derived from (a, b) so that U(0) = 0 and U -> 1 as P -> infinity.
class SigmoidParams {
  public:
    /// steepness 1/W, inflection W; both must be finite and positive.
    SigmoidParams(double steepness, double inflection_w);

    double a() const { return a_; }
    double b() const { return b_; }
    double c() const { return c_; }
    double d() const { return d_; }

  private:
    double a_;
    double b_;
    double c_;
    double d_;
};

/// Utility at a transmit power in watts; 0 at zero power, strictly increasing.
double eval(const SigmoidParams& params, double power_w);

/// ln U(P); strictly concave, strictly negative. Requires power_w > 0.
double log_eval(const SigmoidParams& params, double power_w);

/// d/dP ln U(P); strictly positive, strictly decreasing, -> infinity as P -> 0+.
double dlog_eval(const SigmoidParams& params, double power_w);

/// Power at which the utility reaches `target`, by bisection to |dP| <= 1e-9.
/// Throws std::domain_error when the target is at or above the supremum.
double qos_power(const SigmoidParams& params, double target);

/// One utility parameter row keyed by CQI, as read from / written to CSV.
struct CqiParams {
    int cqi;
    SigmoidParams params;
};

/// Serializes rows with header `cqi,a,b`.
std::string params_csv(std::span<const CqiParams> rows);

/// Parses `cqi,a,b` files; also accepts fit-result files whose first three
/// columns match (extra columns are ignored).
std::vector<CqiParams> parse_params_csv(std::string_view text);

}  // namespace ltepa
