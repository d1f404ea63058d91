#include "ltepa/sigmoid_utility.hpp"

#include <cmath>
#include <stdexcept>

#include "ltepa/csv.hpp"
#include "ltepa/math_detail.hpp"

namespace ltepa {

namespace detail {

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double log_sigmoid(double z) {
    if (z >= 0.0) return -std::log1p(std::exp(-z));
    return z - std::log1p(std::exp(z));
}

double log1mexp(double x) {
    // log(1 - e^{-x}) for x > 0; branch keeps full relative precision at both ends.
    if (x <= 0.6931471805599453) return std::log(-std::expm1(-x));
    return std::log1p(-std::exp(-x));
}

}  // namespace detail

SigmoidParams::SigmoidParams(double steepness, double inflection_w) : a_(steepness), b_(inflection_w) {
    if (!(std::isfinite(a_) && a_ > 0.0)) {
        throw std::invalid_argument("SigmoidParams: steepness must be finite and positive");
    }
    if (!(std::isfinite(b_) && b_ > 0.0)) {
        throw std::invalid_argument("SigmoidParams: inflection must be finite and positive");
    }
    // c = (1 + e^{ab})/e^{ab} rewritten as 1 + e^{-ab} so large a*b cannot overflow.
    c_ = 1.0 + std::exp(-a_ * b_);
    d_ = detail::sigmoid(-a_ * b_);
}

double eval(const SigmoidParams& params, double power_w) {
    if (!(power_w >= 0.0)) throw std::domain_error("eval: power must be non-negative");
    // c*(sigmoid(a(P-b)) - d) == sigmoid(a(P-b)) * (1 - e^{-aP}), since c*d*e^{ab} == 1.
    // The product form is exact at P = 0 and loses no precision for small P.
    return detail::sigmoid(params.a() * (power_w - params.b())) * -std::expm1(-params.a() * power_w);
}

double log_eval(const SigmoidParams& params, double power_w) {
    if (!(power_w > 0.0)) throw std::domain_error("log_eval: power must be positive");
    return detail::log_sigmoid(params.a() * (power_w - params.b())) +
           detail::log1mexp(params.a() * power_w);
}

double dlog_eval(const SigmoidParams& params, double power_w) {
    if (!(power_w > 0.0)) throw std::domain_error("dlog_eval: power must be positive");
    // Equals a*sigma*(1-sigma)/(sigma-d) with sigma = sigmoid(a(P-b)); in the
    // product form the two addends are the log-derivatives of the factors.
    const double a = params.a();
    const double z = a * (power_w - params.b());
    return a * detail::sigmoid(-z) + a / std::expm1(a * power_w);
}

double qos_power(const SigmoidParams& params, double target) {
    if (!(target > 0.0 && target < 1.0)) {
        throw std::domain_error("qos_power: target must be in (0, 1)");
    }
    const double sup = params.c() * (1.0 - params.d());
    if (target >= sup) throw std::domain_error("qos_power: target utility unreachable");

    double lo = 0.0;
    double hi = params.b();
    while (eval(params, hi) < target) hi *= 2.0;
    while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        if (eval(params, mid) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::string params_csv(std::span<const CqiParams> rows) {
    std::string out = "cqi,a,b\n";
    for (const CqiParams& row : rows) {
        out += csv::format(row.cqi);
        out += ',';
        out += csv::format(row.params.a());
        out += ',';
        out += csv::format(row.params.b());
        out += '\n';
    }
    return out;
}

std::vector<CqiParams> parse_params_csv(std::string_view text) {
    const auto lines = csv::split_lines(text);
    if (lines.empty()) throw std::invalid_argument("params csv: empty file");
    const auto header = csv::split_line(lines[0]);
    if (header.size() < 3 || header[0] != "cqi" || header[1] != "a" || header[2] != "b") {
        throw std::invalid_argument("params csv: header must start with cqi,a,b");
    }
    std::vector<CqiParams> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = csv::split_line(lines[i]);
        if (fields.size() < 3) throw std::invalid_argument("params csv: bad row");
        rows.push_back({csv::parse_int(fields[0]),
                        SigmoidParams(csv::parse_double(fields[1]), csv::parse_double(fields[2]))});
    }
    if (rows.empty()) throw std::invalid_argument("params csv: no parameter rows");
    return rows;
}

}  // namespace ltepa
