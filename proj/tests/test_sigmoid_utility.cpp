#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ltepa/sigmoid_utility.hpp"
#include "param_fixtures.hpp"

using namespace ltepa;

namespace {

// Closed-form inverse used as the oracle for the bisection in qos_power.
double closed_form_inverse(const SigmoidParams& p, double target) {
    const double sigma = target / p.c() + p.d();
    return p.b() - std::log(1.0 / sigma - 1.0) / p.a();
}

}  // namespace

TEST_CASE("normalization constants are derived consistently") {
    for (const ParamRow& row : kReferenceParams) {
        const SigmoidParams p(row.a, row.b);
        CHECK(std::abs(p.c() * (1.0 - p.d()) - 1.0) <= 1e-12);
        CHECK(p.d() > 0.0);
        CHECK(p.d() < 0.5);
        CHECK(p.c() > 0.5);
        CHECK(p.c() > 1.0);
    }
}

TEST_CASE("constructor rejects non-positive parameters") {
    CHECK_THROWS_AS(SigmoidParams(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(SigmoidParams(1.0, -2.0), std::invalid_argument);
    CHECK_THROWS_AS(SigmoidParams(std::nan(""), 1.0), std::invalid_argument);
}

TEST_CASE("utility is zero at zero power for every parameter set") {
    for (const ParamRow& row : kReferenceParams) {
        CHECK(eval(SigmoidParams(row.a, row.b), 0.0) == 0.0);
    }
}

TEST_CASE("utility at the inflection point has the closed form (1 - e^{-ab})/2") {
    for (const ParamRow& row : kReferenceParams) {
        const SigmoidParams p(row.a, row.b);
        const double expected = (1.0 - std::exp(-row.a * row.b)) / 2.0;
        CHECK(eval(p, row.b) == doctest::Approx(expected).epsilon(1e-12));
    }
    // spot value for the steepest reference row
    CHECK(eval(SigmoidParams(1.6471, 2.8058), 2.8058) == doctest::Approx(0.4951).epsilon(1e-4));
}

TEST_CASE("utility approaches one far beyond the inflection") {
    const SigmoidParams p(0.5077, 9.8303);
    CHECK(eval(p, 1000.0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("utility is strictly increasing and bounded by [0, 1]") {
    for (const ParamRow& row : kReferenceParams) {
        const SigmoidParams p(row.a, row.b);
        double previous = -1.0;
        for (int i = 0; i <= 1000; ++i) {
            const double u = eval(p, 0.04 * i);
            CHECK(u >= 0.0);
            CHECK(u <= 1.0);
            // strict growth until the value saturates to 1 in double precision
            if (previous < 1.0) {
                CHECK(u > previous);
            } else {
                CHECK(u == 1.0);
            }
            previous = u;
        }
    }
}

TEST_CASE("eval rejects negative power") {
    CHECK_THROWS_AS(eval(SigmoidParams(1.0, 1.0), -0.1), std::domain_error);
}

TEST_CASE("log utility equals -ln 2 where the utility is one half") {
    for (const ParamRow& row : kReferenceParams) {
        const SigmoidParams p(row.a, row.b);
        const double p_half = qos_power(p, 0.5);
        CHECK(log_eval(p, p_half) == doctest::Approx(-std::log(2.0)).epsilon(1e-8));
    }
}

TEST_CASE("log utility is strictly concave") {
    // coarse grid from the closed-form spot check
    const SigmoidParams p15(1.6471, 2.8058);
    for (int w = 2; w < 40; ++w) {
        const double d2 = log_eval(p15, w - 1.0) - 2.0 * log_eval(p15, static_cast<double>(w)) +
                          log_eval(p15, w + 1.0);
        CHECK(d2 < 0.0);
    }
    // dense grids for every reference parameter set
    for (const ParamRow& row : kReferenceParams) {
        const SigmoidParams p(row.a, row.b);
        const double h = 0.02;
        for (int i = 1; i <= 2000; ++i) {
            const double x = 0.02 * i;
            const double d2 = log_eval(p, x) - 2.0 * log_eval(p, x + h) + log_eval(p, x + 2.0 * h);
            CHECK(d2 < 0.0);
        }
    }
}

TEST_CASE("log utility approaches zero from below") {
    for (const ParamRow& row : kReferenceParams) {
        const SigmoidParams p(row.a, row.b);
        const double v = log_eval(p, 1e6);
        CHECK(v <= 0.0);
        CHECK(v > -1e-6);
    }
    CHECK_THROWS_AS(log_eval(SigmoidParams(1.0, 1.0), 0.0), std::domain_error);
}

TEST_CASE("marginal log utility at the inflection matches the closed form") {
    for (const ParamRow& row : kReferenceParams) {
        const SigmoidParams p(row.a, row.b);
        const double expected = row.a / 4.0 / (0.5 - p.d());
        CHECK(dlog_eval(p, row.b) == doctest::Approx(expected).epsilon(1e-12));
    }
    CHECK(dlog_eval(SigmoidParams(1.6471, 2.8058), 2.8058) == doctest::Approx(0.8399).epsilon(1e-4));
}

TEST_CASE("marginal log utility matches central finite differences") {
    for (const ParamRow& row : kReferenceParams) {
        const SigmoidParams p(row.a, row.b);
        for (int i = 0; i <= 395; ++i) {
            const double x = 0.5 + 0.1 * i;
            const double h = 1e-6 * std::max(1.0, x);
            const double fd = (log_eval(p, x + h) - log_eval(p, x - h)) / (2.0 * h);
            const double an = dlog_eval(p, x);
            const double err = std::abs(an - fd);
            // absolute floor covers the saturated tail where both values
            // vanish below finite-difference resolution
            CHECK(err <= 1e-6 * std::max(std::abs(an), std::abs(fd)) + 1e-9);
        }
    }
}

TEST_CASE("marginal log utility is strictly decreasing and positive") {
    for (const ParamRow& row : kReferenceParams) {
        const SigmoidParams p(row.a, row.b);
        double previous = std::numeric_limits<double>::infinity();
        for (int i = 1; i <= 400; ++i) {
            const double g = dlog_eval(p, 0.1 * i);
            CHECK(g > 0.0);
            CHECK(g < previous);
            previous = g;
        }
    }
    // blows up toward zero power
    CHECK(dlog_eval(SigmoidParams(1.0, 5.0), 1e-9) > 1e8);
    CHECK_THROWS_AS(dlog_eval(SigmoidParams(1.0, 1.0), 0.0), std::domain_error);
}

TEST_CASE("qos_power agrees with the closed-form inverse") {
    const SigmoidParams p15(1.6471, 2.8058);
    CHECK(qos_power(p15, 0.95) == doctest::Approx(closed_form_inverse(p15, 0.95)).epsilon(1e-8));
    CHECK(qos_power(p15, 0.95) == doctest::Approx(4.599).epsilon(1e-3));

    const SigmoidParams p1(0.8676, 6.2257);
    CHECK(qos_power(p1, 0.95) == doctest::Approx(closed_form_inverse(p1, 0.95)).epsilon(1e-8));
    CHECK(qos_power(p1, 0.95) == doctest::Approx(9.62).epsilon(1e-3));

    for (const ParamRow& row : kReferenceParams) {
        const SigmoidParams p(row.a, row.b);
        for (const double target : {0.1, 0.5, 0.9, 0.99}) {
            CHECK(qos_power(p, target) == doctest::Approx(closed_form_inverse(p, target)).epsilon(1e-7));
        }
    }
}

TEST_CASE("qos_power inverts eval") {
    for (const ParamRow& row : kReferenceParams) {
        const SigmoidParams p(row.a, row.b);
        CHECK(std::abs(qos_power(p, eval(p, row.b)) - row.b) <= 1e-9);
        for (const double power : {0.5, 2.0, 7.5, 20.0, 100.0}) {
            const double u = eval(p, power);
            // deep saturation destroys the information needed to invert: the
            // round trip is only meaningful while 1 - u is well above 1 ulp
            if (u > 1e-12 && u < 1.0 - 1e-6) {
                CHECK(std::abs(qos_power(p, u) - power) <= 1e-9 * std::max(1.0, power) + 1e-9);
            }
        }
    }
}

TEST_CASE("qos_power rejects unreachable targets") {
    const SigmoidParams p(1.0, 2.0);
    CHECK_THROWS_AS(qos_power(p, 0.0), std::domain_error);
    CHECK_THROWS_AS(qos_power(p, 1.0), std::domain_error);
    CHECK_THROWS_AS(qos_power(p, 1.5), std::domain_error);
}

TEST_CASE("params CSV round trip, including the fit-result header") {
    std::vector<CqiParams> rows;
    for (const ParamRow& row : kReferenceParams) rows.push_back({row.cqi, SigmoidParams(row.a, row.b)});
    const std::string text = params_csv(rows);
    const auto parsed = parse_params_csv(text);
    REQUIRE(parsed.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(parsed[i].cqi == rows[i].cqi);
        CHECK(parsed[i].params.a() == rows[i].params.a());
        CHECK(parsed[i].params.b() == rows[i].params.b());
    }
    CHECK(params_csv(parsed) == text);

    // fit-result files carry three extra columns; the first three match
    const auto wide = parse_params_csv("cqi,a,b,mse,iterations,converged\n3,0.5,2.5,1e-5,12,true\n");
    REQUIRE(wide.size() == 1);
    CHECK(wide[0].cqi == 3);
    CHECK(wide[0].params.a() == 0.5);
    CHECK(wide[0].params.b() == 2.5);

    CHECK_THROWS_AS(parse_params_csv("x,y\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_params_csv("cqi,a,b\n"), std::invalid_argument);
}
