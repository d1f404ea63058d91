#include "ltepa/lm_fitter.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ltepa/csv.hpp"
#include "ltepa/math_detail.hpp"

namespace ltepa {

namespace {

constexpr double kLambdaInit = 1e-2;
constexpr double kLambdaMin = 1e-12;
constexpr double kLambdaMax = 1e12;
constexpr double kLambdaGrow = 10.0;
constexpr double kLambdaShrink = 10.0;

double sum_squared_error(const FitProblem& problem, const SigmoidParams& params) {
    double e = 0.0;
    for (std::size_t i = 0; i < problem.powers_w.size(); ++i) {
        const double r = problem.utilities[i] - eval(params, problem.powers_w[i]);
        e += r * r;
    }
    return e;
}

struct NormalEquations {
    double a11, a12, a22;  // J^T J
    double g1, g2;         // J^T r
};

NormalEquations normal_equations(const FitProblem& problem, const SigmoidParams& params) {
    const Jacobian jac = jacobian(problem, params);
    NormalEquations ne{0.0, 0.0, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < problem.powers_w.size(); ++i) {
        const double r = problem.utilities[i] - eval(params, problem.powers_w[i]);
        ne.a11 += jac.da[i] * jac.da[i];
        ne.a12 += jac.da[i] * jac.db[i];
        ne.a22 += jac.db[i] * jac.db[i];
        ne.g1 += jac.da[i] * r;
        ne.g2 += jac.db[i] * r;
    }
    return ne;
}

LmStep solve_damped(const NormalEquations& ne, double lambda, double a, double b) {
    const double m11 = ne.a11 + lambda;
    const double m22 = ne.a22 + lambda;
    const double det = m11 * m22 - ne.a12 * ne.a12;
    if (!(det >= 1e-300)) throw std::runtime_error("lm_step: singular normal equations");
    const double delta_a = (m22 * ne.g1 - ne.a12 * ne.g2) / det;
    const double delta_b = (m11 * ne.g2 - ne.a12 * ne.g1) / det;
    return {delta_a, delta_b, a + delta_a, b + delta_b};
}

}  // namespace

void validate(const FitProblem& problem) {
    const std::size_t n = problem.powers_w.size();
    if (n < 2) throw std::invalid_argument("fit problem: need at least 2 samples");
    if (problem.utilities.size() != n) throw std::invalid_argument("fit problem: sample size mismatch");
    if (!(problem.powers_w.front() >= 0.0)) throw std::invalid_argument("fit problem: negative power sample");
    bool above = false, below = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(problem.powers_w[i]) || !std::isfinite(problem.utilities[i])) {
            throw std::invalid_argument("fit problem: non-finite sample");
        }
        if (i > 0 && !(problem.powers_w[i] > problem.powers_w[i - 1])) {
            throw std::invalid_argument("fit problem: powers must be strictly ascending");
        }
        if (problem.utilities[i] < 0.0 || problem.utilities[i] > 1.0) {
            throw std::invalid_argument("fit problem: utility outside [0, 1]");
        }
        above |= problem.utilities[i] > 0.05;
        below |= problem.utilities[i] < 0.95;
    }
    if (!above || !below) throw std::invalid_argument("fit problem: curve is degenerate flat");
    if (!(problem.initial_a > 0.0) || !(problem.initial_b > 0.0)) {
        throw std::invalid_argument("fit problem: initial guess must be positive");
    }
    if (problem.max_iterations < 1) throw std::invalid_argument("fit problem: max_iterations must be at least 1");
    if (!(problem.gradient_tol > 0.0) || !(problem.step_tol > 0.0)) {
        throw std::invalid_argument("fit problem: tolerances must be positive");
    }
}

std::pair<double, double> quantile_warm_start(std::span<const double> powers_w,
                                              std::span<const double> utilities) {
    auto first_crossing = [&](double q) {
        for (std::size_t i = 0; i < utilities.size(); ++i) {
            if (utilities[i] >= q) return powers_w[i];
        }
        return powers_w.back();
    };
    const double p10 = first_crossing(0.1);
    const double p50 = first_crossing(0.5);
    const double p90 = first_crossing(0.9);
    const double a0 = p90 > p10 ? 4.0 / (p90 - p10) : 1.0;
    const double b0 = p50 > 0.0 ? p50 : std::max(powers_w.back() / 2.0, 1e-6);
    return {a0, b0};
}

std::vector<double> residuals(const FitProblem& problem, const SigmoidParams& params) {
    std::vector<double> r(problem.powers_w.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] = problem.utilities[i] - eval(params, problem.powers_w[i]);
    }
    return r;
}

Jacobian jacobian(const FitProblem& problem, const SigmoidParams& params) {
    // Differentiates the normalized form U = sigmoid(a(P-b)) * (1 - e^{-aP}),
    // which carries the (a, b) dependence of the normalization constants.
    const double a = params.a();
    const double b = params.b();
    Jacobian jac;
    jac.da.resize(problem.powers_w.size());
    jac.db.resize(problem.powers_w.size());
    for (std::size_t i = 0; i < problem.powers_w.size(); ++i) {
        const double p = problem.powers_w[i];
        const double z = a * (p - b);
        const double sg = detail::sigmoid(z);
        const double sg_comp = detail::sigmoid(-z);          // 1 - sigma, no cancellation
        const double ramp = -std::expm1(-a * p);             // 1 - e^{-aP}
        jac.da[i] = sg * sg_comp * (p - b) * ramp + sg * p * std::exp(-a * p);
        jac.db[i] = -a * sg * sg_comp * ramp;
    }
    return jac;
}

LmStep lm_step(const FitProblem& problem, const SigmoidParams& params, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("lm_step: lambda must be positive");
    return solve_damped(normal_equations(problem, params), lambda, params.a(), params.b());
}

FitResult fit(const FitProblem& problem) {
    validate(problem);
    SigmoidParams params(problem.initial_a, problem.initial_b);
    double lambda = kLambdaInit;
    double error = sum_squared_error(problem, params);
    const double n = static_cast<double>(problem.powers_w.size());

    int iterations = 0;
    bool converged = false;
    while (iterations < problem.max_iterations) {
        const NormalEquations ne = normal_equations(problem, params);
        if (std::max(std::abs(ne.g1), std::abs(ne.g2)) <= problem.gradient_tol) {
            converged = true;
            break;
        }
        const LmStep step = solve_damped(ne, lambda, params.a(), params.b());
        ++iterations;
        if (std::hypot(step.delta_a, step.delta_b) <= problem.step_tol) {
            converged = true;
            break;
        }
        bool accepted = false;
        if (step.predicted_a > 0.0 && step.predicted_b > 0.0) {
            const SigmoidParams candidate(step.predicted_a, step.predicted_b);
            const double candidate_error = sum_squared_error(problem, candidate);
            if (candidate_error < error) {
                params = candidate;
                error = candidate_error;
                accepted = true;
            }
        }
        lambda = accepted ? std::max(lambda / kLambdaShrink, kLambdaMin)
                          : std::min(lambda * kLambdaGrow, kLambdaMax);
    }
    return {params, error / n, iterations, converged, lambda};
}

std::string fit_results_csv(std::span<const FitRow> rows) {
    std::string out = "cqi,a,b,mse,iterations,converged\n";
    for (const FitRow& row : rows) {
        out += csv::format(row.cqi);
        out += ',';
        out += csv::format(row.result.params.a());
        out += ',';
        out += csv::format(row.result.params.b());
        out += ',';
        out += csv::format(row.result.mse);
        out += ',';
        out += csv::format(row.result.iterations);
        out += ',';
        out += csv::format(row.result.converged);
        out += '\n';
    }
    return out;
}

std::vector<FitRow> parse_fit_results_csv(std::string_view text) {
    const auto lines = csv::split_lines(text);
    if (lines.empty() || lines[0] != "cqi,a,b,mse,iterations,converged") {
        throw std::invalid_argument("fit csv: bad header");
    }
    std::vector<FitRow> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = csv::split_line(lines[i]);
        if (fields.size() != 6) throw std::invalid_argument("fit csv: bad row");
        rows.push_back({csv::parse_int(fields[0]),
                        {SigmoidParams(csv::parse_double(fields[1]), csv::parse_double(fields[2])),
                         csv::parse_double(fields[3]), csv::parse_int(fields[4]),
                         csv::parse_bool(fields[5]), 0.0}});
    }
    return rows;
}

}  // namespace ltepa
