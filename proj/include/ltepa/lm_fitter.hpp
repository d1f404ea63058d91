#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ltepa/sigmoid_utility.hpp"

namespace ltepa {

/// Least-squares problem: fit (a, b) of the sigmoidal utility to sampled
/// (power, utility) pairs. Powers must be strictly ascending and the curve
/// must not be flat (at least one sample above 0.05 and one below 0.95).
struct FitProblem {
    std::vector<double> powers_w;
    std::vector<double> utilities;
    double initial_a = 1.0;
    double initial_b = 1.0;
    int max_iterations = 200;
    double gradient_tol = 1e-10;
    double step_tol = 1e-12;
};

/// Throws std::invalid_argument when the problem is degenerate.
void validate(const FitProblem& problem);

/// Data-driven starting point: a0 = 4/(P90 - P10), b0 = P50, where Pq is the
/// first power at which the sampled curve reaches q.
std::pair<double, double> quantile_warm_start(std::span<const double> powers_w,
                                              std::span<const double> utilities);

/// r_i = utility_i - U(power_i); the fit minimizes the sum of squares.
std::vector<double> residuals(const FitProblem& problem, const SigmoidParams& params);

/// Analytic model Jacobian, columns (dU/da, dU/db), one row per sample.
/// Includes the dependence of the normalization constants on (a, b).
struct Jacobian {
    std::vector<double> da;
    std::vector<double> db;
};
Jacobian jacobian(const FitProblem& problem, const SigmoidParams& params);

/// One damped normal-equations solve: (J^T J + lambda I) delta = J^T r.
/// Throws std::runtime_error when the 2x2 system is numerically singular.
struct LmStep {
    double delta_a;
    double delta_b;
    double predicted_a;
    double predicted_b;
};
LmStep lm_step(const FitProblem& problem, const SigmoidParams& params, double lambda);

struct FitResult {
    SigmoidParams params;
    double mse;       // sum of squared residuals divided by the sample count
    int iterations;   // trial steps taken, accepted or rejected
    bool converged;
    double final_lambda;
};

/// Damped iteration: accept a step when the error drops (shrink lambda),
/// otherwise reject and grow lambda; steps leaving the positive quadrant are
/// rejected. Stops on the gradient or step tolerance; running out of
/// iterations yields converged = false rather than an error.
FitResult fit(const FitProblem& problem);

struct FitRow {
    int cqi;
    FitResult result;
};

/// Serializes rows with header `cqi,a,b,mse,iterations,converged`.
std::string fit_results_csv(std::span<const FitRow> rows);
std::vector<FitRow> parse_fit_results_csv(std::string_view text);

}  // namespace ltepa
