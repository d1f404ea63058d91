#pragma once

#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ltepa/sigmoid_utility.hpp"

namespace ltepa {

/// Per-round cap on bid movement: dw(n) = l1 * e^{n / l2}, growing with the
/// round index so the clamp damps early oscillation but never blocks
/// convergence.
struct FluctuationSchedule {
    double l1 = 0.1;
    double l2 = 10.0;

    double max_change(int n) const { return l1 * std::exp(static_cast<double>(n) / l2); }
};

/// One bidder: utility parameters plus its bid history.
struct UeState {
    int id;
    SigmoidParams params;
    double current_bid_w;
    double previous_bid_w;
    double last_power_w;
};

/// Base-station side of the exchange.
struct BsState {
    double total_power_w;
    double shadow_price;
    int iteration;
    double convergence_delta;
};

struct AllocationRound {
    int iteration;
    double shadow_price;
    std::vector<double> bids;
    std::vector<double> powers;
};

struct AllocationTrace {
    std::vector<AllocationRound> rounds;
    std::vector<double> final_powers;
    double final_price;
    bool converged;
    bool stalled;          // all bids reached zero; no price could be formed
    int iterations_used;
};

/// Maximizer of log U(P) - price * P on (0, power_cap]: the cap when the
/// marginal log-utility at the cap still exceeds the price, otherwise the
/// unique root of dlog_eval(P) = price (strict concavity), located by
/// bisection to well below 1e-10 W.
double ue_best_response(const SigmoidParams& params, double price, double power_cap);

/// Limits the step from previous_bid toward new_bid to the schedule's dw(n).
double clamp_bid(double new_bid, double previous_bid, int n, const FluctuationSchedule& schedule);

struct PriceUpdate {
    double price;
    bool stalled;  // set when every bid is zero
};

/// Shadow price announced by the BS: sum of bids over the power budget.
PriceUpdate bs_price_update(std::span<const double> bids, double total_power_w);

struct AllocationConfig {
    double total_power_w = 40.0;
    FluctuationSchedule schedule{};
    double delta = 1e-4;       // bid-change convergence threshold, watts
    int max_rounds = 500;
    double initial_bid_w = 10.0;
};

/// Synchronous bidding rounds: price update, per-UE best response, bid
/// = price * power, fluctuation clamp. Terminates when no bid moved by
/// delta or when max_rounds runs out (converged = false, not an error).
/// Final allocation P_i = w_i / p with p recomputed from the last bids, so
/// the allocations sum to the budget by construction.
AllocationTrace run_allocation(std::span<const SigmoidParams> ues, const AllocationConfig& config);

/// KKT reference solution of the same problem: bisection on the scalar price
/// until the best responses exhaust the budget. Independent of the bidding
/// iteration; used to validate it.
std::vector<double> centralized_oracle(std::span<const SigmoidParams> ues, double total_power_w);

/// Serializes the trace with header `iteration,shadow_price,bid_1..bid_M,power_1..power_M`.
std::string trace_csv(const AllocationTrace& trace);
AllocationTrace parse_trace_csv(std::string_view text);

}  // namespace ltepa
