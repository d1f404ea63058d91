#include "ltepa/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ltepa/csv.hpp"

namespace ltepa {

double ue_best_response(const SigmoidParams& params, double price, double power_cap) {
    if (!(price > 0.0)) throw std::invalid_argument("ue_best_response: price must be positive");
    if (!(power_cap > 0.0)) throw std::invalid_argument("ue_best_response: power cap must be positive");
    if (dlog_eval(params, power_cap) >= price) return power_cap;

    // dlog_eval decreases from ~1/P near zero, so the root is bracketed by
    // [1e-300, cap]. Bisect on the exponent to keep relative precision for
    // roots near zero; stop once the linear width is far below 1e-10 W.
    double lo_log = std::log(1e-300);
    double hi_log = std::log(power_cap);
    for (int i = 0; i < 200; ++i) {
        if (std::exp(hi_log) - std::exp(lo_log) <= 1e-13) break;
        const double mid = 0.5 * (lo_log + hi_log);
        if (mid <= lo_log || mid >= hi_log) break;
        if (dlog_eval(params, std::exp(mid)) > price) {
            lo_log = mid;
        } else {
            hi_log = mid;
        }
    }
    // The lower end keeps dlog_eval above the price, so the result never
    // overshoots the root.
    return std::exp(lo_log);
}

double clamp_bid(double new_bid, double previous_bid, int n, const FluctuationSchedule& schedule) {
    if (n < 1) throw std::invalid_argument("clamp_bid: round index must be at least 1");
    const double limit = schedule.max_change(n);
    const double diff = new_bid - previous_bid;
    if (std::abs(diff) > limit) return previous_bid + std::copysign(limit, diff);
    return new_bid;
}

PriceUpdate bs_price_update(std::span<const double> bids, double total_power_w) {
    if (!(total_power_w > 0.0)) throw std::invalid_argument("bs_price_update: total power must be positive");
    double sum = 0.0;
    for (const double w : bids) {
        if (!(w >= 0.0)) throw std::invalid_argument("bs_price_update: bids must be non-negative");
        sum += w;
    }
    if (sum == 0.0) return {0.0, true};
    return {sum / total_power_w, false};
}

AllocationTrace run_allocation(std::span<const SigmoidParams> ues, const AllocationConfig& config) {
    if (ues.empty()) throw std::invalid_argument("run_allocation: need at least one UE");
    if (!(config.total_power_w > 0.0)) throw std::invalid_argument("run_allocation: total power must be positive");
    if (!(config.delta > 0.0)) throw std::invalid_argument("run_allocation: delta must be positive");
    if (config.max_rounds < 1) throw std::invalid_argument("run_allocation: max_rounds must be at least 1");
    if (!(config.schedule.l1 > 0.0) || !(config.schedule.l2 > 0.0)) {
        throw std::invalid_argument("run_allocation: fluctuation schedule must be positive");
    }
    if (!(config.initial_bid_w >= 0.0)) throw std::invalid_argument("run_allocation: initial bid must be non-negative");

    const std::size_t m = ues.size();
    std::vector<UeState> states;
    states.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        // BS bootstraps the comparison with a zero previous bid.
        states.push_back({static_cast<int>(i + 1), ues[i], config.initial_bid_w, 0.0, 0.0});
    }
    BsState bs{config.total_power_w, 0.0, 0, config.delta};

    AllocationTrace trace;
    trace.converged = false;
    trace.stalled = false;

    std::vector<double> bids(m);
    for (bs.iteration = 1; bs.iteration <= config.max_rounds; ++bs.iteration) {
        double max_move = 0.0;
        for (const UeState& ue : states) {
            max_move = std::max(max_move, std::abs(ue.current_bid_w - ue.previous_bid_w));
        }
        if (max_move < bs.convergence_delta) {
            trace.converged = true;
            break;
        }

        for (std::size_t i = 0; i < m; ++i) bids[i] = states[i].current_bid_w;
        const PriceUpdate update = bs_price_update(bids, bs.total_power_w);
        if (update.stalled) {
            trace.stalled = true;
            break;
        }
        bs.shadow_price = update.price;

        AllocationRound round{bs.iteration, bs.shadow_price, bids, {}};
        round.powers.resize(m);
        for (std::size_t i = 0; i < m; ++i) round.powers[i] = bids[i] / bs.shadow_price;
        trace.rounds.push_back(std::move(round));

        for (UeState& ue : states) {
            ue.last_power_w = ue_best_response(ue.params, bs.shadow_price, bs.total_power_w);
            const double candidate = bs.shadow_price * ue.last_power_w;
            ue.previous_bid_w = ue.current_bid_w;
            ue.current_bid_w = clamp_bid(candidate, ue.current_bid_w, bs.iteration, config.schedule);
        }
    }

    trace.iterations_used = static_cast<int>(trace.rounds.size());
    for (std::size_t i = 0; i < m; ++i) bids[i] = states[i].current_bid_w;
    const PriceUpdate final_update = bs_price_update(bids, bs.total_power_w);
    trace.final_price = final_update.price;
    trace.final_powers.assign(m, 0.0);
    if (final_update.stalled) {
        trace.stalled = true;
        trace.converged = false;
    } else {
        for (std::size_t i = 0; i < m; ++i) trace.final_powers[i] = bids[i] / final_update.price;
    }
    return trace;
}

std::vector<double> centralized_oracle(std::span<const SigmoidParams> ues, double total_power_w) {
    if (ues.empty()) throw std::invalid_argument("centralized_oracle: need at least one UE");
    if (!(total_power_w > 0.0)) throw std::invalid_argument("centralized_oracle: total power must be positive");

    auto total_response = [&](double price) {
        double sum = 0.0;
        for (const SigmoidParams& ue : ues) sum += ue_best_response(ue, price, total_power_w);
        return sum;
    };

    // Every response is capped below any representable marginal utility at
    // this price, so the total starts at M * P_T and decreases with price.
    double lo = 1e-300;
    double hi = 1.0;
    while (hi < 1e300 && total_response(hi) > total_power_w) hi *= 2.0;

    double price = hi;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double total = total_response(mid);
        price = mid;
        if (std::abs(total - total_power_w) <= 1e-9) break;
        if (total > total_power_w) {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    std::vector<double> powers;
    powers.reserve(ues.size());
    for (const SigmoidParams& ue : ues) powers.push_back(ue_best_response(ue, price, total_power_w));
    return powers;
}

std::string trace_csv(const AllocationTrace& trace) {
    const std::size_t m = trace.rounds.empty() ? trace.final_powers.size() : trace.rounds.front().bids.size();
    std::string out = "iteration,shadow_price";
    for (std::size_t i = 1; i <= m; ++i) out += ",bid_" + std::to_string(i);
    for (std::size_t i = 1; i <= m; ++i) out += ",power_" + std::to_string(i);
    out += '\n';
    for (const AllocationRound& round : trace.rounds) {
        out += csv::format(round.iteration);
        out += ',';
        out += csv::format(round.shadow_price);
        for (const double w : round.bids) {
            out += ',';
            out += csv::format(w);
        }
        for (const double p : round.powers) {
            out += ',';
            out += csv::format(p);
        }
        out += '\n';
    }
    return out;
}

AllocationTrace parse_trace_csv(std::string_view text) {
    const auto lines = csv::split_lines(text);
    if (lines.empty()) throw std::invalid_argument("trace csv: empty file");
    const auto header = csv::split_line(lines[0]);
    if (header.size() < 2 || header[0] != "iteration" || header[1] != "shadow_price" ||
        (header.size() - 2) % 2 != 0) {
        throw std::invalid_argument("trace csv: bad header");
    }
    const std::size_t m = (header.size() - 2) / 2;
    AllocationTrace trace{};
    trace.final_price = 0.0;
    trace.converged = false;
    trace.stalled = false;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = csv::split_line(lines[i]);
        if (fields.size() != header.size()) throw std::invalid_argument("trace csv: bad row");
        AllocationRound round{csv::parse_int(fields[0]), csv::parse_double(fields[1]), {}, {}};
        for (std::size_t j = 0; j < m; ++j) round.bids.push_back(csv::parse_double(fields[2 + j]));
        for (std::size_t j = 0; j < m; ++j) round.powers.push_back(csv::parse_double(fields[2 + m + j]));
        trace.rounds.push_back(std::move(round));
    }
    trace.iterations_used = static_cast<int>(trace.rounds.size());
    return trace;
}

}  // namespace ltepa
