#include "ltepa/scenario.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include "ltepa/csv.hpp"

namespace ltepa {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

[[noreturn]] void range_error(std::string_view key, std::string_view what) {
    throw std::invalid_argument("scenario: key '" + std::string(key) + "' " + std::string(what));
}

double parse_number(std::string_view key, std::string_view value) {
    try {
        const double v = csv::parse_double(value);
        if (!std::isfinite(v)) range_error(key, "must be finite");
        return v;
    } catch (const std::invalid_argument&) {
        range_error(key, "has a malformed numeric value");
    }
}

double parse_positive(std::string_view key, std::string_view value) {
    const double v = parse_number(key, value);
    if (!(v > 0.0)) range_error(key, "out of range (must be > 0)");
    return v;
}

int parse_positive_int(std::string_view key, std::string_view value) {
    try {
        const int v = csv::parse_int(value);
        if (v < 1) range_error(key, "out of range (must be >= 1)");
        return v;
    } catch (const std::invalid_argument&) {
        range_error(key, "has a malformed integer value");
    }
}

std::vector<double> parse_distance_list(std::string_view key, std::string_view value) {
    std::vector<double> out;
    for (const auto field : csv::split_line(value)) {
        out.push_back(parse_positive(key, trim(field)));
    }
    return out;
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
    Scenario s;
    std::set<std::string, std::less<>> seen;

    int lineno = 0;
    for (std::string_view raw : csv::split_lines(text)) {
        ++lineno;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw std::invalid_argument("scenario line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw std::invalid_argument("scenario line " + std::to_string(lineno) + ": expected key = value");
        }
        if (!seen.insert(std::string(key)).second) {
            throw std::invalid_argument("scenario line " + std::to_string(lineno) + ": duplicate key '" +
                                        std::string(key) + "'");
        }

        if (key == "bs_power_w") {
            s.budget.bs_power_w = parse_positive(key, value);
        } else if (key == "carrier_freq_hz") {
            s.budget.carrier_freq_hz = parse_positive(key, value);
        } else if (key == "pathloss_exponent") {
            s.budget.pathloss_exponent = parse_positive(key, value);
        } else if (key == "noise_floor_dbm") {
            s.budget.noise_floor_dbm = parse_number(key, value);
        } else if (key == "calibration_k_db") {
            s.budget.calibration_k_db = parse_number(key, value);
        } else if (key == "packet_bits") {
            s.budget.packet_bits = parse_positive_int(key, value);
        } else if (key == "grid_min_w") {
            s.grid_min_w = parse_positive(key, value);
        } else if (key == "grid_max_w") {
            s.grid_max_w = parse_positive(key, value);
        } else if (key == "grid_step_w") {
            s.grid_step_w = parse_positive(key, value);
        } else if (key == "placement") {
            if (value == "far_edge") {
                s.placement = Placement::FarEdgePerCqi;
            } else if (value == "explicit") {
                s.placement = Placement::Explicit;
            } else {
                range_error(key, "must be far_edge or explicit");
            }
        } else if (key == "distances_m") {
            s.distances_m = parse_distance_list(key, value);
        } else if (key == "pt_watts") {
            s.pt_watts = parse_positive(key, value);
        } else if (key == "delta") {
            s.delta = parse_positive(key, value);
        } else if (key == "l1") {
            s.l1 = parse_positive(key, value);
        } else if (key == "l2") {
            s.l2 = parse_positive(key, value);
        } else if (key == "max_rounds") {
            s.max_rounds = parse_positive_int(key, value);
        } else if (key == "initial_bid_w") {
            s.initial_bid_w = parse_positive(key, value);
        } else if (key == "out_dir") {
            s.out_dir = std::string(value);
        } else {
            throw std::invalid_argument("scenario line " + std::to_string(lineno) + ": unknown key '" +
                                        std::string(key) + "'");
        }
    }

    validate(s.budget);
    if (!(s.grid_min_w < s.grid_max_w)) range_error("grid_min_w", "must be below grid_max_w");
    if (power_grid(s).size() < 2) range_error("grid_step_w", "too coarse for the grid span");

    if (s.placement == Placement::Explicit) {
        if (s.distances_m.empty()) range_error("distances_m", "required for explicit placement");
        const double far_edge = distance_for_snr(s.budget, snr_lower_bound(1)).meters;
        for (const double d : s.distances_m) {
            if (d < kMinDistanceM || d > far_edge) {
                range_error("distances_m", "out of range (distances must lie within the cell)");
            }
        }
    } else if (!s.distances_m.empty()) {
        range_error("distances_m", "only allowed with placement = explicit");
    }
    return s;
}

AllocationConfig allocation_config(const Scenario& scenario) {
    return {scenario.pt_watts, {scenario.l1, scenario.l2}, scenario.delta, scenario.max_rounds,
            scenario.initial_bid_w};
}

std::vector<double> power_grid(const Scenario& scenario) {
    std::vector<double> grid;
    const std::size_t count = static_cast<std::size_t>(
        std::floor((scenario.grid_max_w - scenario.grid_min_w) / scenario.grid_step_w + 1e-9));
    grid.reserve(count + 1);
    for (std::size_t i = 0; i <= count; ++i) {
        grid.push_back(scenario.grid_min_w + static_cast<double>(i) * scenario.grid_step_w);
    }
    return grid;
}

std::vector<UePlacement> scenario_placements(const Scenario& scenario) {
    std::vector<UePlacement> placements;
    if (scenario.placement == Placement::FarEdgePerCqi) {
        placements.reserve(15);
        for (int cqi = 1; cqi <= 15; ++cqi) {
            const double far = distance_for_snr(scenario.budget, snr_lower_bound(cqi)).meters;
            placements.push_back({cqi, cqi, far});
        }
        return placements;
    }
    // Explicit: classify each distance by the zone that contains it. Zone far
    // edges count as inside, matching the validated distance range.
    const std::vector<ZoneEdge> zones = cqi_zone_edges(scenario.budget);
    placements.reserve(scenario.distances_m.size());
    for (std::size_t i = 0; i < scenario.distances_m.size(); ++i) {
        const double d = scenario.distances_m[i];
        int cqi = 1;
        for (const ZoneEdge& z : zones) {
            if (d <= z.far_m) {
                cqi = z.cqi;
                break;
            }
        }
        placements.push_back({static_cast<int>(i + 1), cqi, d});
    }
    return placements;
}

}  // namespace ltepa
