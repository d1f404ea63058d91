#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ltepa/allocator.hpp"
#include "ltepa/link_model.hpp"

namespace ltepa {

enum class Placement { FarEdgePerCqi, Explicit };

/// A full experiment description. Defaults reproduce the reference cell:
/// one UE at the far edge of each CQI zone bidding for a 40 W budget.
struct Scenario {
    LinkBudget budget{};
    double grid_min_w = 0.01;
    double grid_max_w = 40.0;
    double grid_step_w = 0.01;
    Placement placement = Placement::FarEdgePerCqi;
    std::vector<double> distances_m;  // explicit placement only
    double pt_watts = 40.0;
    double delta = 1e-4;
    double l1 = 0.1;
    double l2 = 10.0;
    int max_rounds = 500;
    double initial_bid_w = 10.0;
    std::string out_dir = "out";
};

/// Parses the line-oriented `key = value` format; `#` starts a comment.
/// Unknown keys, syntax errors (reported with their line number) and range
/// violations (reported with the key name) throw std::invalid_argument.
Scenario parse_scenario(std::string_view text);

AllocationConfig allocation_config(const Scenario& scenario);

/// Transmit power grid implied by the scenario, endpoints inclusive.
std::vector<double> power_grid(const Scenario& scenario);

struct UePlacement {
    int ue;         // 1-based, file column order
    int cqi;
    double distance_m;
};

/// Resolves the placement rule: one UE per CQI at its far zone edge
/// (ordered CQI 1..15), or the explicit distances in input order.
std::vector<UePlacement> scenario_placements(const Scenario& scenario);

}  // namespace ltepa
