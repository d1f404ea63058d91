#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ltepa/allocator.hpp"
#include "ltepa/lm_fitter.hpp"
#include "ltepa/scenario.hpp"

namespace ltepa {

struct PipelineOptions {
    bool quiet = false;
    std::uint64_t seed = 0;    // drives the fit-demo noise only
    double fit_noise = 0.0;    // uniform amplitude added to sampled curves before fitting
};

struct PipelineOutcome {
    int exit_code;  // 0 success, 2 allocation did not converge
    bool allocation_converged;
    std::vector<std::filesystem::path> files;
};

// Stage outputs. Each writer creates the output directory on demand; callers
// collect the returned paths so a failed run can remove partial files.

std::filesystem::path write_zones(const Scenario& scenario, const std::filesystem::path& out_dir);

/// Writes curves_rx.csv (per-CQI success vs receiver dBm) and curves_tx.csv
/// (per-UE success vs transmit watts at its placement distance).
std::vector<std::filesystem::path> write_curves(const Scenario& scenario,
                                                const std::filesystem::path& out_dir);

/// Synthesizes the per-UE transmit curves and fits utility parameters to each.
std::vector<FitRow> compute_fits(const Scenario& scenario, const PipelineOptions& options);
std::filesystem::path write_fits(const Scenario& scenario, const PipelineOptions& options,
                                 const std::filesystem::path& out_dir, std::vector<FitRow>* rows_out);

/// Runs the bidding allocation for the given parameter rows and writes
/// bids.csv (full trace), allocation.csv (final powers) and summary.json.
PipelineOutcome write_allocation(const Scenario& scenario, const std::vector<CqiParams>& ues,
                                 const std::filesystem::path& out_dir, bool quiet);

/// The whole pipeline: zones, curves, fits, allocation, summary.
PipelineOutcome run_pipeline(const Scenario& scenario, const PipelineOptions& options);

/// RX-axis grid used for the receiver-power curves, relative to the noise floor.
std::vector<double> rx_power_grid(const LinkBudget& budget);

void remove_outputs(const std::vector<std::filesystem::path>& files);

}  // namespace ltepa
