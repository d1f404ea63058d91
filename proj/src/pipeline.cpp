#include "ltepa/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "ltepa/csv.hpp"

namespace ltepa {

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("pipeline: cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw std::runtime_error("pipeline: failed writing " + path.string());
}

std::string multi_curve_csv(const std::string& key_column, const std::vector<std::pair<int, SuccessCurve>>& curves) {
    std::string out = key_column + ",power,probability\n";
    for (const auto& [key, curve] : curves) {
        for (const CurveSample& s : curve.samples) {
            out += csv::format(key);
            out += ',';
            out += csv::format(s.power);
            out += ',';
            out += csv::format(s.probability);
            out += '\n';
        }
    }
    return out;
}

SuccessCurve ue_tx_curve(const Scenario& scenario, const UePlacement& placement,
                         const std::vector<double>& grid) {
    return tx_utility_curve(scenario.budget, table_lookup(placement.cqi), placement.distance_m, grid);
}

}  // namespace

std::vector<double> rx_power_grid(const LinkBudget& budget) {
    // Spans the transition region of every CQI curve: 10 dB below the noise
    // floor up to 35 dB above it, in 0.05 dB steps.
    std::vector<double> grid;
    grid.reserve(901);
    for (int i = 0; i <= 900; ++i) {
        grid.push_back(budget.noise_floor_dbm - 10.0 + 0.05 * static_cast<double>(i));
    }
    return grid;
}

std::filesystem::path write_zones(const Scenario& scenario, const std::filesystem::path& out_dir) {
    const auto zones = cqi_zone_edges(scenario.budget);
    const auto path = out_dir / "zones.csv";
    write_file(path, zone_edges_csv(zones));
    return path;
}

std::vector<std::filesystem::path> write_curves(const Scenario& scenario,
                                                const std::filesystem::path& out_dir) {
    std::vector<std::pair<int, SuccessCurve>> rx_curves;
    const auto rx_grid = rx_power_grid(scenario.budget);
    for (int cqi = 1; cqi <= 15; ++cqi) {
        rx_curves.emplace_back(cqi, rx_utility_curve(scenario.budget, table_lookup(cqi), rx_grid));
    }
    const auto rx_path = out_dir / "curves_rx.csv";
    write_file(rx_path, multi_curve_csv("cqi", rx_curves));

    const auto tx_grid = power_grid(scenario);
    std::string tx_csv = "ue,cqi,power,probability\n";
    for (const UePlacement& placement : scenario_placements(scenario)) {
        const SuccessCurve curve = ue_tx_curve(scenario, placement, tx_grid);
        for (const CurveSample& s : curve.samples) {
            tx_csv += csv::format(placement.ue);
            tx_csv += ',';
            tx_csv += csv::format(placement.cqi);
            tx_csv += ',';
            tx_csv += csv::format(s.power);
            tx_csv += ',';
            tx_csv += csv::format(s.probability);
            tx_csv += '\n';
        }
    }
    const auto tx_path = out_dir / "curves_tx.csv";
    write_file(tx_path, tx_csv);
    return {rx_path, tx_path};
}

std::vector<FitRow> compute_fits(const Scenario& scenario, const PipelineOptions& options) {
    const auto grid = power_grid(scenario);
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> noise(-options.fit_noise, options.fit_noise);

    std::vector<FitRow> rows;
    for (const UePlacement& placement : scenario_placements(scenario)) {
        const SuccessCurve curve = ue_tx_curve(scenario, placement, grid);
        FitProblem problem;
        problem.powers_w.reserve(curve.samples.size());
        problem.utilities.reserve(curve.samples.size());
        for (const CurveSample& s : curve.samples) {
            problem.powers_w.push_back(s.power);
            double u = s.probability;
            if (options.fit_noise > 0.0) u = std::clamp(u + noise(rng), 0.0, 1.0);
            problem.utilities.push_back(u);
        }
        std::tie(problem.initial_a, problem.initial_b) =
            quantile_warm_start(problem.powers_w, problem.utilities);
        rows.push_back({placement.cqi, fit(problem)});
    }
    return rows;
}

std::filesystem::path write_fits(const Scenario& scenario, const PipelineOptions& options,
                                 const std::filesystem::path& out_dir, std::vector<FitRow>* rows_out) {
    std::vector<FitRow> rows = compute_fits(scenario, options);
    const auto path = out_dir / "fits.csv";
    write_file(path, fit_results_csv(rows));
    if (rows_out) *rows_out = std::move(rows);
    return path;
}

PipelineOutcome write_allocation(const Scenario& scenario, const std::vector<CqiParams>& ues,
                                 const std::filesystem::path& out_dir, bool quiet) {
    std::vector<SigmoidParams> params;
    params.reserve(ues.size());
    for (const CqiParams& row : ues) params.push_back(row.params);

    const AllocationTrace trace = run_allocation(params, allocation_config(scenario));

    PipelineOutcome outcome;
    outcome.allocation_converged = trace.converged;
    outcome.exit_code = trace.converged ? 0 : 2;

    const auto bids_path = out_dir / "bids.csv";
    write_file(bids_path, trace_csv(trace));
    outcome.files.push_back(bids_path);

    std::string alloc_csv = "ue,cqi,power_w\n";
    for (std::size_t i = 0; i < ues.size(); ++i) {
        alloc_csv += csv::format(static_cast<int>(i + 1));
        alloc_csv += ',';
        alloc_csv += csv::format(ues[i].cqi);
        alloc_csv += ',';
        alloc_csv += csv::format(trace.final_powers[i]);
        alloc_csv += '\n';
    }
    const auto alloc_path = out_dir / "allocation.csv";
    write_file(alloc_path, alloc_csv);
    outcome.files.push_back(alloc_path);

    nlohmann::ordered_json summary;
    summary["total_power_w"] = scenario.pt_watts;
    summary["ue_count"] = ues.size();
    summary["converged"] = trace.converged;
    summary["stalled"] = trace.stalled;
    summary["iterations_used"] = trace.iterations_used;
    summary["final_price"] = trace.final_price;
    double total = 0.0;
    for (const double p : trace.final_powers) total += p;
    summary["total_allocated_w"] = total;
    nlohmann::ordered_json ue_list = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < ues.size(); ++i) {
        nlohmann::ordered_json entry;
        entry["ue"] = i + 1;
        entry["cqi"] = ues[i].cqi;
        entry["a"] = ues[i].params.a();
        entry["b"] = ues[i].params.b();
        entry["power_w"] = trace.final_powers[i];
        ue_list.push_back(std::move(entry));
    }
    summary["ues"] = std::move(ue_list);
    const auto summary_path = out_dir / "summary.json";
    write_file(summary_path, summary.dump(2) + "\n");
    outcome.files.push_back(summary_path);

    if (!quiet) {
        if (trace.converged) {
            std::printf("allocation converged after %d rounds, price %.2f, total %.2f W\n",
                        trace.iterations_used, trace.final_price, total);
        } else {
            std::printf("allocation did not converge within %d rounds\n", scenario.max_rounds);
        }
        for (std::size_t i = 0; i < ues.size(); ++i) {
            std::printf("ue %2d  cqi %2d  power %6.2f W\n", static_cast<int>(i + 1), ues[i].cqi,
                        trace.final_powers[i]);
        }
    }
    return outcome;
}

PipelineOutcome run_pipeline(const Scenario& scenario, const PipelineOptions& options) {
    const std::filesystem::path out_dir = scenario.out_dir;
    std::vector<std::filesystem::path> written;
    try {
        written.push_back(write_zones(scenario, out_dir));
        for (auto& p : write_curves(scenario, out_dir)) written.push_back(p);

        std::vector<FitRow> fits;
        written.push_back(write_fits(scenario, options, out_dir, &fits));

        std::vector<CqiParams> ues;
        ues.reserve(fits.size());
        for (const FitRow& row : fits) ues.push_back({row.cqi, row.result.params});

        PipelineOutcome outcome = write_allocation(scenario, ues, out_dir, options.quiet);
        for (auto& p : outcome.files) written.push_back(p);
        outcome.files = std::move(written);
        return outcome;
    } catch (...) {
        remove_outputs(written);
        throw;
    }
}

void remove_outputs(const std::vector<std::filesystem::path>& files) {
    for (const auto& path : files) {
        std::error_code ec;
        std::filesystem::remove(path, ec);
    }
}

}  // namespace ltepa
