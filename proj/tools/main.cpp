// Command-line front end: reproduce the zone map, link curves, utility fits
// and the bidding power allocation from a flat key = value scenario file.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ltepa/csv.hpp"
#include "ltepa/pipeline.hpp"

namespace {

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

ltepa::Scenario load_scenario(const std::string& config_path, const std::string& out_override) {
    ltepa::Scenario scenario =
        config_path.empty() ? ltepa::Scenario{} : ltepa::parse_scenario(read_text_file(config_path));
    if (!out_override.empty()) scenario.out_dir = out_override;
    return scenario;
}

void print_zone_table(const ltepa::Scenario& scenario) {
    std::printf("cqi,near_m,far_m,snr_lower_db\n");
    for (const ltepa::ZoneEdge& z : ltepa::cqi_zone_edges(scenario.budget)) {
        std::printf("%d,%.2f,%.2f,%.2f\n", z.cqi, z.near_m, z.far_m, z.snr_lower_db);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CQI-driven sigmoidal-utility power allocation toolkit"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    std::string config_path;
    std::string out_override;
    std::uint64_t seed = 0;
    bool quiet = false;
    app.add_option("--config", config_path, "scenario file (key = value lines)");
    app.add_option("--out", out_override, "output directory override");
    app.add_option("--seed", seed, "RNG seed for noise-bearing demos");
    app.add_flag("--quiet", quiet, "suppress the human-readable summary");

    CLI::App* zones_cmd = app.add_subcommand("zones", "CQI zone edges (distance map)");
    CLI::App* curves_cmd = app.add_subcommand("curves", "packet success curves per CQI");
    CLI::App* fit_cmd = app.add_subcommand("fit", "fit utility parameters to the curves");
    double fit_noise = 0.0;
    fit_cmd->add_option("--noise", fit_noise, "uniform noise amplitude added before fitting")
        ->check(CLI::NonNegativeNumber);
    CLI::App* allocate_cmd = app.add_subcommand("allocate", "run the bidding power allocation");
    std::string params_file;
    allocate_cmd->add_option("--params-file", params_file, "utility parameter CSV (cqi,a,b)");
    CLI::App* run_cmd = app.add_subcommand("run", "full pipeline: zones, curves, fits, allocation");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    std::vector<std::filesystem::path> written;
    try {
        const ltepa::Scenario scenario = load_scenario(config_path, out_override);
        const ltepa::PipelineOptions options{quiet, seed, fit_noise};
        const std::filesystem::path out_dir = scenario.out_dir;

        if (zones_cmd->parsed()) {
            written.push_back(ltepa::write_zones(scenario, out_dir));
            if (!quiet) print_zone_table(scenario);
            return 0;
        }
        if (curves_cmd->parsed()) {
            written = ltepa::write_curves(scenario, out_dir);
            if (!quiet) std::printf("wrote %zu curve files to %s\n", written.size(), out_dir.string().c_str());
            return 0;
        }
        if (fit_cmd->parsed()) {
            std::vector<ltepa::FitRow> rows;
            written.push_back(ltepa::write_fits(scenario, options, out_dir, &rows));
            if (!quiet) {
                for (const ltepa::FitRow& row : rows) {
                    std::printf("cqi %2d  a %8.2f  b %6.2f  mse %.2e  %s\n", row.cqi,
                                row.result.params.a(), row.result.params.b(), row.result.mse,
                                row.result.converged ? "converged" : "not converged");
                }
            }
            return 0;
        }
        if (allocate_cmd->parsed()) {
            std::vector<ltepa::CqiParams> ues;
            if (!params_file.empty()) {
                ues = ltepa::parse_params_csv(read_text_file(params_file));
            } else {
                for (const ltepa::FitRow& row : ltepa::compute_fits(scenario, options)) {
                    ues.push_back({row.cqi, row.result.params});
                }
            }
            ltepa::PipelineOutcome outcome = ltepa::write_allocation(scenario, ues, out_dir, quiet);
            written = outcome.files;
            return outcome.exit_code;
        }
        if (run_cmd->parsed()) {
            const ltepa::PipelineOutcome outcome = ltepa::run_pipeline(scenario, options);
            return outcome.exit_code;
        }
        return 1;  // unreachable; a subcommand is required
    } catch (const std::exception& e) {
        ltepa::remove_outputs(written);
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
