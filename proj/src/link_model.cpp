#include "ltepa/link_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ltepa/csv.hpp"

namespace ltepa {

namespace {

double q_function(double x) {
    // Q(x) = erfc(x / sqrt(2)) / 2
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

void check_distance(double distance_m) {
    if (!(distance_m >= kMinDistanceM)) {
        throw std::domain_error("link model: distance below minimum of 1 m");
    }
}

}  // namespace

double default_calibration_k_db() {
    // Pins the far edge of the top CQI zone to 69.14 m for alpha = 3.5.
    return snr_lower_bound(15) + 35.0 * std::log10(69.14);
}

void validate(const LinkBudget& budget) {
    if (!(budget.bs_power_w > 0.0)) throw std::invalid_argument("link budget: bs_power_w must be positive");
    if (!(budget.carrier_freq_hz > 0.0)) throw std::invalid_argument("link budget: carrier_freq_hz must be positive");
    if (!(budget.pathloss_exponent > 0.0)) throw std::invalid_argument("link budget: pathloss_exponent must be positive");
    if (!std::isfinite(budget.noise_floor_dbm)) throw std::invalid_argument("link budget: noise_floor_dbm must be finite");
    if (!std::isfinite(budget.calibration_k_db)) throw std::invalid_argument("link budget: calibration_k_db must be finite");
    if (budget.packet_bits < 1) throw std::invalid_argument("link budget: packet_bits must be at least 1");
}

double received_power_w(const LinkBudget& budget, double tx_power_w, double distance_m) {
    if (!(tx_power_w >= 0.0)) throw std::invalid_argument("received_power: tx power must be non-negative");
    check_distance(distance_m);
    const double spread = std::pow(4.0 * std::numbers::pi * distance_m, budget.pathloss_exponent);
    return tx_power_w * budget.carrier_freq_hz / (kSpeedOfLightMps * spread);
}

double snr_at_distance_db(const LinkBudget& budget, double distance_m) {
    check_distance(distance_m);
    return budget.calibration_k_db - 10.0 * budget.pathloss_exponent * std::log10(distance_m);
}

Distance distance_for_snr(const LinkBudget& budget, double snr_db) {
    if (!std::isfinite(snr_db)) throw std::invalid_argument("distance_for_snr: snr must be finite");
    const double meters =
        std::pow(10.0, (budget.calibration_k_db - snr_db) / (10.0 * budget.pathloss_exponent));
    if (meters < kMinDistanceM) return {kMinDistanceM, true};
    return {meters, false};
}

std::vector<ZoneEdge> cqi_zone_edges(const LinkBudget& budget) {
    std::vector<ZoneEdge> zones;
    zones.reserve(15);
    double near = kMinDistanceM;  // innermost edge of the CQI 15 zone
    for (int cqi = 15; cqi >= 1; --cqi) {
        const double snr_lower = snr_lower_bound(cqi);
        const double far = distance_for_snr(budget, snr_lower).meters;
        zones.push_back({cqi, near, far, snr_lower});
        near = far;  // adjacent zones share the boundary exactly
    }
    return zones;
}

double packet_success_prob(const CqiEntry& entry, double snr_db, int packet_bits) {
    if (entry.modulation == Modulation::NoTransmission) {
        throw std::invalid_argument("packet_success_prob: no transmission entry");
    }
    if (packet_bits < 1) throw std::invalid_argument("packet_success_prob: packet_bits must be at least 1");

    // Code rate enters as an SNR gain; lower rates carry more redundancy.
    const double coding_gain_db = 10.0 * (1.0 - entry.code_rate_x1024 / 1024.0);
    const double gamma = std::pow(10.0, (snr_db + coding_gain_db) / 10.0);

    const int k = bits_per_symbol(entry.modulation);
    const double m = std::pow(2.0, k);
    // Gray-coded AWGN approximation; reduces to Q(sqrt(gamma)) for QPSK.
    const double pb = (4.0 / k) * (1.0 - 1.0 / std::sqrt(m)) * q_function(std::sqrt(3.0 * gamma / (m - 1.0)));
    return std::exp(packet_bits * std::log1p(-pb));
}

namespace {

void check_grid(std::span<const double> grid, bool require_positive) {
    if (grid.empty()) throw std::invalid_argument("utility curve: empty power grid");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i])) throw std::invalid_argument("utility curve: non-finite grid point");
        if (require_positive && !(grid[i] > 0.0)) {
            throw std::invalid_argument("utility curve: grid powers must be positive");
        }
        if (i > 0 && !(grid[i] > grid[i - 1])) {
            throw std::invalid_argument("utility curve: grid must be strictly ascending");
        }
    }
}

}  // namespace

SuccessCurve tx_utility_curve(const LinkBudget& budget, const CqiEntry& entry, double distance_m,
                              std::span<const double> tx_grid_w) {
    check_grid(tx_grid_w, /*require_positive=*/true);
    SuccessCurve curve{entry.index, PowerAxis::TransmitterWatts, {}};
    curve.samples.reserve(tx_grid_w.size());
    for (const double tx : tx_grid_w) {
        const double rx_w = received_power_w(budget, tx, distance_m);
        const double rx_dbm = 10.0 * std::log10(rx_w * 1000.0);
        const double snr_db = rx_dbm - budget.noise_floor_dbm;
        curve.samples.push_back({tx, packet_success_prob(entry, snr_db, budget.packet_bits)});
    }
    return curve;
}

SuccessCurve rx_utility_curve(const LinkBudget& budget, const CqiEntry& entry,
                              std::span<const double> rx_grid_dbm) {
    check_grid(rx_grid_dbm, /*require_positive=*/false);
    SuccessCurve curve{entry.index, PowerAxis::ReceiverDbm, {}};
    curve.samples.reserve(rx_grid_dbm.size());
    for (const double rx_dbm : rx_grid_dbm) {
        const double snr_db = rx_dbm - budget.noise_floor_dbm;
        curve.samples.push_back({rx_dbm, packet_success_prob(entry, snr_db, budget.packet_bits)});
    }
    return curve;
}

std::string success_curve_csv(const SuccessCurve& curve) {
    std::string out = "power,probability\n";
    for (const CurveSample& s : curve.samples) {
        out += csv::format(s.power);
        out += ',';
        out += csv::format(s.probability);
        out += '\n';
    }
    return out;
}

std::string zone_edges_csv(std::span<const ZoneEdge> zones) {
    std::string out = "cqi,near_m,far_m,snr_lower_db\n";
    for (const ZoneEdge& z : zones) {
        out += csv::format(z.cqi);
        out += ',';
        out += csv::format(z.near_m);
        out += ',';
        out += csv::format(z.far_m);
        out += ',';
        out += csv::format(z.snr_lower_db);
        out += '\n';
    }
    return out;
}

std::vector<ZoneEdge> parse_zone_edges_csv(std::string_view text) {
    const auto lines = csv::split_lines(text);
    if (lines.empty() || lines[0] != "cqi,near_m,far_m,snr_lower_db") {
        throw std::invalid_argument("zones csv: bad header");
    }
    std::vector<ZoneEdge> zones;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = csv::split_line(lines[i]);
        if (fields.size() != 4) throw std::invalid_argument("zones csv: bad row");
        zones.push_back({csv::parse_int(fields[0]), csv::parse_double(fields[1]),
                         csv::parse_double(fields[2]), csv::parse_double(fields[3])});
    }
    return zones;
}

}  // namespace ltepa
