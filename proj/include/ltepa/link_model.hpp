#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ltepa/cqi_table.hpp"

namespace ltepa {

inline constexpr double kSpeedOfLightMps = 2.998e8;

/// Distances below this are rejected; the free-space law diverges at d = 0.
inline constexpr double kMinDistanceM = 1.0;

/// K chosen so that the top CQI zone ends at 69.14 m with the urban exponent.
double default_calibration_k_db();

/// Cell-level radio constants. The calibration constant K fixes the
/// log-distance SNR map SNR(d) = K - 10*alpha*log10(d) at nominal BS power.
struct LinkBudget {
    double bs_power_w = 40.0;
    double carrier_freq_hz = 2.0e9;
    double pathloss_exponent = 3.5;   // urban default
    double noise_floor_dbm = -94.0;   // thermal + 20 MHz bandwidth + 7 dB noise figure
    double calibration_k_db = default_calibration_k_db();
    int packet_bits = 1024;
};

/// Throws std::invalid_argument if any field is out of range.
void validate(const LinkBudget& budget);

/// Free-space power at the UE: tx * f / (c * (4*pi*d)^alpha). Linear in tx power.
double received_power_w(const LinkBudget& budget, double tx_power_w, double distance_m);

/// Calibrated downlink SNR at a distance; strictly decreasing.
double snr_at_distance_db(const LinkBudget& budget, double distance_m);

struct Distance {
    double meters;
    bool clamped;  // true when the exact inverse fell below the minimum distance
};

/// Exact inverse of snr_at_distance_db, clamped below at kMinDistanceM.
Distance distance_for_snr(const LinkBudget& budget, double snr_db);

struct ZoneEdge {
    int cqi;
    double near_m;
    double far_m;
    double snr_lower_db;
};

/// The 15 CQI zones from the cell center outward (CQI 15 first). Adjacent
/// zones share their boundary exactly; CQI 15 starts at kMinDistanceM.
std::vector<ZoneEdge> cqi_zone_edges(const LinkBudget& budget);

/// Probability that a packet of `packet_bits` Gray-coded symbols survives at
/// the given SNR: (1 - Pb)^bits with the standard AWGN bit-error approximation
/// per modulation and the code rate applied as an SNR gain of
/// 10*(1 - rate) dB. Strictly increasing in SNR.
double packet_success_prob(const CqiEntry& entry, double snr_db, int packet_bits);

enum class PowerAxis { ReceiverDbm, TransmitterWatts };

struct CurveSample {
    double power;        // unit per axis tag
    double probability;  // in [0, 1]
};

struct SuccessCurve {
    int cqi;
    PowerAxis axis;
    std::vector<CurveSample> samples;  // strictly ascending in power
};

/// Success probability versus transmit power for a UE at a fixed distance:
/// composes the free-space law, the noise floor and the packet error model.
SuccessCurve tx_utility_curve(const LinkBudget& budget, const CqiEntry& entry, double distance_m,
                              std::span<const double> tx_grid_w);

/// Success probability versus receiver power in dBm (SNR plus noise floor).
SuccessCurve rx_utility_curve(const LinkBudget& budget, const CqiEntry& entry,
                              std::span<const double> rx_grid_dbm);

/// Serializes one curve with header `power,probability`.
std::string success_curve_csv(const SuccessCurve& curve);

std::string zone_edges_csv(std::span<const ZoneEdge> zones);
std::vector<ZoneEdge> parse_zone_edges_csv(std::string_view text);

}  // namespace ltepa
