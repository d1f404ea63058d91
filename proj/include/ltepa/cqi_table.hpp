#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace ltepa {

enum class Modulation { NoTransmission, Qpsk, Qam16, Qam64 };

int bits_per_symbol(Modulation m);
std::string_view modulation_name(Modulation m);
Modulation modulation_from_name(std::string_view name);

/// One row of the 3GPP 4-bit CQI table.
struct CqiEntry {
    int index;                // 0..15
    Modulation modulation;
    int code_rate_x1024;      // 0 for index 0
    double efficiency;        // information bits per symbol
};

/// The full 16-entry table, indices 0..15 in order.
const std::array<CqiEntry, 16>& cqi_table();

/// Table row for a CQI index; throws std::invalid_argument outside 0..15.
const CqiEntry& table_lookup(int cqi);

// Linear SNR-to-CQI reporting map: CQI = floor(slope * SNR_dB + intercept),
// clamped to the 4-bit range.
inline constexpr double kCqiSlope = 0.5223;
inline constexpr double kCqiIntercept = 4.6176;

/// Reported CQI for a measured SNR. Throws std::invalid_argument on non-finite input.
int cqi_from_snr(double snr_db);

/// Minimum SNR in dB reported as the given CQI (1..15). Inverse of the linear map.
double snr_lower_bound(int cqi);

/// Width of each CQI band in dB (bands 1..14; band 15 is unbounded above).
inline constexpr double cqi_band_width_db() { return 1.0 / kCqiSlope; }

/// Serializes the table with header `cqi,modulation,code_rate_x1024,efficiency`.
std::string cqi_table_csv();
std::vector<CqiEntry> parse_cqi_table_csv(std::string_view text);

}  // namespace ltepa
