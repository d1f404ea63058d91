#include "ltepa/cqi_table.hpp"

#include <cmath>
#include <stdexcept>

#include "ltepa/csv.hpp"

namespace ltepa {

int bits_per_symbol(Modulation m) {
    switch (m) {
        case Modulation::NoTransmission: return 0;
        case Modulation::Qpsk: return 2;
        case Modulation::Qam16: return 4;
        case Modulation::Qam64: return 6;
    }
    throw std::invalid_argument("bits_per_symbol: unknown modulation");
}

std::string_view modulation_name(Modulation m) {
    switch (m) {
        case Modulation::NoTransmission: return "NoTransmission";
        case Modulation::Qpsk: return "QPSK";
        case Modulation::Qam16: return "16QAM";
        case Modulation::Qam64: return "64QAM";
    }
    throw std::invalid_argument("modulation_name: unknown modulation");
}

Modulation modulation_from_name(std::string_view name) {
    if (name == "NoTransmission") return Modulation::NoTransmission;
    if (name == "QPSK") return Modulation::Qpsk;
    if (name == "16QAM") return Modulation::Qam16;
    if (name == "64QAM") return Modulation::Qam64;
    throw std::invalid_argument("modulation_from_name: unknown modulation '" + std::string(name) + "'");
}

const std::array<CqiEntry, 16>& cqi_table() {
    static const std::array<CqiEntry, 16> table = {{
        {0, Modulation::NoTransmission, 0, 0.0},
        {1, Modulation::Qpsk, 78, 0.1523},
        {2, Modulation::Qpsk, 120, 0.2344},
        {3, Modulation::Qpsk, 193, 0.3770},
        {4, Modulation::Qpsk, 308, 0.6016},
        {5, Modulation::Qpsk, 449, 0.8770},
        {6, Modulation::Qpsk, 602, 1.1758},
        {7, Modulation::Qam16, 378, 1.4766},
        {8, Modulation::Qam16, 490, 1.9141},
        {9, Modulation::Qam16, 616, 2.4063},
        {10, Modulation::Qam64, 466, 2.7305},
        {11, Modulation::Qam64, 567, 3.3223},
        {12, Modulation::Qam64, 666, 3.9023},
        {13, Modulation::Qam64, 772, 4.5234},
        {14, Modulation::Qam64, 873, 5.1152},
        {15, Modulation::Qam64, 948, 5.5547},
    }};
    return table;
}

const CqiEntry& table_lookup(int cqi) {
    if (cqi < 0 || cqi > 15) {
        throw std::invalid_argument("table_lookup: CQI index " + std::to_string(cqi) + " outside 0..15");
    }
    return cqi_table()[static_cast<std::size_t>(cqi)];
}

int cqi_from_snr(double snr_db) {
    if (!std::isfinite(snr_db)) throw std::invalid_argument("cqi_from_snr: snr_db must be finite");
    const double floored = std::floor(kCqiSlope * snr_db + kCqiIntercept);
    if (floored < 0.0) return 0;
    if (floored > 15.0) return 15;
    return static_cast<int>(floored);
}

double snr_lower_bound(int cqi) {
    if (cqi < 1 || cqi > 15) {
        throw std::invalid_argument("snr_lower_bound: CQI index " + std::to_string(cqi) + " outside 1..15");
    }
    return (static_cast<double>(cqi) - kCqiIntercept) / kCqiSlope;
}

std::string cqi_table_csv() {
    std::string out = "cqi,modulation,code_rate_x1024,efficiency\n";
    for (const CqiEntry& e : cqi_table()) {
        out += csv::format(e.index);
        out += ',';
        out += modulation_name(e.modulation);
        out += ',';
        out += csv::format(e.code_rate_x1024);
        out += ',';
        out += csv::format(e.efficiency);
        out += '\n';
    }
    return out;
}

std::vector<CqiEntry> parse_cqi_table_csv(std::string_view text) {
    const auto lines = csv::split_lines(text);
    if (lines.empty() || lines[0] != "cqi,modulation,code_rate_x1024,efficiency") {
        throw std::invalid_argument("cqi table csv: bad header");
    }
    std::vector<CqiEntry> entries;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = csv::split_line(lines[i]);
        if (fields.size() != 4) throw std::invalid_argument("cqi table csv: bad row");
        entries.push_back({csv::parse_int(fields[0]), modulation_from_name(fields[1]),
                           csv::parse_int(fields[2]), csv::parse_double(fields[3])});
    }
    return entries;
}

}  // namespace ltepa
