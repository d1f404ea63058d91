#include "ltepa/csv.hpp"

#include <charconv>
#include <stdexcept>
#include <system_error>

namespace ltepa::csv {

std::string format(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

std::string format(int value) {
    char buf[16];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

std::string format(bool value) { return value ? "true" : "false"; }

double parse_double(std::string_view field) {
    double value = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
        throw std::invalid_argument("csv: malformed number '" + std::string(field) + "'");
    }
    return value;
}

int parse_int(std::string_view field) {
    int value = 0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
        throw std::invalid_argument("csv: malformed integer '" + std::string(field) + "'");
    }
    return value;
}

bool parse_bool(std::string_view field) {
    if (field == "true") return true;
    if (field == "false") return false;
    throw std::invalid_argument("csv: malformed boolean '" + std::string(field) + "'");
}

std::vector<std::string_view> split_line(std::string_view line, char delim) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(delim, start);
        if (pos == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t pos = text.find('\n', start);
        if (pos == std::string_view::npos) pos = text.size();
        lines.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
    return lines;
}

}  // namespace ltepa::csv
