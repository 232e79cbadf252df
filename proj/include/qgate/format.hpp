#pragma once

#include <cctype>
#include <cstdio>
#include <regex>
#include <stdexcept>
#include <string>

#include "qgate/su2.hpp"

namespace qgate {

// Angles are accepted as decimal radians or as multiples of pi written
// like "pi", "-pi/2", "3pi/4", "0.5pi".
inline double parse_angle(const std::string& text) {
    static const std::regex pi_form(
        R"(^\s*([+-]?)\s*([0-9]*\.?[0-9]*)\s*pi\s*(?:/\s*([0-9]*\.?[0-9]+))?\s*$)",
        std::regex::icase);
    std::smatch m;
    if (std::regex_match(text, m, pi_form)) {
        const double sign = m[1].str() == "-" ? -1.0 : 1.0;
        const double mult = m[2].str().empty() ? 1.0 : std::stod(m[2].str());
        const double div = m[3].str().empty() ? 1.0 : std::stod(m[3].str());
        if (div == 0.0) throw std::invalid_argument("angle: division by zero in '" + text + "'");
        return sign * mult * pi_v<double> / div;
    }
    try {
        std::size_t used = 0;
        const double value = std::stod(text, &used);
        while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) ++used;
        if (used == text.size()) return value;
    } catch (const std::exception&) {
        // fall through to the shared error below
    }
    throw std::invalid_argument("angle: cannot parse '" + text + "'");
}

// Gate targets are written axis:angle, e.g. "rx:pi", "ry:pi/2", "rz:-0.25".
inline GateTarget<double> parse_target(const std::string& text) {
    const std::size_t colon = text.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("target: expected axis:angle, got '" + text + "'");
    std::string head = text.substr(0, colon);
    for (char& c : head) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    Axis axis;
    if (head == "rx" || head == "x") {
        axis = Axis::x;
    } else if (head == "ry" || head == "y") {
        axis = Axis::y;
    } else if (head == "rz" || head == "z") {
        axis = Axis::z;
    } else {
        throw std::invalid_argument("target: unknown axis '" + head + "'");
    }
    return {axis, parse_angle(text.substr(colon + 1))};
}

// All floating output uses 12 significant digits.
inline std::string format_g(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

} // namespace qgate
