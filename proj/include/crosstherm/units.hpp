// units.hpp
//
// Length parsing/formatting with nm/um suffixes and a few physical constants.
// All quantities inside the library are SI (meters, seconds, kelvin, watts).

#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <string>

#include "crosstherm/errors.hpp"

namespace crosstherm {

inline constexpr double kBoltzmannEv = 8.617333262e-5;  // [eV/K]

/// Parses a length like "80 nm", "1.5 um", "2e-6" (plain meters).
/// Accepted suffixes: nm, um, µm, mm, m.
inline double parse_length(const std::string& text) {
    const char* s = text.c_str();
    char* end = nullptr;
    double value = std::strtod(s, &end);
    if (end == s) throw ArgumentError("not a length: '" + text + "'");
    std::string suffix;
    for (const char* p = end; *p; ++p)
        if (!std::isspace(static_cast<unsigned char>(*p))) suffix += *p;
    if (suffix.empty() || suffix == "m") return value;
    if (suffix == "nm") return value * 1e-9;
    if (suffix == "um" || suffix == "µm") return value * 1e-6;
    if (suffix == "mm") return value * 1e-3;
    throw ArgumentError("unknown length suffix '" + suffix + "' in '" + text + "'");
}

/// Formats a length in nm with full round-trip precision; falls back to plain
/// meters when the unit conversion itself would cost a ulp.
inline std::string format_length(double meters) {
    char buf[64];
    const double nm = meters * 1e9;
    if (nm * 1e-9 == meters) {
        std::snprintf(buf, sizeof(buf), "%.17g nm", nm);
    } else {
        std::snprintf(buf, sizeof(buf), "%.17g", meters);
    }
    return buf;
}

/// Full-precision scalar formatting (round-trips through strtod).
inline std::string format_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace crosstherm
