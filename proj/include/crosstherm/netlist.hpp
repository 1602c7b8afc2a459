// netlist.hpp
//
// Circuit-simulator subcircuit emitter for the compact thermal network, and
// the matching value parser used by golden-file round-trip checks.
//
// Topology per cell n (thermal node th_r_c, voltages are temperature rise,
// 1 V = 1 K): a behavioral current source injects the device power
// V(dv)*V(di) into th; R_th leads towards the ambient rail through a series
// chain of voltage-dependent voltage sources, one per coupled neighbour m,
// each sensing neighbour m's self-heating rise (the drop across R_th,m) with
// gain c_nm. Node equations then reproduce dT = C (R_th o P) exactly.

#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "crosstherm/thermal_network.hpp"
#include "crosstherm/units.hpp"

namespace crosstherm {

namespace detail {

inline std::string cell_suffix(const CrossbarSpec& spec, int cell) {
    return std::to_string(cell / spec.cols + 1) + "_" + std::to_string(cell % spec.cols + 1);
}

}  // namespace detail

/// Emits the subcircuit as deterministic plain text (stable cell ordering,
/// full-precision values). Couplings below `prune_threshold` are dropped.
inline std::string emit_netlist(const ThermalNetwork& net, const CrossbarSpec& spec,
                                const std::string& subcircuit_name,
                                double prune_threshold = 0.0) {
    if (net.dim() != spec.cell_count())
        throw ArgumentError("network dimension does not match crossbar spec");

    std::ostringstream out;
    out << "* steady-state thermal coupling network, " << spec.rows << "x" << spec.cols
        << " crossbar\n";
    out << "* th_<r>_<c> node voltage = temperature rise above amb [K], 1 V = 1 K\n";
    out << "* dv_<r>_<c>, di_<r>_<c> inputs carry the device voltage [V] and current [A]\n";
    out << ".subckt " << subcircuit_name << " amb";
    for (int n = 0; n < net.dim(); ++n) out << " dv_" << detail::cell_suffix(spec, n);
    for (int n = 0; n < net.dim(); ++n) out << " di_" << detail::cell_suffix(spec, n);
    for (int n = 0; n < net.dim(); ++n) out << " th_" << detail::cell_suffix(spec, n);
    out << "\n";

    // Per cell, the chain node right after R_th; the drop (th, after_rth)
    // equals the cell's self-heating rise and is what neighbours sense.
    std::vector<std::string> after_rth(static_cast<std::size_t>(net.dim()));
    std::vector<std::vector<int>> coupled(static_cast<std::size_t>(net.dim()));
    for (int n = 0; n < net.dim(); ++n) {
        for (int m = 0; m < net.dim(); ++m)
            if (m != n && net.coupling.at(n, m) >= prune_threshold &&
                net.coupling.at(n, m) > 0)
                coupled[n].push_back(m);
        after_rth[n] = coupled[n].empty() ? "amb"
                                          : "n_" + detail::cell_suffix(spec, n) + "_0";
    }

    for (int n = 0; n < net.dim(); ++n) {
        const std::string cn = detail::cell_suffix(spec, n);
        out << "* cell (" << (n / spec.cols + 1) << "," << (n % spec.cols + 1) << ")\n";
        out << "Bp_" << cn << " amb th_" << cn << " I={V(dv_" << cn << ")*V(di_" << cn << ")}\n";
        out << "Rth_" << cn << " th_" << cn << " " << after_rth[n] << " "
            << format_full(net.coupling.r_th[n]) << "\n";
        for (std::size_t s = 0; s < coupled[n].size(); ++s) {
            const int m = coupled[n][s];
            const std::string node_a = "n_" + cn + "_" + std::to_string(s);
            const std::string node_b = s + 1 < coupled[n].size()
                                           ? "n_" + cn + "_" + std::to_string(s + 1)
                                           : "amb";
            out << "Ec_" << cn << "_" << detail::cell_suffix(spec, m) << " " << node_a << " "
                << node_b << " th_" << detail::cell_suffix(spec, m) << " " << after_rth[m] << " "
                << format_full(net.coupling.at(n, m)) << "\n";
        }
    }
    out << ".ends " << subcircuit_name << "\n";
    return out.str();
}

struct ParsedNetlist {
    int dim = 0;
    std::vector<double> r_th;
    std::vector<double> c;  // row-major, diagonal 1, pruned entries 0

    double at(int n, int m) const { return c[static_cast<std::size_t>(n) * dim + m]; }
};

/// Recovers R_th and coupling values from emitted text. Values round-trip
/// bit-exactly (full-precision decimal in, strtod out).
inline ParsedNetlist parse_netlist(const std::string& text, const CrossbarSpec& spec) {
    ParsedNetlist p;
    p.dim = spec.cell_count();
    p.r_th.assign(static_cast<std::size_t>(p.dim), 0.0);
    p.c.assign(static_cast<std::size_t>(p.dim) * p.dim, 0.0);
    for (int n = 0; n < p.dim; ++n) p.c[static_cast<std::size_t>(n) * p.dim + n] = 1.0;

    auto cell_of = [&](const std::string& suffix) -> int {
        const auto us = suffix.find('_');
        if (us == std::string::npos) throw ConfigError("bad cell suffix '" + suffix + "'");
        const int r = std::stoi(suffix.substr(0, us));
        const int c = std::stoi(suffix.substr(us + 1));
        return cell_id(spec, r, c);
    };

    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string name;
        ls >> name;
        if (name.rfind("Rth_", 0) == 0) {
            std::string a, b, value;
            ls >> a >> b >> value;
            p.r_th[static_cast<std::size_t>(cell_of(name.substr(4)))] = std::strtod(value.c_str(), nullptr);
        } else if (name.rfind("Ec_", 0) == 0) {
            // Ec_<r>_<c>_<r'>_<c'>
            std::string rest = name.substr(3);
            std::vector<int> parts;
            std::istringstream ps(rest);
            std::string tok;
            while (std::getline(ps, tok, '_')) parts.push_back(std::stoi(tok));
            if (parts.size() != 4) throw ConfigError("bad controlled source name '" + name + "'");
            const int n = cell_id(spec, parts[0], parts[1]);
            const int m = cell_id(spec, parts[2], parts[3]);
            std::string na, nb, sa, sb, value;
            ls >> na >> nb >> sa >> sb >> value;
            p.c[static_cast<std::size_t>(n) * p.dim + m] = std::strtod(value.c_str(), nullptr);
        }
    }
    return p;
}

}  // namespace crosstherm
