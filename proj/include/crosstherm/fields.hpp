// fields.hpp
//
// Per-voxel scalar fields and their on-disk dump format (self-describing
// text header followed by one value per line, voxel order x-fastest).

#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "crosstherm/errors.hpp"
#include "crosstherm/units.hpp"

namespace crosstherm {

enum class Quantity { Temperature, Potential, PowerDensity };

inline const char* quantity_name(Quantity q) {
    switch (q) {
        case Quantity::Temperature: return "temperature";
        case Quantity::Potential: return "potential";
        default: return "power_density";
    }
}
inline const char* quantity_unit(Quantity q) {
    switch (q) {
        case Quantity::Temperature: return "K";
        case Quantity::Potential: return "V";
        default: return "W/m^3";
    }
}

struct ScalarField {
    Quantity quantity = Quantity::Temperature;
    std::vector<double> values;
};

inline void dump_field(std::ostream& out, const ScalarField& f, const std::vector<double>& xs,
                       const std::vector<double>& ys, const std::vector<double>& zs) {
    out << "# crosstherm field dump v1\n";
    out << "quantity = " << quantity_name(f.quantity) << "\n";
    out << "unit = " << quantity_unit(f.quantity) << "\n";
    out << "grid_unit = m\n";
    auto axis = [&out](const char* name, const std::vector<double>& c) {
        out << name << " =";
        for (double v : c) out << " " << format_full(v);
        out << "\n";
    };
    axis("x", xs);
    axis("y", ys);
    axis("z", zs);
    out << "values = " << f.values.size() << "\n";
    for (double v : f.values) out << format_full(v) << "\n";
}

inline void dump_field_file(const std::string& path, const ScalarField& f,
                            const std::vector<double>& xs, const std::vector<double>& ys,
                            const std::vector<double>& zs) {
    std::ofstream out(path);
    if (!out) throw ArgumentError("cannot open for writing: " + path);
    dump_field(out, f, xs, ys, zs);
}

}  // namespace crosstherm
