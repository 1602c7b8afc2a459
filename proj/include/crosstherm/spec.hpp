// spec.hpp
//
// Declarative description of a passive crossbar array: geometry, material
// parameters, and the config-file binding.

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "crosstherm/config.hpp"
#include "crosstherm/errors.hpp"

namespace crosstherm {

struct MaterialParams {
    double sigma = 0;          // electrical conductivity [S/m]
    double kappa = 0;          // thermal conductivity [W/(m K)]
    double heat_capacity = 0;  // [J/(kg K)]
    double density = 0;        // [kg/m^3]

    bool valid() const {
        auto ok = [](double v) { return std::isfinite(v) && v > 0; };
        return ok(sigma) && ok(kappa) && ok(heat_capacity) && ok(density);
    }
};

struct MaterialSet {
    MaterialParams cf;
    MaterialParams electrode;
    MaterialParams oxide;
    MaterialParams house;
};

/// What occupies the non-metal space inside the crossbar stack.
///  - StackIsland: continuous dielectric fill around lines and between planes.
///  - ArraySlab: switching oxide spans the array footprint in its own layer
///    only; gaps between lines are thermal-house material.
///  - Crossings: oxide exists only under/over the electrode stripes.
enum class OxideFill { StackIsland, ArraySlab, Crossings };

inline const char* oxide_fill_name(OxideFill f) {
    switch (f) {
        case OxideFill::StackIsland: return "stack_island";
        case OxideFill::ArraySlab: return "array_slab";
        default: return "crossings";
    }
}
inline OxideFill oxide_fill_from_name(const std::string& s) {
    if (s == "stack_island") return OxideFill::StackIsland;
    if (s == "array_slab") return OxideFill::ArraySlab;
    if (s == "crossings") return OxideFill::Crossings;
    throw ConfigError("unknown oxide_fill '" + s + "'");
}

struct CrossbarSpec {
    int rows = 0;
    int cols = 0;
    double sp = 0;         // cell spacing [m]
    double w_m = 0;        // electrode line width [m]
    double h_m = 0;        // electrode thickness [m]
    double t_ox = 0;       // oxide thickness [m]
    double r_cf = 0;       // filament radius [m]
    double th_margin = 0;  // thermal-house margin on each face [m]
    double t_amb = 300.0;  // ambient/sink temperature [K]
    OxideFill oxide_fill = OxideFill::Crossings;
    double line_overhang_frac = 0.5;  // electrode overhang past the array, as a
                                      // fraction of th_margin (< 1: lines end
                                      // inside the house, not at the sink)
    MaterialSet materials;

    double pitch() const { return w_m + sp; }
    int cell_count() const { return rows * cols; }

    // Array footprint (outermost electrode edges), centered at the origin.
    double extent_x() const { return (cols - 1) * pitch() + w_m; }
    double extent_y() const { return (rows - 1) * pitch() + w_m; }

    // Cell (row, col) center, 1-based indices.
    double cell_x(int col) const { return -0.5 * extent_x() + 0.5 * w_m + (col - 1) * pitch(); }
    double cell_y(int row) const { return -0.5 * extent_y() + 0.5 * w_m + (row - 1) * pitch(); }
};

/// Row-major linear cell index; cell (1,1) -> 0.
inline int cell_id(const CrossbarSpec& spec, int row, int col) {
    if (row < 1 || row > spec.rows || col < 1 || col > spec.cols)
        throw ArgumentError("cell (" + std::to_string(row) + "," + std::to_string(col) +
                            ") outside " + std::to_string(spec.rows) + "x" +
                            std::to_string(spec.cols) + " array");
    return (row - 1) * spec.cols + (col - 1);
}

/// Returns every violated invariant (empty vector means the spec is valid).
inline std::vector<std::string> validate(const CrossbarSpec& spec) {
    std::vector<std::string> v;
    if (spec.rows < 1) v.push_back("rows >= 1");
    if (spec.cols < 1) v.push_back("cols >= 1");
    if (!(2 * spec.r_cf < spec.w_m)) v.push_back("2*r_cf < w_m");
    if (!(spec.sp >= 0)) v.push_back("sp >= 0");
    if (!(spec.t_ox > 0)) v.push_back("t_ox > 0");
    if (!(spec.h_m > 0)) v.push_back("h_m > 0");
    if (!(spec.r_cf > 0)) v.push_back("r_cf > 0");
    if (!(spec.th_margin > 0)) v.push_back("th_margin > 0");
    if (!(spec.t_amb > 0)) v.push_back("t_amb > 0");
    if (!spec.materials.cf.valid()) v.push_back("materials.cf positive and finite");
    if (!spec.materials.electrode.valid()) v.push_back("materials.electrode positive and finite");
    if (!spec.materials.oxide.valid()) v.push_back("materials.oxide positive and finite");
    if (!spec.materials.house.valid()) v.push_back("materials.house positive and finite");
    return v;
}

/// Table-I-like defaults: NiO-class filament/electrode, HfOx-class oxide,
/// low-conductivity enclosure.
inline CrossbarSpec default_spec(int rows = 3, int cols = 3, double sp = 400e-9) {
    CrossbarSpec s;
    s.rows = rows;
    s.cols = cols;
    s.sp = sp;
    s.w_m = 80e-9;
    s.h_m = 30e-9;
    s.t_ox = 20e-9;
    s.r_cf = 5e-9;
    s.th_margin = 3e-6;
    s.line_overhang_frac = 0.4;
    s.t_amb = 300.0;
    s.materials.cf = {7e3, 22.0, 445.0, 8.9e3};
    s.materials.electrode = {1.23e5, 22.0, 445.0, 8.9e3};
    s.materials.oxide = {7e-7, 0.5, 286.0, 9.68e3};
    s.materials.house = {1e-12, 0.037, 286.0, 9.68e3};
    return s;
}

namespace detail {
inline void material_to_config(Config& cfg, const std::string& section, const MaterialParams& m) {
    cfg.set(section, "sigma", format_full(m.sigma));
    cfg.set(section, "kappa", format_full(m.kappa));
    cfg.set(section, "heat_capacity", format_full(m.heat_capacity));
    cfg.set(section, "density", format_full(m.density));
}
inline MaterialParams material_from_config(const Config& cfg, const std::string& section) {
    MaterialParams m;
    m.sigma = cfg.get_double(section, "sigma");
    m.kappa = cfg.get_double(section, "kappa");
    m.heat_capacity = cfg.get_double(section, "heat_capacity");
    m.density = cfg.get_double(section, "density");
    return m;
}
}  // namespace detail

inline void spec_to_config(const CrossbarSpec& s, Config& cfg) {
    cfg.set("crossbar", "rows", std::to_string(s.rows));
    cfg.set("crossbar", "cols", std::to_string(s.cols));
    cfg.set("crossbar", "sp", format_length(s.sp));
    cfg.set("crossbar", "w_m", format_length(s.w_m));
    cfg.set("crossbar", "h_m", format_length(s.h_m));
    cfg.set("crossbar", "t_ox", format_length(s.t_ox));
    cfg.set("crossbar", "r_cf", format_length(s.r_cf));
    cfg.set("crossbar", "th_margin", format_length(s.th_margin));
    cfg.set("crossbar", "t_amb", format_full(s.t_amb));
    cfg.set("crossbar", "oxide_fill", oxide_fill_name(s.oxide_fill));
    cfg.set("crossbar", "line_overhang_frac", format_full(s.line_overhang_frac));
    detail::material_to_config(cfg, "crossbar.materials.cf", s.materials.cf);
    detail::material_to_config(cfg, "crossbar.materials.electrode", s.materials.electrode);
    detail::material_to_config(cfg, "crossbar.materials.oxide", s.materials.oxide);
    detail::material_to_config(cfg, "crossbar.materials.house", s.materials.house);
}

inline CrossbarSpec spec_from_config(const Config& cfg) {
    CrossbarSpec s = default_spec();
    s.rows = static_cast<int>(cfg.get_int("crossbar", "rows"));
    s.cols = static_cast<int>(cfg.get_int("crossbar", "cols"));
    s.sp = cfg.get_length("crossbar", "sp");
    s.w_m = cfg.get_length_or("crossbar", "w_m", s.w_m);
    s.h_m = cfg.get_length_or("crossbar", "h_m", s.h_m);
    s.t_ox = cfg.get_length_or("crossbar", "t_ox", s.t_ox);
    s.r_cf = cfg.get_length_or("crossbar", "r_cf", s.r_cf);
    s.th_margin = cfg.get_length_or("crossbar", "th_margin", s.th_margin);
    s.t_amb = cfg.get_double_or("crossbar", "t_amb", s.t_amb);
    s.oxide_fill = oxide_fill_from_name(
        cfg.get_or("crossbar", "oxide_fill", oxide_fill_name(s.oxide_fill)));
    s.line_overhang_frac = cfg.get_double_or("crossbar", "line_overhang_frac", s.line_overhang_frac);
    for (auto [name, field] : {std::pair{"cf", &s.materials.cf},
                               std::pair{"electrode", &s.materials.electrode},
                               std::pair{"oxide", &s.materials.oxide},
                               std::pair{"house", &s.materials.house}}) {
        const std::string sec = std::string("crossbar.materials.") + name;
        if (cfg.has_section(sec)) *field = detail::material_from_config(cfg, sec);
    }
    return s;
}

}  // namespace crosstherm
