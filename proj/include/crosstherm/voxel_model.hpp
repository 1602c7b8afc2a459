// voxel_model.hpp
//
// Voxelized 3-D model of a passive crossbar: bottom electrode lines (one per
// column, running along y), top electrode lines (one per row, running along
// x), the switching-oxide stack with cylindrical filaments at the
// intersections, all embedded in a low-conductivity thermal house whose outer
// walls act as the ambient heat sink.
//
// Electrode lines overhang the array footprint but terminate inside the
// house; they do not touch the sink walls.

#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "crosstherm/mesh.hpp"
#include "crosstherm/spec.hpp"

namespace crosstherm {

enum class Region : std::uint8_t {
    House = 0,
    Oxide = 1,
    ElectrodeBottom = 2,
    ElectrodeTop = 3,
    CF = 4,
};

struct VoxelModel {
    CrossbarSpec spec;
    MeshPolicy mesh;

    std::vector<double> xs, ys, zs;  // grid-line coordinates, strictly increasing

    std::vector<Region> region;        // per voxel
    std::vector<std::int32_t> cf_cell;  // cell id for CF voxels, -1 otherwise
    std::vector<std::int16_t> line_id;  // line id for electrode voxels, -1 otherwise

    std::vector<std::vector<std::size_t>> cell_voxels;      // filament voxels per cell
    std::vector<std::vector<std::size_t>> footprint_voxels;  // oxide-layer voxels per cell footprint
    std::vector<std::size_t> probe_voxel;                    // filament-center voxel per cell

    double z_ox0 = 0, z_ox1 = 0;  // oxide layer bounds
    double line_overhang = 0;

    std::size_t nx() const { return xs.size() - 1; }
    std::size_t ny() const { return ys.size() - 1; }
    std::size_t nz() const { return zs.size() - 1; }
    std::size_t voxel_count() const { return nx() * ny() * nz(); }
    std::size_t index(std::size_t i, std::size_t j, std::size_t k) const {
        return (k * ny() + j) * nx() + i;
    }

    double dx(std::size_t i) const { return xs[i + 1] - xs[i]; }
    double dy(std::size_t j) const { return ys[j + 1] - ys[j]; }
    double dz(std::size_t k) const { return zs[k + 1] - zs[k]; }
    double volume(std::size_t i, std::size_t j, std::size_t k) const {
        return dx(i) * dy(j) * dz(k);
    }

    int line_count() const { return spec.rows + spec.cols; }
    int top_line(int row) const { return row - 1; }              // 1-based row
    int bottom_line(int col) const { return spec.rows + col - 1; }  // 1-based col
    std::string line_name(int id) const {
        return id < spec.rows ? "row" + std::to_string(id + 1)
                              : "col" + std::to_string(id - spec.rows + 1);
    }

    const MaterialParams& material(Region r) const {
        switch (r) {
            case Region::CF: return spec.materials.cf;
            case Region::ElectrodeBottom:
            case Region::ElectrodeTop: return spec.materials.electrode;
            case Region::Oxide: return spec.materials.oxide;
            default: return spec.materials.house;
        }
    }

    /// Locates the voxel containing a point (clamped to the grid).
    std::size_t locate(double x, double y, double z) const {
        auto find = [](const std::vector<double>& c, double v) -> std::size_t {
            auto it = std::upper_bound(c.begin(), c.end(), v);
            std::size_t i = (it == c.begin()) ? 0 : static_cast<std::size_t>(it - c.begin()) - 1;
            return std::min(i, c.size() - 2);
        };
        return index(find(xs, x), find(ys, y), find(zs, z));
    }
};

/// Builds the voxel model. Throws ResourceError when the mesh policy exceeds
/// the voxel budget, ArgumentError when the spec does not validate.
inline VoxelModel build_model(const CrossbarSpec& spec, const MeshPolicy& mesh) {
    {
        const auto violations = validate(spec);
        if (!violations.empty()) {
            std::string msg = "invalid crossbar spec:";
            for (const auto& v : violations) msg += " [" + v + "]";
            throw ArgumentError(msg);
        }
    }

    VoxelModel m;
    m.spec = spec;
    m.mesh = mesh;
    m.line_overhang = spec.line_overhang_frac * spec.th_margin;

    const double ex = spec.extent_x(), ey = spec.extent_y();
    const double stack_x = 0.5 * ex + m.line_overhang;  // stack island half-extent
    const double stack_y = 0.5 * ey + m.line_overhang;
    const double wall_x = 0.5 * ex + spec.th_margin;
    const double wall_y = 0.5 * ey + spec.th_margin;

    // z stack: house | bottom electrode | oxide | top electrode | house
    const double z_be0 = spec.th_margin;
    const double z_be1 = z_be0 + spec.h_m;
    m.z_ox0 = z_be1;
    m.z_ox1 = m.z_ox0 + spec.t_ox;
    const double z_te0 = m.z_ox1;
    const double z_te1 = z_te0 + spec.h_m;
    const double z_top = z_te1 + spec.th_margin;

    std::vector<double> bx{-wall_x, -stack_x, stack_x, wall_x};
    std::vector<double> by{-wall_y, -stack_y, stack_y, wall_y};
    std::vector<std::pair<double, double>> fx, fy;
    for (int c = 1; c <= spec.cols; ++c) {
        const double xc = spec.cell_x(c);
        bx.push_back(xc - 0.5 * spec.w_m);
        bx.push_back(xc + 0.5 * spec.w_m);
        bx.push_back(xc - spec.r_cf);
        bx.push_back(xc + spec.r_cf);
        fx.emplace_back(xc - spec.r_cf, xc + spec.r_cf);
    }
    for (int r = 1; r <= spec.rows; ++r) {
        const double yc = spec.cell_y(r);
        by.push_back(yc - 0.5 * spec.w_m);
        by.push_back(yc + 0.5 * spec.w_m);
        by.push_back(yc - spec.r_cf);
        by.push_back(yc + spec.r_cf);
        fy.emplace_back(yc - spec.r_cf, yc + spec.r_cf);
    }
    const std::vector<double> bz{0, z_be0, z_be1, m.z_ox1, z_te1, z_top};
    const std::vector<std::pair<double, double>> fz{{m.z_ox0, m.z_ox1}};

    m.xs = build_axis(bx, mesh, fx);
    m.ys = build_axis(by, mesh, fy);
    m.zs = build_axis(bz, mesh, fz);

    const std::size_t n = m.nx() * m.ny() * m.nz();
    if (n > mesh.voxel_budget)
        throw ResourceError("mesh policy yields " + std::to_string(n) +
                            " voxels, over the budget of " + std::to_string(mesh.voxel_budget));

    m.region.assign(n, Region::House);
    m.cf_cell.assign(n, -1);
    m.line_id.assign(n, -1);
    m.cell_voxels.assign(static_cast<std::size_t>(spec.cell_count()), {});
    m.footprint_voxels.assign(static_cast<std::size_t>(spec.cell_count()), {});
    m.probe_voxel.assign(static_cast<std::size_t>(spec.cell_count()), 0);

    auto col_at = [&](double x) -> int {  // 1-based column whose line covers x, else 0
        for (int c = 1; c <= spec.cols; ++c)
            if (std::abs(x - spec.cell_x(c)) < 0.5 * spec.w_m) return c;
        return 0;
    };
    auto row_at = [&](double y) -> int {
        for (int r = 1; r <= spec.rows; ++r)
            if (std::abs(y - spec.cell_y(r)) < 0.5 * spec.w_m) return r;
        return 0;
    };

    for (std::size_t k = 0; k < m.nz(); ++k) {
        const double zc = 0.5 * (m.zs[k] + m.zs[k + 1]);
        const bool in_be = zc > z_be0 && zc < z_be1;
        const bool in_ox = zc > m.z_ox0 && zc < m.z_ox1;
        const bool in_te = zc > z_te0 && zc < z_te1;
        if (!(in_be || in_ox || in_te)) continue;  // house z-layers
        for (std::size_t j = 0; j < m.ny(); ++j) {
            const double yc = 0.5 * (m.ys[j] + m.ys[j + 1]);
            for (std::size_t i = 0; i < m.nx(); ++i) {
                const double xc = 0.5 * (m.xs[i] + m.xs[i + 1]);
                if (std::abs(xc) > stack_x || std::abs(yc) > stack_y) continue;  // lateral house
                const std::size_t v = m.index(i, j, k);
                const int col = col_at(xc);
                const int row = row_at(yc);
                // Dielectric fill outside the metal, per the configured mode.
                auto gap_region = [&](bool oxide_here) {
                    m.region[v] = oxide_here ? Region::Oxide : Region::House;
                };
                if (in_be) {
                    if (col > 0) {
                        m.region[v] = Region::ElectrodeBottom;
                        m.line_id[v] = static_cast<std::int16_t>(m.bottom_line(col));
                    } else {
                        gap_region(spec.oxide_fill == OxideFill::StackIsland);
                    }
                } else if (in_te) {
                    if (row > 0) {
                        m.region[v] = Region::ElectrodeTop;
                        m.line_id[v] = static_cast<std::int16_t>(m.top_line(row));
                    } else {
                        gap_region(spec.oxide_fill == OxideFill::StackIsland);
                    }
                } else {  // oxide layer: filament membership by voxel-center-in-circle
                    switch (spec.oxide_fill) {
                        case OxideFill::StackIsland: m.region[v] = Region::Oxide; break;
                        case OxideFill::ArraySlab:
                            gap_region(std::abs(xc) < 0.5 * ex && std::abs(yc) < 0.5 * ey);
                            break;
                        case OxideFill::Crossings: gap_region(row > 0 || col > 0); break;
                    }
                    if (row > 0 && col > 0) {
                        const double rx = xc - spec.cell_x(col);
                        const double ry = yc - spec.cell_y(row);
                        const std::size_t cell = static_cast<std::size_t>(cell_id(spec, row, col));
                        if (rx * rx + ry * ry <= spec.r_cf * spec.r_cf) {
                            m.region[v] = Region::CF;
                            m.cf_cell[v] = static_cast<std::int32_t>(cell);
                            m.cell_voxels[cell].push_back(v);
                        }
                        m.footprint_voxels[cell].push_back(v);
                    }
                }
            }
        }
    }

    for (int r = 1; r <= spec.rows; ++r)
        for (int c = 1; c <= spec.cols; ++c) {
            const std::size_t cell = static_cast<std::size_t>(cell_id(spec, r, c));
            if (m.cell_voxels[cell].empty())
                throw ResourceError("mesh too coarse: cell (" + std::to_string(r) + "," +
                                    std::to_string(c) + ") has no filament voxels");
            m.probe_voxel[cell] =
                m.locate(spec.cell_x(c), spec.cell_y(r), 0.5 * (m.z_ox0 + m.z_ox1));
        }

    return m;
}

/// Summed voxel volume of a region [m^3].
inline double region_volume(const VoxelModel& m, Region r) {
    double vol = 0;
    for (std::size_t k = 0; k < m.nz(); ++k)
        for (std::size_t j = 0; j < m.ny(); ++j)
            for (std::size_t i = 0; i < m.nx(); ++i)
                if (m.region[m.index(i, j, k)] == r) vol += m.volume(i, j, k);
    return vol;
}

/// Voxelized filament cross-sectional area of one cell [m^2]
/// (filament volume divided by the oxide thickness).
inline double filament_area(const VoxelModel& m, int cell) {
    double vol = 0;
    for (std::size_t v : m.cell_voxels[static_cast<std::size_t>(cell)]) {
        const std::size_t i = v % m.nx();
        const std::size_t j = (v / m.nx()) % m.ny();
        const std::size_t k = v / (m.nx() * m.ny());
        vol += m.volume(i, j, k);
    }
    return vol / (m.z_ox1 - m.z_ox0);
}

}  // namespace crosstherm
