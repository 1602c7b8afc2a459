// electrical.hpp
//
// Steady current-continuity solve on the voxel model. Driven electrode lines
// are Dirichlet volumes (the line metal is orders of magnitude more
// conductive than the filament, so each driven line is equipotential);
// floating lines stay in the unknown set with the metal conductivity. The
// thermal house is excluded from the electrical domain.

#pragma once

#include <chrono>
#include <optional>
#include <vector>

#include "crosstherm/fields.hpp"
#include "crosstherm/pcg.hpp"
#include "crosstherm/voxel_model.hpp"

namespace crosstherm {

enum class CellResistanceState : std::uint8_t { LRS = 0, HRS = 1 };

/// Per-cell resistance state during a solve. HRS cells keep their filament
/// geometry but conduct with the oxide conductivity.
struct ArrayBiasState {
    std::vector<CellResistanceState> cell_state;  // empty = all LRS

    CellResistanceState state(std::size_t cell) const {
        return cell < cell_state.size() ? cell_state[cell] : CellResistanceState::LRS;
    }
    static ArrayBiasState all_lrs() { return {}; }
    static ArrayBiasState single_lrs(const CrossbarSpec& spec, int cell) {
        ArrayBiasState s;
        s.cell_state.assign(static_cast<std::size_t>(spec.cell_count()), CellResistanceState::HRS);
        s.cell_state[static_cast<std::size_t>(cell)] = CellResistanceState::LRS;
        return s;
    }
};

/// Dirichlet potential per electrode line; unset entries are floating.
struct BiasAssignment {
    std::vector<std::optional<double>> line_voltage;

    static BiasAssignment floating(const VoxelModel& m) {
        BiasAssignment b;
        b.line_voltage.assign(static_cast<std::size_t>(m.line_count()), std::nullopt);
        return b;
    }
    /// All row lines at v, all column lines grounded (the VMM read mode).
    static BiasAssignment all_rows(const VoxelModel& m, double v) {
        BiasAssignment b = floating(m);
        for (int r = 1; r <= m.spec.rows; ++r) b.line_voltage[m.top_line(r)] = v;
        for (int c = 1; c <= m.spec.cols; ++c) b.line_voltage[m.bottom_line(c)] = 0.0;
        return b;
    }
    std::size_t driven_count() const {
        std::size_t n = 0;
        for (const auto& v : line_voltage) n += v.has_value();
        return n;
    }
};

struct ElectricalSolution {
    ScalarField potential;      // [V]
    ScalarField power_density;  // [W/m^3]
    std::vector<double> line_current;  // per line id, positive into the domain [A]
    std::vector<double> cell_power;    // dissipation per cell footprint [W]
    double total_power = 0;            // sum of all face dissipation [W]
    SolveReport report;
};

namespace detail {

inline std::vector<double> electrical_conductivity(const VoxelModel& m,
                                                   const ArrayBiasState& state) {
    std::vector<double> sigma(m.voxel_count(), 0.0);
    for (std::size_t v = 0; v < m.voxel_count(); ++v) {
        switch (m.region[v]) {
            case Region::House: sigma[v] = 0.0; break;
            case Region::CF:
                sigma[v] = state.state(static_cast<std::size_t>(m.cf_cell[v])) ==
                                   CellResistanceState::LRS
                               ? m.spec.materials.cf.sigma
                               : m.spec.materials.oxide.sigma;
                break;
            default: sigma[v] = m.material(m.region[v]).sigma; break;
        }
    }
    return sigma;
}

}  // namespace detail

inline ElectricalSolution solve_electrical(const VoxelModel& m, const BiasAssignment& bias,
                                           double tol = 1e-8,
                                           const ArrayBiasState& state = {}) {
    if (tol <= 0) throw ArgumentError("tolerance must be positive");
    if (bias.line_voltage.size() != static_cast<std::size_t>(m.line_count()))
        throw ArgumentError("bias assignment size does not match line count");
    if (bias.driven_count() == 0)
        throw ArgumentError("all electrode lines floating: no driven line in bias assignment");

    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t n = m.voxel_count();
    const std::vector<double> sigma = detail::electrical_conductivity(m, state);

    std::vector<VoxelStatus> status(n, VoxelStatus::Unknown);
    std::vector<double> fixed(n, 0.0);
    for (std::size_t v = 0; v < n; ++v) {
        if (m.region[v] == Region::House) {
            status[v] = VoxelStatus::Void;
        } else if (m.line_id[v] >= 0) {
            const auto& lv = bias.line_voltage[static_cast<std::size_t>(m.line_id[v])];
            if (lv.has_value()) {
                status[v] = VoxelStatus::Fixed;
                fixed[v] = *lv;
            }
        }
    }

    std::vector<double> dxs(m.nx()), dys(m.ny()), dzs(m.nz());
    for (std::size_t i = 0; i < m.nx(); ++i) dxs[i] = m.dx(i);
    for (std::size_t j = 0; j < m.ny(); ++j) dys[j] = m.dy(j);
    for (std::size_t k = 0; k < m.nz(); ++k) dzs[k] = m.dz(k);

    FvSystem sys = assemble_fv(m.nx(), m.ny(), m.nz(), dxs, dys, dzs, sigma, status, fixed,
                               /*boundary_dirichlet=*/false);

    ElectricalSolution sol;
    sol.potential.quantity = Quantity::Potential;
    sol.potential.values.assign(n, 0.0);
    for (std::size_t v = 0; v < n; ++v)
        if (status[v] == VoxelStatus::Fixed) sol.potential.values[v] = fixed[v];

    sol.report = pcg_solve(sys, sol.potential.values, tol);

    // Face dissipation t*(dV)^2, split between the two voxels (fully
    // attributed to the unknown side when the other side is Dirichlet metal).
    sol.power_density.quantity = Quantity::PowerDensity;
    sol.power_density.values.assign(n, 0.0);
    sol.line_current.assign(static_cast<std::size_t>(m.line_count()), 0.0);
    std::vector<double>& q = sol.power_density.values;
    const std::vector<double>& u = sol.potential.values;

    auto visit_face = [&](std::size_t a, std::size_t b, double t) {
        if (t <= 0) return;
        const bool ua = status[a] == VoxelStatus::Unknown;
        const bool ub = status[b] == VoxelStatus::Unknown;
        if (!ua && !ub) return;
        const double dv = u[a] - u[b];
        const double p = t * dv * dv;
        if (ua && ub) {
            q[a] += 0.5 * p;
            q[b] += 0.5 * p;
        } else if (ua) {  // b fixed
            q[a] += p;
            sol.line_current[static_cast<std::size_t>(m.line_id[b])] += t * (u[b] - u[a]);
        } else {  // a fixed
            q[b] += p;
            sol.line_current[static_cast<std::size_t>(m.line_id[a])] += t * (u[a] - u[b]);
        }
        sol.total_power += p;
    };
    for (std::size_t k = 0; k < m.nz(); ++k)
        for (std::size_t j = 0; j < m.ny(); ++j)
            for (std::size_t i = 0; i + 1 < m.nx(); ++i)
                visit_face(m.index(i, j, k), m.index(i + 1, j, k), sys.tx[sys.fx(i + 1, j, k)]);
    for (std::size_t k = 0; k < m.nz(); ++k)
        for (std::size_t j = 0; j + 1 < m.ny(); ++j)
            for (std::size_t i = 0; i < m.nx(); ++i)
                visit_face(m.index(i, j, k), m.index(i, j + 1, k), sys.ty[sys.fy(i, j + 1, k)]);
    for (std::size_t k = 0; k + 1 < m.nz(); ++k)
        for (std::size_t j = 0; j < m.ny(); ++j)
            for (std::size_t i = 0; i < m.nx(); ++i)
                visit_face(m.index(i, j, k), m.index(i, j, k + 1), sys.tz[sys.fz(i, j, k + 1)]);

    // convert accumulated energy per voxel into a density
    for (std::size_t k = 0; k < m.nz(); ++k)
        for (std::size_t j = 0; j < m.ny(); ++j)
            for (std::size_t i = 0; i < m.nx(); ++i) {
                const std::size_t v = m.index(i, j, k);
                if (q[v] != 0) q[v] /= m.volume(i, j, k);
            }

    sol.cell_power.assign(static_cast<std::size_t>(m.spec.cell_count()), 0.0);
    for (std::size_t cell = 0; cell < sol.cell_power.size(); ++cell)
        for (std::size_t v : m.footprint_voxels[cell]) {
            const std::size_t i = v % m.nx();
            const std::size_t j = (v / m.nx()) % m.ny();
            const std::size_t k = v / (m.nx() * m.ny());
            sol.cell_power[cell] += q[v] * m.volume(i, j, k);
        }

    sol.report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return sol;
}

}  // namespace crosstherm
