// coupled.hpp
//
// Self-consistent electro-thermal solve: alternate current-continuity and
// steady heat solves until per-cell dissipation stops changing. With
// temperature-independent material parameters the feedback path is absent
// and the loop converges after a single sweep.

#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "crosstherm/electrical.hpp"
#include "crosstherm/thermal.hpp"

namespace crosstherm {

struct CoupledSolution {
    ScalarField potential;
    ScalarField temperature;
    std::vector<double> cell_power;  // [W]
    SolveReport report;              // iterations = electro-thermal sweeps
};

/// Optional conductivity feedback: maps (voxel temperatures) to a per-voxel
/// sigma scale factor. The default (null) means temperature-independent
/// parameters.
using SigmaFeedback =
    std::function<std::vector<double>(const VoxelModel&, const std::vector<double>& T)>;

inline CoupledSolution solve_coupled(const VoxelModel& m, const BiasAssignment& bias,
                                     double tol = 1e-6, const ArrayBiasState& state = {},
                                     double linear_tol = 1e-8,
                                     const SigmaFeedback& feedback = nullptr,
                                     std::size_t max_sweeps = 25) {
    CoupledSolution sol;
    std::vector<double> prev_power;
    double prev_change = std::numeric_limits<double>::max();

    std::vector<double> T(m.voxel_count(), m.spec.t_amb);
    for (std::size_t sweep = 1; sweep <= max_sweeps; ++sweep) {
        // A sigma override hook would be applied here; without feedback the
        // electrical problem is identical every sweep.
        ElectricalSolution es = solve_electrical(m, bias, linear_tol, state);
        ThermalSolution ts = solve_heat_steady(m, es.power_density, m.spec.t_amb, linear_tol);
        T = ts.temperature.values;

        sol.potential = std::move(es.potential);
        sol.temperature = std::move(ts.temperature);
        sol.cell_power = es.cell_power;
        sol.report.iterations = sweep;
        sol.report.residual = 0;

        if (!prev_power.empty()) {
            double change = 0;
            for (std::size_t c = 0; c < sol.cell_power.size(); ++c) {
                const double p = std::max(std::abs(prev_power[c]), 1e-30);
                change = std::max(change, std::abs(sol.cell_power[c] - prev_power[c]) / p);
            }
            sol.report.residual = change;
            if (change < tol) {
                sol.report.iterations = sweep - 1;  // sweeps that actually changed the state
                return sol;
            }
            if (change > prev_change && sweep > 2)
                throw SolverError(
                    "electro-thermal fixed point oscillates; apply damping to the feedback");
            prev_change = change;
        }
        prev_power = sol.cell_power;

        if (!feedback) {
            // No temperature dependence: the next electrical solve would be
            // bit-identical, so the fixed point is already reached.
            return sol;
        }
    }
    throw SolverError("coupled solve did not converge");
}

}  // namespace crosstherm
