// thermal_network.hpp
//
// Compact steady-state thermal model: the coupling matrix maps per-cell
// self-heating rises (R_th * P) to total rises. Also solves the
// electro-thermal fixed point when conductance depends on temperature.

#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "crosstherm/extraction.hpp"

namespace crosstherm {

struct ThermalNetwork {
    CouplingMatrix coupling;
    double t_amb = 300.0;

    int dim() const { return coupling.dim; }
};

/// dT = C * (R_th o P), elementwise product o.
inline std::vector<double> cell_temperatures(const ThermalNetwork& net,
                                             const std::vector<double>& power) {
    if (power.size() != static_cast<std::size_t>(net.dim()))
        throw ArgumentError("power vector length does not match network dimension");
    for (double p : power)
        if (p < 0) throw ArgumentError("power entries must be non-negative");
    std::vector<double> self(power.size());
    for (std::size_t m = 0; m < power.size(); ++m) self[m] = net.coupling.r_th[m] * power[m];
    std::vector<double> rise(power.size(), 0.0);
    for (int n = 0; n < net.dim(); ++n)
        for (int m = 0; m < net.dim(); ++m) rise[n] += net.coupling.at(n, m) * self[m];
    return rise;
}

struct ElectrothermalResult {
    std::vector<double> rise;   // [K]
    std::vector<double> power;  // [W]
    std::size_t iterations = 0;
};

/// Per-cell conductance as a function of absolute temperature [S].
using ConductanceRule = std::function<double(int cell, double T)>;

/// Successive substitution with damping on the temperature rise:
/// P = G(T) V^2, dT = C (R_th o P).
inline ElectrothermalResult solve_electrothermal(const ThermalNetwork& net,
                                                 const ConductanceRule& conductance,
                                                 const std::vector<double>& cell_bias,
                                                 double tol = 1e-6, double damping = 0.5,
                                                 std::size_t max_iter = 200) {
    if (!(damping > 0 && damping <= 1)) throw ArgumentError("damping must be in (0, 1]");
    if (cell_bias.size() != static_cast<std::size_t>(net.dim()))
        throw ArgumentError("bias vector length does not match network dimension");

    ElectrothermalResult res;
    res.rise.assign(cell_bias.size(), 0.0);
    std::vector<double> prev = res.rise;
    for (std::size_t it = 1; it <= max_iter; ++it) {
        res.power.resize(cell_bias.size());
        for (std::size_t m = 0; m < cell_bias.size(); ++m) {
            const double g = conductance(static_cast<int>(m), net.t_amb + res.rise[m]);
            res.power[m] = g * cell_bias[m] * cell_bias[m];
        }
        const std::vector<double> target = cell_temperatures(net, res.power);
        // The first update is an undamped evaluation from the cold state;
        // damping only moderates subsequent feedback corrections.
        const double w = it == 1 ? 1.0 : damping;
        double step = 0;
        for (std::size_t m = 0; m < target.size(); ++m) {
            const double next = res.rise[m] + w * (target[m] - res.rise[m]);
            if (!std::isfinite(next))
                throw SolverError("electro-thermal fixed point diverged at cell " +
                                  std::to_string(m));
            step = std::max(step, std::abs(next - res.rise[m]));
            res.rise[m] = next;
        }
        // iterations = updates that changed the state
        res.iterations = step < tol ? it - 1 : it;
        if (step < tol) return res;
        prev = res.rise;
    }
    throw SolverError("electro-thermal fixed point did not converge: last rise " +
                      std::to_string(res.rise.empty() ? 0.0 : res.rise[0]) + " K vs previous " +
                      std::to_string(prev.empty() ? 0.0 : prev[0]) + " K");
}

}  // namespace crosstherm
