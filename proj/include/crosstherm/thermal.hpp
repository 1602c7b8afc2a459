// thermal.hpp
//
// Steady and transient heat solves on the voxel model. The temperature
// unknown is the rise above the sink temperature; all six thermal-house
// outer walls are Dirichlet at the sink.

#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "crosstherm/fields.hpp"
#include "crosstherm/pcg.hpp"
#include "crosstherm/voxel_model.hpp"

namespace crosstherm {

namespace detail {

inline std::vector<double> thermal_conductivity(const VoxelModel& m) {
    std::vector<double> kappa(m.voxel_count());
    for (std::size_t v = 0; v < m.voxel_count(); ++v) kappa[v] = m.material(m.region[v]).kappa;
    return kappa;
}

inline FvSystem assemble_thermal(const VoxelModel& m) {
    std::vector<double> dxs(m.nx()), dys(m.ny()), dzs(m.nz());
    for (std::size_t i = 0; i < m.nx(); ++i) dxs[i] = m.dx(i);
    for (std::size_t j = 0; j < m.ny(); ++j) dys[j] = m.dy(j);
    for (std::size_t k = 0; k < m.nz(); ++k) dzs[k] = m.dz(k);
    const std::vector<VoxelStatus> status(m.voxel_count(), VoxelStatus::Unknown);
    const std::vector<double> fixed(m.voxel_count(), 0.0);
    return assemble_fv(m.nx(), m.ny(), m.nz(), dxs, dys, dzs, thermal_conductivity(m), status,
                       fixed, /*boundary_dirichlet=*/true);
}

inline void load_heat_source(const VoxelModel& m, const ScalarField& q, FvSystem& sys) {
    for (std::size_t k = 0; k < m.nz(); ++k)
        for (std::size_t j = 0; j < m.ny(); ++j)
            for (std::size_t i = 0; i < m.nx(); ++i) {
                const std::size_t v = m.index(i, j, k);
                sys.rhs[v] = q.values[v] * m.volume(i, j, k);
            }
}

/// Heat flux leaving the domain through the sink walls [W].
inline double wall_outflux(const VoxelModel& m, const FvSystem& sys,
                           const std::vector<double>& rise) {
    double flux = 0;
    for (std::size_t k = 0; k < m.nz(); ++k)
        for (std::size_t j = 0; j < m.ny(); ++j) {
            flux += sys.tx[sys.fx(0, j, k)] * rise[m.index(0, j, k)];
            flux += sys.tx[sys.fx(m.nx(), j, k)] * rise[m.index(m.nx() - 1, j, k)];
        }
    for (std::size_t k = 0; k < m.nz(); ++k)
        for (std::size_t i = 0; i < m.nx(); ++i) {
            flux += sys.ty[sys.fy(i, 0, k)] * rise[m.index(i, 0, k)];
            flux += sys.ty[sys.fy(i, m.ny(), k)] * rise[m.index(i, m.ny() - 1, k)];
        }
    for (std::size_t j = 0; j < m.ny(); ++j)
        for (std::size_t i = 0; i < m.nx(); ++i) {
            flux += sys.tz[sys.fz(i, j, 0)] * rise[m.index(i, j, 0)];
            flux += sys.tz[sys.fz(i, j, m.nz())] * rise[m.index(i, j, m.nz() - 1)];
        }
    return flux;
}

}  // namespace detail

struct ThermalSolution {
    ScalarField temperature;  // absolute [K]
    double wall_flux = 0;     // heat leaving through the sink walls [W]
    double injected = 0;      // total source power [W]
    SolveReport report;
};

inline ThermalSolution solve_heat_steady(const VoxelModel& m, const ScalarField& q, double sink_T,
                                         double tol = 1e-8) {
    if (sink_T <= 0) throw ArgumentError("sink temperature must be positive");
    if (q.values.size() != m.voxel_count())
        throw ArgumentError("power-density field size does not match model");

    const auto t0 = std::chrono::steady_clock::now();
    FvSystem sys = detail::assemble_thermal(m);
    detail::load_heat_source(m, q, sys);

    ThermalSolution sol;
    std::vector<double> rise(m.voxel_count(), 0.0);
    sol.report = pcg_solve(sys, rise, tol);
    sol.wall_flux = detail::wall_outflux(m, sys, rise);
    for (double r : sys.rhs) sol.injected += r;

    sol.temperature.quantity = Quantity::Temperature;
    sol.temperature.values.resize(m.voxel_count());
    for (std::size_t v = 0; v < m.voxel_count(); ++v)
        sol.temperature.values[v] = sink_T + rise[v];
    sol.report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return sol;
}

struct TransientPolicy {
    double dt_initial = 1e-9;  // [s]
    double dt_growth = 1.2;
    double dt_max = 1e-6;  // [s]
};

struct ProbeSample {
    double time_s = 0;
    std::vector<double> T;  // per probe [K]
};

struct TransientSolution {
    std::vector<std::string> probe_names;
    std::vector<ProbeSample> trace;
    SolveReport report;  // t_steady_s = first probe-0 crossing of 99% of steady rise
};

/// Implicit first-order stepping with geometric step growth; initial
/// condition is uniform sink temperature.
inline TransientSolution solve_heat_transient(const VoxelModel& m, const ScalarField& q,
                                              double sink_T, const TransientPolicy& dt_policy,
                                              double t_end,
                                              const std::vector<std::size_t>& probes,
                                              const std::vector<std::string>& probe_names,
                                              double tol = 1e-8) {
    if (t_end <= 0) throw ArgumentError("t_end must be positive");
    if (probes.empty()) throw ArgumentError("at least one probe point required");

    const auto t0 = std::chrono::steady_clock::now();
    const ThermalSolution steady = solve_heat_steady(m, q, sink_T, tol);
    const double steady_rise0 = steady.temperature.values[probes[0]] - sink_T;

    FvSystem base = detail::assemble_thermal(m);
    detail::load_heat_source(m, q, base);

    std::vector<double> heat_mass(m.voxel_count());  // rho * c * volume [J/K]
    for (std::size_t k = 0; k < m.nz(); ++k)
        for (std::size_t j = 0; j < m.ny(); ++j)
            for (std::size_t i = 0; i < m.nx(); ++i) {
                const std::size_t v = m.index(i, j, k);
                const MaterialParams& mat = m.material(m.region[v]);
                heat_mass[v] = mat.density * mat.heat_capacity * m.volume(i, j, k);
            }

    TransientSolution sol;
    sol.probe_names = probe_names;
    std::vector<double> rise(m.voxel_count(), 0.0);

    auto record = [&](double t) {
        ProbeSample s;
        s.time_s = t;
        for (std::size_t p : probes) s.T.push_back(sink_T + rise[p]);
        sol.trace.push_back(std::move(s));
    };
    record(0.0);

    double time = 0;
    double dt = dt_policy.dt_initial;
    double t_s = steady_rise0 == 0 ? 0.0 : -1.0;
    FvSystem sys = base;
    while (time < t_end) {
        dt = std::min(dt, t_end - time);
        sys.diag = base.diag;
        sys.rhs = base.rhs;
        for (std::size_t v = 0; v < m.voxel_count(); ++v) {
            const double md = heat_mass[v] / dt;
            sys.diag[v] += md;
            sys.rhs[v] += md * rise[v];
        }
        SolveReport step = pcg_solve(sys, rise, tol);
        sol.report.iterations += step.iterations;
        ++sol.report.time_steps;
        time += dt;
        record(time);

        const double probe_rise = rise[probes[0]];
        if (steady_rise0 > 0 && probe_rise > 1.05 * steady_rise0)
            throw SolverError("transient overshoot beyond steady state: reduce the time step");
        if (t_s < 0 && steady_rise0 > 0 && probe_rise >= 0.99 * steady_rise0) t_s = time;

        dt = std::min(dt * dt_policy.dt_growth, dt_policy.dt_max);
    }
    sol.report.t_steady_s = t_s < 0 ? t_end : t_s;
    sol.report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return sol;
}

}  // namespace crosstherm
