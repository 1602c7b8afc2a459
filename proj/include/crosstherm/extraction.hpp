// extraction.hpp
//
// Per-cell thermal-resistance extraction (power sweep with the target cell in
// LRS and every other cell in HRS) and coupling-matrix construction from
// single-source excitations. Temperature is probed at the filament-center
// voxel of each cell.

#pragma once

#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "crosstherm/coupled.hpp"
#include "crosstherm/electrical.hpp"
#include "crosstherm/thermal.hpp"

namespace crosstherm {

struct RthResult {
    int cell = 0;
    double r_th = 0;      // [K/W]
    double residual = 0;  // max relative deviation of dT/P across the sweep
    std::vector<std::pair<double, double>> sweep;  // (P_diss [W], dT [K])
};

struct CouplingMatrix {
    int dim = 0;
    std::vector<double> c;     // row-major, c[n*dim + m]
    std::vector<double> r_th;  // per-cell [K/W]
    double asymmetry = 0;      // max |c_ab - c_ba| before symmetrization

    double at(int n, int m) const { return c[static_cast<std::size_t>(n) * dim + m]; }
    double& at(int n, int m) { return c[static_cast<std::size_t>(n) * dim + m]; }

    static CouplingMatrix identity(int dim, std::vector<double> r_th) {
        CouplingMatrix cm;
        cm.dim = dim;
        cm.c.assign(static_cast<std::size_t>(dim) * dim, 0.0);
        for (int i = 0; i < dim; ++i) cm.at(i, i) = 1.0;
        cm.r_th = std::move(r_th);
        return cm;
    }
};

namespace detail {

/// Electrical + thermal solve with only `cell` in LRS, scaled so that the
/// cell dissipates exactly `power`. Exact in one step: the device is linear,
/// so dissipation scales with the square of the bias amplitude.
struct SingleSourceSolve {
    double bias = 0;                 // bias amplitude realizing `power` [V]
    std::vector<double> cell_rise;   // dT at every cell's filament center [K]
    ScalarField power_density;       // scaled to `power` [W/m^3]
};

inline SingleSourceSolve single_source_solve(const VoxelModel& m, int cell, double power,
                                             double tol, double v_probe = 0.3,
                                             double bias_cap = 100.0) {
    ArrayBiasState st = ArrayBiasState::single_lrs(m.spec, cell);
    BiasAssignment bias = BiasAssignment::all_rows(m, v_probe);
    ElectricalSolution es = solve_electrical(m, bias, tol, st);
    const double p0 = es.cell_power[static_cast<std::size_t>(cell)];
    if (p0 <= 0) throw SolverError("no dissipation in the excited cell");
    const double v_target = v_probe * std::sqrt(power / p0);
    if (v_target > bias_cap)
        throw ArgumentError("power target " + std::to_string(power) +
                            " W needs bias beyond the cap");

    SingleSourceSolve out;
    out.bias = v_target;
    out.power_density = std::move(es.power_density);
    const double scale = power / p0;
    for (double& q : out.power_density.values) q *= scale;

    ThermalSolution ts = solve_heat_steady(m, out.power_density, m.spec.t_amb, tol);
    out.cell_rise.resize(m.probe_voxel.size());
    for (std::size_t n = 0; n < m.probe_voxel.size(); ++n)
        out.cell_rise[n] = ts.temperature.values[m.probe_voxel[n]] - m.spec.t_amb;
    return out;
}

/// Matrix construction shared by extract_coupling_matrix and callers that
/// already hold the per-source rise vectors: c_nm = dT_n / dT_mm, unit
/// diagonal forced, symmetrized by averaging with the pre-symmetrization
/// spread recorded.
inline CouplingMatrix coupling_from_rises(const std::vector<std::vector<double>>& rises,
                                          double power) {
    CouplingMatrix cm;
    cm.dim = static_cast<int>(rises.size());
    cm.c.assign(static_cast<std::size_t>(cm.dim) * cm.dim, 0.0);
    cm.r_th.resize(static_cast<std::size_t>(cm.dim));
    for (int mcell = 0; mcell < cm.dim; ++mcell) {
        const double self = rises[mcell][static_cast<std::size_t>(mcell)];
        if (self <= 0)
            throw SolverError("non-positive self-heating rise at cell " + std::to_string(mcell));
        cm.r_th[mcell] = self / power;
        for (int n = 0; n < cm.dim; ++n)
            cm.at(n, mcell) = rises[mcell][static_cast<std::size_t>(n)] / self;
    }
    for (int n = 0; n < cm.dim; ++n) cm.at(n, n) = 1.0;
    for (int a = 0; a < cm.dim; ++a)
        for (int b = a + 1; b < cm.dim; ++b) {
            cm.asymmetry = std::max(cm.asymmetry, std::abs(cm.at(a, b) - cm.at(b, a)));
            const double avg = 0.5 * (cm.at(a, b) + cm.at(b, a));
            cm.at(a, b) = avg;
            cm.at(b, a) = avg;
        }
    return cm;
}

}  // namespace detail

inline std::vector<double> default_power_sweep() {
    return {0.5e-6, 1.0e-6, 1.5e-6, 2.0e-6, 2.45e-6};
}

/// R_th of one cell as the least-squares slope of dT vs P through the origin.
inline RthResult extract_rth(const VoxelModel& m, int cell,
                             const std::vector<double>& power_sweep, double tol = 1e-8) {
    if (power_sweep.size() < 3) throw ArgumentError("power sweep needs at least 3 points");
    for (double p : power_sweep)
        if (p <= 0) throw ArgumentError("power sweep points must be strictly positive");

    RthResult res;
    res.cell = cell;
    for (double p : power_sweep) {
        const auto s = detail::single_source_solve(m, cell, p, tol);
        res.sweep.emplace_back(p, s.cell_rise[static_cast<std::size_t>(cell)]);
    }
    double num = 0, den = 0;
    for (const auto& [p, dT] : res.sweep) {
        num += p * dT;
        den += p * p;
    }
    res.r_th = num / den;
    for (const auto& [p, dT] : res.sweep)
        res.residual = std::max(res.residual, std::abs(dT / p - res.r_th) / res.r_th);
    if (res.r_th <= 0) throw SolverError("non-positive fitted thermal resistance");
    return res;
}

/// Coupling matrix from one excitation per source cell: c_nm = dT_n / dT_mm,
/// unit diagonal, symmetrized by averaging. Sources run concurrently.
inline CouplingMatrix extract_coupling_matrix(const VoxelModel& m, double power,
                                              double tol = 1e-8, unsigned jobs = 1) {
    if (power <= 0) throw ArgumentError("excitation power must be positive");
    const int dim = m.spec.cell_count();

    std::vector<std::vector<double>> rises(static_cast<std::size_t>(dim));
    if (jobs <= 1) {
        for (int src = 0; src < dim; ++src)
            rises[src] = detail::single_source_solve(m, src, power, tol).cell_rise;
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        std::vector<std::vector<double>> out(static_cast<std::size_t>(dim));
        std::exception_ptr err;
        std::mutex err_mu;
        for (unsigned t = 0; t < jobs; ++t)
            pool.emplace_back([&] {
                for (int src; (src = next.fetch_add(1)) < dim;) {
                    try {
                        out[src] = detail::single_source_solve(m, src, power, tol).cell_rise;
                    } catch (...) {
                        std::lock_guard<std::mutex> g(err_mu);
                        if (!err) err = std::current_exception();
                    }
                }
            });
        for (auto& th : pool) th.join();
        if (err) std::rethrow_exception(err);
        rises = std::move(out);
    }

    return detail::coupling_from_rises(rises, power);
}

struct SpacingSweepRow {
    double sp = 0;          // [m]
    double tc_nearest = 0;  // c for (1,2) given source (1,1)
    double max_dT = 0;      // single-source max rise at the sweep power [K]
};

/// Rebuilds the model per spacing and reports nearest-neighbour coupling and
/// the single-source peak rise.
inline std::vector<SpacingSweepRow> sweep_spacing(CrossbarSpec spec_template,
                                                  const MeshPolicy& mesh,
                                                  const std::vector<double>& spacings,
                                                  double power, double tol = 1e-8,
                                                  unsigned jobs = 1) {
    for (std::size_t i = 0; i < spacings.size(); ++i) {
        if (spacings[i] <= 0) throw ArgumentError("spacings must be positive");
        for (std::size_t j = i + 1; j < spacings.size(); ++j)
            if (spacings[i] == spacings[j]) throw ArgumentError("spacings must be distinct");
    }
    std::vector<SpacingSweepRow> table;
    for (double sp : spacings) {
        CrossbarSpec spec = spec_template;
        spec.sp = sp;
        VoxelModel model = build_model(spec, mesh);
        CouplingMatrix cm = extract_coupling_matrix(model, power, tol, jobs);
        SpacingSweepRow row;
        row.sp = sp;
        row.tc_nearest = cm.at(cell_id(spec, 1, 2), cell_id(spec, 1, 1));
        double mx = 0;
        for (int n = 0; n < cm.dim; ++n) mx = std::max(mx, cm.r_th[n] * power);
        row.max_dT = mx;
        table.push_back(row);
    }
    return table;
}

// ---- serialization ----

inline std::string cell_label(const CrossbarSpec& spec, int cell) {
    return "(" + std::to_string(cell / spec.cols + 1) + "," +
           std::to_string(cell % spec.cols + 1) + ")";
}

inline void write_coupling_csv(std::ostream& out, const CouplingMatrix& cm,
                               const CrossbarSpec& spec) {
    out << "cell";
    for (int mcol = 0; mcol < cm.dim; ++mcol) out << "," << cell_label(spec, mcol);
    out << ",R_th_K_per_W\n";
    for (int n = 0; n < cm.dim; ++n) {
        out << cell_label(spec, n);
        for (int mcol = 0; mcol < cm.dim; ++mcol) out << "," << format_full(cm.at(n, mcol));
        out << "," << format_full(cm.r_th[n]) << "\n";
    }
}

/// Compact structured-text form consumed by the thermal network and the
/// netlist emitter.
inline void write_coupling_text(std::ostream& out, const CouplingMatrix& cm) {
    out << "# crosstherm coupling matrix v1\n";
    out << "dim = " << cm.dim << "\n";
    out << "asymmetry = " << format_full(cm.asymmetry) << "\n";
    out << "r_th =";
    for (double r : cm.r_th) out << " " << format_full(r);
    out << "\n";
    for (int n = 0; n < cm.dim; ++n) {
        out << "row" << n << " =";
        for (int mcol = 0; mcol < cm.dim; ++mcol) out << " " << format_full(cm.at(n, mcol));
        out << "\n";
    }
}

inline CouplingMatrix read_coupling_text(std::istream& in) {
    CouplingMatrix cm;
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& why) {
        throw ConfigError("coupling matrix line " + std::to_string(lineno) + ": " + why);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string key, eq;
        ls >> key >> eq;
        if (eq != "=") fail("expected 'key = values'");
        if (key == "dim") {
            ls >> cm.dim;
            if (cm.dim <= 0) fail("bad dimension");
            cm.c.assign(static_cast<std::size_t>(cm.dim) * cm.dim, 0.0);
        } else if (key == "asymmetry") {
            ls >> cm.asymmetry;
        } else if (key == "r_th") {
            double v;
            while (ls >> v) cm.r_th.push_back(v);
        } else if (key.rfind("row", 0) == 0) {
            const int n = std::stoi(key.substr(3));
            if (cm.dim == 0 || n < 0 || n >= cm.dim) fail("row index out of range");
            for (int mcol = 0; mcol < cm.dim; ++mcol)
                if (!(ls >> cm.at(n, mcol))) fail("short row");
        } else {
            fail("unknown key '" + key + "'");
        }
    }
    if (cm.dim == 0 || cm.r_th.size() != static_cast<std::size_t>(cm.dim))
        throw ConfigError("coupling matrix file incomplete");
    return cm;
}

inline void write_rth_csv(std::ostream& out, const std::vector<RthResult>& results,
                          const CrossbarSpec& spec) {
    out << "cell,R_th_K_per_W,fit_residual,P_diss_W,dT_K\n";
    for (const auto& r : results)
        for (const auto& [p, dT] : r.sweep)
            out << cell_label(spec, r.cell) << "," << format_full(r.r_th) << ","
                << format_full(r.residual) << "," << format_full(p) << "," << format_full(dT)
                << "\n";
}

}  // namespace crosstherm
