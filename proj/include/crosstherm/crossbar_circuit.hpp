// crossbar_circuit.hpp
//
// Read/VMM operation of the passive crossbar with the compact thermal
// network in the loop and a temperature-accelerated conductance-drift law
// (Arrhenius read-disturb surrogate for the device compact model).

#pragma once

#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "crosstherm/thermal_network.hpp"
#include "crosstherm/units.hpp"

namespace crosstherm {

struct CellState {
    CellResistanceState state = CellResistanceState::LRS;
    double G = 0;       // conductance [S]
    double G_prog = 0;  // programmed conductance [S]
    double T = 300.0;   // [K]
};

// Default operating point: the analytic filament resistance at the reference
// parameters gives ~36.4 kOhm in LRS; HRS is 1000x more resistive.
inline constexpr double kDefaultLrsConductance = 27.5e-6;  // [S]
inline constexpr double kDefaultHrsRatio = 1e-3;

struct InferencePattern {
    int rows = 0, cols = 0;
    std::vector<CellResistanceState> cells;  // row-major

    static InferencePattern uniform(int rows, int cols, CellResistanceState s) {
        InferencePattern p;
        p.rows = rows;
        p.cols = cols;
        p.cells.assign(static_cast<std::size_t>(rows) * cols, s);
        return p;
    }
    /// All cells LRS (the worst-case heating scenario).
    static InferencePattern all_lrs(int rows, int cols) {
        return uniform(rows, cols, CellResistanceState::LRS);
    }
    /// Three LRS cells sharing one column line (column 2).
    static InferencePattern case_a(int rows, int cols) {
        InferencePattern p = uniform(rows, cols, CellResistanceState::HRS);
        for (int r = 0; r < rows; ++r)
            p.cells[static_cast<std::size_t>(r) * cols + 1] = CellResistanceState::LRS;
        return p;
    }
    /// Three LRS cells sharing no line (main diagonal).
    static InferencePattern case_b(int rows, int cols) {
        InferencePattern p = uniform(rows, cols, CellResistanceState::HRS);
        for (int r = 0; r < rows && r < cols; ++r)
            p.cells[static_cast<std::size_t>(r) * cols + r] = CellResistanceState::LRS;
        return p;
    }
    static InferencePattern by_name(const std::string& name, int rows, int cols) {
        if (name == "ALL_LRS" || name == "all_lrs") return all_lrs(rows, cols);
        if (name == "CASE_A" || name == "case_a") return case_a(rows, cols);
        if (name == "CASE_B" || name == "case_b") return case_b(rows, cols);
        throw ArgumentError("unknown inference pattern '" + name + "'");
    }
};

struct DriftParams {
    double alpha = 0;   // per-read-pulse prefactor [-]
    double e_a = 0.6;   // activation energy [eV]
    double beta = 2.0;  // read-voltage exponent [-]
    double v_ref = 0.3; // reference read voltage [V]

    void check() const {
        if (alpha < 0) throw ArgumentError("alpha must be non-negative");
        if (!(e_a > 0)) throw ArgumentError("activation energy must be positive");
        if (beta < 0) throw ArgumentError("beta must be non-negative");
    }
};

/// I_j = sum_i G_ij * v_i: column currents of the ideal (line-resistance-free,
/// drift-free) array.
inline std::vector<double> ideal_currents(const std::vector<std::vector<double>>& G,
                                          const std::vector<double>& v_read) {
    if (G.size() != v_read.size()) throw ArgumentError("G row count != input vector length");
    const std::size_t cols = G.empty() ? 0 : G[0].size();
    std::vector<double> current(cols, 0.0);
    for (std::size_t i = 0; i < G.size(); ++i) {
        if (G[i].size() != cols) throw ArgumentError("ragged conductance matrix");
        for (std::size_t j = 0; j < cols; ++j) current[j] += G[i][j] * v_read[i];
    }
    return current;
}

namespace detail {

// Dense Gaussian elimination with partial pivoting (systems here are tiny).
inline std::vector<double> solve_dense(std::vector<std::vector<double>> A, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t r = k + 1; r < n; ++r)
            if (std::abs(A[r][k]) > std::abs(A[piv][k])) piv = r;
        if (std::abs(A[piv][k]) < 1e-300)
            throw SolverError("singular nodal system: array is disconnected");
        std::swap(A[k], A[piv]);
        std::swap(b[k], b[piv]);
        for (std::size_t r = k + 1; r < n; ++r) {
            const double f = A[r][k] / A[k][k];
            if (f == 0) continue;
            for (std::size_t c = k; c < n; ++c) A[r][c] -= f * A[k][c];
            b[r] -= f * b[k];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t k = n; k-- > 0;) {
        double s = b[k];
        for (std::size_t c = k + 1; c < n; ++c) s -= A[k][c] * x[c];
        x[k] = s / A[k][k];
    }
    return x;
}

}  // namespace detail

/// Nodal analysis of the resistive crossbar: each row line is driven at one
/// end through a segment resistance, with a segment between consecutive cell
/// taps; each column line is grounded at one end the same way. With zero
/// line resistance the network degenerates to ideal_currents.
inline std::vector<double> solve_array(const std::vector<std::vector<double>>& G,
                                       const std::vector<double>& v_read,
                                       double line_resistance) {
    if (line_resistance < 0) throw ArgumentError("line resistance must be non-negative");
    if (line_resistance == 0) return ideal_currents(G, v_read);

    const std::size_t rows = G.size();
    const std::size_t cols = G.empty() ? 0 : G[0].size();
    const double gl = 1.0 / line_resistance;
    const std::size_t n = 2 * rows * cols;  // row node + column node per cell
    auto rn = [&](std::size_t i, std::size_t j) { return i * cols + j; };
    auto cn = [&](std::size_t i, std::size_t j) { return rows * cols + i * cols + j; };

    std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.0));
    std::vector<double> b(n, 0.0);
    auto stamp = [&](std::size_t a, std::size_t bnode, double g) {
        A[a][a] += g;
        A[bnode][bnode] += g;
        A[a][bnode] -= g;
        A[bnode][a] -= g;
    };
    for (std::size_t i = 0; i < rows; ++i) {
        // drive terminal -> first row tap
        A[rn(i, 0)][rn(i, 0)] += gl;
        b[rn(i, 0)] += gl * v_read[i];
        for (std::size_t j = 0; j + 1 < cols; ++j) stamp(rn(i, j), rn(i, j + 1), gl);
        for (std::size_t j = 0; j < cols; ++j) stamp(rn(i, j), cn(i, j), G[i][j]);
    }
    for (std::size_t j = 0; j < cols; ++j) {
        for (std::size_t i = 0; i + 1 < rows; ++i) stamp(cn(i, j), cn(i + 1, j), gl);
        // last column tap -> ground
        A[cn(rows - 1, j)][cn(rows - 1, j)] += gl;
    }

    const std::vector<double> x = detail::solve_dense(std::move(A), std::move(b));
    std::vector<double> current(cols, 0.0);
    for (std::size_t j = 0; j < cols; ++j) current[j] = x[cn(rows - 1, j)] * gl;
    return current;
}

/// Accuracy = (1 - |(Ia - Ii)/(Ia + Ii)|) * 100. NaN when the denominator is
/// zero (flagged as-is in traces).
inline double vmm_accuracy(double i_actual, double i_ideal) {
    const double den = i_actual + i_ideal;
    if (den == 0) return std::numeric_limits<double>::quiet_NaN();
    return (1.0 - std::abs((i_actual - i_ideal) / den)) * 100.0;
}

/// %Drift = (G_prog - G)/G_prog * 100 (negative when conductance increased).
inline double drift_percent(double G, double G_prog) {
    if (!(G_prog > 0)) throw ArgumentError("G_prog must be positive");
    return (G_prog - G) / G_prog * 100.0;
}

/// One read pulse: G *= 1 + alpha * (v/v_ref)^beta * exp(-E_a / (k_B T)).
inline double drift_step(const CellState& cell, double v_read, const DriftParams& params) {
    params.check();
    const double stress = params.alpha * std::pow(v_read / params.v_ref, params.beta) *
                          std::exp(-params.e_a / (kBoltzmannEv * cell.T));
    return cell.G * (1.0 + stress);
}

struct InferenceLogRow {
    long cycle = 0;
    std::vector<double> i_actual;   // per column [A]
    std::vector<double> i_ideal;    // per column [A]
    std::vector<double> accuracy;   // per column [%]
    std::vector<double> drift_pct;  // per cell [%]
    std::vector<double> T;          // per cell [K]
};

struct InferenceTrace {
    std::vector<InferenceLogRow> rows;
    bool runaway = false;
    int reference_column = 1;  // 0-based; column 2 is most coupling-prone

    double final_accuracy() const {
        return rows.empty() ? 100.0
                            : rows.back().accuracy[static_cast<std::size_t>(reference_column)];
    }
};

struct InferenceOptions {
    double v_read = 0.3;       // [V]
    double pulse_width = 1e-4; // [s]; >> t_s, so each pulse reaches steady state
    long n_cycles = 1;
    double runaway_T = 1500.0;  // [K]
    long log_every = 0;         // 0 = decade-spaced logging
};

inline bool decade_logged(long cycle) {
    long decade = 1;
    while (decade * 10 <= cycle) decade *= 10;
    return cycle % decade == 0;
}

/// Sequential read-stress experiment: per cycle, per-cell dissipation from
/// the current conductances, temperatures from the compact network (the
/// pulse is long enough for thermal steady state), then one drift step on
/// every biased cell.
inline InferenceTrace run_inference(const InferencePattern& pattern, const ThermalNetwork& net,
                                    const DriftParams& drift, const InferenceOptions& opt) {
    if (opt.n_cycles < 1) throw ArgumentError("n_cycles must be >= 1");
    drift.check();
    const int rows = pattern.rows, cols = pattern.cols;
    if (rows * cols != net.dim())
        throw ArgumentError("pattern dimensions do not match thermal network");

    std::vector<CellState> cells(static_cast<std::size_t>(rows) * cols);
    for (std::size_t n = 0; n < cells.size(); ++n) {
        cells[n].state = pattern.cells[n];
        cells[n].G_prog = pattern.cells[n] == CellResistanceState::LRS
                              ? kDefaultLrsConductance
                              : kDefaultLrsConductance * kDefaultHrsRatio;
        cells[n].G = cells[n].G_prog;
        cells[n].T = net.t_amb;
    }

    const std::vector<double> v_in(static_cast<std::size_t>(rows), opt.v_read);
    auto column_currents = [&](bool programmed) {
        std::vector<std::vector<double>> G(static_cast<std::size_t>(rows),
                                           std::vector<double>(static_cast<std::size_t>(cols)));
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) {
                const CellState& c = cells[static_cast<std::size_t>(i) * cols + j];
                G[i][j] = programmed ? c.G_prog : c.G;
            }
        return ideal_currents(G, v_in);
    };

    InferenceTrace trace;
    auto log_row = [&](long cycle) {
        InferenceLogRow row;
        row.cycle = cycle;
        row.i_actual = column_currents(false);
        row.i_ideal = column_currents(true);
        for (std::size_t j = 0; j < row.i_actual.size(); ++j)
            row.accuracy.push_back(vmm_accuracy(row.i_actual[j], row.i_ideal[j]));
        for (const CellState& c : cells) {
            row.drift_pct.push_back(drift_percent(c.G, c.G_prog));
            row.T.push_back(c.T);
        }
        trace.rows.push_back(std::move(row));
    };

    std::vector<double> power(cells.size(), 0.0);
    for (long cycle = 1; cycle <= opt.n_cycles; ++cycle) {
        for (std::size_t n = 0; n < cells.size(); ++n)
            power[n] = cells[n].G * opt.v_read * opt.v_read;
        const std::vector<double> rise = cell_temperatures(net, power);
        bool runaway = false;
        for (std::size_t n = 0; n < cells.size(); ++n) {
            cells[n].T = net.t_amb + rise[n];
            runaway = runaway || cells[n].T > opt.runaway_T;
        }
        if (runaway) {
            trace.runaway = true;
            log_row(cycle);
            return trace;
        }
        for (CellState& c : cells) c.G = drift_step(c, opt.v_read, drift);

        const bool want_log = opt.log_every > 0 ? cycle % opt.log_every == 0
                                                : decade_logged(cycle);
        if (want_log || cycle == opt.n_cycles) log_row(cycle);
    }
    return trace;
}

inline void write_trace_csv(std::ostream& out, const InferenceTrace& trace, int rows, int cols) {
    out << "cycle,column_id,I_actual_A,I_ideal_A,accuracy_pct";
    for (int n = 0; n < rows * cols; ++n)
        out << ",drift_pct_" << (n / cols + 1) << "_" << (n % cols + 1);
    for (int n = 0; n < rows * cols; ++n)
        out << ",T_K_" << (n / cols + 1) << "_" << (n % cols + 1);
    out << "\n";
    for (const auto& row : trace.rows)
        for (std::size_t j = 0; j < row.i_actual.size(); ++j) {
            out << row.cycle << "," << (j + 1) << "," << format_full(row.i_actual[j]) << ","
                << format_full(row.i_ideal[j]) << "," << format_full(row.accuracy[j]);
            for (double d : row.drift_pct) out << "," << format_full(d);
            for (double t : row.T) out << "," << format_full(t);
            out << "\n";
        }
}

}  // namespace crosstherm
