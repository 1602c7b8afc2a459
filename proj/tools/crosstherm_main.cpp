// crosstherm CLI: batch front-end over the field solvers, the extraction
// pipeline, the netlist emitter, and the inference loop. Subcommands read one
// structured config file and write CSV/text artifacts into --out.
//
// Exit codes: 0 success, 2 config/argument error, 3 solver non-convergence,
// 4 thermal runaway during inference.

#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "crosstherm/crossbar_circuit.hpp"
#include "crosstherm/extraction.hpp"
#include "crosstherm/netlist.hpp"
#include "crosstherm/thermal_network.hpp"

namespace fs = std::filesystem;
using namespace crosstherm;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitRunaway = 4;

struct GlobalOpts {
    std::string config_path;
    std::string out_dir = "out";
    unsigned jobs = 1;
    bool quick = false;
    double tol = 1e-8;
};

struct RunContext {
    Config cfg;
    fs::path out;
    fs::path config_dir;
    GlobalOpts opts;

    CrossbarSpec spec() const { return spec_from_config(cfg); }

    MeshPolicy mesh() const {
        MeshPolicy m;
        m.h_fine = cfg.get_length_or("mesh", "h_fine", m.h_fine);
        m.h_max = cfg.get_length_or("mesh", "h_max", m.h_max);
        m.grading = cfg.get_double_or("mesh", "grading", m.grading);
        m.voxel_budget =
            static_cast<std::size_t>(cfg.get_int_or("mesh", "voxel_budget",
                                                    static_cast<long>(m.voxel_budget)));
        return opts.quick ? m.quick() : m;
    }

    /// Input paths are resolved against the config file's directory.
    fs::path resolve(const std::string& p) const {
        fs::path fp(p);
        if (fp.is_absolute() || fs::exists(fp)) return fp;
        return config_dir / fp;
    }
};

RunContext load_context(const GlobalOpts& opts) {
    std::ifstream in(opts.config_path);
    if (!in) throw ConfigError("cannot read config file: " + opts.config_path);
    std::stringstream buf;
    buf << in.rdbuf();
    RunContext ctx;
    ctx.cfg = Config::parse(buf.str());
    ctx.out = opts.out_dir;
    ctx.config_dir = fs::path(opts.config_path).parent_path();
    ctx.opts = opts;
    fs::create_directories(ctx.out);
    return ctx;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open for writing: " + path.string());
    out << text;
}

bool get_bool(const Config& cfg, const std::string& sec, const std::string& key, bool fallback) {
    const std::string v = cfg.get_or(sec, key, fallback ? "true" : "false");
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("not a boolean: [" + sec + "] " + key + " = " + v);
}

std::vector<double> parse_length_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_length(item));
    return out;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

std::string probe_name(const CrossbarSpec& spec, int cell) {
    return "cell_" + std::to_string(cell / spec.cols + 1) + "_" +
           std::to_string(cell % spec.cols + 1);
}

// ---- solve-field ----

int cmd_solve_field(const RunContext& ctx) {
    const CrossbarSpec spec = ctx.spec();
    const VoxelModel model = build_model(spec, ctx.mesh());
    const std::string sec = "solve_field";
    const std::string mode = ctx.cfg.get_or(sec, "mode", "single_source");

    ElectricalSolution es;
    if (mode == "single_source") {
        const int row = static_cast<int>(ctx.cfg.get_int_or(sec, "source_row", (spec.rows + 1) / 2));
        const int col = static_cast<int>(ctx.cfg.get_int_or(sec, "source_col", (spec.cols + 1) / 2));
        const double power = ctx.cfg.get_double_or(sec, "power", 2.45e-6);
        const int cell = cell_id(spec, row, col);
        const auto ss = detail::single_source_solve(model, cell, power, ctx.opts.tol);
        es = solve_electrical(model, BiasAssignment::all_rows(model, ss.bias), ctx.opts.tol,
                              ArrayBiasState::single_lrs(spec, cell));
    } else if (mode == "all_rows") {
        const double v_read = ctx.cfg.get_double_or(sec, "v_read", 0.3);
        es = solve_electrical(model, BiasAssignment::all_rows(model, v_read), ctx.opts.tol);
    } else {
        throw ConfigError("unknown solve_field mode '" + mode + "'");
    }

    const ThermalSolution ts =
        solve_heat_steady(model, es.power_density, spec.t_amb, ctx.opts.tol);

    dump_field_file((ctx.out / "potential.txt").string(), es.potential, model.xs, model.ys,
                    model.zs);
    dump_field_file((ctx.out / "power_density.txt").string(), es.power_density, model.xs,
                    model.ys, model.zs);
    dump_field_file((ctx.out / "temperature.txt").string(), ts.temperature, model.xs, model.ys,
                    model.zs);

    std::ostringstream probes;
    probes << "time_s,probe_name,T_K\n";
    if (get_bool(ctx.cfg, sec, "transient", false)) {
        const double t_end = ctx.cfg.get_double_or(sec, "t_end", 2e-5);
        std::vector<std::string> names;
        for (int n = 0; n < spec.cell_count(); ++n) names.push_back(probe_name(spec, n));
        const TransientSolution tr =
            solve_heat_transient(model, es.power_density, spec.t_amb, TransientPolicy{}, t_end,
                                 model.probe_voxel, names, ctx.opts.tol);
        for (const auto& s : tr.trace)
            for (std::size_t p = 0; p < s.T.size(); ++p)
                probes << format_full(s.time_s) << "," << names[p] << "," << format_full(s.T[p])
                       << "\n";
        std::cout << "t_steady_s " << format_full(tr.report.t_steady_s) << "\n";
    } else {
        for (int n = 0; n < spec.cell_count(); ++n)
            probes << "inf," << probe_name(spec, n) << ","
                   << format_full(ts.temperature.values[model.probe_voxel[n]]) << "\n";
    }
    write_text(ctx.out / "probes.csv", probes.str());

    std::ostringstream sum;
    sum << "voxels = " << model.voxel_count() << "\n";
    sum << "electrical_iterations = " << es.report.iterations << "\n";
    sum << "thermal_iterations = " << ts.report.iterations << "\n";
    sum << "total_power_W = " << format_full(es.total_power) << "\n";
    sum << "wall_flux_W = " << format_full(ts.wall_flux) << "\n";
    double t_max = 0;
    for (double t : ts.temperature.values) t_max = std::max(t_max, t);
    sum << "T_max_K = " << format_full(t_max) << "\n";
    write_text(ctx.out / "summary.txt", sum.str());
    std::cout << "total_power_W " << format_full(es.total_power) << "\n";
    std::cout << "T_max_K " << format_full(t_max) << "\n";
    return 0;
}

// ---- extract ----

int cmd_extract(const RunContext& ctx) {
    const CrossbarSpec spec = ctx.spec();
    const VoxelModel model = build_model(spec, ctx.mesh());
    const double power = ctx.cfg.get_double_or("extract", "power", 2.45e-6);

    const CouplingMatrix cm =
        extract_coupling_matrix(model, power, ctx.opts.tol, ctx.opts.jobs);
    {
        std::ostringstream csv, txt;
        write_coupling_csv(csv, cm, spec);
        write_coupling_text(txt, cm);
        write_text(ctx.out / "coupling.csv", csv.str());
        write_text(ctx.out / "coupling.txt", txt.str());
    }
    std::cout << "asymmetry " << format_full(cm.asymmetry) << "\n";

    if (get_bool(ctx.cfg, "extract", "rth_sweep", true)) {
        std::vector<double> sweep = default_power_sweep();
        if (ctx.cfg.has("extract", "powers"))
            sweep = parse_double_list(ctx.cfg.get("extract", "powers"));
        std::vector<RthResult> results(static_cast<std::size_t>(spec.cell_count()));
        std::atomic<int> next{0};
        std::exception_ptr err;
        std::mutex err_mu;
        auto worker = [&] {
            for (int cell; (cell = next.fetch_add(1)) < spec.cell_count();) {
                try {
                    results[cell] = extract_rth(model, cell, sweep, ctx.opts.tol);
                } catch (...) {
                    std::lock_guard<std::mutex> g(err_mu);
                    if (!err) err = std::current_exception();
                }
            }
        };
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < std::max(1u, ctx.opts.jobs); ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
        if (err) std::rethrow_exception(err);
        std::ostringstream csv;
        write_rth_csv(csv, results, spec);
        write_text(ctx.out / "rth.csv", csv.str());
    }

    if (get_bool(ctx.cfg, "output", "gnuplot", false))
        write_text(ctx.out / "coupling.gp",
                   "set datafile separator ','\n"
                   "set xlabel 'cell'\nset ylabel 'thermal coupling'\n"
                   "plot 'coupling.csv' matrix rowheaders columnheaders with image\n");
    return 0;
}

// ---- emit-netlist ----

int cmd_emit_netlist(const RunContext& ctx) {
    const CrossbarSpec spec = ctx.spec();
    ThermalNetwork net;
    net.t_amb = spec.t_amb;
    const std::string coupling_file =
        ctx.cfg.get_or("netlist", "coupling", (ctx.out / "coupling.txt").string());
    std::ifstream in(ctx.resolve(coupling_file));
    if (!in) throw ConfigError("cannot read coupling file: " + coupling_file);
    net.coupling = read_coupling_text(in);

    const std::string name = ctx.cfg.get_or("netlist", "name", "crossbar_thermal");
    const double prune = ctx.cfg.get_double_or("netlist", "prune", 0.0);
    write_text(ctx.out / "netlist.cir", emit_netlist(net, spec, name, prune));
    return 0;
}

// ---- infer ----

int cmd_infer(const RunContext& ctx) {
    const CrossbarSpec spec = ctx.spec();
    const std::string sec = "inference";

    ThermalNetwork net;
    net.t_amb = spec.t_amb;
    const std::string coupling_file = ctx.cfg.get_or(sec, "coupling", "identity");
    if (coupling_file == "identity") {
        const double r_th = ctx.cfg.get_double_or(sec, "r_th", 6.8e6);
        net.coupling = CouplingMatrix::identity(
            spec.cell_count(), std::vector<double>(static_cast<std::size_t>(spec.cell_count()), r_th));
    } else {
        std::ifstream in(ctx.resolve(coupling_file));
        if (!in) throw ConfigError("cannot read coupling file: " + coupling_file);
        net.coupling = read_coupling_text(in);
    }

    const InferencePattern pattern = InferencePattern::by_name(
        ctx.cfg.get_or(sec, "pattern", "ALL_LRS"), spec.rows, spec.cols);

    DriftParams drift;
    drift.alpha = ctx.cfg.get_double_or(sec, "alpha", 0.0);
    drift.e_a = ctx.cfg.get_double_or(sec, "e_a", drift.e_a);
    drift.beta = ctx.cfg.get_double_or(sec, "beta", drift.beta);
    drift.v_ref = ctx.cfg.get_double_or(sec, "v_ref", drift.v_ref);

    InferenceOptions opt;
    opt.v_read = ctx.cfg.get_double_or(sec, "v_read", opt.v_read);
    opt.pulse_width = ctx.cfg.get_double_or(sec, "pulse_width", opt.pulse_width);
    opt.n_cycles = ctx.cfg.get_int_or(sec, "cycles", 10000);
    opt.runaway_T = ctx.cfg.get_double_or(sec, "runaway_T", opt.runaway_T);
    opt.log_every = ctx.cfg.get_int_or(sec, "log_every", opt.log_every);

    const InferenceTrace trace = run_inference(pattern, net, drift, opt);
    {
        std::ostringstream csv;
        write_trace_csv(csv, trace, spec.rows, spec.cols);
        write_text(ctx.out / "inference_trace.csv", csv.str());
    }
    std::ostringstream sum;
    sum << "cycles = " << (trace.rows.empty() ? 0 : trace.rows.back().cycle) << "\n";
    sum << "runaway = " << (trace.runaway ? "true" : "false") << "\n";
    sum << "reference_column = " << (trace.reference_column + 1) << "\n";
    if (!trace.rows.empty())
        for (std::size_t j = 0; j < trace.rows.back().accuracy.size(); ++j)
            sum << "final_accuracy_col" << (j + 1) << " = "
                << format_full(trace.rows.back().accuracy[j]) << "\n";
    write_text(ctx.out / "summary.txt", sum.str());
    std::cout << "final_accuracy " << format_full(trace.final_accuracy()) << "\n";

    if (get_bool(ctx.cfg, "output", "gnuplot", false))
        write_text(ctx.out / "inference.gp",
                   "set datafile separator ','\nset logscale x\n"
                   "set xlabel 'cycle'\nset ylabel 'accuracy [%]'\n"
                   "plot 'inference_trace.csv' using 1:($2==2?$5:1/0) with linespoints"
                   " title 'column 2'\n");

    if (trace.runaway) {
        std::cerr << "thermal runaway at cycle " << trace.rows.back().cycle << "\n";
        return kExitRunaway;
    }
    return 0;
}

// ---- sweep-spacing ----

int cmd_sweep_spacing(const RunContext& ctx) {
    const CrossbarSpec spec = ctx.spec();
    const std::string sec = "sweep_spacing";
    const std::vector<double> spacings =
        parse_length_list(ctx.cfg.get_or(sec, "spacings", "80nm, 160nm, 400nm"));
    const double power = ctx.cfg.get_double_or(sec, "power", 2.45e-6);

    const auto table =
        sweep_spacing(spec, ctx.mesh(), spacings, power, ctx.opts.tol, ctx.opts.jobs);
    std::ostringstream csv;
    csv << "sp_nm,tc_nearest,max_dT_K\n";
    for (const auto& row : table)
        csv << format_full(row.sp * 1e9) << "," << format_full(row.tc_nearest) << ","
            << format_full(row.max_dT) << "\n";
    write_text(ctx.out / "sweep.csv", csv.str());

    if (get_bool(ctx.cfg, "output", "gnuplot", false))
        write_text(ctx.out / "sweep.gp",
                   "set datafile separator ','\n"
                   "set xlabel 'spacing [nm]'\nset ylabel 'nearest-neighbour coupling'\n"
                   "plot 'sweep.csv' using 1:2 with linespoints title 'TC'\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"electro-thermal simulation toolkit for passive RRAM crossbar arrays"};
    app.require_subcommand(1);

    GlobalOpts opts;
    app.add_option("--config", opts.config_path, "configuration file")->required();
    app.add_option("--out", opts.out_dir, "output directory");
    app.add_option("--jobs", opts.jobs, "worker threads for independent solves");
    app.add_flag("--quick", opts.quick, "halve mesh resolution for CI-scale runs");
    app.add_option("--tol", opts.tol, "iterative solver tolerance");

    auto* c_solve = app.add_subcommand("solve-field", "field solves with dumps and probe traces");
    auto* c_extract = app.add_subcommand("extract", "R_th sweep and coupling-matrix extraction");
    auto* c_netlist = app.add_subcommand("emit-netlist", "emit the compact-network subcircuit");
    auto* c_infer = app.add_subcommand("infer", "read-disturb inference experiment");
    auto* c_sweep = app.add_subcommand("sweep-spacing", "coupling vs cell-spacing sweep");
    for (auto* sub : {c_solve, c_extract, c_netlist, c_infer, c_sweep}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        const RunContext ctx = load_context(opts);
        if (c_solve->parsed()) return cmd_solve_field(ctx);
        if (c_extract->parsed()) return cmd_extract(ctx);
        if (c_netlist->parsed()) return cmd_emit_netlist(ctx);
        if (c_infer->parsed()) return cmd_infer(ctx);
        if (c_sweep->parsed()) return cmd_sweep_spacing(ctx);
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ArgumentError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ResourceError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    return 0;
}
