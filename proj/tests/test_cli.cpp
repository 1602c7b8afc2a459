#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "crosstherm_cli_test";

int run(const std::string& args) {
    const std::string cmd = std::string(CROSSTHERM_CLI_PATH) + " " + args + " > " +
                            (kWork / "stdout.txt").string() + " 2> " +
                            (kWork / "stderr.txt").string();
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

// a cheap model: tiny thermal margin, coarse mesh
std::string base_config(int rows, int cols, const std::string& sp, const std::string& extra) {
    std::ostringstream cfg;
    cfg << "[crossbar]\nrows = " << rows << "\ncols = " << cols << "\nsp = " << sp
        << "\nth_margin = 200 nm\n"
        << "[mesh]\nh_fine = 5 nm\nh_max = 100 nm\n"
        << extra;
    return cfg.str();
}

}  // namespace

TEST_CASE("solve-field writes dumps and a warm probe") {
    fs::create_directories(kWork);
    const fs::path cfg = kWork / "solve.cfg";
    write(cfg, base_config(1, 1, "0 nm",
                           "[solve_field]\nmode = all_rows\nv_read = 0.3\n"));
    const fs::path out = kWork / "solve_out";
    REQUIRE(run("solve-field --config " + cfg.string() + " --out " + out.string()) == 0);
    for (const char* f : {"potential.txt", "power_density.txt", "temperature.txt",
                          "probes.csv", "summary.txt"})
        CHECK(fs::exists(out / f));
    const std::string probes = slurp(out / "probes.csv");
    CHECK(probes.rfind("time_s,probe_name,T_K\n", 0) == 0);
    // steady probe above ambient
    const auto comma = probes.find_last_of(',');
    CHECK(std::stod(probes.substr(comma + 1)) > 300.0);

    // idempotent: byte-identical on rerun
    const std::string before = slurp(out / "temperature.txt");
    REQUIRE(run("solve-field --config " + cfg.string() + " --out " + out.string()) == 0);
    CHECK(slurp(out / "temperature.txt") == before);
}

TEST_CASE("zero-bias solve leaves the array at ambient") {
    fs::create_directories(kWork);
    const fs::path cfg = kWork / "cold.cfg";
    write(cfg, base_config(1, 1, "0 nm",
                           "[solve_field]\nmode = all_rows\nv_read = 0\n"));
    const fs::path out = kWork / "cold_out";
    REQUIRE(run("solve-field --config " + cfg.string() + " --out " + out.string()) == 0);
    std::ifstream in(out / "temperature.txt");
    std::string line;
    bool in_values = false;
    while (std::getline(in, line)) {
        if (!in_values) {
            in_values = line.rfind("values =", 0) == 0;
            continue;
        }
        CHECK(line == "300");
    }
    CHECK(in_values);
}

TEST_CASE("transient probes carry a time axis") {
    fs::create_directories(kWork);
    const fs::path cfg = kWork / "tr.cfg";
    write(cfg, base_config(1, 1, "0 nm",
                           "[solve_field]\nmode = all_rows\nv_read = 0.3\n"
                           "transient = true\nt_end = 2e-6\n"));
    const fs::path out = kWork / "tr_out";
    REQUIRE(run("solve-field --config " + cfg.string() + " --out " + out.string()) == 0);
    const std::string probes = slurp(out / "probes.csv");
    CHECK(probes.find("\n0,cell_1_1,300\n") != std::string::npos);
    CHECK(slurp(kWork / "stdout.txt").find("t_steady_s") != std::string::npos);
}

TEST_CASE("extract emits coupling and rth artifacts") {
    fs::create_directories(kWork);
    const fs::path cfg = kWork / "extract.cfg";
    write(cfg, base_config(1, 2, "160 nm", "[extract]\npower = 1e-6\n"));
    const fs::path out = kWork / "extract_out";
    REQUIRE(run("extract --config " + cfg.string() + " --out " + out.string() + " --jobs 2") ==
            0);
    const std::string coupling = slurp(out / "coupling.txt");
    CHECK(coupling.find("dim = 2") != std::string::npos);
    CHECK(slurp(kWork / "stdout.txt").find("asymmetry") != std::string::npos);
    const std::string csv = slurp(out / "coupling.csv");
    CHECK(csv.rfind("cell,(1,1),(1,2),R_th_K_per_W\n", 0) == 0);
    CHECK(fs::exists(out / "rth.csv"));
}

TEST_CASE("single-cell extract produces the trivial matrix") {
    fs::create_directories(kWork);
    const fs::path cfg = kWork / "single.cfg";
    write(cfg, base_config(1, 1, "0 nm", "[extract]\npower = 1e-6\nrth_sweep = false\n"));
    const fs::path out = kWork / "single_out";
    REQUIRE(run("extract --config " + cfg.string() + " --out " + out.string()) == 0);
    const std::string coupling = slurp(out / "coupling.txt");
    CHECK(coupling.find("dim = 1") != std::string::npos);
    CHECK(coupling.find("row0 = 1\n") != std::string::npos);
}

TEST_CASE("emit-netlist consumes a coupling file deterministically") {
    fs::create_directories(kWork);
    const fs::path coupling = kWork / "pair.txt";
    write(coupling,
          "# crosstherm coupling matrix v1\ndim = 2\nasymmetry = 0\n"
          "r_th = 1000000 2000000\nrow0 = 1 0.5\nrow1 = 0.5 1\n");
    const fs::path cfg = kWork / "netlist.cfg";
    write(cfg, base_config(1, 2, "160 nm",
                           "[netlist]\ncoupling = " + coupling.string() + "\nname = pair\n"));
    const fs::path out = kWork / "netlist_out";
    REQUIRE(run("emit-netlist --config " + cfg.string() + " --out " + out.string()) == 0);
    const std::string first = slurp(out / "netlist.cir");
    CHECK(first.find(".subckt pair amb") != std::string::npos);
    CHECK(first.find("Ec_1_1_1_2") != std::string::npos);
    REQUIRE(run("emit-netlist --config " + cfg.string() + " --out " + out.string()) == 0);
    CHECK(slurp(out / "netlist.cir") == first);

    // malformed matrix file: config error exit code
    write(coupling, "dim = 2\nr_th = 1\nrow5 = 1 1\n");
    CHECK(run("emit-netlist --config " + cfg.string() + " --out " + out.string()) == 2);
}

TEST_CASE("infer: trivial run, summary, and the runaway exit code") {
    fs::create_directories(kWork);
    const fs::path cfg = kWork / "infer.cfg";
    write(cfg, base_config(2, 2, "160 nm",
                           "[inference]\npattern = ALL_LRS\ncoupling = identity\n"
                           "r_th = 6e6\ncycles = 1\nalpha = 0\n"));
    const fs::path out = kWork / "infer_out";
    REQUIRE(run("infer --config " + cfg.string() + " --out " + out.string()) == 0);
    const std::string summary = slurp(out / "summary.txt");
    CHECK(summary.find("runaway = false") != std::string::npos);
    CHECK(summary.find("final_accuracy_col2 = 100") != std::string::npos);
    CHECK(fs::exists(out / "inference_trace.csv"));

    const fs::path hot = kWork / "runaway.cfg";
    write(hot, base_config(2, 2, "160 nm",
                           "[inference]\npattern = ALL_LRS\ncoupling = identity\n"
                           "r_th = 1e12\ncycles = 10\nalpha = 0\n"));
    CHECK(run("infer --config " + hot.string() + " --out " + out.string()) == 4);
    CHECK(slurp(out / "summary.txt").find("runaway = true") != std::string::npos);
}

TEST_CASE("sweep-spacing reports the monotone coupling trend") {
    fs::create_directories(kWork);
    const fs::path cfg = kWork / "sweep.cfg";
    write(cfg, base_config(1, 2, "80 nm",
                           "[sweep_spacing]\nspacings = 80nm, 240nm\npower = 1e-6\n"));
    const fs::path out = kWork / "sweep_out";
    REQUIRE(run("sweep-spacing --config " + cfg.string() + " --out " + out.string() +
                " --jobs 2") == 0);
    std::ifstream in(out / "sweep.csv");
    std::string header, row80, row240;
    std::getline(in, header);
    CHECK(header == "sp_nm,tc_nearest,max_dT_K");
    std::getline(in, row80);
    std::getline(in, row240);
    const double tc80 = std::stod(row80.substr(row80.find(',') + 1));
    const double tc240 = std::stod(row240.substr(row240.find(',') + 1));
    CHECK(tc80 > tc240);
}

TEST_CASE("config errors map to their own exit code") {
    fs::create_directories(kWork);
    CHECK(run("solve-field --config " + (kWork / "missing.cfg").string()) == 2);
    const fs::path bad = kWork / "bad.cfg";
    write(bad, "[crossbar\nrows = 3\n");
    CHECK(run("solve-field --config " + bad.string()) == 2);
    const fs::path invalid = kWork / "invalid.cfg";
    write(invalid, base_config(0, 1, "0 nm", ""));  // rows = 0
    CHECK(run("solve-field --config " + invalid.string()) == 2);
}

TEST_CASE("--quick coarsens the mesh") {
    fs::create_directories(kWork);
    const fs::path cfg = kWork / "quick.cfg";
    write(cfg, base_config(1, 1, "0 nm", "[solve_field]\nmode = all_rows\nv_read = 0.3\n"));
    const fs::path out = kWork / "quick_out";
    REQUIRE(run("solve-field --config " + cfg.string() + " --out " + out.string() +
                " --quick") == 0);
    const std::string quick_summary = slurp(out / "summary.txt");
    const fs::path out_full = kWork / "full_out";
    REQUIRE(run("solve-field --config " + cfg.string() + " --out " + out_full.string()) == 0);
    auto voxels = [](const std::string& s) {
        return std::stol(s.substr(s.find("voxels = ") + 9));
    };
    CHECK(voxels(quick_summary) < voxels(slurp(out_full / "summary.txt")));
}
