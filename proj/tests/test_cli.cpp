#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "phc/commands.hpp"
#include "phc/config.hpp"
#include "phc/errors.hpp"
#include "phc/sweep.hpp"

using namespace phc;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    args.insert(args.begin(), "phcontrast");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

// Runs the installed binary through the shell; stdout captured, stderr dropped.
Run binary(const std::string& args) {
    const char* exe = std::getenv("PHCONTRAST");
    REQUIRE(exe != nullptr);
    const std::string cmd = std::string(exe) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out, {}};
}

double header_value(const std::string& text, const std::string& key) {
    const std::string tag = "# " + key + " = ";
    const auto pos = text.find(tag);
    REQUIRE_MESSAGE(pos != std::string::npos, key);
    return std::stod(text.substr(pos + tag.size()));
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

fs::path temp_file(const std::string& name, const std::string& content) {
    const auto p = fs::temp_directory_path() / ("phc_test_" + name);
    std::ofstream(p) << content;
    return p;
}

}  // namespace

TEST_CASE("defaults give a contrast near unity at 100 nm") {
    const auto r = cli({"contrast"});
    REQUIRE(r.code == 0);
    const double c = header_value(r.out, "contrast");
    CHECK(c >= 0.9);
    CHECK(c <= 1.0);
    CHECK(header_value(r.out, "minus_log_C") >= 0.0);
    CHECK(r.out.rfind("# phcontrast ", 0) == 0);
    CHECK(r.out.find("# seed = 1\n") != std::string::npos);
    CHECK(r.out.find("# regime = exact-1d") != std::string::npos);
    CHECK(r.out.find("# estimate = ") != std::string::npos);
}

TEST_CASE("zero acceleration") {
    const auto r = cli({"contrast", "--a-max", "0"});
    REQUIRE(r.code == 0);
    CHECK(header_value(r.out, "contrast") == 1.0);
    CHECK(header_value(r.out, "minus_log_C") == 0.0);
}

TEST_CASE("macroscopic metre-sized object") {
    const auto r = cli({"contrast", "--regime", "macro", "--length-nm", "1e9"});
    REQUIRE(r.code == 0);
    CHECK(header_value(r.out, "minus_log_C") > 1e6);
    CHECK(r.out.find("# note: contrast lost: coherent splitting is bounded by lambda_ph") != std::string::npos);
    CHECK(r.out.find("window_normalization") != std::string::npos);
}

TEST_CASE("centre-of-mass contrast is reported when shifts are given") {
    const auto r = cli({"contrast", "--set", "t_cm=1e-6", "--set", "com_sigma_z=1e-9", "--set", "com_delta_z=1e-15"});
    REQUIRE(r.code == 0);
    const double ccm = header_value(r.out, "contrast_com");
    CHECK(ccm > 0.0);
    CHECK(ccm < 1.0);
    CHECK(header_value(r.out, "contrast_total") == doctest::Approx(ccm * header_value(r.out, "contrast")));
    CHECK(cli({"contrast", "--set", "com_sigma_z=1e-9"}).code == kExitInvalidConfig);
}

TEST_CASE("config layering") {
    const auto cfg = temp_file("layer.cfg", "# comment\n\nlength = 5e-8\na_max = 7   # trailing\nprotocol = 2\n");
    const auto r = cli({"contrast", "--config", cfg.string(), "--a-max", "9"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("# length = 5e-8\n") != std::string::npos);
    CHECK(r.out.find("# a_max = 9\n") != std::string::npos);
    CHECK(r.out.find("# protocol = 2\n") != std::string::npos);
    CHECK(r.out.find("# param.protocol = bicosine") != std::string::npos);

    ConfigLayers layers;
    std::istringstream in("a_max = 3\nseed = 17\n");
    layers.load_stream(in, "mem");
    CHECK(layers.entries().at("a_max").line == 1);
    CHECK(layers.entries().at("seed").source == "mem");
    layers.set("a_max", "4");
    const auto c = layers.resolve();
    CHECK(c.a_max == 4.0);
    CHECK(c.seed == 17);
    CHECK(ConfigLayers::keys().front() == "material");
}

TEST_CASE("config errors are line-anchored") {
    const auto unknown = temp_file("unknown.cfg", "a_max = 100\nbogus = 3\n");
    auto r = cli({"contrast", "--config", unknown.string()});
    CHECK(r.code == kExitInvalidConfig);
    CHECK(r.err.find("line 2") != std::string::npos);
    CHECK(r.err.find("bogus") != std::string::npos);

    const auto bad = temp_file("badvalue.cfg", "\nsites = -4\n");
    r = cli({"contrast", "--config", bad.string()});
    CHECK(r.code == kExitInvalidConfig);
    CHECK(r.err.find("line 2") != std::string::npos);

    const auto noeq = temp_file("noeq.cfg", "a_max 100\n");
    r = cli({"contrast", "--config", noeq.string()});
    CHECK(r.code == kExitInvalidConfig);
    CHECK(r.err.find("line 1") != std::string::npos);

    CHECK(cli({"contrast", "--config", "/nonexistent/phc.cfg"}).code == kExitInvalidConfig);
    CHECK(cli({"contrast", "--set", "nokey"}).code == kExitInvalidConfig);
    CHECK(cli({"contrast", "--set", "unknown_key=1"}).code == kExitInvalidConfig);
    CHECK(cli({"contrast", "--regime", "4d"}).code == kExitInvalidConfig);
    CHECK(cli({"contrast", "--protocol", "7"}).code == kExitInvalidConfig);
    CHECK(cli({"sweep", "--set", "sweep_min=2e-7", "--set", "sweep_max=1e-8"}).code == kExitInvalidConfig);
    CHECK(cli({"sweep", "--set", "sweep_count=1"}).code == kExitInvalidConfig);
    CHECK(cli({"contrast", "--no-such-flag"}).code == kExitInvalidConfig);
    CHECK(cli({}).code == kExitInvalidConfig);
    CHECK(cli({"--help"}).code == kExitOk);
}

TEST_CASE("material files") {
    const auto mat = temp_file("mat.cfg",
                               "name = silicon\nlattice_constant = 5.43e-10\natom_mass = 4.66e-26\n"
                               "atoms_per_cell = 8\nsound_speed = 8433\ndensity = 2329\n");
    const auto r = cli({"contrast", "--set", "material_file=" + mat.string()});
    REQUIRE(r.code == 0);
    const auto m = load_material(mat.string());
    CHECK(m.name == "silicon");
    CHECK(m.sound_speed == 8433.0);
    std::istringstream bad("density = -1\n");
    CHECK_THROWS(read_material(bad));
}

TEST_CASE("custom profile from file") {
    const auto prof = temp_file("profile.txt", "# t a\n-3e-5 0\n-1.5e-5 100\n0 -100\n1.5e-5 100\n3e-5 0\n");
    const auto r = cli({"contrast", "--protocol", "custom", "--set", "profile=" + prof.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("# spectrum_path = numeric") != std::string::npos);
    const auto bad = temp_file("badprofile.txt", "-3e-5 0\n0 1\n-1e-5 2\n3e-5 0\n");
    const auto b = cli({"contrast", "--protocol", "custom", "--set", "profile=" + bad.string()});
    CHECK(b.code == kExitInvalidConfig);
    CHECK(b.err.find("line 3") != std::string::npos);
}

TEST_CASE("unwritable output") {
    CHECK(cli({"contrast", "--out", "/nonexistent/dir/out.csv"}).code == kExitUnwritable);
}

TEST_CASE("modes table for the 17-site chain") {
    const auto r = cli({"modes", "--sites", "17", "--spin-site", "7", "--set", "t_half_in_sound_times=0.7",
                        "--set", "t_ph_in_quanta=8.1", "--a-max", "1e15"});
    REQUIRE(r.code == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 17);
    CHECK(rows[0] == std::vector<std::string>{"k", "omega_ratio", "envelope", "term", "quantum"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(std::stoul(rows[i][0]) == i);
        const double ratio = std::stod(rows[i][1]);
        CHECK(std::stod(rows[i][3]) <= std::stod(rows[i][2]) * (1 + 1e-12));
        CHECK(rows[i][4] == (ratio >= 8.1 ? "1" : "0"));
    }
    CHECK(cli({"modes", "--regime", "3d"}).code == kExitInvalidConfig);
}

TEST_CASE("bound command") {
    const auto r = cli({"bound", "--t-ph", "300"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("bound = 1.875781") != std::string::npos);
}

TEST_CASE("gradient sets the acceleration") {
    const auto r = cli({"contrast", "--gradient", "1e6", "--regime", "3d", "--length-nm", "50"});
    REQUIRE(r.code == 0);
    const double M = 3.5e3 * 3.14159265358979 * std::pow(50e-9, 3) / 6;
    CHECK(header_value(r.out, "param.a_max") == doctest::Approx(9.2740100783e-24 * 1e6 / M).epsilon(1e-12));
}

TEST_CASE("sweeps are deterministic across thread counts") {
    ConfigLayers layers;
    layers.set("sweep_count", "9");
    layers.set("regime", "3d");
    const auto cfg = layers.resolve();
    const auto a = run_sweep(cfg, 1), b = run_sweep(cfg, 4);
    std::ostringstream sa, sb;
    write_sweep_csv(sa, cfg, a);
    write_sweep_csv(sb, cfg, b);
    CHECK(sa.str() == sb.str());
}

TEST_CASE("fixed fractional splitting derivations") {
    ConfigLayers layers;
    layers.set("regime", "3d");
    layers.set("constraint", "fixed-fractional-splitting");
    layers.set("sweep_min", "1e-8");
    layers.set("sweep_max", "1e-4");
    layers.set("sweep_count", "30");
    const auto cfg = layers.resolve();
    const auto res = run_sweep(cfg, 1);
    bool any_capped = false, any_free = false;
    for (const auto& r : res.rows) {
        const double dz = 0.1 * r.length;
        const double b = r.mass * r.a_max / cfg.magnetic_moment;
        CHECK(r.b_max == doctest::Approx(b).epsilon(1e-12));
        CHECK(r.b_max <= cfg.gradient_cap * (1 + 1e-12));
        CHECK(r.t_half <= cfg.t_half_cap * (1 + 1e-12));
        if (!r.capped) {
            CHECK(r.t_half == doctest::Approx(dz / 1e-3).epsilon(1e-12));
            CHECK(r.a_max == doctest::Approx(dz / (r.t_half * r.t_half)).epsilon(1e-12));
            any_free = true;
        } else {
            any_capped = true;
        }
    }
    CHECK(any_capped);
    CHECK(any_free);
}

TEST_CASE("1D protocol ordering at fixed size") {
    for (double L : {20e-9, 60e-9, 150e-9}) {
        ConfigLayers layers;
        layers.set("spin_site", "end");
        const auto row = evaluate_point(layers.resolve(), L);
        CHECK(row.minus_log_C[2] < row.minus_log_C[1]);
        CHECK(row.minus_log_C[1] < row.minus_log_C[0]);
    }
}

TEST_CASE("sweep CSV layout") {
    const auto r = cli({"sweep", "--set", "sweep_count=5", "--set", "sweep_variable=T_ph", "--set", "sweep_min=1",
                        "--set", "sweep_max=300", "--set", "sweep_scale=linear"});
    REQUIRE(r.code == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 6);
    CHECK(rows[0][0] == "T_ph");
    CHECK(rows[0].size() == 16);
    CHECK(rows[0][15] == "capped");
    CHECK(std::stod(rows[1][0]) == 1.0);
    CHECK(std::stod(rows[5][0]) == 300.0);
    CHECK(std::stod(rows[3][7]) == doctest::Approx(150.5));
    CHECK(r.out.find("# fit protocol=0") != std::string::npos);
}

TEST_CASE("validate on a small chain") {
    const auto ok = cli({"validate", "--set", "oracle_sites=8"});
    CHECK(ok.code == kExitOk);
    CHECK(ok.out.find("# overall = PASS") != std::string::npos);
    CHECK(ok.out.find("check,value,tolerance,result\n") != std::string::npos);
    const auto coarse = cli({"validate", "--set", "oracle_sites=8", "--set", "oracle_dt_fraction=10"});
    CHECK(coarse.code == kExitInvalidConfig);
    CHECK(coarse.err.find("stability bound") != std::string::npos);
    const auto sloppy = cli({"validate", "--set", "oracle_sites=8", "--set", "oracle_dt_fraction=0.9",
                             "--set", "oracle_dd_dt_fraction=0.9"});
    CHECK(sloppy.code == kExitValidationFailed);
    CHECK(sloppy.out.find("FAIL") != std::string::npos);
    CHECK(cli({"validate", "--set", "oracle_sites=600"}).code == kExitInvalidConfig);
}

TEST_CASE("binary: exit codes and byte-identical reruns") {
    const auto dir = fs::temp_directory_path();
    const auto a = (dir / "phc_run_a.csv").string(), b = (dir / "phc_run_b.csv").string();
    const std::string args = "sweep --regime 3d --set sweep_count=6 --seed 9 --out ";
    CHECK(binary(args + a).code == 0);
    CHECK(binary(args + b).code == 0);
    auto slurp = [](const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), {});
    };
    CHECK(!slurp(a).empty());
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a).find("# seed = 9\n") != std::string::npos);

    CHECK(binary("contrast").code == 0);
    CHECK(binary("contrast --set bogus=1").code == 2);
    CHECK(binary("contrast --out /nonexistent/dir/x.csv").code == 3);
    CHECK(binary("validate --set oracle_sites=8 --set oracle_dt_fraction=0.9 --set oracle_dd_dt_fraction=0.9").code == 1);
    CHECK(binary("--version").out.find("0.1.0") != std::string::npos);
    const auto v1 = binary("validate --set oracle_sites=8 --seed 3");
    const auto v2 = binary("validate --set oracle_sites=8 --seed 3");
    CHECK(v1.code == 0);
    CHECK(v1.out == v2.out);
}
