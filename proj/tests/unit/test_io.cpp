#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "irs/errors.hpp"
#include "irs/io.hpp"
#include "json.hpp"

using namespace irs;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("irs_io_" + std::to_string(rd()) + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    args.insert(args.begin(), "irsbf");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = io::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

json load(const std::string& path) { return json::parse(slurp(path)); }

std::vector<std::vector<std::string>> csv_rows(const std::string& path) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(slurp(path));
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        rows.push_back(cells);
    }
    return rows;
}

const std::vector<std::string> kExample = {"--size", "3x3", "--incident=-45,215", "--target=-30,35"};

std::vector<std::string> with(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

} // namespace

TEST_CASE("solve reports the worked 3x3 example") {
    TempDir dir;
    auto opa = cli(with({"solve", "--solver", "opa", "--out", dir / "opa"}, kExample));
    REQUIRE(opa.code == io::kExitOk);
    auto thr = cli(with({"solve", "--solver", "threshold", "--out", dir / "thr"}, kExample));
    REQUIRE(thr.code == io::kExitOk);
    const auto a = load(dir / "opa/summary.json");
    const auto b = load(dir / "thr/summary.json");
    CHECK(std::abs(a["metrics"][0]["abs_g2_power_db"].get<double>() + 2.95) <= 0.02);
    CHECK(std::abs(b["metrics"][0]["abs_g2_power_db"].get<double>() + 3.86) <= 0.02);
    CHECK(a["runtime_s"].get<double>() >= 0.0);
    CHECK(fs::exists(dir / "opa/weights.json"));
}

TEST_CASE("brute force through the CLI matches opa on 5x5") {
    TempDir dir;
    const std::vector<std::string> s = {"--size", "5x5", "--incident=-45,215", "--target=-30,35"};
    REQUIRE(cli(with({"solve", "--solver", "brute", "--cap", "33554432", "--out", dir / "b"}, s)).code == 0);
    REQUIRE(cli(with({"solve", "--solver", "opa", "--out", dir / "o"}, s)).code == 0);
    CHECK(load(dir / "b/summary.json")["objective_linear"].get<double>() ==
          doctest::Approx(load(dir / "o/summary.json")["objective_linear"].get<double>()).epsilon(1e-12));
}

TEST_CASE("exit codes and diagnostics") {
    TempDir dir;
    auto r = cli({"solve", "--size", "3", "--target", "0,0", "--out", dir / "x"});
    CHECK(r.code == io::kExitConfig);
    CHECK(r.err.find("lattice.size") != std::string::npos);

    r = cli({"solve", "--size", "3x3", "--target", "0,0", "--bits", "9", "--out", dir / "x"});
    CHECK(r.code == io::kExitConfig);
    CHECK(r.err.find("alphabet.bits") != std::string::npos);

    r = cli({"solve", "--size", "3x3", "--out", dir / "x"});
    CHECK(r.code == io::kExitConfig);
    CHECK(r.err.find("targets") != std::string::npos);

    r = cli({"solve", "--size", "3x3", "--target", "0,0", "--solver", "fancy", "--out", dir / "x"});
    CHECK(r.code == io::kExitConfig);
    CHECK(r.err.find("solver") != std::string::npos);

    r = cli({"solve", "--size", "3x3", "--target", "0,0", "--bits", "2", "--solver", "opa", "--out", dir / "x"});
    CHECK(r.code == io::kExitConfig);

    r = cli({"solve", "--size", "3x3", "--target", "0,0", "--unknown-flag"});
    CHECK(r.code == io::kExitConfig);

    r = cli({"oracle", "--size", "6x5", "--target", "10,0", "--out", dir / "x"});
    CHECK(r.code == io::kExitCostCap);
    CHECK(r.err.find("16777216") != std::string::npos);

    r = cli({"gl-map", "--size", "30x30", "--incident=-45,0", "--simulate", "--out", dir / "x"});
    CHECK(r.code == io::kExitCostCap);
    CHECK(r.err.find("element evaluations") != std::string::npos);

    CHECK(cli({"--help"}).code == io::kExitOk);
}

TEST_CASE("config file is fail-closed and flags win") {
    TempDir dir;
    {
        std::ofstream f(dir / "cfg.json");
        f << R"({"lattice": {"kind": "rect", "size": "3x3"}, "incident": [-45, 215],
                 "targets": [[-30, 35]], "solver": "threshold",
                 "output": {"dir": ")" << dir / "from_file" << R"("}})";
    }
    REQUIRE(cli({"solve", "--config", dir / "cfg.json"}).code == 0);
    CHECK(load(dir / "from_file/summary.json")["solver"] == "threshold");
    REQUIRE(cli({"solve", "--config", dir / "cfg.json", "--solver", "opa", "--out", dir / "flag"}).code == 0);
    CHECK(load(dir / "flag/summary.json")["solver"] == "opa");

    {
        std::ofstream f(dir / "bad.json");
        f << R"({"lattice": {"kind": "rect", "sise": "3x3"}})";
    }
    const auto r = cli({"solve", "--config", dir / "bad.json"});
    CHECK(r.code == io::kExitConfig);
    CHECK(r.err.find("lattice.sise") != std::string::npos);

    CHECK_THROWS_AS(io::config_from_json(R"({"grid": {"stepp": 1}})"), ConfigError);
    CHECK_THROWS_AS(io::config_from_json(R"({"targets": [[1, 2, 3]]})"), ConfigError);
    const auto cfg = io::config_from_json(R"({"lattice": {"kind": "tri", "m": 4, "n": 5}, "alphabet": {"bits": 2}})");
    CHECK(cfg.kind == LatticeKind::Triangular);
    CHECK(cfg.m == 4);
    CHECK(cfg.n == 5);
    CHECK(cfg.bits == 2);
}

TEST_CASE("weights round trip reproduces the metrics record") {
    TempDir dir;
    REQUIRE(cli({"solve", "--lattice", "tri", "--size", "6x5", "--bits", "2", "--incident=20,100",
                 "--target=-35,40", "--out", dir / "s"})
                .code == 0);
    REQUIRE(cli({"evaluate", "--weights", dir / "s/weights.json", "--incident=20,100", "--target=-35,40",
                 "--out", dir / "e"})
                .code == 0);
    CHECK(load(dir / "s/summary.json")["metrics"] == load(dir / "e/summary.json")["metrics"]);

    const auto file = io::weights_from_json(slurp(dir / "s/weights.json"));
    CHECK(file.lattice.kind() == LatticeKind::Triangular);
    CHECK(file.weights.size() == file.lattice.size());
    CHECK_THROWS_AS(io::weights_from_json(R"({"lattice": {}, "extra": 1})"), ConfigError);
}

TEST_CASE("alphabet files feed the matching solver") {
    TempDir dir;
    {
        std::ofstream f(dir / "three.json");
        f << R"({"members": [[1, 0], [0, 1], [-1, 0]]})";
    }
    const std::vector<std::string> s = {"--size", "3x2", "--incident=10,0", "--target=-40,70"};
    REQUIRE(cli(with({"solve", "--alphabet", dir / "three.json", "--out", dir / "k"}, s)).code == 0);
    REQUIRE(cli(with({"oracle", "--alphabet", dir / "three.json", "--out", dir / "o"}, s)).code == 0);
    CHECK(load(dir / "k/summary.json")["solver"] == "kopa");
    CHECK(load(dir / "o/summary.json")["agree"] == true);
    CHECK(cli(with({"solve", "--alphabet", dir / "three.json", "--bits", "1"}, s)).code == io::kExitConfig);
}

TEST_CASE("pattern output shape and the mirrored peak") {
    TempDir dir;
    REQUIRE(cli({"pattern", "--size", "30x30", "--incident=-45,180", "--target=-30,0", "--grid", "1",
                 "--out", dir / "p"})
                .code == 0);
    const auto rows = csv_rows(dir / "p/pattern.csv");
    CHECK(rows.front() == std::vector<std::string>{"theta_deg", "phi_deg", "abs_g_linear", "abs_g_field_db",
                                                   "abs_g_field_db_normalized"});
    CHECK(rows.size() == 1 + 91 * 360);
    double top = -1e300;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i][4] != "-inf") top = std::max(top, std::stod(rows[i][4]));
    }
    CHECK(top == 0.0);

    const auto s = load(dir / "p/summary.json");
    REQUIRE(s["peaks"].size() >= 2);
    CHECK(s["peaks"][0]["field_db_normalized"].get<double>() > -0.5);
    CHECK(s["peaks"][1]["field_db_normalized"].get<double>() > -0.5);
    // One of the two is near the -5 deg mirror of the beam.
    const double t0 = s["peaks"][0]["direction_deg"][0].get<double>();
    const double t1 = s["peaks"][1]["direction_deg"][0].get<double>();
    CHECK(std::min(std::abs(t0 - 5.0), std::abs(t1 - 5.0)) < 1.5);
    CHECK(s["sll_field_db"].get<double>() > -0.5);
    CHECK(s["beamwidth_3db_deg"]["theta_cut"].get<double>() > 0.0);
}

TEST_CASE("gl-map theory mask") {
    TempDir dir;
    REQUIRE(cli({"gl-map", "--lattice", "tri", "--size", "10x10", "--incident=-45,0", "--grid", "1",
                 "--out", dir / "g"})
                .code == 0);
    const auto rows = csv_rows(dir / "g/glmap_theory.csv");
    REQUIRE(rows.size() > 1);
    const Direction base = Direction::from_degrees(-45, 0);
    std::size_t checked = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double t0 = std::stod(rows[i][0]);
        const double p0 = std::stod(rows[i][1]);
        const bool lobe = rows[i][2] == "1";
        const auto pred = predict_grating_lobe_tri(Direction::from_degrees(base.theta_deg(), p0 + 180.0),
                                                   Direction::from_degrees(t0, p0), 0.5);
        CHECK(lobe == pred.exists);
        if (p0 == 0.0 && t0 >= 0.0 && t0 < 24.5) CHECK_FALSE(lobe);
        if (p0 == 0.0 && t0 >= 25.0 && t0 < 45.0) CHECK(lobe);
        ++checked;
    }
    CHECK(checked == 181 * 360);
}

TEST_CASE("gl-map simulation on a small sweep") {
    TempDir dir;
    REQUIRE(cli({"gl-map", "--size", "8x8", "--incident=-45,0", "--simulate", "--grid", "30", "--sim-points", "41",
                 "--out", dir / "g"})
                .code == 0);
    const auto theory = csv_rows(dir / "g/glmap_theory.csv");
    const auto sim = csv_rows(dir / "g/glmap_sim.csv");
    REQUIRE(theory.size() == sim.size());
    CHECK(sim.front() == std::vector<std::string>{"theta0_deg", "phi0_deg", "sll_field_db"});
}

TEST_CASE("multibeam log and determinism") {
    TempDir dir;
    const std::vector<std::string> args = {"multibeam", "--size", "8x8", "--incident=60,210", "--target=0,30",
                                           "--target=-40,30", "--cophase-points", "10"};
    REQUIRE(cli(with(args, {"--out", dir / "a"})).code == 0);
    REQUIRE(cli(with(args, {"--out", dir / "b"})).code == 0);
    CHECK(slurp(dir / "a/weights.json") == slurp(dir / "b/weights.json"));
    CHECK(slurp(dir / "a/convergence.csv") == slurp(dir / "b/convergence.csv"));
    const auto rows = csv_rows(dir / "a/convergence.csv");
    REQUIRE(rows.size() > 10);
    CHECK(rows.front() == std::vector<std::string>{"seed", "k", "c_k", "d_k"});
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][2]) <= std::stod(rows[i][3]) + 1e-9);
    CHECK(cli({"multibeam", "--size", "8x8", "--target=0,30", "--out", dir / "c"}).code == io::kExitConfig);
}

TEST_CASE("prephase command") {
    TempDir dir;
    const std::vector<std::string> args = {"prephase", "--size", "12x12", "--incident=0,180", "--target=-45,0",
                                           "--kappa", "0.5", "--seed", "4"};
    REQUIRE(cli(with(args, {"--out", dir / "a"})).code == 0);
    REQUIRE(cli(with(args, {"--out", dir / "b"})).code == 0);
    CHECK(slurp(dir / "a/weights.json") == slurp(dir / "b/weights.json"));
    const auto s = load(dir / "a/summary.json");
    CHECK(s["rng_seed"] == 4);
    CHECK(s["elements_per_prephase"][1] == 72);

    // Replaying the written assignment gives the same weights.
    REQUIRE(cli({"prephase", "--size", "12x12", "--incident=0,180", "--target=-45,0", "--prephase",
                 dir / "a/prephase.json", "--out", dir / "c"})
                .code == 0);
    CHECK(slurp(dir / "a/weights.json") == slurp(dir / "c/weights.json"));
    CHECK(cli({"prephase", "--size", "12x12", "--target=-45,0", "--out", dir / "d"}).code == io::kExitConfig);
}
