#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "ferronematic/driver.hpp"
#include "ferronematic/io.hpp"

using namespace ferronematic;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("ferronematic_test_io_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

}  // namespace

TEST_CASE("snapshot round trip is exact") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-3, 3);
    const auto g = Grid2D<double>::make(7);
    auto s = State<double>::zeros(g);
    for (auto c : kAllComponents)
        for (int j = 0; j < 7; ++j)
            for (int i = 0; i < 7; ++i) s[c](i, j) = u(rng) * std::pow(10.0, int(u(rng) * 40));
    s.q.q11(3, 3) = -0.0;
    s.m.m3(1, 1) = 5e-324;

    const auto dir = scratch_dir("roundtrip");
    write_snapshot(s, g, 0.0123, dir / "snap.csv");
    const auto back = read_snapshot(dir / "snap.csv");
    CHECK(back.grid == g);
    CHECK(back.t == 0.0123);
    CHECK(back.state == s);
    CHECK(snapshot_text(back.state, back.grid, back.t) == slurp(dir / "snap.csv"));
    fs::remove_all(dir);
}

TEST_CASE("snapshot layout") {
    const auto g = Grid2D<double>::make(3);
    const auto text = snapshot_text(State<double>::zeros(g), g, 0);
    const auto lines = lines_of(text);
    REQUIRE(lines.size() == 2 + 9);
    CHECK(lines[1] == "x,y,q11,q12,m1,m2,m3");
    CHECK(lines[2] == "0,0,0,0,0,0,0");
    CHECK(lines[3] == "0.5,0,0,0,0,0,0");
    CHECK(lines[5] == "0,0.5,0,0,0,0,0");
    CHECK(format17(0.1) == "0.10000000000000001");
}

TEST_CASE("malformed snapshots report the row") {
    const auto g = Grid2D<double>::make(3);
    const auto good = snapshot_text(State<double>::zeros(g), g, 0.5);
    auto lines = lines_of(good);
    auto join = [](const std::vector<std::string>& ls) {
        std::string out;
        for (const auto& l : ls) out += l + "\n";
        return out;
    };
    auto row_of = [](const std::string& text) -> long {
        try {
            parse_snapshot(text);
        } catch (const SnapshotFormatError& e) {
            return e.row();
        }
        return -99;
    };

    auto bad = lines;
    bad[2 + 4] = "0.5,0.5,0,zero,0,0,0";
    CHECK(row_of(join(bad)) == 4);
    bad = lines;
    bad[2 + 6] = "0,1,0,0,0,0";
    CHECK(row_of(join(bad)) == 6);
    bad = lines;
    bad[2 + 2] = "0.5,0,0,0,0,0,0";
    CHECK(row_of(join(bad)) == 2);
    bad = lines;
    bad.pop_back();
    CHECK(row_of(join(bad)) == 8);
    bad = lines;
    bad[1] = "x,y,q11,q12,m1,m2";
    CHECK(row_of(join(bad)) == -1);
    CHECK(row_of("") == -1);

    CHECK_THROWS_AS(read_snapshot("/nonexistent/dir/snap.csv"), IoError);
}

TEST_CASE("energy series") {
    const auto dir = scratch_dir("energy");
    write_energy_series({}, dir / "empty.csv");
    CHECK(slurp(dir / "empty.csv") == std::string(kEnergyHeader) + "\n");

    EnergyBreakdown<double> e;
    e.elastic_q = 1;
    e.zeeman = -0.25;
    e.total = e.sum_of_parts();
    write_energy_series({{0, 0.0, e}, {10, 1e-4, e}}, dir / "two.csv");
    const auto lines = lines_of(slurp(dir / "two.csv"));
    REQUIRE(lines.size() == 3);
    CHECK(lines[1] == "0,0.75,1,0,0,0,0,0,0,-0.25");
    CHECK(lines[2].rfind("0.0001", 0) == 0);
    fs::remove_all(dir);
}

TEST_CASE("run outputs and summary") {
    RunConfig c = presets("test-xi1")[0].config;
    c.n = 11;
    c.solver.max_time = 20 * c.solver.delta_t;
    c.solver.record_every = 5;
    const auto r = execute(c);
    const auto dir = scratch_dir("outputs");
    write_outputs(r, dir);
    for (const char* f : {"config.txt", "energy.csv", "iterations.csv", "summary.json", "snapshot_00000000.csv",
                          "snapshot_00000020.csv"})
        CHECK(fs::exists(dir / f));
    CHECK(parse_config(slurp(dir / "config.txt")) == c);
    CHECK(lines_of(slurp(dir / "energy.csv")).size() == 1 + 5);
    CHECK(lines_of(slurp(dir / "iterations.csv")).size() == 1 + 20);

    const auto j = Json::parse(slurp(dir / "summary.json"));
    CHECK(j["steps"] == 20);
    CHECK(j["energy"]["dissipation_violations"].get<long>() >= 0);
    CHECK(j["energy"]["minimum"].get<double>() >= j["energy"]["lower_bound"].get<double>());
    CHECK(j["winding"]["boundary_m"] == 1);
    CHECK(j["winding"]["boundary_q_vector"] == 2);
    CHECK(j.contains("alignment"));
    CHECK(j["defects"]["q"].is_array());

    // The final snapshot reproduces the last energy sample.
    const auto snap = read_snapshot(dir / "snapshot_00000020.csv");
    const auto e = total_energy(snap.state, c.model, snap.grid);
    CHECK(e.total == r.trajectory.energies.back().energy.total);
    fs::remove_all(dir);
}

TEST_CASE("writing into an unusable path fails with the path") {
    const auto dir = scratch_dir("blocked");
    write_text("x", dir / "file");
    try {
        write_text("y", dir / "file" / "child.txt");
        FAIL("expected a throw");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("file") != std::string::npos);
    }
    fs::remove_all(dir);
}
