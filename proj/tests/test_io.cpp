#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>

#include "fig8/io.hpp"

using namespace fig8;
using nlohmann::json;

namespace {

DiscretePath sample_path() {
    DiscretePath p;
    for (int k = 0; k <= 8; ++k) {
        const double t = k / 8.0;
        p.times.push_back(t);
        const Complex z1 = std::polar(1.0 + 0.317 * t, 2.0 * t);
        const Complex z2 = std::polar(0.73, 2.0 * t + 2.1);
        p.nodes.push_back({z1, z2, -(z1 + z2)});
    }
    return p;
}

FullOrbit sample_orbit() {
    FullOrbit o;
    o.m = Masses{1.0, 1.3, 0.7};
    o.alpha = 1.5;
    o.T0 = 1.0;
    o.action_quarter = 2.437193650124;
    for (int k = 0; k <= 16; ++k) {
        const double t = 4.0 * k / 16.0;
        o.times.push_back(t);
        const Complex z1 = std::polar(1.1, 1.5708 * t);
        const Complex z2 = std::polar(0.67, 1.5708 * t + 2.6);
        o.configs.push_back({z1, z2, -(z1 + z2)});
        o.velocities.push_back({0.3 * z1, Complex(0.1, -0.2) * z2, 0.05 * (z1 - z2)});
    }
    return o;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, sep)) out.push_back(tok);
    return out;
}

std::vector<std::string> lines(const std::string& text) { return split(text, '\n'); }

}  // namespace

TEST_CASE("path JSON round trip is exact") {
    const DiscretePath p = sample_path();
    const Masses m{1.0, 2.0, 0.5};
    const json j = path_to_json(p, m, 1.7);
    CHECK(j["T0"].get<double>() == 1.0);

    // Through text and back: doubles survive bit-exactly.
    const json j2 = json::parse(j.dump());
    Masses mr;
    double ar = 0.0;
    const DiscretePath q = path_from_json(j2, &mr, &ar);
    CHECK(ar == 1.7);
    CHECK(mr.m2 == 2.0);
    CHECK(mr.m3 == 0.5);
    REQUIRE(q.times.size() == p.times.size());
    for (size_t i = 0; i < p.times.size(); ++i) {
        CHECK(q.times[i] == p.times[i]);
        for (int jj = 0; jj < 3; ++jj) CHECK(q.nodes[i][jj] == p.nodes[i][jj]);
    }
}

TEST_CASE("path JSON rejects malformed input") {
    const json good = path_to_json(sample_path(), Masses{}, 1.0);

    json j = good;
    j.erase("times");
    CHECK_THROWS_AS(path_from_json(j), std::runtime_error);

    j = good;
    j["nodes"].erase(0);
    CHECK_THROWS_AS(path_from_json(j), std::runtime_error);

    j = good;
    j["nodes"][2][1] = {0.5};  // not an [re, im] pair
    CHECK_THROWS_AS(path_from_json(j), std::runtime_error);

    j = good;
    j["masses"] = {1.0, 2.0};
    Masses m;
    CHECK_THROWS_AS(path_from_json(j, &m), std::runtime_error);

    j = good;
    j["times"] = json::array();
    j["nodes"] = json::array();
    CHECK_THROWS_AS(path_from_json(j), std::runtime_error);
}

TEST_CASE("orbit JSON round trip preserves everything") {
    const FullOrbit o = sample_orbit();
    json diag;
    diag["note"] = "test";
    diag["value"] = 0.125;
    const json j = json::parse(orbit_to_json(o, diag).dump());
    CHECK(j["period"].get<double>() == 4.0);
    CHECK(j["diagnostics"]["value"].get<double>() == 0.125);

    const FullOrbit r = orbit_from_json(j);
    CHECK(r.alpha == o.alpha);
    CHECK(r.T0 == o.T0);
    CHECK(r.m.m2 == o.m.m2);
    CHECK(r.action_quarter == o.action_quarter);
    REQUIRE(r.times.size() == o.times.size());
    for (size_t i = 0; i < o.times.size(); ++i) {
        CHECK(r.times[i] == o.times[i]);
        for (int jj = 0; jj < 3; ++jj) {
            CHECK(r.configs[i][jj] == o.configs[i][jj]);
            CHECK(r.velocities[i][jj] == o.velocities[i][jj]);
        }
    }

    json bad = j;
    bad["velocities"].erase(0);
    CHECK_THROWS_AS(orbit_from_json(bad), std::runtime_error);
}

TEST_CASE("verification and condition reports serialize") {
    VerificationReport r;
    r.scale = 1.25;
    r.a_ok = r.b_ok = r.c_ok = r.d_ok = true;
    r.energy_drift = 1e-10;
    r.syzygies.push_back(SyzygyEvent{0.5, 2, -1, false});
    r.reduced_cyclic = {2, 3, 1, 3};
    const json j = report_to_json(r);
    CHECK(j["scale"].get<double>() == 1.25);
    CHECK(j["syzygies"].size() == 1);
    CHECK(j["syzygies"][0]["type"].get<int>() == 2);
    CHECK(j["reduced_cyclic"].get<std::vector<int>>() == std::vector<int>{2, 3, 1, 3});
    CHECK(j["passed"].is_boolean());

    ConditionReport c;
    c.levels = {128, 256};
    c.schubart_action = {3.4773, 3.4753};
    c.omega_action = {3.4743, 3.4737};
    c.gap = -1.47e-4;
    c.uncertainty = 1.2e-3;
    const json cj = condition_to_json(c);
    CHECK(cj["levels"].get<std::vector<int>>() == c.levels);
    CHECK(cj["gap"].get<double>() == c.gap);

    const std::string table = condition_table(c);
    CHECK(table.find("128") != std::string::npos);
    CHECK(table.find("gap") != std::string::npos);
    CHECK(table.find("+/-") != std::string::npos);
}

TEST_CASE("trajectory CSV: versioned header and round-trip values") {
    const FullOrbit o = sample_orbit();
    const std::string csv = trajectory_csv(o);
    const auto ls = lines(csv);
    CHECK(ls[0] == "# fig8-trajectory-v1");
    CHECK(ls[1] == "t,x1re,x1im,x2re,x2im,x3re,x3im,w1,w2,w3");
    REQUIRE(ls.size() >= o.times.size() + 2);

    const auto cells = split(ls[5], ',');
    REQUIRE(cells.size() == 10);
    const size_t i = 3;  // row 5 is sample 3
    CHECK(std::stod(cells[0]) == o.times[i]);
    for (int jj = 0; jj < 3; ++jj) {
        CHECK(std::stod(cells[1 + 2 * jj]) == o.configs[i][jj].real());
        CHECK(std::stod(cells[2 + 2 * jj]) == o.configs[i][jj].imag());
    }
    const ShapePoint w = project(o.configs[i], o.m);
    CHECK(std::stod(cells[7]) == w.w1);
    CHECK(std::stod(cells[8]) == w.w2);
    CHECK(std::stod(cells[9]) == w.w3);

    const std::string scsv = shape_csv(o);
    const auto sl = lines(scsv);
    CHECK(sl[0] == "# fig8-shape-v1");
    CHECK(sl[1] == "t,w1,w2,w3");
    const auto scells = split(sl[5], ',');
    REQUIRE(scells.size() == 4);
    CHECK(std::stod(scells[1]) == w.w1);
    CHECK(std::stod(scells[3]) == w.w3);

    // Byte-identical on repeat.
    CHECK(trajectory_csv(o) == csv);
}

TEST_CASE("deformation sweep CSV") {
    std::vector<DeformationReport> sweep(2);
    sweep[0] = DeformationReport{1e-5, -0.1, -0.02, 4e-6, -0.12, 0.25};
    sweep[1] = DeformationReport{1e-4, -0.17, -0.05, 4.4e-5, -0.22, 0.25};
    const std::string csv = sweep_csv(sweep);
    const auto ls = lines(csv);
    CHECK(ls[0] == "# fig8-deform-sweep-v1");
    CHECK(ls[1] == "eps,A1,A2,A3,total");
    const auto cells = split(ls[3], ',');
    REQUIRE(cells.size() == 5);
    CHECK(std::stod(cells[0]) == 1e-4);
    CHECK(std::stod(cells[4]) == -0.22);
}

TEST_CASE("SVG plots are well formed and carry the expected elements") {
    const FullOrbit o = sample_orbit();
    const std::string orb = orbit_svg(o);
    CHECK(orb.rfind("<svg", 0) == 0);
    CHECK(orb.find("</svg>") != std::string::npos);
    size_t n = 0, pos = 0;
    while ((pos = orb.find("<polyline", pos)) != std::string::npos) {
        ++n;
        pos += 9;
    }
    CHECK(n == 3);  // one curve per body

    const std::string shp = shape_svg(o);
    CHECK(shp.rfind("<svg", 0) == 0);
    CHECK(shp.find("</svg>") != std::string::npos);
    CHECK(shp.find(">E1<") != std::string::npos);
    CHECK(shp.find(">E3<") != std::string::npos);
    CHECK(shp.find(">b23<") != std::string::npos);
    CHECK(shp.find(">L-<") != std::string::npos);

    CHECK(orbit_svg(o) == orb);
}

TEST_CASE("file helpers") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "fig8_io_test";
    fs::create_directories(dir);
    const std::string file = (dir / "data.txt").string();
    write_file(file, "line1\nline2\n");
    CHECK(read_file(file) == "line1\nline2\n");
    CHECK_THROWS_AS(read_file((dir / "missing.txt").string()), std::runtime_error);
    fs::remove_all(dir);
}
