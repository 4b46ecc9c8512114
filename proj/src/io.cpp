#include "fig8/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

using nlohmann::json;

namespace fig8 {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json config_to_json(const Config& c) {
    json out = json::array();
    for (int j = 0; j < 3; ++j) out.push_back({c[j].real(), c[j].imag()});
    return out;
}

Config config_from_json(const json& j) {
    if (!j.is_array() || j.size() != 3)
        throw std::runtime_error("node must be an array of 3 [re, im] pairs");
    Config c;
    for (int k = 0; k < 3; ++k) {
        if (!j[k].is_array() || j[k].size() != 2)
            throw std::runtime_error("node entry must be an [re, im] pair");
        c[k] = Complex(j[k][0].get<double>(), j[k][1].get<double>());
    }
    return c;
}

const json& field(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw std::runtime_error(std::string("missing field: ") + key);
    return *it;
}

}  // namespace

json path_to_json(const DiscretePath& path, const Masses& m, double alpha) {
    json j;
    j["alpha"] = alpha;
    j["masses"] = {m.m1, m.m2, m.m3};
    j["T0"] = path.times.empty() ? 0.0 : path.times.back();
    j["times"] = path.times;
    json nodes = json::array();
    for (const Config& c : path.nodes) nodes.push_back(config_to_json(c));
    j["nodes"] = std::move(nodes);
    return j;
}

DiscretePath path_from_json(const json& j, Masses* m, double* alpha) {
    DiscretePath path;
    path.times = field(j, "times").get<std::vector<double>>();
    const json& nodes = field(j, "nodes");
    if (!nodes.is_array() || nodes.size() != path.times.size())
        throw std::runtime_error("times and nodes differ in length");
    for (const json& n : nodes) path.nodes.push_back(config_from_json(n));
    if (path.times.empty()) throw std::runtime_error("empty path");
    if (m) {
        const json& mm = field(j, "masses");
        if (!mm.is_array() || mm.size() != 3) throw std::runtime_error("masses must have 3 entries");
        *m = Masses{mm[0].get<double>(), mm[1].get<double>(), mm[2].get<double>()};
    }
    if (alpha) *alpha = field(j, "alpha").get<double>();
    return path;
}

json orbit_to_json(const FullOrbit& orbit, const json& diagnostics) {
    DiscretePath p;
    p.times = orbit.times;
    p.nodes = orbit.configs;
    json j = path_to_json(p, orbit.m, orbit.alpha);
    j["T0"] = orbit.T0;
    j["period"] = orbit.period();
    j["action_quarter"] = orbit.action_quarter;
    json vels = json::array();
    for (const Velocity& v : orbit.velocities) vels.push_back(config_to_json(v));
    j["velocities"] = std::move(vels);
    j["diagnostics"] = diagnostics;
    return j;
}

FullOrbit orbit_from_json(const json& j) {
    FullOrbit o;
    const DiscretePath p = path_from_json(j, &o.m, &o.alpha);
    o.times = p.times;
    o.configs = p.nodes;
    o.T0 = field(j, "T0").get<double>();
    o.action_quarter = j.value("action_quarter", 0.0);
    const json& vels = field(j, "velocities");
    if (!vels.is_array() || vels.size() != o.configs.size())
        throw std::runtime_error("velocities and nodes differ in length");
    for (const json& v : vels) o.velocities.push_back(config_from_json(v));
    return o;
}

json report_to_json(const VerificationReport& r) {
    json j;
    j["tol_geom"] = r.tol_geom;
    j["tol_conservation"] = r.tol_conservation;
    j["scale"] = r.scale;
    j["a_ok"] = r.a_ok;
    j["b_ok"] = r.b_ok;
    j["c_ok"] = r.c_ok;
    j["d_ok"] = r.d_ok;
    j["a_dev"] = r.a_dev;
    j["b_dev"] = r.b_dev;
    j["d_dev"] = r.d_dev;
    json sy = json::array();
    for (const SyzygyEvent& e : r.syzygies)
        sy.push_back({{"time", e.time},
                      {"type", e.type},
                      {"crossing_sign", e.crossing_sign},
                      {"tangential", e.tangential}});
    j["syzygies"] = std::move(sy);
    j["reduced_cyclic"] = r.reduced_cyclic;
    j["energy_drift"] = r.energy_drift;
    j["J_max"] = r.J_max;
    j["J_scale"] = r.J_scale;
    j["eom_residual_max"] = r.eom_residual_max;
    j["closure_defect"] = r.closure_defect;
    j["transversality_t0"] = r.transversality_t0;
    j["passed"] = r.passed();
    return j;
}

json condition_to_json(const ConditionReport& r) {
    json j;
    j["levels"] = r.levels;
    j["schubart_action"] = r.schubart_action;
    j["omega_action"] = r.omega_action;
    j["schubart_extrap"] = r.schubart_extrap;
    j["omega_extrap"] = r.omega_extrap;
    j["schubart_order"] = r.schubart_order;
    j["omega_order"] = r.omega_order;
    j["schubart_contraction"] = r.schubart_contraction;
    j["omega_contraction"] = r.omega_contraction;
    j["gap"] = r.gap;
    j["uncertainty"] = r.uncertainty;
    return j;
}

std::string condition_table(const ConditionReport& r) {
    std::ostringstream os;
    char line[160];
    os << "     N     collinear action     planar action\n";
    for (size_t i = 0; i < r.levels.size(); ++i) {
        std::snprintf(line, sizeof line, "%6d   %18.12f  %18.12f\n", r.levels[i],
                      r.schubart_action[i], r.omega_action[i]);
        os << line;
    }
    std::snprintf(line, sizeof line, "extrap   %18.12f  %18.12f\n", r.schubart_extrap,
                  r.omega_extrap);
    os << line;
    std::snprintf(line, sizeof line, "order    %18.2f  %18.2f\n", r.schubart_order,
                  r.omega_order);
    os << line;
    std::snprintf(line, sizeof line, "contr    %18.2f  %18.2f\n", r.schubart_contraction,
                  r.omega_contraction);
    os << line;
    std::snprintf(line, sizeof line, "gap (collinear - planar) = %.6e +/- %.1e\n", r.gap,
                  r.uncertainty);
    os << line;
    return os.str();
}

std::string trajectory_csv(const FullOrbit& orbit) {
    std::string out = "# fig8-trajectory-v1\nt,x1re,x1im,x2re,x2im,x3re,x3im,w1,w2,w3\n";
    for (size_t i = 0; i < orbit.times.size(); ++i) {
        const Config& x = orbit.configs[i];
        const ShapePoint w = project(x, orbit.m);
        out += num(orbit.times[i]);
        for (int jj = 0; jj < 3; ++jj) {
            out += ',';
            out += num(x[jj].real());
            out += ',';
            out += num(x[jj].imag());
        }
        out += ',';
        out += num(w.w1);
        out += ',';
        out += num(w.w2);
        out += ',';
        out += num(w.w3);
        out += '\n';
    }
    return out;
}

std::string shape_csv(const FullOrbit& orbit) {
    std::string out = "# fig8-shape-v1\nt,w1,w2,w3\n";
    for (size_t i = 0; i < orbit.times.size(); ++i) {
        const ShapePoint w = project(orbit.configs[i], orbit.m);
        out += num(orbit.times[i]);
        out += ',';
        out += num(w.w1);
        out += ',';
        out += num(w.w2);
        out += ',';
        out += num(w.w3);
        out += '\n';
    }
    return out;
}

std::string sweep_csv(const std::vector<DeformationReport>& sweep) {
    std::string out = "# fig8-deform-sweep-v1\neps,A1,A2,A3,total\n";
    for (const DeformationReport& r : sweep) {
        out += num(r.epsilon);
        out += ',';
        out += num(r.A1);
        out += ',';
        out += num(r.A2);
        out += ',';
        out += num(r.A3);
        out += ',';
        out += num(r.total);
        out += '\n';
    }
    return out;
}

namespace {

constexpr int kSvgSize = 640;
constexpr double kSvgPad = 40.0;

struct Mapper {
    double minx, miny, scale;
    double X(double x) const { return kSvgPad + (x - minx) * scale; }
    double Y(double y) const { return kSvgSize - kSvgPad - (y - miny) * scale; }
};

Mapper fit_box(double minx, double maxx, double miny, double maxy) {
    const double span = std::max({maxx - minx, maxy - miny, 1e-12});
    const double s = (kSvgSize - 2.0 * kSvgPad) / span;
    // center the shorter direction
    const double cx = 0.5 * (minx + maxx), cy = 0.5 * (miny + maxy);
    return Mapper{cx - 0.5 * span, cy - 0.5 * span, s};
}

std::string svg_header() {
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
                  "viewBox=\"0 0 %d %d\">\n<rect width=\"100%%\" height=\"100%%\" "
                  "fill=\"white\"/>\n",
                  kSvgSize, kSvgSize, kSvgSize, kSvgSize);
    return buf;
}

void polyline(std::string& out, const std::vector<std::pair<double, double>>& pts,
              const Mapper& map, const char* color) {
    out += "<polyline fill=\"none\" stroke=\"";
    out += color;
    out += "\" stroke-width=\"1.5\" points=\"";
    char buf[64];
    for (const auto& [x, y] : pts) {
        std::snprintf(buf, sizeof buf, "%.2f,%.2f ", map.X(x), map.Y(y));
        out += buf;
    }
    out += "\"/>\n";
}

void marker(std::string& out, const Mapper& map, double x, double y, const char* label) {
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"4\" fill=\"black\"/>"
                  "<text x=\"%.2f\" y=\"%.2f\" font-size=\"14\">%s</text>\n",
                  map.X(x), map.Y(y), map.X(x) + 6.0, map.Y(y) - 6.0, label);
    out += buf;
}

}  // namespace

std::string orbit_svg(const FullOrbit& orbit) {
    double minx = 1e300, maxx = -1e300, miny = 1e300, maxy = -1e300;
    for (const Config& c : orbit.configs)
        for (int j = 0; j < 3; ++j) {
            minx = std::min(minx, c[j].real());
            maxx = std::max(maxx, c[j].real());
            miny = std::min(miny, c[j].imag());
            maxy = std::max(maxy, c[j].imag());
        }
    const Mapper map = fit_box(minx, maxx, miny, maxy);
    std::string out = svg_header();
    const char* colors[3] = {"#1f77b4", "#d62728", "#2ca02c"};
    for (int j = 0; j < 3; ++j) {
        std::vector<std::pair<double, double>> pts;
        for (const Config& c : orbit.configs) pts.emplace_back(c[j].real(), c[j].imag());
        polyline(out, pts, map, colors[j]);
    }
    out += "</svg>\n";
    return out;
}

std::string shape_svg(const FullOrbit& orbit) {
    // Stereographic projection from the north pole (the upper Lagrange
    // point); that landmark has no finite image and is omitted.
    auto stereo = [](const ShapePoint& w, double& u, double& v) {
        const ShapePoint n = w.normalized();
        const double d = 1.0 - n.w3;
        if (d < 1e-9) return false;
        u = n.w1 / d;
        v = n.w2 / d;
        return true;
    };
    const Mapper map = fit_box(-2.2, 2.2, -2.2, 2.2);
    std::string out = svg_header();
    // image of the equator (the collinear shapes)
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"%.2f\" fill=\"none\" "
                  "stroke=\"#cccccc\" stroke-dasharray=\"4 4\"/>\n",
                  map.X(0.0), map.Y(0.0), map.scale);
    out += buf;
    std::vector<std::pair<double, double>> pts;
    for (const Config& c : orbit.configs) {
        double u, v;
        if (stereo(project(c, orbit.m), u, v)) pts.emplace_back(u, v);
    }
    polyline(out, pts, map, "#1f77b4");

    const Landmarks lm = landmarks(orbit.m);
    const std::pair<const ShapePoint*, const char*> marks[] = {
        {&lm.E1, "E1"},  {&lm.E2, "E2"},   {&lm.E3, "E3"},   {&lm.Lminus, "L-"},
        {&lm.b12, "b12"}, {&lm.b13, "b13"}, {&lm.b23, "b23"},
    };
    for (const auto& [w, label] : marks) {
        double u, v;
        if (stereo(*w, u, v) && std::abs(u) < 2.2 && std::abs(v) < 2.2)
            marker(out, map, u, v, label);
    }
    out += "</svg>\n";
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

}  // namespace fig8
