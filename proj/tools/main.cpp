// Command-line front end: experiment orchestration and persistence.
#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "fig8/io.hpp"
#include "fig8/minimize.hpp"
#include "fig8/orbit.hpp"

using namespace fig8;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Opts {
    std::string config;
    double alpha = 1.5;
    double m1 = 1.0, m2 = 1.0, m3 = 1.0;
    double T0 = 1.0;
    int n = 128;
    std::uint64_t seed = 0;
    int starts = 0;           // 0: command-specific default
    double grad_tol = 0.0;    // 0: command-specific default
    int max_iters = 20000;
    std::string out = "out";
    std::string input;
    std::string levels = "128,256,512";
    std::string angles = "0.5,0.7,0.9,0.99";
    double eps_lo = 1e-6, eps_hi = 1e-3;
    double kepler_mass = 1.0;
};

struct OptRefs {
    std::vector<std::pair<std::string, CLI::Option*>> tracked;
};

// Every option is also a flat key in the JSON config file; flags win.
void add_common(CLI::App* cmd, Opts& o, OptRefs& refs) {
    auto track = [&](const std::string& key, CLI::Option* opt) { refs.tracked.emplace_back(key, opt); };
    cmd->add_option("--config", o.config, "flat JSON config file");
    track("alpha", cmd->add_option("--alpha", o.alpha, "potential exponent, 1 <= alpha < 2"));
    track("m1", cmd->add_option("--m1", o.m1, "mass 1"));
    track("m2", cmd->add_option("--m2", o.m2, "mass 2"));
    track("m3", cmd->add_option("--m3", o.m3, "mass 3"));
    track("T0", cmd->add_option("--T0", o.T0, "quarter period"));
    track("n", cmd->add_option("--n", o.n, "number of segments"));
    track("seed", cmd->add_option("--seed", o.seed, "multistart seed"));
    track("starts", cmd->add_option("--starts", o.starts, "number of multistart points"));
    track("grad_tol", cmd->add_option("--grad-tol", o.grad_tol, "gradient tolerance"));
    track("max_iters", cmd->add_option("--max-iters", o.max_iters, "iteration cap"));
    track("out", cmd->add_option("--out", o.out, "output directory"));
    track("input", cmd->add_option("--input", o.input, "input orbit JSON (verify)"));
    track("levels", cmd->add_option("--levels", o.levels, "comma list of grid levels"));
    track("angles", cmd->add_option("--angles", o.angles, "comma list of ray angles, units of pi"));
    track("eps_lo", cmd->add_option("--eps-lo", o.eps_lo, "smallest deformation size"));
    track("eps_hi", cmd->add_option("--eps-hi", o.eps_hi, "largest deformation size"));
    track("kepler_mass", cmd->add_option("--kepler-mass", o.kepler_mass, "one-center mass"));
}

void apply_config_file(const Opts& o, const OptRefs& refs, Opts& target) {
    if (o.config.empty()) return;
    const json j = json::parse(read_file(o.config));
    if (!j.is_object()) throw std::runtime_error("config file must hold a JSON object");
    for (const auto& [key, opt] : refs.tracked) {
        if (opt->count() > 0 || !j.contains(key)) continue;
        const json& v = j.at(key);
        if (key == "alpha") target.alpha = v.get<double>();
        else if (key == "m1") target.m1 = v.get<double>();
        else if (key == "m2") target.m2 = v.get<double>();
        else if (key == "m3") target.m3 = v.get<double>();
        else if (key == "T0") target.T0 = v.get<double>();
        else if (key == "n") target.n = v.get<int>();
        else if (key == "seed") target.seed = v.get<std::uint64_t>();
        else if (key == "starts") target.starts = v.get<int>();
        else if (key == "grad_tol") target.grad_tol = v.get<double>();
        else if (key == "max_iters") target.max_iters = v.get<int>();
        else if (key == "out") target.out = v.get<std::string>();
        else if (key == "input") target.input = v.get<std::string>();
        else if (key == "levels") target.levels = v.get<std::string>();
        else if (key == "angles") target.angles = v.get<std::string>();
        else if (key == "eps_lo") target.eps_lo = v.get<double>();
        else if (key == "eps_hi") target.eps_hi = v.get<double>();
        else if (key == "kepler_mass") target.kepler_mass = v.get<double>();
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const auto& [key, opt] : refs.tracked)
            if (key == it.key()) known = true;
        if (!known) throw std::runtime_error("unknown config key: " + it.key());
    }
}

void validate(const Opts& o) {
    if (!(o.alpha >= 1.0 && o.alpha < 2.0)) throw std::runtime_error("alpha must be in [1,2)");
    if (!(o.m1 > 0.0 && o.m2 > 0.0 && o.m3 > 0.0))
        throw std::runtime_error("masses must be positive");
    if (o.n < 8) throw std::runtime_error("n must be at least 8");
    if (!(o.T0 > 0.0)) throw std::runtime_error("T0 must be positive");
}

// Output directory: FIG8_OUT overrides the config/default; an explicit
// --out flag overrides both.
fs::path out_dir(const Opts& o, bool out_flag_given) {
    const char* env = std::getenv("FIG8_OUT");
    fs::path dir = (!out_flag_given && env && *env) ? fs::path(env) : fs::path(o.out);
    fs::create_directories(dir);
    return dir;
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    size_t pos = 0;
    while (pos < s.size()) {
        size_t next = s.find(',', pos);
        if (next == std::string::npos) next = s.size();
        out.push_back(std::stod(s.substr(pos, next - pos)));
        pos = next + 1;
    }
    if (out.empty()) throw std::runtime_error("empty list");
    return out;
}

void dump_json(const fs::path& file, const json& j) { write_file(file.string(), j.dump(2) + "\n"); }

int cmd_find_orbit(const Opts& o, const fs::path& dir) {
    const Masses m{o.m1, o.m2, o.m3};
    const ProblemSetup setup = make_setup(m, o.alpha, o.T0, o.n);
    SolveConfig cfg;
    cfg.grad_tol = o.grad_tol > 0.0 ? o.grad_tol : 1e-8;
    cfg.max_iters = o.max_iters;
    cfg.seed = o.seed;
    const int starts = o.starts > 0 ? o.starts : 8;
    const SolveResult best = multistart(setup, cfg, starts);
    if (best.status != SolveStatus::converged) {
        std::cerr << "minimization did not converge (grad norm " << best.grad_norm << ")\n";
        return 2;
    }
    const DiscretePath quarter = decode(best.params, m, setup.grid);
    const FullOrbit rough = from_quarter(quarter, m, o.alpha);
    PolishInfo info;
    const FullOrbit orbit = polish(rough, PolishOptions{}, &info);
    const VerificationReport rep = verify(orbit);

    const json repj = report_to_json(rep);
    dump_json(dir / "orbit.json", orbit_to_json(orbit, repj));
    dump_json(dir / "report.json", repj);
    write_file((dir / "trajectory.csv").string(), trajectory_csv(orbit));
    write_file((dir / "shape.csv").string(), shape_csv(orbit));
    write_file((dir / "orbit.svg").string(), orbit_svg(orbit));
    write_file((dir / "shape.svg").string(), shape_svg(orbit));

    std::cout << "action/quarter = " << orbit.action_quarter << "\n";
    std::cout << "syzygy sequence =";
    for (int t : rep.reduced_cyclic) std::cout << ' ' << t;
    std::cout << "\nverification " << (rep.passed() ? "passed" : "FAILED") << "\n";
    return rep.passed() ? 0 : 2;
}

int cmd_schubart(const Opts& o, const fs::path& dir) {
    const Masses m{o.m1, o.m2, o.m3};
    SolveConfig cfg;
    cfg.grad_tol = o.grad_tol > 0.0 ? o.grad_tol : 1e-6;
    cfg.max_iters = o.max_iters;
    const CollinearResult r = minimize_collinear(m, o.alpha, o.T0, o.n, cfg);
    const FullOrbit orbit = build_schubart(r.path, m, o.alpha);

    const auto samples =
        collision_inertia_samples(r.path, m, o.alpha, 1e-7 * o.T0, 1e-3 * o.T0, 40);
    std::vector<double> ts, Is;
    for (const auto& [t, I] : samples) {
        ts.push_back(t);
        Is.push_back(I);
    }
    const SundmanFit fit = sundman_fit(ts, Is, 1e-5 * o.T0, 1e-3 * o.T0);

    json j;
    j["action_quarter"] = r.action;
    j["grad_norm"] = r.grad_norm;
    j["iterations"] = r.iterations;
    j["converged"] = r.status == SolveStatus::converged;
    j["inertia_exponent"] = fit.exponent;
    j["inertia_exponent_expected"] = 4.0 / (2.0 + o.alpha);
    j["kappa"] = fit.kappa;
    j["kappa_expected"] = collision_kappa(o.m2, o.m3, Alpha(o.alpha));
    j["fit_points"] = fit.points;
    dump_json(dir / "schubart.json", j);
    dump_json(dir / "schubart_orbit.json", orbit_to_json(orbit, j));
    write_file((dir / "schubart_trajectory.csv").string(), trajectory_csv(orbit));

    std::cout << "action/quarter = " << r.action << "\n";
    std::cout << "inertia exponent " << fit.exponent << " (expect "
              << 4.0 / (2.0 + o.alpha) << ")\n";
    std::cout << "kappa " << fit.kappa << " (expect " << j["kappa_expected"].get<double>()
              << ")\n";
    return r.status == SolveStatus::converged ? 0 : 2;
}

int cmd_condition_test(const Opts& o, const fs::path& dir) {
    if (o.alpha != 1.0) throw std::runtime_error("condition-test runs at alpha = 1");
    const Masses m{o.m1, o.m2, o.m3};
    SolveConfig cfg;
    cfg.grad_tol = o.grad_tol > 0.0 ? o.grad_tol : 1e-6;
    cfg.max_iters = o.max_iters;
    cfg.seed = o.seed;
    std::vector<int> levels;
    for (double v : parse_list(o.levels)) levels.push_back(static_cast<int>(v));
    const int starts = o.starts > 0 ? o.starts : 4;
    const ConditionReport rep = condition_test(m, o.T0, levels, cfg, starts);
    dump_json(dir / "condition.json", condition_to_json(rep));
    std::cout << condition_table(rep);
    return 0;
}

int cmd_deform_check(const Opts& o, const fs::path& dir) {
    const BinaryCentralConfig s{o.m2, o.m3, 0.0};
    const auto sweep = deform_sweep(s, s, o.eps_lo, o.eps_hi, o.T0, Alpha(o.alpha));
    write_file((dir / "deform.csv").string(), sweep_csv(sweep));
    json j;
    j["a1_exponent"] = sweep.front().a1_exponent;
    j["a1_exponent_expected"] = (2.0 - o.alpha) / 2.0;
    json rows = json::array();
    for (const auto& r : sweep)
        rows.push_back({{"eps", r.epsilon},
                        {"A1", r.A1},
                        {"A2", r.A2},
                        {"A3", r.A3},
                        {"total", r.total}});
    j["sweep"] = std::move(rows);
    dump_json(dir / "deform.json", j);
    std::cout << "|A1| slope = " << sweep.front().a1_exponent << " (expect "
              << (2.0 - o.alpha) / 2.0 << ")\n";
    return 0;
}

int cmd_kepler_arc(const Opts& o, const fs::path& dir) {
    const auto grid = graded_grid(o.T0, o.n, 3.0);
    json rows = json::array();
    for (double frac : parse_list(o.angles)) {
        const KeplerArc arc =
            kepler_deform(o.kepler_mass, Alpha(o.alpha), frac * M_PI, 0.0, o.T0, grid);
        rows.push_back({{"psi_over_pi", frac},
                        {"gap", arc.gap},
                        {"r0", arc.r0},
                        {"action", arc.action},
                        {"action_parabolic", arc.action_parabolic},
                        {"eom_residual", arc.eom_residual}});
        std::cout << "psi = " << frac << " pi   gap = " << arc.gap << "   r0 = " << arc.r0
                  << "\n";
    }
    json j;
    j["arcs"] = std::move(rows);
    dump_json(dir / "kepler.json", j);
    return 0;
}

int cmd_verify(const Opts& o, const fs::path& dir) {
    if (o.input.empty()) throw std::runtime_error("verify needs --input");
    const FullOrbit orbit = orbit_from_json(json::parse(read_file(o.input)));
    const VerificationReport rep = verify(orbit);
    dump_json(dir / "report.json", report_to_json(rep));
    std::cout << "verification " << (rep.passed() ? "passed" : "FAILED") << "\n";
    return rep.passed() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"alpha-homogeneous three-body variational toolkit"};
    app.require_subcommand(1);

    Opts o;
    struct Cmd {
        CLI::App* sub;
        OptRefs refs;
        int (*run)(const Opts&, const fs::path&);
    };
    std::vector<Cmd> cmds;
    auto reg = [&](const char* name, const char* desc, int (*fn)(const Opts&, const fs::path&)) {
        Cmd c{app.add_subcommand(name, desc), {}, fn};
        add_common(c.sub, o, c.refs);
        cmds.push_back(std::move(c));
    };
    reg("find-orbit", "minimize the action and build the periodic orbit", cmd_find_orbit);
    reg("schubart", "collinear collision orbit and its collision asymptotics", cmd_schubart);
    reg("condition-test", "collinear vs planar action ladders at alpha = 1", cmd_condition_test);
    reg("deform-check", "local deformation action split sweep", cmd_deform_check);
    reg("kepler-arc", "one-center arc action gaps over ray angles", cmd_kepler_arc);
    reg("verify", "re-verify a persisted orbit file", cmd_verify);

    CLI11_PARSE(app, argc, argv);

    try {
        for (const Cmd& c : cmds) {
            if (!c.sub->parsed()) continue;
            apply_config_file(o, c.refs, o);
            validate(o);
            const bool out_given =
                c.sub->count("--out") > 0;
            return c.run(o, out_dir(o, out_given));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
