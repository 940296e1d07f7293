#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "quadtrap/analytic.hpp"
#include "quadtrap/dynamics.hpp"
#include "quadtrap/integrability.hpp"
#include "quadtrap/poincare.hpp"
#include "quadtrap/potential.hpp"
#include "quadtrap/presets.hpp"
#include "quadtrap/svg.hpp"
#include "quadtrap/zeeman.hpp"

using namespace quadtrap;
using nlohmann::ordered_json;

namespace {

constexpr int kExitBadInput = 2;
constexpr int kExitNumeric = 3;

struct BadInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Globals {
    std::string out;
    std::string svg;
    unsigned threads = 0;
    double rel_tol = 1e-10;
    double abs_tol = 1e-10;
    std::string delta_source = "caption";
    std::optional<double> sigma;
    std::optional<double> delta;
    std::string molecule = "H2";
    int J = 10;
    int M = -10;
    double varpi = 0.5;
    double b1d = 5.0;
};

class Output {
public:
    explicit Output(const std::string& path, bool binary = false) {
        if (path.empty() || path == "-") return;
        file_ = std::make_unique<std::ofstream>(path, binary ? std::ios::binary : std::ios::out);
        if (!*file_) throw BadInput("cannot open output file '" + path + "'");
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

TrapSpec trap_of(const Globals& g) {
    TrapSpec t;
    t.B1_times_D = g.b1d;
    t.validate();
    return t;
}

RotorState rotor_of(const Globals& g) {
    RotorState r{g.J, g.M, g.varpi};
    r.validate();
    return r;
}

PotentialParams params_of(const Globals& g) {
    if (g.sigma || g.delta) {
        if (!g.sigma || !g.delta) throw BadInput("--sigma and --delta must be given together");
        return PotentialParams::raw(*g.sigma, *g.delta);
    }
    const DeltaSource src = parse_delta_source(g.delta_source);
    if (src == DeltaSource::computed) {
        const auto mols = builtin_molecules();
        return make_params(find_molecule(mols, g.molecule), trap_of(g), rotor_of(g));
    }
    return reproduction_params(src);
}

IntegratorOptions options_of(const Globals& g) {
    IntegratorOptions o;
    o.rel_tol = g.rel_tol;
    o.abs_tol = g.abs_tol;
    o.validate();
    return o;
}

std::vector<double> parse_doubles(const std::string& text, std::size_t n, const std::string& what) {
    std::vector<double> v;
    for (const auto& item : split_list(text)) v.push_back(parse_double(item, what));
    if (v.size() != n) throw BadInput(what + " needs " + std::to_string(n) + " comma-separated values");
    return v;
}

// depth-table

struct DepthArgs {
    std::vector<std::string> molecules;
};

int cmd_depth_table(const Globals& g, const DepthArgs& a) {
    const auto all = builtin_molecules();
    std::vector<MoleculeSpec> rows;
    if (a.molecules.empty()) rows = all;
    for (const auto& name : a.molecules) rows.push_back(find_molecule(all, name));
    const TrapSpec trap = trap_of(g);
    const RotorState rotor = rotor_of(g);

    Output out(g.out);
    auto& os = out.stream();
    os << "molecule,Z,alpha_L,depth_uK,depth_edge_uK\n";
    for (const auto& m : rows) {
        const DepthReport r = trap_depth_report(m, trap, rotor);
        char buf[200];
        std::snprintf(buf, sizeof buf, "%s,%d,%.6e,%.2f,%.2f\n", m.name.c_str(), m.Z_A, r.alpha_L, r.linear_rough * 1e6,
                      r.linear_term * 1e6);
        os << buf;
    }
    const DepthReport h2 = trap_depth_report(find_molecule(all, "H2"), trap, rotor);
    char buf[200];
    std::snprintf(buf, sizeof buf, "# beta_L = %.6e\n# spin_depth_K = %.4f\n# quadratic_uK = %.2f\n", h2.beta_L,
                  h2.spin_rough, h2.quadratic_rough * 1e6);
    os << buf;
    return 0;
}

// orbit

struct OrbitArgs {
    std::string preset;
    std::string state;
    double tau = 700;
    double dt = 0;
    std::string method = "dop853";
    std::string format = "csv";
    double verlet_step = 1e-3;
};

int cmd_orbit(const Globals& g, const OrbitArgs& a) {
    if (a.preset.empty() == a.state.empty()) throw BadInput("give exactly one of --preset or --state");
    PhaseState s0;
    if (!a.preset.empty()) {
        s0 = find_orbit_preset(a.preset).state();
    } else {
        const auto v = parse_doubles(a.state, 6, "--state");
        s0 = PhaseState::cartesian(v[0], v[1], v[2], v[3], v[4], v[5]);
    }
    if (!(a.tau > 0)) throw BadInput("--tau must be positive");
    if (a.format != "csv" && a.format != "bin") throw BadInput("--format must be csv or bin");
    if (a.format == "bin" && (g.out.empty() || g.out == "-")) throw BadInput("--format bin needs --out");
    const PotentialParams params = params_of(g);
    IntegratorOptions opt = options_of(g);
    if (a.method == "verlet") opt.method = Method::verlet;
    else if (a.method != "dop853") throw BadInput("--method must be dop853 or verlet");
    opt.verlet_step = a.verlet_step;
    opt.validate();

    Trajectory tr = integrate(s0, params, a.tau, opt);
    if (a.dt > 0 && !tr.segments.empty()) {
        Trajectory re = tr;
        re.tau.clear(), re.states.clear(), re.energies.clear(), re.p_phi.clear();
        const long n = static_cast<long>(std::floor(tr.tau_end() / a.dt + 1e-9));
        for (long i = 0; i <= n; ++i) {
            const double t = std::min(i * a.dt, tr.tau_end());
            const PhaseState s = tr.at(t);
            re.tau.push_back(t);
            re.states.push_back(s);
            re.energies.push_back(energy(s, params));
            re.p_phi.push_back(angular_momentum(s));
        }
        tr = std::move(re);
    }

    {
        Output out(g.out, a.format == "bin");
        if (a.format == "bin") write_trajectory_binary(out.stream(), tr);
        else write_trajectory_csv(out.stream(), tr);
        out.stream().flush();
    }
    if (!g.svg.empty()) {
        SvgSeries rz, xy;
        rz.line = xy.line = true;
        for (const auto& s : tr.states) {
            const PhaseState c = to_chart(s, Chart::cartesian);
            rz.points.emplace_back(std::hypot(c.v[0], c.v[1]), c.v[2]);
            xy.points.emplace_back(c.v[0], c.v[1]);
        }
        SvgPlot p1{"(r, z)", "r", "z", {rz}};
        SvgPlot p2{"(x, y)", "x", "y", {xy}};
        p1.width = p2.width = 500;
        p1.height = p2.height = 500;
        Output svg(g.svg);
        write_svg_row(svg.stream(), {p1, p2});
    }
    std::cerr << "status=" << to_string(tr.status) << " accepted=" << tr.accepted << " rejected=" << tr.rejected
              << " max_rel_energy_drift=" << tr.max_energy_drift(1.0) << " max_p_phi_drift=" << tr.max_p_phi_drift()
              << "\n";
    if (!tr.ok()) throw NumericFailure("integration aborted: " + tr.diagnostic);
    return 0;
}

// section

struct SectionArgs {
    double h = 0.125;
    double pphi = 0.01;
    int seeds = 40;
    int crossings = 2000;
    std::vector<std::string> seed_points;
    std::vector<std::string> presets;
    double tau_limit = 0;
};

int cmd_section(const Globals& g, const SectionArgs& a) {
    SectionSpec spec;
    spec.h = a.h;
    spec.p_phi = a.pphi;
    spec.n_crossings = a.crossings;
    spec.tau_limit = a.tau_limit;
    spec.validate();
    const PotentialParams params = params_of(g);

    std::vector<SectionSeed> seeds;
    int id = 0;
    for (const auto& s : a.seed_points) {
        const auto v = parse_doubles(s, 2, "--seed");
        seeds.push_back({id++, v[0], v[1]});
    }
    for (const auto& name : a.presets) {
        const auto& p = find_orbit_preset(name);
        seeds.push_back({id++, p.x, p.p_x});
    }
    if (seeds.empty()) {
        if (a.seeds < 1) throw BadInput("--seeds must be at least 1");
        try {
            seeds = default_seed_grid(spec, params, a.seeds);
        } catch (const std::domain_error& e) {
            throw BadInput(e.what());
        }
    }

    std::vector<SectionSeed> admissible;
    for (const auto& s : seeds) {
        try {
            seed_from_energy(spec.h, spec.p_phi, s.r, s.p_r, params);
            admissible.push_back(s);
        } catch (const std::exception& e) {
            std::cerr << "seed " << s.id << " skipped: " << e.what() << "\n";
        }
    }
    if (admissible.empty()) throw BadInput("all seeds are outside the energy surface");

    const auto results = compute_section(spec, admissible, params, options_of(g), g.threads);
    {
        Output out(g.out);
        write_section_csv(out.stream(), results);
    }
    bool aborted = false;
    for (const auto& r : results) {
        if (!r.note.empty()) std::cerr << "seed " << r.seed_id << ": " << r.note << "\n";
        if (r.transversal && r.status != IntegrationStatus::completed) aborted = true;
    }
    if (!g.svg.empty()) {
        SvgPlot plot;
        char title[120];
        std::snprintf(title, sizeof title, "z = 0, p_z > 0   h = %g, p_phi = %g", spec.h, spec.p_phi);
        plot.title = title;
        plot.x_label = "r";
        plot.y_label = "p_r";
        const int n = static_cast<int>(results.size());
        for (int i = 0; i < n; ++i) {
            SvgSeries s;
            s.color = seed_color(i, n);
            for (const auto& p : results[i].points) s.points.emplace_back(p.r, p.p_r);
            plot.series.push_back(std::move(s));
        }
        Output svg(g.svg);
        write_svg(svg.stream(), plot);
    }
    if (aborted) throw NumericFailure("one or more seeds aborted before reaching the crossing count");
    return 0;
}

// analytic

struct AnalyticArgs {
    double h = 0.1;
    double cz = 0.05;
    double u = 0.3;
    double c = 0.01;
    double eta = 0;
    int samples = 0;
    std::string csv;
};

void write_samples(const std::string& path, const std::string& header, const std::vector<std::vector<double>>& rows) {
    Output out(path);
    out.stream() << header << "\n";
    char buf[64];
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%s%.17g", i ? "," : "", row[i]);
            out.stream() << buf;
        }
        out.stream() << "\n";
    }
}

ordered_json candidates_json(const std::vector<CnCandidate>& cands) {
    ordered_json arr = ordered_json::array();
    for (const auto& k : cands)
        arr.push_back({{"m", k.m}, {"omega", k.omega}, {"p1", k.p1}, {"p2", k.p2}, {"valid", k.valid}, {"note", k.note}});
    return arr;
}

int cmd_zaxis(const Globals& g, const AnalyticArgs& a) {
    ZAxisMotion m;
    std::pair<double, double> tp;
    try {
        m = z_axis_solution(a.h);
        tp = z_turning_points(a.h);
    } catch (const std::domain_error& e) {
        throw BadInput(e.what());
    }
    ordered_json j{{"h_z", a.h}, {"half_period", m.T}, {"period", m.period()}, {"amplitude", m.amplitude},
                   {"z_min", tp.first}, {"z_max", tp.second}};
    if (a.samples > 0) {
        std::vector<std::vector<double>> rows;
        for (int i = 0; i <= a.samples; ++i) {
            const double t = m.period() * i / a.samples;
            rows.push_back({t, m.z(t), m.zdot(t)});
        }
        if (a.csv.empty()) j["samples_t_z_zdot"] = rows;
        else write_samples(a.csv, "t,z,zdot", rows);
    }
    Output out(g.out);
    out.stream() << j.dump(2) << "\n";
    return 0;
}

int cmd_radial(const Globals& g, const AnalyticArgs& a) {
    TurningPoints tp;
    try {
        tp = radial_turning_points(a.h, a.cz);
    } catch (const NoLibrationError& e) {
        throw BadInput(e.what());
    }
    const RadialMinimum rm = radial_minimum_data(a.cz);
    ordered_json j{{"h_r", a.h},        {"c_z", a.cz},         {"r1", tp.r1},
                   {"r2", tp.r2},       {"r_min", tp.r_min},   {"V_r_min", a.cz != 0 ? V_r_rescaled(rm.r_min, a.cz * a.cz) : 0.0},
                   {"c2_bound", tp.bound}, {"degenerate", tp.degenerate}, {"m0", tp.m0},
                   {"D2", tp.D2},       {"alpha", tp.alpha},   {"m00", rm.m00},
                   {"D1", rm.D1},       {"beta", rm.beta}};
    Output out(g.out);
    out.stream() << j.dump(2) << "\n";
    return 0;
}

int cmd_cnorbit(const Globals& g, const AnalyticArgs& a) {
    double eta = a.eta;
    if (eta == 0) eta = params_of(g).eta;
    ordered_json j;
    try {
        const CnOrbit o = solve_cn_orbit(a.u, a.c, eta);
        j = ordered_json{{"u", o.u},
                         {"c", o.c},
                         {"eta", o.eta},
                         {"h", o.h},
                         {"m", o.m},
                         {"omega", o.omega},
                         {"N1", o.N1},
                         {"N2", o.N2},
                         {"D1", o.D1c},
                         {"D2", o.D2c},
                         {"other_turning_point", o.other_turning_point},
                         {"s_period", o.s_period},
                         {"tau_period", o.tau_period},
                         {"p1_residual", o.p1_residual},
                         {"p2_residual", o.p2_residual},
                         {"candidates", candidates_json(o.candidates)}};
        if (a.samples > 0) {
            std::vector<std::vector<double>> rows;
            for (int i = 0; i <= a.samples; ++i) {
                const double t = o.tau_period * i / a.samples;
                rows.push_back({t, o.r_of_tau(t)});
            }
            if (a.csv.empty()) j["samples_tau_r"] = rows;
            else write_samples(a.csv, "tau,r", rows);
        }
    } catch (const CnOrbitError& e) {
        ordered_json err{{"error", e.what()}, {"candidates", candidates_json(e.candidates)}};
        std::cerr << err.dump(2) << "\n";
        throw NumericFailure(e.what());
    } catch (const std::invalid_argument& e) {
        throw BadInput(e.what());
    }
    Output out(g.out);
    out.stream() << j.dump(2) << "\n";
    return 0;
}

// galois-check

struct GaloisArgs {
    std::string k;
    std::string lambdas;
};

int cmd_galois(const Globals& g, const GaloisArgs& a) {
    Rational k(1);
    std::vector<Rational> lambdas;
    ordered_json darboux;
    try {
        if (!a.k.empty()) k = parse_rational(a.k);
        if (k == 0) throw BadInput("k must be non-zero");
        if (!a.lambdas.empty()) {
            for (const auto& s : split_list(a.lambdas)) lambdas.push_back(parse_rational(s));
        }
    } catch (const std::invalid_argument& e) {
        throw BadInput(e.what());
    }
    if (a.k.empty() && a.lambdas.empty()) {
        const DarbouxReport d = verify_darboux_V1();
        lambdas.assign(d.hessian_eigenvalues.begin(), d.hessian_eigenvalues.end());
        ordered_json dj{{"d", {to_string(d.d[0]), to_string(d.d[1]), to_string(d.d[2])}},
                        {"c", to_string(d.c)},
                        {"c_published", to_string(d.c_published)},
                        {"c_matches_published", d.c_matches_published},
                        {"gradient_residual",
                         {to_string(d.gradient_residual[0]), to_string(d.gradient_residual[1]),
                          to_string(d.gradient_residual[2])}},
                        {"hessian_eigenvalues",
                         {to_string(d.hessian_eigenvalues[0]), to_string(d.hessian_eigenvalues[1]),
                          to_string(d.hessian_eigenvalues[2])}},
                        {"verified", d.verified}};
        darboux = dj;
    } else if (lambdas.empty()) {
        throw BadInput("--lambdas is required with --k");
    }
    const Verdict v = morales_ramis_verdict(k, lambdas);
    ordered_json ev = ordered_json::array();
    for (const auto& l : lambdas) ev.push_back(to_string(l));
    ordered_json log = ordered_json::array();
    for (const auto& e : v.log) {
        ordered_json checks = ordered_json::array();
        for (const auto& c : e.checks) {
            ordered_json cj{{"family", "I" + std::to_string(c.family)}, {"member", c.member}};
            cj["witness"] = c.witness ? ordered_json(c.witness->str()) : ordered_json(nullptr);
            cj["detail"] = c.detail;
            checks.push_back(cj);
        }
        log.push_back({{"lambda", to_string(e.lambda)}, {"admissible", e.admissible}, {"checks", checks}});
    }
    ordered_json fams = ordered_json::array();
    for (int f : v.families) fams.push_back("I" + std::to_string(f));
    ordered_json j{{"k", to_string(k)},
                   {"eigenvalues", ev},
                   {"verdict", v.pass ? "Pass" : "Fail"},
                   {"witness", v.witness ? ordered_json(to_string(*v.witness)) : ordered_json(nullptr)},
                   {"k_in_K2", v.k_in_K2},
                   {"families_checked", fams},
                   {"membership_log", log}};
    if (!darboux.is_null()) j["darboux"] = darboux;
    Output out(g.out);
    out.stream() << j.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quadtrap: classical dynamics of a diatomic molecule in a magnetic quadrupole trap"};
    app.set_help_flag("--help", "print help and exit");
    app.require_subcommand(1);
    Globals g;

    app.add_option("--out", g.out, "output file (default stdout)");
    app.add_option("--svg", g.svg, "SVG plot file");
    app.add_option("--threads", g.threads, "worker threads for section scans (0 = hardware)");
    app.add_option("--rel-tol", g.rel_tol, "integrator relative tolerance");
    app.add_option("--abs-tol", g.abs_tol, "integrator absolute tolerance");
    auto* src = app.add_option("--delta-source", g.delta_source, "delta value: computed, text or caption")
                     ->check(CLI::IsMember({"computed", "text", "caption"}));
    auto* sig = app.add_option("--sigma", g.sigma, "raw sigma (with --delta)");
    auto* del = app.add_option("--delta", g.delta, "raw delta (with --sigma)");
    auto* mol = app.add_option("--molecule", g.molecule, "molecule preset for --delta-source computed");
    app.add_option("--J", g.J, "rotational quantum number");
    app.add_option("--M", g.M, "magnetic quantum number");
    app.add_option("--varpi", g.varpi, "spin mixing weight");
    app.add_option("--b1d", g.b1d, "B1 * D in tesla");
    sig->excludes(src)->excludes(mol);
    del->excludes(src)->excludes(mol);

    DepthArgs depth;
    auto* c_depth = app.add_subcommand("depth-table", "trap-depth table for the molecule presets");
    c_depth->add_option("molecules", depth.molecules, "molecule names (default all)");
    c_depth->fallthrough();

    OrbitArgs orbit;
    auto* c_orbit = app.add_subcommand("orbit", "integrate one trajectory");
    c_orbit->add_option("--preset", orbit.preset, "P1, P2, P3, Q1, Q2, Q3 or CH");
    c_orbit->add_option("--state", orbit.state, "x,y,z,px,py,pz");
    c_orbit->add_option("--tau", orbit.tau, "final time");
    c_orbit->add_option("--dt", orbit.dt, "resample interval (0 = accepted steps)");
    c_orbit->add_option("--method", orbit.method, "dop853 or verlet");
    c_orbit->add_option("--verlet-step", orbit.verlet_step, "fixed step for verlet");
    c_orbit->add_option("--format", orbit.format, "csv or bin");
    c_orbit->fallthrough();

    SectionArgs section;
    auto* c_section = app.add_subcommand("section", "Poincare section z = 0, p_z > 0");
    c_section->add_option("--h", section.h, "energy");
    c_section->add_option("--pphi", section.pphi, "angular momentum");
    c_section->add_option("--seeds", section.seeds, "number of default seeds on p_r = 0");
    c_section->add_option("--crossings", section.crossings, "crossings per seed");
    c_section->add_option("--seed", section.seed_points, "explicit seed r,p_r (repeatable)");
    c_section->add_option("--seed-preset", section.presets, "seed from a published orbit (repeatable)");
    c_section->add_option("--tau-limit", section.tau_limit, "time limit per seed (0 = automatic)");
    c_section->fallthrough();

    AnalyticArgs an;
    auto* c_an = app.add_subcommand("analytic", "closed-form solutions");
    c_an->require_subcommand(1);
    c_an->fallthrough();
    auto* c_z = c_an->add_subcommand("zaxis", "motion on the z axis (rescaled variables)");
    c_z->add_option("--hz", an.h, "rescaled energy h_z")->required();
    c_z->add_option("--samples", an.samples, "samples over one period");
    c_z->add_option("--csv", an.csv, "CSV file for the samples (default: embedded in the JSON)");
    c_z->fallthrough();
    auto* c_r = c_an->add_subcommand("radial", "radial turning points (rescaled variables)");
    c_r->add_option("--hr", an.h, "rescaled energy h_r")->required();
    c_r->add_option("--cz", an.cz, "rescaled angular momentum c_z")->required();
    c_r->fallthrough();
    auto* c_cn = c_an->add_subcommand("cnorbit", "cn-form radial orbit (sigma-scaled variables)");
    c_cn->add_option("--u", an.u, "turning radius")->required();
    c_cn->add_option("--cz", an.c, "angular momentum")->required();
    c_cn->add_option("--eta", an.eta, "delta / sigma (default from the parameter source)");
    c_cn->add_option("--samples", an.samples, "samples of r(tau) over one period");
    c_cn->add_option("--csv", an.csv, "CSV file for the samples (default: embedded in the JSON)");
    c_cn->fallthrough();

    GaloisArgs galois;
    auto* c_gal = app.add_subcommand("galois-check", "Morales-Ramis eigenvalue test");
    c_gal->add_option("--k", galois.k, "homogeneity degree N/D (default 1, the V1 case)");
    c_gal->add_option("--lambdas", galois.lambdas, "comma-separated Hessian eigenvalues");
    c_gal->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitBadInput;
    }

    try {
        if (*c_depth) return cmd_depth_table(g, depth);
        if (*c_orbit) return cmd_orbit(g, orbit);
        if (*c_section) return cmd_section(g, section);
        if (*c_z) return cmd_zaxis(g, an);
        if (*c_r) return cmd_radial(g, an);
        if (*c_cn) return cmd_cnorbit(g, an);
        if (*c_gal) return cmd_galois(g, galois);
    } catch (const NumericFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const BadInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitBadInput;
}
