// Acceptance checks, one PASS/FAIL line per criterion.
// Usage: acceptance [N]   (no argument runs all)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json.hpp>

#include "quadtrap/analytic.hpp"
#include "quadtrap/dynamics.hpp"
#include "quadtrap/poincare.hpp"
#include "quadtrap/potential.hpp"
#include "quadtrap/presets.hpp"
#include "quadtrap/zeeman.hpp"

using namespace quadtrap;

namespace {

using Clock = std::chrono::steady_clock;
using Exact = boost::multiprecision::cpp_rational;

struct Outcome {
    bool pass = true;
    std::string detail;
};

void fail(Outcome& o, const std::string& why) {
    o.pass = false;
    o.detail += (o.detail.empty() ? "" : "; ") + why;
}

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

const MoleculeSpec& molecule(const std::string& name) {
    static const auto list = builtin_molecules();
    return find_molecule(list, name);
}

bool same_digits(double a, double b, int digits) {
    const double scale = std::pow(10.0, std::floor(std::log10(std::abs(b))) - (digits - 1));
    return std::abs(a - b) <= 0.5 * scale;
}

// Table reproduction
Outcome criterion1() {
    Outcome o;
    const auto t0 = Clock::now();
    struct Row {
        const char* name;
        double alpha;
        double depth_uK;
    };
    const Row table[] = {{"H2", 2.72309e-4, 1829.13},  {"N2", 1.37085e-4, 920.814}, {"O2", 1.37155e-4, 921.285},
                         {"F2", 1.28898e-4, 865.826},  {"Cl2", 1.31526e-4, 883.478}, {"Br2", 1.20147e-4, 807.041},
                         {"I2", 1.14554e-4, 769.474}};
    for (const auto& row : table) {
        const auto rep = trap_depth_report(molecule(row.name), TrapSpec{}, RotorState{});
        if (!same_digits(rep.alpha_L, row.alpha, 5))
            fail(o, std::string(row.name) + " alpha_L " + fmt("%.6e", rep.alpha_L));
        if (std::abs(rep.linear_rough * 1e6 - row.depth_uK) > 0.01)
            fail(o, std::string(row.name) + " depth " + fmt("%.4f uK", rep.linear_rough * 1e6));
    }
    const auto rep = trap_depth_report(molecule("H2"), TrapSpec{}, RotorState{});
    const double b6 = std::round(rep.beta_L * 1e10) / 1e10;  // 6 significant digits at 1e-5 scale
    if (std::abs(b6 - 2.12718e-5) > 1.0e-10 * (1 + 1e-9)) fail(o, "beta_L " + fmt("%.7e", rep.beta_L));
    if (std::abs(rep.spin_rough / 6.7 - 1) > 0.01) fail(o, "spin depth " + fmt("%.4f K", rep.spin_rough));
    if (std::abs(rep.quadratic_rough * 1e6 / 142.8 - 1) > 0.01)
        fail(o, "quadratic " + fmt("%.3f uK", rep.quadratic_rough * 1e6));
    const double dt = seconds_since(t0);
    if (dt >= 1) fail(o, "runtime " + fmt("%.3f s", dt));
    o.detail += (o.detail.empty() ? "" : "; ") + std::string("beta_L=") + fmt("%.7e", rep.beta_L) +
                " spin=" + fmt("%.4f K", rep.spin_rough) + " quadratic=" + fmt("%.2f uK", rep.quadratic_rough * 1e6);
    return o;
}

// Parameter chain: sigma and the delta formula against exact rational arithmetic.
Outcome criterion2() {
    Outcome o;
    const auto p = make_params(molecule("H2"), TrapSpec{}, RotorState{});
    if (std::abs(p.sigma - 0.502723) > 1e-6) fail(o, "sigma " + fmt("%.9f", p.sigma));

    const auto& c = active_constants();
    const VibronicConstants vib;
    const TrapSpec trap;
    const int J = 10, M = -10;
    // every double input is converted exactly; the rest is exact
    const Exact beta = Exact(c.elementary_charge_C) * Exact(trap.B1_times_D) * Exact(c.bohr_radius_m) *
                       Exact(c.bohr_radius_m) / Exact(c.hbar_Js);
    const Exact q = Exact(2 * J * J + 2 * J - 1 - 2 * M * M) / Exact((2 * J - 1) * (2 * J + 3));
    const Exact delta = beta / 2 * (Exact(vib.A1) - Exact(vib.A2) * q);
    const double exact = static_cast<double>(delta);
    const double rel = std::abs(p.delta - exact) / exact;
    if (rel > 1e-12) fail(o, "delta relative error " + fmt("%.3e", rel));
    o.detail += (o.detail.empty() ? "" : "; ") + std::string("sigma=") + fmt("%.7f", p.sigma) +
                " delta=" + fmt("%.6e", p.delta) + " (rel err " + fmt("%.1e", rel) + ") vs text " +
                fmt("%.6e", kDeltaText) + ", caption " + fmt("%.6e", kDeltaCaption);
    return o;
}

// Conservation over tau = 1500 for the published orbits.
Outcome criterion3() {
    Outcome o;
    const auto t0 = Clock::now();
    const auto params = reproduction_params(DeltaSource::caption);
    IntegratorOptions opt;
    opt.keep_segments = false;
    double worst_e = 0, worst_l = 0;
    for (const auto& pre : published_orbits()) {
        const auto tr = integrate(pre.state(), params, 1500, opt);
        if (!tr.ok()) {
            fail(o, pre.name + " " + to_string(tr.status));
            continue;
        }
        const double de = tr.max_energy_drift(), dl = tr.max_p_phi_drift();
        worst_e = std::max(worst_e, de);
        worst_l = std::max(worst_l, dl);
        if (de >= 1e-8) fail(o, pre.name + " energy drift " + fmt("%.2e", de));
        if (dl >= 1e-10) fail(o, pre.name + " p_phi drift " + fmt("%.2e", dl));
    }
    const double dt = seconds_since(t0);
    if (dt >= 30) fail(o, "runtime " + fmt("%.1f s", dt));
    o.detail += (o.detail.empty() ? "" : "; ") + std::string("max energy drift ") + fmt("%.2e", worst_e) +
                ", max p_phi drift " + fmt("%.2e", worst_l) + ", " + fmt("%.2f s", dt);
    return o;
}

// Fixed-point property of P1, P2 and absence of returns for CH.
Outcome criterion4() {
    Outcome o;
    const auto t0 = Clock::now();
    const auto params = reproduction_params(DeltaSource::caption);
    SectionSpec spec;
    spec.h = 0.125;
    spec.p_phi = 0.01;
    spec.n_crossings = 100;
    std::vector<SectionSeed> seeds;
    for (const char* n : {"P1", "P2", "CH"}) {
        const auto& pre = find_orbit_preset(n);
        seeds.push_back({static_cast<int>(seeds.size()), pre.x, pre.p_x});
    }
    const auto res = compute_section(spec, seeds, params);
    auto dist = [&](const SectionPoint& p, const SectionSeed& s) { return std::hypot(p.r - s.r, p.p_r - s.p_r); };
    for (int i = 0; i < 2; ++i) {
        if (res[i].points.empty()) {
            fail(o, find_orbit_preset(i == 0 ? "P1" : "P2").name + " no crossings");
            continue;
        }
        const double d = dist(res[i].points.front(), seeds[i]);
        const std::string name = i == 0 ? "P1" : "P2";
        if (d >= 1e-3) fail(o, name + " first return " + fmt("%.3e", d) + " away");
        else o.detail += (o.detail.empty() ? "" : "; ") + name + " first return " + fmt("%.2e", d);
    }
    if (res[2].points.size() < 100) fail(o, "CH produced " + std::to_string(res[2].points.size()) + " crossings");
    double closest = 1e300;
    int at = -1;
    for (const auto& p : res[2].points)
        if (dist(p, seeds[2]) < closest) closest = dist(p, seeds[2]), at = p.index;
    if (closest < 1e-3)
        fail(o, "CH returns within " + fmt("%.3e", closest) + " at crossing " + std::to_string(at + 1));
    else o.detail += "; CH closest return " + fmt("%.2e", closest);
    const double dt = seconds_since(t0);
    if (dt >= 60) fail(o, "runtime " + fmt("%.1f s", dt));
    return o;
}

// Energy to temperature conversion against the figure captions.
Outcome criterion5() {
    Outcome o;
    const std::pair<double, double> captions[] = {
        {0.03, 0.4201}, {0.0449, 0.6288}, {0.057, 0.7983}, {0.065, 0.9103}, {0.125, 1.7507}};
    for (const auto& [h, kelvin] : captions) {
        const double k = energy_to_kelvin(h, TrapSpec{});
        const double rel = std::abs(k / kelvin - 1);
        if (rel > 0.005) fail(o, fmt("h=%g", h) + " -> " + fmt("%.4f K", k) + " vs " + fmt("%.4f K", kelvin));
    }
    return o;
}

// Analytic Zeeman spectra against a numeric Hermitian eigensolver.
Outcome criterion6() {
    Outcome o;
    std::mt19937_64 rng(606);
    std::uniform_real_distribution<double> u(-2, 2);
    double worst = 0;
    for (int J = 1; J <= 6; ++J) {
        for (int i = 0; i < 100; ++i) {
            const FieldPoint p{u(rng), u(rng), u(rng)};
            const auto lin = hermitian_eigenvalues(linear_zeeman_matrix(J, p).entries);
            const auto quad = hermitian_eigenvalues(quadratic_zeeman_matrix(J, p).entries);
            const auto lin_a = linear_zeeman_eigenvalues(J, p);
            const auto quad_a = quadratic_zeeman_eigenvalues(J, p);
            if (lin.size() != lin_a.size() || quad.size() != quad_a.size()) {
                fail(o, "spectrum size mismatch at J=" + std::to_string(J));
                continue;
            }
            for (std::size_t k = 0; k < lin.size(); ++k) worst = std::max(worst, std::abs(lin[k] - lin_a[k]));
            for (std::size_t k = 0; k < quad.size(); ++k) worst = std::max(worst, std::abs(quad[k] - quad_a[k]));
        }
    }
    if (worst >= 1e-10) fail(o, "max deviation " + fmt("%.2e", worst));
    else o.detail = "max deviation " + fmt("%.2e", worst);
    return o;
}

// Independent root oracle: bisection in long double on the monotone pieces of
// r^4 + r^3 - 2 h r^2 + c^2, split at the minimum of r + 1/2 - c^2/r^3 = 0.
std::pair<double, double> bisection_roots(double h, double c2) {
    using LD = long double;
    auto bisect = [](auto f, LD a, LD b) {
        LD fa = f(a);
        for (int i = 0; i < 200; ++i) {
            const LD m = (a + b) / 2;
            if (m == a || m == b) break;
            const LD fm = f(m);
            if ((fm < 0) == (fa < 0)) a = m, fa = fm;
            else b = m;
        }
        return (a + b) / 2;
    };
    const LD C2 = c2, H = h;
    auto dv = [&](LD r) { return r + 0.5L - C2 / (r * r * r); };
    const LD rmin = bisect(dv, 1e-30L, 10.0L + std::cbrt(C2));
    auto P = [&](LD r) { return ((r + 1) * r - 2 * H) * r * r + C2; };
    LD hi = 1;
    while (P(hi) < 0) hi *= 2;
    return {static_cast<double>(bisect(P, 0.0L, rmin)), static_cast<double>(bisect(P, rmin, hi + rmin))};
}

Outcome criterion7() {
    Outcome o;
    std::mt19937_64 rng(707);
    std::uniform_real_distribution<double> uh(0.005, 5.0), uf(1e-3, 0.99);
    double worst = 0;
    int done = 0;
    while (done < 500) {
        const double h = uh(rng);
        const double c2 = radial_c2_bound(h) * uf(rng);
        const double c = std::sqrt(c2);
        const auto [a, b] = bisection_roots(h, c2);
        TurningPoints tp;
        try {
            tp = radial_turning_points(h, c);
        } catch (const std::exception& e) {
            fail(o, fmt("h=%g", h) + ": " + e.what());
            ++done;
            continue;
        }
        worst = std::max({worst, std::abs(tp.r1 - a), std::abs(tp.r2 - b)});
        ++done;
    }
    if (worst >= 1e-11) fail(o, "max turning-point deviation " + fmt("%.2e", worst));
    int degenerate_ok = 0;
    for (double c : {1e-3, 0.01, 0.05, 0.2}) {
        const double r0 = radial_minimum(c);
        const double v = V_r_rescaled(r0, c * c);
        const auto at = radial_turning_points(v, c);
        const auto near = radial_turning_points(v + 0.5e-10 * std::max(1.0, v), c);
        const auto off = radial_turning_points(v + 1e-6, c);
        if (at.degenerate && near.degenerate && !off.degenerate && std::abs(at.r1 - r0) < 1e-8 &&
            std::abs(at.r2 - r0) < 1e-8)
            ++degenerate_ok;
        else fail(o, "degeneracy not flagged correctly at c=" + fmt("%g", c));
    }
    if (o.pass) o.detail = "max deviation " + fmt("%.2e", worst) + ", degeneracy flagged " + std::to_string(degenerate_ok) + "/4";
    return o;
}

// Closed forms against the integrated flow.
Outcome criterion8() {
    Outcome o;
    for (double h : {0.1, 1.0}) {
        const auto zm = z_axis_solution(h);
        const double t0 = zm.T / 2;
        IntegratorOptions opt;
        opt.singular_radius = 1e-300;  // the motion passes through the field zero twice per period
        const auto tr = integrate(PhaseState::cylindrical(0, zm.z(t0), 0, 0, zm.zdot(t0), 0),
                                  PotentialParams::raw(1, 1), 3 * zm.period(), opt);
        if (!tr.ok()) {
            fail(o, "z-axis integration " + to_string(tr.status) + ": " + tr.diagnostic);
            continue;
        }
        double worst = 0;
        for (int i = 0; i <= 6000; ++i) {
            const double t = 3 * zm.period() * i / 6000;
            worst = std::max(worst, std::abs(tr.at(t).z() - zm.z(t0 + t)));
        }
        if (worst >= 1e-8) fail(o, "z-axis h=" + fmt("%g", h) + " deviation " + fmt("%.2e", worst));
        else o.detail += (o.detail.empty() ? "" : "; ") + std::string("z-axis h=") + fmt("%g", h) + " " + fmt("%.1e", worst);
    }
    struct Case {
        double u, c, eta;
    };
    const double eta_pub = kDeltaCaption / kSigmaPublished;
    const double c_pub = 0.01 / std::sqrt(kSigmaPublished);
    for (const auto& cs : {Case{0.3, c_pub, eta_pub}, Case{0.05, c_pub, eta_pub}, Case{0.3, 0.01, 0.01}}) {
        CnOrbit orb;
        try {
            orb = solve_cn_orbit(cs.u, cs.c, cs.eta);
        } catch (const std::exception& e) {
            fail(o, fmt("cn u=%g: ", cs.u) + e.what());
            continue;
        }
        const double p1 = cn_p1(orb.m, orb.omega, cs.u, cs.c, cs.eta);
        const double p2 = cn_p2(orb.m, orb.omega, cs.u, cs.c, cs.eta);
        if (!(std::abs(p1) < 1e-10 && std::abs(p2) < 1e-10))
            fail(o, fmt("cn u=%g", cs.u) + " residuals " + fmt("%.1e", p1) + ", " + fmt("%.1e", p2));
        const auto tr = integrate(PhaseState::cylindrical(cs.u, 0, 0, 0, 0, cs.c), PotentialParams::raw(1, cs.eta),
                                  orb.tau_period);
        if (!tr.ok()) {
            fail(o, "radial integration " + to_string(tr.status));
            continue;
        }
        double worst = 0;
        for (int i = 0; i <= 1000; ++i) {
            const double t = orb.tau_period * i / 1000;
            worst = std::max(worst, std::abs(tr.at(t).r() - orb.r_of_tau(t)));
        }
        if (worst >= 1e-6) fail(o, fmt("cn u=%g", cs.u) + " deviation " + fmt("%.2e", worst));
        else o.detail += fmt("; cn u=%g ", cs.u) + fmt("m=%.4f ", orb.m) + fmt("%.1e", worst);
    }
    return o;
}

struct Run {
    int code = -1;
    std::string out;
};

Run run_cli(const std::string& args) {
    const std::string cmd = std::string(QUADTRAP_BIN) + " " + args;
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

// End-to-end Galois verdict through the shipped command.
Outcome criterion9() {
    Outcome o;
    const auto t0 = Clock::now();
    const auto r = run_cli("galois-check");
    const double dt = seconds_since(t0);
    if (r.code != 0) {
        fail(o, "exit code " + std::to_string(r.code));
        return o;
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(r.out);
    } catch (const std::exception& e) {
        fail(o, std::string("unparseable output: ") + e.what());
        return o;
    }
    if (j.value("verdict", "") != "Fail") fail(o, "verdict " + j.value("verdict", "?"));
    if (j.value("witness", "") != "4") fail(o, "witness " + j.value("witness", "?"));
    if (j.value("k", "") != "1") fail(o, "k " + j.value("k", "?"));
    if (j.value("k_in_K2", true)) fail(o, "log does not show 1 outside K2");
    bool four_logged = false;
    for (const auto& e : j["membership_log"]) {
        if (e.value("lambda", "") != "4") continue;
        int outside = 0;
        for (const auto& c : e["checks"])
            if (!c.value("member", true)) ++outside;
        four_logged = e["checks"].size() == 6 && outside == 6;
    }
    if (!four_logged) fail(o, "log does not show 4 outside I1..I6(1)");
    if (dt >= 0.1) fail(o, "runtime " + fmt("%.3f s", dt));
    if (o.pass) o.detail = "Fail with witness 4, " + fmt("%.3f s", dt);
    return o;
}

// Sections for visual comparison; only emission is checked here.
Outcome criterion10() {
    Outcome o;
    const auto dir = std::filesystem::path(ACCEPTANCE_OUT_DIR) / "sections";
    std::filesystem::create_directories(dir);
    struct Job {
        std::string h, tag, seeds;
    };
    const Job jobs[] = {{"0.03", "", "--seeds 24"},
                        {"0.0449", "", "--seeds 24"},
                        {"0.057", "", "--seeds 24"},
                        {"0.065", "", "--seeds 24"},
                        {"0.125", "", "--seeds 24"},
                        {"0.125", "_presets", "--seed-preset P1 --seed-preset P2 --seed-preset CH --seed-preset Q3"}};
    for (const auto& job : jobs) {
        const auto stem = dir / ("section_h" + job.h + job.tag);
        const auto svg = stem.string() + ".svg";
        const auto r = run_cli("section --h " + job.h + " " + job.seeds + " --crossings 400 --out " + stem.string() +
                               ".csv --svg " + svg + " 2>/dev/null");
        if (r.code != 0 || !std::filesystem::exists(svg) || std::filesystem::file_size(svg) == 0)
            fail(o, "h=" + job.h + job.tag + " not emitted (exit " + std::to_string(r.code) + ")");
    }
    if (o.pass) o.detail = "SVGs written to " + dir.string() + "; the bifurcation structure is judged by eye";
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    const std::map<int, std::function<Outcome()>> criteria{
        {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4},  {5, criterion5},
        {6, criterion6}, {7, criterion7}, {8, criterion8}, {9, criterion9}, {10, criterion10}};
    std::vector<int> which;
    if (argc > 1) {
        const int n = std::atoi(argv[1]);
        if (!criteria.count(n)) {
            std::fprintf(stderr, "unknown criterion %s\n", argv[1]);
            return 2;
        }
        which.push_back(n);
    } else {
        for (const auto& [n, f] : criteria) which.push_back(n);
    }
    bool all = true;
    for (int n : which) {
        Outcome o;
        try {
            o = criteria.at(n)();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        all = all && o.pass;
        std::printf("criterion %d: %s%s%s\n", n, o.pass ? "PASS" : "FAIL", o.detail.empty() ? "" : " - ",
                    o.detail.c_str());
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
