#include "quadtrap/dynamics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>

namespace quadtrap {

std::string to_string(Chart c) { return c == Chart::cartesian ? "cartesian" : "cylindrical"; }

std::string to_string(IntegrationStatus s) {
    switch (s) {
        case IntegrationStatus::completed: return "completed";
        case IntegrationStatus::singular_abort: return "singular_abort";
        case IntegrationStatus::step_limit: return "step_limit";
        case IntegrationStatus::stopped: return "stopped";
    }
    return "unknown";
}

PhaseState PhaseState::cartesian(double x, double y, double z, double px, double py, double pz) {
    return {Chart::cartesian, {x, y, z, px, py, pz}};
}

PhaseState PhaseState::cylindrical(double r, double z, double phi, double p_r, double p_z, double p_phi) {
    return {Chart::cylindrical, {r, z, phi, p_r, p_z, p_phi}};
}

PhaseState convert_chart(const PhaseState& s) {
    const auto& v = s.v;
    if (s.chart == Chart::cylindrical) {
        const double r = v[0], phi = v[2], pr = v[3], pphi = v[5];
        if (r == 0 && pphi != 0) throw SingularPointError("r = 0 with p_phi != 0 has no Cartesian image");
        const double c = std::cos(phi), sn = std::sin(phi);
        const double pt = r != 0 ? pphi / r : 0.0;
        return PhaseState::cartesian(r * c, r * sn, v[1], pr * c - pt * sn, pr * sn + pt * c, v[4]);
    }
    const double x = v[0], y = v[1], px = v[3], py = v[4];
    const double r = std::hypot(x, y);
    if (r == 0) return PhaseState::cylindrical(0, v[2], 0, px, v[5], 0);
    const double phi = std::atan2(y, x);
    return PhaseState::cylindrical(r, v[2], phi, (x * px + y * py) / r, v[5], x * py - y * px);
}

PhaseState to_chart(const PhaseState& s, Chart c) { return s.chart == c ? s : convert_chart(s); }

double energy(const PhaseState& s, const PotentialParams& params) {
    if (s.chart == Chart::cartesian) return H_cartesian(s.v, params);
    const auto& v = s.v;
    const double r = v[5] == 0 ? std::abs(v[0]) : v[0];
    return H_cylindrical(r, v[1], v[3], v[4], v[5], params);
}

double angular_momentum(const PhaseState& s) {
    if (s.chart == Chart::cylindrical) return s.v[5];
    return s.v[0] * s.v[4] - s.v[1] * s.v[3];
}

StateVec rhs_cylindrical(const StateVec& y, const PotentialParams& params) {
    const double r = y[0], z = y[1], pr = y[3], pz = y[4], pphi = y[5];
    const double q = std::sqrt(r * r + 4 * z * z);
    if (q < kEpsSingular) throw SingularPointError("field zero: sqrt(r^2+4z^2) below singular threshold");
    if (pphi != 0 && r <= 0) throw SingularPointError("centrifugal singularity: r <= 0 with p_phi != 0");
    const double inv_r2 = pphi != 0 ? 1 / (r * r) : 0.0;
    return {pr,
            pz,
            pphi * inv_r2,
            (pphi != 0 ? pphi * pphi / (r * r * r) : 0.0) - params.sigma * r / (2 * q) - params.delta * r,
            -2 * params.sigma * z / q - 4 * params.delta * z,
            0.0};
}

StateVec rhs_cylindrical_rescaled(const StateVec& y, double eta) {
    PotentialParams p;
    p.sigma = 1;
    p.delta = eta;
    p.eta = eta;
    return rhs_cylindrical(y, p);
}

StateVec rhs_cartesian(const StateVec& y, const PotentialParams& params) {
    const auto g = grad_V_cartesian({y[0], y[1], y[2]}, params);
    return {y[3], y[4], y[5], -g[0], -g[1], -g[2]};
}

void IntegratorOptions::validate() const {
    if (!(rel_tol > 0 && rel_tol <= 1e-3) || !(abs_tol > 0 && abs_tol <= 1e-3))
        throw std::invalid_argument("tolerances must lie in (0, 1e-3]");
    if (method == Method::verlet && !(verlet_step > 0)) throw std::invalid_argument("Verlet step must be positive");
    if (!(local_factor > 0 && local_factor <= 1)) throw std::invalid_argument("local_factor must lie in (0, 1]");
    if (!(max_step > 0)) throw std::invalid_argument("max_step must be positive");
}

namespace {

struct NearSingular {
    double t;
    double q;
};

double field_radius(const StateVec& y, Chart chart) {
    if (chart == Chart::cylindrical) return std::sqrt(y[0] * y[0] + 4 * y[1] * y[1]);
    return std::sqrt(4 * y[2] * y[2] + y[0] * y[0] + y[1] * y[1]);
}

struct Rhs {
    Chart chart;
    const PotentialParams& params;
    double singular_radius;
    long evaluations = 0;

    StateVec operator()(double t, const StateVec& y) {
        ++evaluations;
        const double q = field_radius(y, chart);
        if (q < singular_radius) throw NearSingular{t, q};
        if (chart == Chart::cylindrical) {
            if (y[5] != 0 && y[0] <= 0) throw NearSingular{t, q};
            return rhs_cylindrical(y, params);
        }
        return rhs_cartesian(y, params);
    }
};

PhaseState make_state(Chart chart, const StateVec& y) { return {chart, y}; }

void record(Trajectory& tr, double t, const StateVec& y) {
    const auto s = make_state(tr.chart, y);
    tr.tau.push_back(t);
    tr.energies.push_back(energy(s, tr.params));
    tr.p_phi.push_back(angular_momentum(s));
    tr.states.push_back(s);
}

bool at_rest_on_field_zero(const PhaseState& s) {
    const auto& v = s.v;
    const double q = field_radius(v, s.chart);
    if (q != 0) return false;
    return v[3] == 0 && v[4] == 0 && v[5] == 0;
}

void run_dop853(Trajectory& tr, const StateVec& y0, double tend, const IntegratorOptions& opt,
                const StepObserver& observer) {
    Rhs rhs{tr.chart, tr.params, opt.singular_radius};
    const std::size_t active = tr.chart == Chart::cylindrical ? 5 : 6;
    StateVec y = y0, ynew;
    std::array<StateVec, 16> k;
    double t = 0;
    StateVec f0;
    try {
        f0 = rhs(t, y);
    } catch (const NearSingular& e) {
        tr.status = IntegrationStatus::singular_abort;
        tr.diagnostic = "initial state within " + std::to_string(opt.singular_radius) + " of the field zero";
        return;
    }
    const double rtol = opt.rel_tol * opt.local_factor;
    const double atol = opt.abs_tol * opt.local_factor;
    double h = dop853::initial_step<6>(rhs, t, y, f0, 1.0, rtol, atol, std::min(opt.max_step, tend));
    bool last_rejected = false;

    while (t < tend) {
        if (tr.accepted + tr.rejected >= opt.max_steps) {
            tr.status = IntegrationStatus::step_limit;
            tr.diagnostic = "step limit reached at tau = " + std::to_string(t);
            break;
        }
        bool last = false;
        if (t + 1.01 * h >= tend) {
            h = tend - t;
            last = true;
        }
        double err = 0;
        dop853::Segment<6> seg;
        try {
            dop853::step<6>(rhs, t, y, f0, h, k, ynew);
            err = dop853::error_norm<6>(k, h, y, ynew, rtol, atol, active);
            if (err <= 1 && (opt.keep_segments || observer)) seg = dop853::dense<6>(rhs, t, h, y, ynew, k);
        } catch (const NearSingular& e) {
            ++tr.rejected;
            h *= 0.5;
            last_rejected = true;
            if (h < opt.min_step) {
                char buf[160];
                std::snprintf(buf, sizeof buf,
                              "step size fell below %.1e near the field zero at tau = %.12g (|q| = %.3e)", opt.min_step,
                              t, e.q);
                tr.status = IntegrationStatus::singular_abort;
                tr.diagnostic = buf;
                break;
            }
            continue;
        }
        if (!std::isfinite(err)) err = 1e10;
        const double fac11 = std::pow(err, 0.125);
        if (err <= 1) {
            double fac = std::max(1.0 / 6, std::min(1 / 0.333, fac11 / 0.9));
            double hnew = h / fac;
            if (last_rejected) hnew = std::min(hnew, h);
            ++tr.accepted;
            t = last ? tend : t + h;
            y = ynew;
            f0 = k[12];
            if (opt.keep_samples) record(tr, t, y);
            if (opt.keep_segments) tr.segments.push_back(seg);
            last_rejected = false;
            h = std::min(hnew, opt.max_step);
            if (observer && !observer(seg)) {
                tr.status = IntegrationStatus::stopped;
                break;
            }
        } else {
            ++tr.rejected;
            h = h / std::min(1 / 0.333, fac11 / 0.9);
            last_rejected = true;
            if (h < opt.min_step) {
                tr.status = IntegrationStatus::step_limit;
                tr.diagnostic = "step size underflow at tau = " + std::to_string(t);
                break;
            }
        }
    }
    tr.evaluations = rhs.evaluations;
    if (tr.tau.back() != t) record(tr, t, y);
}

void run_verlet(Trajectory& tr, const StateVec& y0, double tend, const IntegratorOptions& opt,
                const StepObserver& observer) {
    Rhs rhs{tr.chart, tr.params, opt.singular_radius};
    StateVec y = y0;
    double t = 0;
    const bool cyl = tr.chart == Chart::cylindrical;
    // position and momentum slots
    const int pos[3] = {0, 1, 2};
    const int mom[3] = {3, 4, 5};
    try {
        StateVec f = rhs(t, y);
        while (t < tend) {
            if (tr.accepted >= opt.max_steps) {
                tr.status = IntegrationStatus::step_limit;
                tr.diagnostic = "step limit reached";
                break;
            }
            const double dt = std::min(opt.verlet_step, tend - t);
            const StateVec yold = y, fold = f;
            if (cyl) {
                y[3] += 0.5 * dt * f[3];
                y[4] += 0.5 * dt * f[4];
                const double r0 = y[0];
                y[0] += dt * y[3];
                y[1] += dt * y[4];
                if (y[5] != 0) y[2] += 0.5 * dt * y[5] * (1 / (r0 * r0) + 1 / (y[0] * y[0]));
                f = rhs(t + dt, y);
                y[3] += 0.5 * dt * f[3];
                y[4] += 0.5 * dt * f[4];
                f[0] = y[3];
                f[1] = y[4];
            } else {
                for (int i = 0; i < 3; ++i) y[mom[i]] += 0.5 * dt * f[mom[i]];
                for (int i = 0; i < 3; ++i) y[pos[i]] += dt * y[mom[i]];
                f = rhs(t + dt, y);
                for (int i = 0; i < 3; ++i) y[mom[i]] += 0.5 * dt * f[mom[i]];
                for (int i = 0; i < 3; ++i) f[pos[i]] = y[mom[i]];
            }
            const auto seg = dop853::Segment<6>::hermite(t, dt, yold, y, fold, f);
            t = (tend - t <= opt.verlet_step) ? tend : t + dt;
            ++tr.accepted;
            if (opt.keep_samples) record(tr, t, y);
            if (opt.keep_segments) tr.segments.push_back(seg);
            if (observer && !observer(seg)) {
                tr.status = IntegrationStatus::stopped;
                break;
            }
        }
    } catch (const NearSingular& e) {
        tr.status = IntegrationStatus::singular_abort;
        tr.diagnostic = "fixed-step trajectory reached the field zero at tau = " + std::to_string(e.t);
    }
    tr.evaluations = rhs.evaluations;
    if (tr.tau.empty() || tr.tau.back() != t) record(tr, t, y);
}

}  // namespace

Trajectory integrate(const PhaseState& s0, const PotentialParams& params, double tau_end,
                     const IntegratorOptions& opt, const StepObserver& observer) {
    opt.validate();
    if (!(tau_end >= 0)) throw std::invalid_argument("tau_end must be non-negative");
    if (s0.chart == Chart::cylindrical && s0.v[5] != 0 && !(s0.v[0] > 0))
        throw std::invalid_argument("cylindrical state needs r > 0 when p_phi != 0");
    Trajectory tr;
    tr.chart = s0.chart;
    tr.params = params;
    record(tr, 0.0, s0.v);
    if (tau_end == 0) return tr;
    if (at_rest_on_field_zero(s0)) {
        // equilibrium: the subgradient at the field zero contains 0
        record(tr, tau_end, s0.v);
        tr.segments.push_back(dop853::Segment<6>::hermite(0, tau_end, s0.v, s0.v, {}, {}));
        tr.diagnostic = "state at rest on the field zero";
        return tr;
    }
    if (opt.method == Method::dop853)
        run_dop853(tr, s0.v, tau_end, opt, observer);
    else
        run_verlet(tr, s0.v, tau_end, opt, observer);
    return tr;
}

StateVec advance(const StateVec& y, Chart chart, const PotentialParams& params, double h) {
    Rhs rhs{chart, params, kEpsSingular};
    std::array<StateVec, 16> k;
    StateVec ynew;
    try {
        const StateVec f0 = rhs(0, y);
        dop853::step<6>(rhs, 0.0, y, f0, h, k, ynew);
    } catch (const NearSingular&) {
        throw SingularPointError("step evaluated at the field zero");
    }
    return ynew;
}

PhaseState Trajectory::at(double t) const {
    if (segments.empty() || t < segments.front().t0 || t > segments.back().t1() + 1e-12 * std::max(1.0, std::abs(t)))
        throw std::out_of_range("time outside the integrated range");
    auto it = std::upper_bound(segments.begin(), segments.end(), t,
                               [](double v, const dop853::Segment<6>& s) { return v < s.t0; });
    if (it != segments.begin()) --it;
    return {chart, (*it)(t)};
}

double Trajectory::max_energy_drift(double floor) const {
    if (energies.empty()) return 0;
    const double e0 = energies.front();
    const double den = std::max(std::abs(e0), floor);
    double m = 0;
    for (double e : energies) m = std::max(m, std::abs(e - e0));
    return den > 0 ? m / den : m;
}

double Trajectory::max_p_phi_drift() const {
    if (p_phi.empty()) return 0;
    double m = 0;
    for (double l : p_phi) m = std::max(m, std::abs(l - p_phi.front()));
    return m;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    out << "tau,r,z,p_r,p_z,phi,x,y,energy\n";
    char buf[512];
    for (std::size_t i = 0; i < traj.tau.size(); ++i) {
        const auto& s = traj.states[i];
        double r, z, pr, pz, phi, x, y;
        if (s.chart == Chart::cylindrical) {
            r = s.v[0], z = s.v[1], phi = s.v[2], pr = s.v[3], pz = s.v[4];
            x = r * std::cos(phi), y = r * std::sin(phi);
        } else {
            const auto c = convert_chart(s);
            r = c.v[0], z = c.v[1], phi = c.v[2], pr = c.v[3], pz = c.v[4];
            x = s.v[0], y = s.v[1];
        }
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", traj.tau[i], r, z, pr,
                      pz, phi, x, y, traj.energies[i]);
        out << buf;
    }
}

namespace {

constexpr char kMagic[4] = {'Q', 'T', 'R', 'J'};

template <class T>
void put_le(std::ostream& out, T v) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
    out.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get_le(std::istream& in) {
    unsigned char b[sizeof(T)];
    if (!in.read(reinterpret_cast<char*>(b), sizeof(T))) throw std::runtime_error("truncated trajectory file");
    if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
    T v;
    std::memcpy(&v, b, sizeof(T));
    return v;
}

}  // namespace

// Layout: "QTRJ", u32 chart tag, u64 count, then count records of
// 8 f64 values (tau, six state slots, energy).
void write_trajectory_binary(std::ostream& out, const Trajectory& traj) {
    out.write(kMagic, 4);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(traj.chart));
    put_le<std::uint64_t>(out, traj.tau.size());
    for (std::size_t i = 0; i < traj.tau.size(); ++i) {
        put_le<double>(out, traj.tau[i]);
        for (double v : traj.states[i].v) put_le<double>(out, v);
        put_le<double>(out, traj.energies[i]);
    }
}

BinaryTrajectory read_trajectory_binary(std::istream& in) {
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) throw std::runtime_error("not a trajectory dump");
    BinaryTrajectory bt;
    const auto tag = get_le<std::uint32_t>(in);
    if (tag > 1) throw std::runtime_error("unknown chart tag");
    bt.chart = static_cast<Chart>(tag);
    const auto n = get_le<std::uint64_t>(in);
    for (std::uint64_t i = 0; i < n; ++i) {
        bt.tau.push_back(get_le<double>(in));
        StateVec s;
        for (double& v : s) v = get_le<double>(in);
        bt.states.push_back(s);
        bt.energies.push_back(get_le<double>(in));
    }
    return bt;
}

}  // namespace quadtrap
