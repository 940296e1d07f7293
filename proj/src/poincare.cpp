#include "quadtrap/poincare.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>

#include <boost/math/tools/roots.hpp>

namespace quadtrap {

namespace {

constexpr std::size_t kR = 0, kZ = 1, kPr = 3, kPz = 4;

double bracket_root(const std::function<double(double)>& f, double a, double b) {
    boost::uintmax_t iters = 200;
    const auto res = boost::math::tools::toms748_solve(f, a, b, boost::math::tools::eps_tolerance<double>(52), iters);
    return 0.5 * (res.first + res.second);
}

}  // namespace

void SectionSpec::validate() const {
    if (!std::isfinite(h)) throw std::invalid_argument("h must be finite");
    if (!std::isfinite(p_phi)) throw std::invalid_argument("p_phi must be finite");
    if (n_crossings < 1) throw std::invalid_argument("n_crossings must be at least 1");
    if (!(tau_limit >= 0)) throw std::invalid_argument("tau_limit must be non-negative");
}

double SectionSpec::effective_tau_limit() const {
    return tau_limit > 0 ? tau_limit : 1000.0 * (n_crossings + 1);
}

double section_effective_potential(double r, double p_phi, const PotentialParams& params) {
    if (r == 0 && p_phi != 0) throw SingularPointError("centrifugal term is singular at r = 0");
    const double cent = p_phi == 0 ? 0.0 : p_phi * p_phi / (2 * r * r);
    return cent + 0.5 * params.sigma * std::abs(r) + 0.5 * params.delta * r * r;
}

PhaseState seed_from_energy(double h, double p_phi, double r, double p_r, const PotentialParams& params) {
    if (r < 0 && p_phi != 0) throw std::domain_error("negative radius needs p_phi = 0");
    const double k = h - section_effective_potential(r, p_phi, params) - 0.5 * p_r * p_r;
    if (!(k > 0)) throw std::domain_error("point outside energy surface");
    return PhaseState::cylindrical(r, 0, 0, p_r, std::sqrt(2 * k), p_phi);
}

std::pair<double, double> section_turning_points(double h, double p_phi, const PotentialParams& params) {
    const double sigma = params.sigma, delta = params.delta;
    if (!(h > 0)) throw std::domain_error("energy must be positive");
    if (p_phi == 0) {
        const double r2 = 4 * h / (sigma + std::sqrt(sigma * sigma + 8 * delta * h));
        return {-r2, r2};
    }
    const double p2 = p_phi * p_phi;
    auto veff = [&](double r) { return section_effective_potential(r, p_phi, params) - h; };
    auto dveff = [&](double r) { return -p2 / (r * r * r) + 0.5 * sigma + delta * r; };
    // minimum of V_eff: dveff < 0 below, > 0 above
    double hi = 1;
    while (dveff(hi) <= 0) hi *= 2;
    double lo = hi;
    while (dveff(lo) >= 0) lo /= 2;
    const double rstar = bracket_root(dveff, lo, hi);
    if (veff(rstar) >= 0) throw std::domain_error("energy below the effective-potential minimum");
    const double left = std::abs(p_phi) / std::sqrt(2 * h);
    const double right = 2 * h / sigma;
    const double r1 = veff(left) == 0 ? left : bracket_root(veff, left, rstar);
    const double r2 = veff(right) == 0 ? right : bracket_root(veff, rstar, right);
    return {r1, r2};
}

std::vector<SectionSeed> default_seed_grid(const SectionSpec& spec, const PotentialParams& params, int n) {
    if (n < 1) throw std::invalid_argument("seed count must be at least 1");
    const auto [r1, r2] = section_turning_points(spec.h, spec.p_phi, params);
    std::vector<SectionSeed> seeds;
    for (int i = 0; i < n; ++i) seeds.push_back({i, r1 + (r2 - r1) * (i + 1) / (n + 1), 0.0});
    return seeds;
}

SeedResult section_for_seed(const SectionSpec& spec, const SectionSeed& seed, const PotentialParams& params,
                            const IntegratorOptions& opt) {
    spec.validate();
    SeedResult out;
    out.seed_id = seed.id;
    if (seed.r == 0 && seed.p_r == 0 && spec.p_phi == 0) {
        out.transversal = false;
        out.note = "non-transversal: seed moves on the z axis";
        return out;
    }
    const PhaseState s0 = seed_from_energy(spec.h, spec.p_phi, seed.r, seed.p_r, params);

    IntegratorOptions o = opt;
    o.keep_samples = false;
    o.keep_segments = false;

    auto observer = [&](const dop853::Segment<6>& seg) {
        const double za = seg.y0[kZ];
        const double zb = seg.component(seg.t1(), kZ);
        if (!(za < 0 && zb >= 0)) return true;
        // bisection + Newton on the interpolant
        double a = seg.t0, b = seg.t1();
        double t = b;
        if (zb != 0) {
            t = a + (b - a) * (-za) / (zb - za);
            for (int it = 0; it < 100; ++it) {
                const double z = seg.component(t, kZ);
                if (z < 0) a = t;
                else b = t;
                const double pz = seg.component(t, kPz);
                double next = pz > 0 ? t - z / pz : 0.5 * (a + b);
                if (!(next > a && next < b)) next = 0.5 * (a + b);
                if (std::abs(next - t) <= 1e-16 * std::max(1.0, std::abs(t)) || b - a <= 1e-16 * std::max(1.0, b)) {
                    t = next;
                    break;
                }
                t = next;
            }
        }
        // polish on the flow itself
        StateVec y = advance(seg.y0, Chart::cylindrical, params, t - seg.t0);
        for (int it = 0; it < 5 && std::abs(y[kZ]) >= 1e-12; ++it) {
            const double dt = -y[kZ] / y[kPz];
            y = advance(y, Chart::cylindrical, params, dt);
            t += dt;
        }
        SectionPoint p;
        p.seed_id = seed.id;
        p.index = static_cast<int>(out.points.size());
        p.tau = t;
        p.r = y[kR];
        p.p_r = y[kPr];
        p.z = y[kZ];
        p.p_z = y[kPz];
        p.energy = energy(PhaseState{Chart::cylindrical, y}, params);
        out.points.push_back(p);
        return static_cast<int>(out.points.size()) < spec.n_crossings;
    };

    const Trajectory tr = integrate(s0, params, spec.effective_tau_limit(), o, observer);
    out.status = tr.status == IntegrationStatus::stopped ? IntegrationStatus::completed : tr.status;
    if (tr.status != IntegrationStatus::stopped && static_cast<int>(out.points.size()) < spec.n_crossings) {
        if (out.status == IntegrationStatus::completed) out.status = IntegrationStatus::step_limit;
        out.note = "stopped after " + std::to_string(out.points.size()) + " crossings: " +
                   (tr.diagnostic.empty() ? to_string(tr.status) : tr.diagnostic);
    }
    return out;
}

std::vector<SeedResult> compute_section(const SectionSpec& spec, const std::vector<SectionSeed>& seeds,
                                        const PotentialParams& params, const IntegratorOptions& opt,
                                        unsigned threads) {
    spec.validate();
    opt.validate();
    std::vector<SeedResult> results(seeds.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < seeds.size(); i = next++) {
            try {
                results[i] = section_for_seed(spec, seeds[i], params, opt);
            } catch (const std::exception& e) {
                results[i].seed_id = seeds[i].id;
                results[i].status = IntegrationStatus::singular_abort;
                results[i].transversal = false;
                results[i].note = e.what();
            }
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(seeds.size(), 1)));
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned k = 0; k < threads; ++k) pool.emplace_back(work);
    }
    std::stable_sort(results.begin(), results.end(),
                     [](const SeedResult& a, const SeedResult& b) { return a.seed_id < b.seed_id; });
    return results;
}

Periodicity detect_periodicity(const std::vector<std::pair<double, double>>& pts, double tol) {
    if (pts.size() < 2) throw std::invalid_argument("periodicity needs at least two section points");
    const std::size_t n = pts.size();
    for (std::size_t k = 1; k < n; ++k) {
        bool all = true;
        for (std::size_t i = 0; i + k < n && all; ++i)
            all = std::hypot(pts[i + k].first - pts[i].first, pts[i + k].second - pts[i].second) < tol;
        if (all) return {true, static_cast<int>(k)};
    }
    return {false, 0};
}

Periodicity detect_periodicity(const std::vector<SectionPoint>& points, double tol) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(points.size());
    for (const auto& p : points) pts.emplace_back(p.r, p.p_r);
    return detect_periodicity(pts, tol);
}

void write_section_csv(std::ostream& out, const std::vector<SeedResult>& results) {
    out << "seed_id,crossing_index,tau,r,p_r\n";
    char buf[160];
    for (const auto& res : results)
        for (const auto& p : res.points) {
            std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g\n", p.seed_id, p.index, p.tau, p.r, p.p_r);
            out << buf;
        }
}

}  // namespace quadtrap
