#include "quadtrap/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss.hpp>

#include "quadtrap/jacobi.hpp"

namespace quadtrap {

ScaleMap::ScaleMap(const PotentialParams& p) : ScaleMap(p.sigma, p.eta) {}

ScaleMap::ScaleMap(double sigma_, double eta_) : sigma(sigma_), eta(eta_) {
    if (!(sigma > 0)) throw std::invalid_argument("sigma must be positive");
    if (!(eta >= 0)) throw std::invalid_argument("eta must be non-negative");
}

SigmaScaledOrbit ScaleMap::to_sigma(const PhysicalOrbit& o) const {
    return {eta, o.h / sigma, o.p_phi / std::sqrt(sigma)};
}

PhysicalOrbit ScaleMap::to_physical(const SigmaScaledOrbit& o) const {
    return {o.h * sigma, o.p_phi * std::sqrt(sigma)};
}

RescaledOrbit ScaleMap::to_rescaled(const SigmaScaledOrbit& o) const {
    if (!(eta > 0)) throw std::domain_error("the rescaled system needs eta > 0");
    return {eta * o.h, eta * eta * eta * o.p_phi * o.p_phi};
}

SigmaScaledOrbit ScaleMap::from_rescaled(const RescaledOrbit& o, bool positive_p_phi) const {
    if (!(eta > 0)) throw std::domain_error("the rescaled system needs eta > 0");
    const double p = std::sqrt(o.c2 / (eta * eta * eta));
    return {eta, o.h / eta, positive_p_phi ? p : -p};
}

double ScaleMap::time_to_sigma(double tau) const { return std::sqrt(sigma) * tau; }
double ScaleMap::time_from_sigma(double tau_s) const { return tau_s / std::sqrt(sigma); }
double ScaleMap::momentum_to_sigma(double p) const { return p / std::sqrt(sigma); }
double ScaleMap::momentum_from_sigma(double p_s) const { return p_s * std::sqrt(sigma); }
double ScaleMap::length_to_rescaled(double r) const { return eta * r; }
double ScaleMap::length_from_rescaled(double r_hat) const { return r_hat / eta; }
double ScaleMap::time_to_rescaled(double tau_s) const { return std::sqrt(eta) * tau_s; }
double ScaleMap::time_from_rescaled(double t_hat) const { return t_hat / std::sqrt(eta); }
double ScaleMap::momentum_to_rescaled(double p_s) const { return std::sqrt(eta) * p_s; }
double ScaleMap::momentum_from_rescaled(double p_hat) const { return p_hat / std::sqrt(eta); }

double V_z_rescaled(double z) { return 2 * z * z + std::abs(z); }

double V_r_rescaled(double r, double c2) { return c2 / (2 * r * r) + r * r / 2 + r / 2; }

double dV_r_rescaled(double r, double c2) { return -c2 / (r * r * r) + r + 0.5; }

double ZAxisMotion::z(double t) const {
    if (T == 0) return 0;
    double u = std::fmod(t, 2 * T);
    if (u < 0) u += 2 * T;
    if (u <= T) return -0.25 + amplitude * std::cos(2 * u - T);
    return 0.25 - amplitude * std::cos(2 * u - 3 * T);
}

double ZAxisMotion::zdot(double t) const {
    if (T == 0) return 0;
    double u = std::fmod(t, 2 * T);
    if (u < 0) u += 2 * T;
    if (u <= T) return -2 * amplitude * std::sin(2 * u - T);
    return 2 * amplitude * std::sin(2 * u - 3 * T);
}

ZAxisMotion z_axis_solution(double h_z) {
    if (!(h_z > 0)) throw std::domain_error("z-axis energy must be positive");
    ZAxisMotion m;
    m.h = h_z;
    const double s = std::sqrt(1 + 8 * h_z);
    m.amplitude = s / 4;
    m.T = std::acos(1 / s);
    return m;
}

std::pair<double, double> z_turning_points(double h_z) {
    if (!(h_z > 0)) throw std::domain_error("z-axis energy must be positive");
    // -1/4 + sqrt(1+8h)/4 without cancellation
    const double z2 = 2 * h_z / (1 + std::sqrt(1 + 8 * h_z));
    return {-z2, z2};
}

double radial_c2_bound(double h) {
    return 27.0 / 512 + 9.0 / 16 * h + h * h - std::pow(9.0 / 64 + h, 1.5);
}

RadialMinimum radial_minimum_data(double c_z) {
    RadialMinimum out;
    const double c2 = c_z * c_z;
    if (c2 == 0) return out;
    out.beta = std::asinh(-3.0 / 64 * std::sqrt(3 / c2)) / 3;
    out.m00 = 1.0 / 32 + 2 * std::sqrt(c2 / 3) * std::sinh(out.beta);
    out.D1 = 3.0 / 16 - 2 * out.m00 + 1 / (32 * std::sqrt(2 * out.m00));
    double r = -1.0 / 8 - 0.5 * std::sqrt(2 * out.m00) + 0.5 * std::sqrt(std::max(out.D1, 0.0));
    // the closed form cancels badly for small c; polish on r^4 + r^3/2 - c^2
    if (!(r > 0)) r = std::cbrt(2 * c2);
    for (int i = 0; i < 3; ++i) {
        const double f = ((r + 0.5) * r) * r * r - c2;
        const double df = (4 * r + 1.5) * r * r;
        r -= f / df;
    }
    out.r_min = r;
    return out;
}

double radial_minimum(double c_z) { return radial_minimum_data(c_z).r_min; }

TurningPoints radial_turning_points(double h, double c_z) {
    if (!(h > 0)) throw NoLibrationError("radial energy must be positive");
    TurningPoints tp;
    const double c2 = c_z * c_z;
    tp.bound = radial_c2_bound(h);
    tp.r_min = radial_minimum(c_z);
    const double vmin = c2 > 0 ? V_r_rescaled(tp.r_min, c2) : 0.0;
    if (h < vmin - 1e-10 * std::max(1.0, vmin)) throw NoLibrationError("energy below the effective-potential minimum");
    tp.degenerate = std::abs(h - vmin) <= 1e-10 * std::max(1.0, vmin);
    if (!tp.degenerate && c2 >= tp.bound) throw NoLibrationError("c_z^2 above the critical bound");

    const double g = 1 + 3 * c2 / (h * h);
    double arg = (-1 + 27.0 / 16 * c2 / (h * h * h) + 9 * c2 / (h * h)) / std::pow(g, 1.5);
    arg = std::clamp(arg, -1.0, 1.0);
    tp.alpha = std::acos(arg) / 3;
    tp.m0 = 1.0 / 8 + 2.0 / 3 * h * (1 + std::sqrt(g) * std::cos(tp.alpha));
    tp.D2 = 0.75 + 4 * h - 2 * tp.m0 - (1.0 / 8 + h) * std::sqrt(2 / tp.m0);
    if (tp.degenerate) {
        tp.r1 = tp.r2 = tp.r_min;
        return tp;
    }
    const double sd = std::sqrt(std::max(tp.D2, 0.0));
    const double s0 = std::sqrt(2 * tp.m0);
    tp.r1 = -0.25 + 0.5 * (s0 - sd);
    tp.r2 = -0.25 + 0.5 * (s0 + sd);
    return tp;
}

std::vector<double> real_polynomial_roots(const std::vector<double>& coeffs, double imag_tol) {
    std::size_t lead = 0;
    while (lead < coeffs.size() && coeffs[lead] == 0) ++lead;
    std::vector<double> a(coeffs.begin() + static_cast<long>(lead), coeffs.end());
    std::vector<double> roots;
    // trailing zero coefficients are roots at 0
    while (a.size() > 1 && a.back() == 0) {
        roots.push_back(0.0);
        a.pop_back();
    }
    const int n = static_cast<int>(a.size()) - 1;
    if (n < 1) return roots;
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j) comp(0, j) = -a[j + 1] / a[0];
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1;
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    auto eval = [&](double x, double& d) {
        double p = a[0];
        d = 0;
        for (int i = 1; i <= n; ++i) {
            d = d * x + p;
            p = p * x + a[i];
        }
        return p;
    };
    for (int i = 0; i < n; ++i) {
        const std::complex<double> z = es.eigenvalues()(i);
        if (std::abs(z.imag()) > imag_tol * std::max(1.0, std::abs(z))) continue;
        double x = z.real();
        for (int it = 0; it < 8; ++it) {
            double d;
            const double p = eval(x, d);
            if (d == 0) break;
            const double step = p / d;
            x -= step;
            if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(x))) break;
        }
        roots.push_back(x);
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

double cn_p1(double m, double omega, double u, double c, double eta) {
    const double c2 = c * c, u3 = u * u * u, u4 = u3 * u, u6 = u3 * u3;
    const double w4 = std::pow(omega, 4);
    const double S = c2 * c2 + 2 * c2 * u3 * (7 * eta * u + 1) + u6 * (eta * u + 1) * (eta * u + 1);
    return S - (16 * (m - 1) * m + 1) * u4 * w4;
}

double cn_p2(double m, double omega, double u, double c, double eta) {
    const double c2 = c * c, c4 = c2 * c2, c6 = c4 * c2;
    const double u3 = u * u * u, u4 = u3 * u, u6 = u3 * u3;
    const double w2 = omega * omega, w4 = w2 * w2, w6 = w4 * w2;
    return 96 * c6 + 96 * c4 * u3 * (13 * eta * u + 2) + 2 * (16 * (m - 1) * m + 1) * u4 * w4 * (eta * u4 + u3 - 47 * c2) +
           3 * c2 * u6 * (32 * eta * u + 23) + 2 * (2 * m * (16 * m * (2 * m - 3) + 15) + 1) * u6 * w6;
}

std::vector<double> cn_resultant_cubic(double u, double c, double eta) {
    const double c2 = c * c;
    const double u2 = u * u, u3 = u2 * u, u4 = u3 * u, u5 = u4 * u, u6 = u3 * u3;
    const double S = c2 * c2 + 2 * c2 * u3 * (7 * eta * u + 1) + u6 * (eta * u + 1) * (eta * u + 1);
    const double f = 2 * eta * u4 + u3 - 2 * c2;
    const double e1 = eta * u + 1;
    const double C0 =
        c2 * f * f * (4 * c2 * c2 * eta + c2 * u2 * (4 * eta * u * (5 - 2 * eta * u) + 1) + 4 * u5 * e1 * e1 * e1);
    return {u4 * u4, -u4 * S, 0.0, C0};
}

namespace {

struct Coefficients {
    double N1, N2, D1c, D2c;
};

Coefficients cn_coefficients(double m, double w, double u, double c, double eta) {
    const double c2 = c * c, u2 = u * u, u3 = u2 * u, w2 = w * w;
    Coefficients k;
    k.N1 = 5 * c2 * u - u3 * ((eta * u + 1) * u + (4 * m - 5) * w2);
    k.N2 = u3 * ((eta * u + 1) * u + (4 * m + 1) * w2) - 5 * c2 * u;
    k.D1c = u2 * (u * (5 * eta * u + 2) + (5 - 4 * m) * w2) - c2;
    k.D2c = c2 + u2 * ((4 * m + 1) * w2 - u * (5 * eta * u + 2));
    return k;
}

double s_period_for(double m, double w) {
    if (m >= 0 && m <= 1) return 4 * elliptic_K(m) / w;
    if (m < 0) {
        const double mu = -m;
        return 4 * elliptic_K(mu / (1 + mu)) / (w * std::sqrt(1 + mu));
    }
    return 2 * elliptic_K(1 / m) / (w * std::sqrt(m));
}

// Newton on (p1, p2) in (m, omega) with a finite-difference Jacobian.
void polish(double& m, double& w, double u, double c, double eta) {
    for (int it = 0; it < 20; ++it) {
        const double f1 = cn_p1(m, w, u, c, eta), f2 = cn_p2(m, w, u, c, eta);
        const double hm = 1e-7 * std::max(1.0, std::abs(m)), hw = 1e-7 * std::max(1e-3, std::abs(w));
        const double a11 = (cn_p1(m + hm, w, u, c, eta) - cn_p1(m - hm, w, u, c, eta)) / (2 * hm);
        const double a12 = (cn_p1(m, w + hw, u, c, eta) - cn_p1(m, w - hw, u, c, eta)) / (2 * hw);
        const double a21 = (cn_p2(m + hm, w, u, c, eta) - cn_p2(m - hm, w, u, c, eta)) / (2 * hm);
        const double a22 = (cn_p2(m, w + hw, u, c, eta) - cn_p2(m, w - hw, u, c, eta)) / (2 * hw);
        const double det = a11 * a22 - a12 * a21;
        if (det == 0 || !std::isfinite(det)) return;
        const double dm = (f1 * a22 - f2 * a12) / det;
        const double dw = (a11 * f2 - a21 * f1) / det;
        const double m_new = m - dm, w_new = w - dw;
        const double before = std::abs(f1) + std::abs(f2);
        const double after = std::abs(cn_p1(m_new, w_new, u, c, eta)) + std::abs(cn_p2(m_new, w_new, u, c, eta));
        if (!(after < before) || w_new <= 0) return;
        m = m_new;
        w = w_new;
        if (std::abs(dm) < 1e-16 * std::max(1.0, std::abs(m)) && std::abs(dw) < 1e-16 * w) return;
    }
}

// Positive roots of eta r^4 + r^3 - 2 h r^2 + c^2 other than u.
double other_turning_point(double u, double c, double eta, double h) {
    const auto roots = real_polynomial_roots({eta, 1.0, -2 * h, 0.0, c * c});
    double best = std::numeric_limits<double>::quiet_NaN();
    double best_gap = -1;
    for (double r : roots) {
        if (r <= 0) continue;
        const double gap = std::abs(r - u);
        if (gap <= 1e-9 * std::max(1.0, u)) continue;
        if (best_gap < 0 || gap < best_gap) {
            best_gap = gap;
            best = r;
        }
    }
    return best;
}

}  // namespace

double CnOrbit::r_of_s(double s) const {
    const double C = jacobi_sncndn_real(omega * s, m).cn;
    return (N1 + N2 * C) / (D1c + D2c * C);
}

double CnOrbit::drds(double s) const {
    const auto j = jacobi_sncndn_real(omega * s, m);
    const double den = D1c + D2c * j.cn;
    return (N2 * D1c - N1 * D2c) / (den * den) * (-omega * j.sn * j.dn);
}

namespace {

double integrate_r(const CnOrbit& o, double a, double b) {
    if (a == b) return 0;
    return boost::math::quadrature::gauss<double, 20>::integrate([&](double s) { return o.r_of_s(s); }, a, b);
}

}  // namespace

double CnOrbit::tau_of_s(double s) const {
    const double k = std::floor(s / s_period);
    const double rem = s - k * s_period;
    std::size_t j = std::min(static_cast<std::size_t>(rem / ds_), tau_grid_.size() - 2);
    const double sj = static_cast<double>(j) * ds_;
    return k * tau_period + tau_grid_[j] + integrate_r(*this, sj, rem);
}

double CnOrbit::s_of_tau(double tau) const {
    const double k = std::floor(tau / tau_period);
    const double rem = tau - k * tau_period;
    auto it = std::upper_bound(tau_grid_.begin(), tau_grid_.end(), rem);
    std::size_t j = it == tau_grid_.begin() ? 0 : static_cast<std::size_t>(it - tau_grid_.begin()) - 1;
    j = std::min(j, tau_grid_.size() - 2);
    const double sj = static_cast<double>(j) * ds_;
    double lo = sj, hi = sj + ds_;
    const double t0 = tau_grid_[j];
    double s = lo + (rem - t0) / (tau_grid_[j + 1] - t0) * ds_;
    for (int iter = 0; iter < 60; ++iter) {
        const double f = t0 + integrate_r(*this, sj, s) - rem;
        if (f > 0) hi = std::min(hi, s);
        else lo = std::max(lo, s);
        double next = s - f / r_of_s(s);
        if (!(next > lo && next < hi)) next = (lo + hi) / 2;
        if (std::abs(next - s) <= 1e-15 * std::max(1.0, s)) {
            s = next;
            break;
        }
        s = next;
    }
    return k * s_period + s;
}

double CnOrbit::r_of_tau(double tau) const { return r_of_s(s_of_tau(tau)); }

double CnOrbit::residual_s(double s) const {
    const double r = r_of_s(s);
    const double d = drds(s);
    return d * d - (r - u) / (u * u) * (c * c * (r + u) - r * r * u * u * (1 + eta * (r + u)));
}

double CnOrbit::residual_tau(double tau) const {
    const double s = s_of_tau(tau);
    const double r = r_of_s(s);
    const double d = drds(s) / r;
    return d * d - (r - u) / (u * u * r * r) * (c * c * (r + u) - r * r * u * u * (1 + eta * (r + u)));
}

CnOrbit solve_cn_orbit(double u, double c, double eta) {
    if (!(u > 0)) throw std::invalid_argument("turning radius must be positive");
    if (c == 0) throw std::invalid_argument("cn orbit needs non-zero angular momentum");
    if (!(eta >= 0)) throw std::invalid_argument("eta must be non-negative");
    const double h = (c * c + eta * u * u * u * u + u * u * u) / (2 * u * u);
    const double other = other_turning_point(u, c, eta, h);
    if (!std::isfinite(other)) throw CnOrbitError("u is not a turning point of a librating orbit", {});
    const double lo = std::min(u, other), hi = std::max(u, other);

    const double u3 = u * u * u, u4 = u3 * u;
    const double S = std::pow(c, 4) + 2 * c * c * u3 * (7 * eta * u + 1) + u3 * u3 * (eta * u + 1) * (eta * u + 1);
    std::vector<CnCandidate> cands;
    for (double W : real_polynomial_roots(cn_resultant_cubic(u, c, eta))) {
        if (!(W > 0)) continue;
        const double q = S / (u4 * W);
        const double disc = 3 + q;
        if (disc < 0) continue;
        for (double sign : {-1.0, 1.0}) {
            CnCandidate cand;
            cand.m = 0.5 + sign * std::sqrt(disc) / 4;
            cand.omega = std::pow(W, 0.25);
            polish(cand.m, cand.omega, u, c, eta);
            cand.p1 = cn_p1(cand.m, cand.omega, u, c, eta);
            cand.p2 = cn_p2(cand.m, cand.omega, u, c, eta);
            const double scale = std::max({std::pow(c, 6), S * S / (u4 * u4), 1e-300});
            if (std::abs(cand.p2) > 1e-8 * scale) {
                cand.note = "p2 not satisfied";
                cands.push_back(cand);
                continue;
            }
            // geometric check over one period
            CnOrbit trial;
            trial.u = u, trial.c = c, trial.eta = eta, trial.m = cand.m, trial.omega = cand.omega;
            const auto k = cn_coefficients(cand.m, cand.omega, u, c, eta);
            trial.N1 = k.N1, trial.N2 = k.N2, trial.D1c = k.D1c, trial.D2c = k.D2c;
            const double P = s_period_for(cand.m, cand.omega);
            bool ok = std::isfinite(P) && P > 0;
            double worst = 0;
            for (int i = 0; ok && i <= 64; ++i) {
                const double s = P * i / 64;
                const double r = trial.r_of_s(s);
                const double tol = 1e-7 * std::max(1.0, hi);
                if (!std::isfinite(r) || r < lo - tol || r > hi + tol) ok = false;
                worst = std::max(worst, std::abs(trial.residual_s(s)));
            }
            cand.valid = ok;
            cand.note = ok ? "ok" : "leaves the turning-point interval";
            cands.push_back(cand);
        }
    }

    auto rank = [](double m) { return (m >= 0 && m <= 1) ? 0 : (m < 0 ? 1 : 2); };
    const CnCandidate* best = nullptr;
    for (const auto& cand : cands)
        if (cand.valid && (!best || rank(cand.m) < rank(best->m))) best = &cand;
    if (!best) throw CnOrbitError("no admissible (m, omega) pair", cands);

    CnOrbit o;
    o.u = u, o.c = c, o.eta = eta, o.h = h;
    o.m = best->m;
    o.omega = best->omega;
    o.p1_residual = best->p1;
    o.p2_residual = best->p2;
    o.candidates = cands;
    o.other_turning_point = other;
    const auto k = cn_coefficients(o.m, o.omega, u, c, eta);
    o.N1 = k.N1, o.N2 = k.N2, o.D1c = k.D1c, o.D2c = k.D2c;
    o.s_period = s_period_for(o.m, o.omega);
    constexpr std::size_t n = 256;
    o.ds_ = o.s_period / n;
    o.tau_grid_.assign(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        o.tau_grid_[i + 1] = o.tau_grid_[i] + integrate_r(o, static_cast<double>(i) * o.ds_, static_cast<double>(i + 1) * o.ds_);
    o.tau_period = o.tau_grid_.back();
    return o;
}

}  // namespace quadtrap
