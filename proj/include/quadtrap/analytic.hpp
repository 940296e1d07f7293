#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "quadtrap/potential.hpp"

namespace quadtrap {

// Three variable systems appear below.
//   physical:  (r, z, tau, p, h) with parameters sigma, delta
//   sigma-scaled: tau_s = sqrt(sigma) tau, p_s = p / sqrt(sigma), h_s = h / sigma,
//                 lengths unchanged, single parameter eta = delta / sigma
//   rescaled: r^ = eta r, z^ = eta z, t^ = sqrt(eta) tau_s, p^ = sqrt(eta) p_s,
//             h^ = eta h_s, c^2 = eta^3 p_phi_s^2
// Each system has its own struct so that values cannot be mixed silently.

struct PhysicalOrbit {
    double h = 0;
    double p_phi = 0;
};

struct SigmaScaledOrbit {
    double eta = 0;
    double h = 0;
    double p_phi = 0;
};

struct RescaledOrbit {
    double h = 0;
    double c2 = 0;  // c_z^2
};

struct ScaleMap {
    double sigma = 1;
    double eta = 0;

    explicit ScaleMap(const PotentialParams& p);
    ScaleMap(double sigma, double eta);

    SigmaScaledOrbit to_sigma(const PhysicalOrbit& o) const;
    PhysicalOrbit to_physical(const SigmaScaledOrbit& o) const;
    RescaledOrbit to_rescaled(const SigmaScaledOrbit& o) const;
    SigmaScaledOrbit from_rescaled(const RescaledOrbit& o, bool positive_p_phi = true) const;

    double time_to_sigma(double tau) const;
    double time_from_sigma(double tau_s) const;
    double momentum_to_sigma(double p) const;
    double momentum_from_sigma(double p_s) const;

    double length_to_rescaled(double r) const;
    double length_from_rescaled(double r_hat) const;
    double time_to_rescaled(double tau_s) const;
    double time_from_rescaled(double t_hat) const;
    double momentum_to_rescaled(double p_s) const;
    double momentum_from_rescaled(double p_hat) const;
};

// Rescaled potentials.
double V_z_rescaled(double z);
double V_r_rescaled(double r, double c2);
double dV_r_rescaled(double r, double c2);

struct ZAxisMotion {
    double h = 0;          // rescaled h_z
    double T = 0;          // half period
    double amplitude = 0;  // sqrt(1 + 8h) / 4

    double z(double t) const;
    double zdot(double t) const;
    double period() const { return 2 * T; }
};

ZAxisMotion z_axis_solution(double h_z);
std::pair<double, double> z_turning_points(double h_z);

struct TurningPoints {
    double r1 = 0;
    double r2 = 0;
    double m0 = 0;
    double D2 = 0;
    double alpha = 0;
    double r_min = 0;
    double bound = 0;  // critical c^2 for the given energy
    bool degenerate = false;
};

class NoLibrationError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Rescaled variables: roots of r^4 + r^3 - 2 h r^2 + c^2.
TurningPoints radial_turning_points(double h_r, double c_z);
double radial_c2_bound(double h_r);

struct RadialMinimum {
    double r_min = 0;
    double m00 = 0;
    double D1 = 0;
    double beta = 0;
};

// Rescaled variables: positive root of r^4 + r^3 / 2 - c^2.
RadialMinimum radial_minimum_data(double c_z);
double radial_minimum(double c_z);

// Real roots of a polynomial (coefficients highest degree first) from the
// companion-matrix eigenvalues.
std::vector<double> real_polynomial_roots(const std::vector<double>& coeffs, double imag_tol = 1e-9);

struct CnCandidate {
    double m = 0;
    double omega = 0;
    double p1 = 0;
    double p2 = 0;
    bool valid = false;
    std::string note;
};

// Radial orbit in sigma-scaled variables with turning radius u,
// angular momentum c and parameter eta:
//   r(s) = (N1 + N2 cn(omega s | m)) / (D1c + D2c cn(omega s | m))
// s is a Sundman time with d tau = r ds.
struct CnOrbit {
    double u = 0;
    double c = 0;
    double eta = 0;
    double h = 0;  // (c^2 + eta u^4 + u^3) / (2 u^2)
    double m = 0;
    double omega = 0;
    double N1 = 0, N2 = 0, D1c = 0, D2c = 0;
    double other_turning_point = 0;
    double s_period = 0;
    double tau_period = 0;
    double p1_residual = 0;
    double p2_residual = 0;
    std::vector<CnCandidate> candidates;

    double r_of_s(double s) const;
    double drds(double s) const;
    double tau_of_s(double s) const;
    double s_of_tau(double tau) const;
    double r_of_tau(double tau) const;

    // (dr/ds)^2 - (r-u)/u^2 [c^2(r+u) - r^2 u^2 (1 + eta (r+u))]
    double residual_s(double s) const;
    // (dr/dtau)^2 - (r-u)/(u^2 r^2) [c^2(r+u) - r^2 u^2 (1 + eta (r+u))]
    double residual_tau(double tau) const;

    std::vector<double> tau_grid_;  // tau at s_k = k s_period / n
    double ds_ = 0;
};

class CnOrbitError : public std::runtime_error {
public:
    CnOrbitError(const std::string& what, std::vector<CnCandidate> c)
        : std::runtime_error(what), candidates(std::move(c)) {}
    std::vector<CnCandidate> candidates;
};

double cn_p1(double m, double omega, double u, double c, double eta);
double cn_p2(double m, double omega, double u, double c, double eta);
// Bracketed factor of the resultant, a cubic in W = omega^4, highest degree first.
std::vector<double> cn_resultant_cubic(double u, double c, double eta);

CnOrbit solve_cn_orbit(double u, double c, double eta);

}  // namespace quadtrap
