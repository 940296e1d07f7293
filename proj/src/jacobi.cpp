#include "quadtrap/jacobi.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace quadtrap {

namespace {

void check_parameter(double m) {
    if (!(m >= 0 && m <= 1)) throw std::domain_error("elliptic parameter m must lie in [0, 1]");
}

}  // namespace

JacobiSnCnDn jacobi_sncndn(double x, double m) {
    check_parameter(m);
    if (m == 0) return {std::sin(x), std::cos(x), 1.0};
    if (m == 1) {
        const double s = 1 / std::cosh(x);
        return {std::tanh(x), s, s};
    }
    constexpr int kMax = 16;
    double a[kMax + 1], c[kMax + 1];
    a[0] = 1;
    double b = std::sqrt(1 - m);
    c[0] = std::sqrt(m);
    int n = 0;
    while (std::abs(c[n]) > 1e-16 * a[n] && n < kMax) {
        a[n + 1] = (a[n] + b) / 2;
        c[n + 1] = (a[n] - b) / 2;
        b = std::sqrt(a[n] * b);
        ++n;
    }
    double phi = std::ldexp(a[n] * x, n);
    double prev = phi;
    for (int i = n; i > 0; --i) {
        prev = phi;
        phi = (phi + std::asin(c[i] / a[i] * std::sin(phi))) / 2;
    }
    const double sn = std::sin(phi);
    const double cn = std::cos(phi);
    // dn = cos(phi0) / cos(phi1 - phi0) loses accuracy where both vanish near x = K
    const double den = std::cos(prev - phi);
    const double dn = n > 0 && std::abs(den) > 0.5 ? cn / den : std::sqrt(1 - m * sn * sn);
    return {sn, cn, dn};
}

double jacobi_sn(double x, double m) { return jacobi_sncndn(x, m).sn; }
double jacobi_cn(double x, double m) { return jacobi_sncndn(x, m).cn; }
double jacobi_dn(double x, double m) { return jacobi_sncndn(x, m).dn; }

double elliptic_K(double m) {
    check_parameter(m);
    if (m == 1) return std::numeric_limits<double>::infinity();
    double a = 1, b = std::sqrt(1 - m);
    for (int i = 0; i < 64 && std::abs(a - b) > 4 * std::numeric_limits<double>::epsilon() * a; ++i) {
        const double an = (a + b) / 2;
        b = std::sqrt(a * b);
        a = an;
    }
    return std::numbers::pi / (2 * a);
}

JacobiSnCnDn jacobi_sncndn_real(double x, double m) {
    if (m >= 0 && m <= 1) return jacobi_sncndn(x, m);
    if (m < 0) {
        const double mu = -m;
        const double s = std::sqrt(1 + mu);
        const auto j = jacobi_sncndn(x * s, mu / (1 + mu));
        return {j.sn / (j.dn * s), j.cn / j.dn, 1 / j.dn};
    }
    const double s = std::sqrt(m);
    const auto j = jacobi_sncndn(x * s, 1 / m);
    return {j.sn / s, j.dn, j.cn};
}

}  // namespace quadtrap
