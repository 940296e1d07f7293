#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace quadtrap {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// "N", "-N" or "N/D".
Rational parse_rational(const std::string& s);
std::string to_string(const Rational& q);

// Exact square root; empty when q is not the square of a rational.
std::optional<Rational> rational_sqrt(const Rational& q);
bool is_integer(const Rational& q);

// K2 = { 2/(2l+1) : l integer }
bool in_K2(const Rational& k);

// Shift s of the square families I2..I6.
Rational family_shift(int i);

// Value of family i at integer p:
//   I1: p + (k/2) p (p-1)
//   I2..I6: (4 k^2 (p+s)^2 - (k-2)^2) / (8k)
Rational family_value(int i, const Rational& k, const BigInt& p);

struct FamilyCheck {
    int family = 0;
    bool member = false;
    std::optional<BigInt> witness;
    std::string detail;
};

FamilyCheck in_I_family(int i, const Rational& k, const Rational& lambda);

// Families admissible for k outside K2: {1, 2} plus the extensions for
// k = +-3/(3l+1), +-4/(4l+1), +-5/(5l+1), +-5/(5l+2).
std::vector<int> admissible_families(const Rational& k);

struct EigenvalueLog {
    Rational lambda;
    std::vector<FamilyCheck> checks;  // all six families
    bool admissible = false;
};

struct Verdict {
    Rational k;
    std::vector<Rational> eigenvalues;
    bool k_in_K2 = false;
    std::vector<int> families;
    bool pass = false;
    std::optional<Rational> witness;
    std::vector<EigenvalueLog> log;
};

Verdict morales_ramis_verdict(const Rational& k, const std::vector<Rational>& eigenvalues);

// V1 = sqrt(z^2 + (x^2 + y^2)/4), homogeneous of degree k = 1.
struct DarbouxReport {
    std::array<Rational, 3> d;
    Rational c;                 // V1(d)
    Rational c_published{1, 2};
    bool c_matches_published = false;
    std::array<Rational, 3> gradient_residual;  // grad V1(d) - d
    std::array<std::array<Rational, 3>, 3> hessian;
    std::array<Rational, 3> hessian_eigenvalues;
    // F(q, u) = f0 + f2 u^2 with f0 = -(z^2 + (x^2+y^2)/4), f2 = 1
    Rational F_at_dc;
    Rational dF_du;
    std::array<Rational, 3> dF_dq_plus_dF_du_d;
    bool verified = false;
};

DarbouxReport verify_darboux_V1();

}  // namespace quadtrap
