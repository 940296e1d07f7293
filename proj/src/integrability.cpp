#include "quadtrap/integrability.hpp"

#include <algorithm>
#include <regex>
#include <stdexcept>

namespace quadtrap {

namespace mp = boost::multiprecision;

Rational parse_rational(const std::string& s) {
    static const std::regex form(R"([+-]?[0-9]+(/[+-]?[0-9]+)?)");
    if (!std::regex_match(s, form)) throw std::invalid_argument("not a rational number: '" + s + "'");
    const auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(s));
        const BigInt num(s.substr(0, slash));
        const BigInt den(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
        return Rational(num, den);
    } catch (const std::runtime_error&) {
        throw std::invalid_argument("not a rational number: '" + s + "'");
    }
}

std::string to_string(const Rational& q) {
    if (mp::denominator(q) == 1) return mp::numerator(q).str();
    return mp::numerator(q).str() + "/" + mp::denominator(q).str();
}

namespace {

std::optional<BigInt> integer_sqrt(const BigInt& n) {
    if (n < 0) return std::nullopt;
    const BigInt r = mp::sqrt(n);
    if (r * r != n) return std::nullopt;
    return r;
}

}  // namespace

std::optional<Rational> rational_sqrt(const Rational& q) {
    const auto a = integer_sqrt(mp::numerator(q));
    const auto b = integer_sqrt(mp::denominator(q));
    if (!a || !b) return std::nullopt;
    return Rational(*a, *b);
}

bool is_integer(const Rational& q) { return mp::denominator(q) == 1; }

bool in_K2(const Rational& k) {
    if (k == 0) throw std::invalid_argument("k must be non-zero");
    const Rational t = Rational(2) / k;
    return is_integer(t) && mp::numerator(t) % 2 != 0;
}

Rational family_shift(int i) {
    switch (i) {
        case 2: return Rational(1, 2);
        case 3: return Rational(1, 3);
        case 4: return Rational(1, 4);
        case 5: return Rational(1, 5);
        case 6: return Rational(2, 5);
        default: throw std::invalid_argument("square families are numbered 2..6");
    }
}

Rational family_value(int i, const Rational& k, const BigInt& p) {
    if (k == 0) throw std::invalid_argument("k must be non-zero");
    const Rational P(p);
    if (i == 1) return P + k / 2 * P * (P - 1);
    const Rational r = P + family_shift(i);
    return (4 * k * k * r * r - (k - 2) * (k - 2)) / (8 * k);
}

FamilyCheck in_I_family(int i, const Rational& k, const Rational& lambda) {
    if (k == 0) throw std::invalid_argument("k must be non-zero");
    FamilyCheck out;
    out.family = i;
    if (i == 1) {
        // (k/2) p^2 + (1 - k/2) p - lambda = 0
        const Rational b = 1 - k / 2;
        const Rational disc = b * b + 2 * k * lambda;
        const auto root = rational_sqrt(disc);
        if (!root) {
            out.detail = "discriminant " + to_string(disc) + " is not a rational square";
            return out;
        }
        for (const Rational& p : std::array<Rational, 2>{Rational((-b + *root) / k), Rational((-b - *root) / k)}) {
            if (is_integer(p)) {
                out.member = true;
                out.witness = mp::numerator(p);
                out.detail = "p = " + to_string(p);
                return out;
            }
        }
        out.detail = "roots " + to_string(Rational((-b + *root) / k)) + ", " + to_string(Rational((-b - *root) / k)) + " are not integers";
        return out;
    }
    const Rational s = family_shift(i);
    const Rational q = (8 * k * lambda + (k - 2) * (k - 2)) / (4 * k * k);
    const auto r = rational_sqrt(q);
    if (!r) {
        out.detail = "q = " + to_string(q) + " is not a rational square";
        return out;
    }
    for (const Rational& p : std::array<Rational, 2>{Rational(*r - s), Rational(-*r - s)}) {
        if (is_integer(p)) {
            out.member = true;
            out.witness = mp::numerator(p);
            out.detail = "q = " + to_string(q) + ", p = " + to_string(p);
            return out;
        }
    }
    out.detail = "q = (" + to_string(*r) + ")^2 but neither +-" + to_string(*r) + " - " + to_string(s) + " is an integer";
    return out;
}

namespace {

// true when n/k = +-(n l + j) for some integer l
bool in_family(const Rational& k, int n, int j) {
    const Rational t = Rational(n) / k;
    if (!is_integer(t)) return false;
    const BigInt v = mp::numerator(t);
    const BigInt plus = ((v - j) % n + n) % n;
    const BigInt minus = ((-v - j) % n + n) % n;
    return plus == 0 || minus == 0;
}

}  // namespace

std::vector<int> admissible_families(const Rational& k) {
    if (k == 0) throw std::invalid_argument("k must be non-zero");
    std::vector<int> f{1, 2};
    auto add = [&](std::initializer_list<int> more) {
        for (int i : more)
            if (std::find(f.begin(), f.end(), i) == f.end()) f.push_back(i);
    };
    if (in_family(k, 3, 1)) add({3, 4, 5, 6});
    if (in_family(k, 4, 1)) add({3});
    if (in_family(k, 5, 1)) add({3, 5});
    if (in_family(k, 5, 2)) add({3, 6});
    std::sort(f.begin(), f.end());
    return f;
}

Verdict morales_ramis_verdict(const Rational& k, const std::vector<Rational>& eigenvalues) {
    if (k == 0) throw std::invalid_argument("k must be non-zero");
    Verdict v;
    v.k = k;
    v.eigenvalues = eigenvalues;
    v.k_in_K2 = in_K2(k);
    v.families = admissible_families(k);
    v.pass = true;
    for (const auto& lambda : eigenvalues) {
        EigenvalueLog entry;
        entry.lambda = lambda;
        for (int i = 1; i <= 6; ++i) {
            entry.checks.push_back(in_I_family(i, k, lambda));
            if (entry.checks.back().member && std::find(v.families.begin(), v.families.end(), i) != v.families.end())
                entry.admissible = true;
        }
        if (!entry.admissible && !v.k_in_K2 && v.pass) {
            v.pass = false;
            v.witness = lambda;
        }
        v.log.push_back(std::move(entry));
    }
    if (v.k_in_K2) {
        v.pass = true;
        v.witness.reset();
    }
    return v;
}

DarbouxReport verify_darboux_V1() {
    DarbouxReport rep;
    const Rational x(1, 2), y(0), z(0);
    rep.d = {x, y, z};
    const Rational Q = z * z + (x * x + y * y) / 4;
    const std::array<Rational, 3> dQ{x / 2, y / 2, 2 * z};
    const Rational ddQ[3] = {Rational(1, 2), Rational(1, 2), Rational(2)};
    const auto V = rational_sqrt(Q);
    if (!V) throw std::logic_error("V1(d) is not rational");
    rep.c = *V;
    rep.c_matches_published = rep.c == rep.c_published;
    for (int i = 0; i < 3; ++i) rep.gradient_residual[i] = dQ[i] / (2 * rep.c) - rep.d[i];
    bool diagonal = true;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const Rational qij = i == j ? ddQ[i] : Rational(0);
            rep.hessian[i][j] = qij / (2 * rep.c) - dQ[i] * dQ[j] / (4 * rep.c * rep.c * rep.c);
            if (i != j && rep.hessian[i][j] != 0) diagonal = false;
        }
    if (!diagonal) throw std::logic_error("Hessian at d is not diagonal");
    for (int i = 0; i < 3; ++i) rep.hessian_eigenvalues[i] = rep.hessian[i][i];
    std::sort(rep.hessian_eigenvalues.begin(), rep.hessian_eigenvalues.end());

    rep.F_at_dc = -Q + rep.c * rep.c;
    rep.dF_du = 2 * rep.c;
    for (int i = 0; i < 3; ++i) rep.dF_dq_plus_dF_du_d[i] = -dQ[i] + rep.dF_du * rep.d[i];
    bool ok = rep.F_at_dc == 0 && rep.dF_du != 0;
    for (int i = 0; i < 3; ++i) ok = ok && rep.gradient_residual[i] == 0 && rep.dF_dq_plus_dF_du_d[i] == 0;
    rep.verified = ok;
    return rep;
}

}  // namespace quadtrap
