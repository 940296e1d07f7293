#include "quadtrap/potential.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace quadtrap {

DeltaSource parse_delta_source(const std::string& s) {
    if (s == "computed") return DeltaSource::computed;
    if (s == "text") return DeltaSource::text;
    if (s == "caption") return DeltaSource::caption;
    throw std::invalid_argument("delta source must be text, caption or computed: " + s);
}

std::string to_string(DeltaSource s) {
    switch (s) {
        case DeltaSource::computed: return "computed";
        case DeltaSource::text: return "text";
        case DeltaSource::caption: return "caption";
    }
    return "computed";
}

PotentialParams PotentialParams::raw(double sigma, double delta) {
    if (!(sigma > 0)) throw std::invalid_argument("sigma must be positive (high-field seeker / untrapped state)");
    if (!std::isfinite(delta)) throw std::invalid_argument("delta must be finite");
    PotentialParams p;
    p.sigma = sigma;
    p.delta = delta;
    p.eta = delta / sigma;
    return p;
}

PotentialParams make_params(const MoleculeSpec& mol, const TrapSpec& trap, const RotorState& state,
                            const VibronicConstants& vib, const PhysicalConstants& c) {
    mol.validate();
    trap.validate();
    state.validate();
    if (state.J < 1) throw std::invalid_argument("J must be at least 1");
    const double alpha = compute_alpha_L(mol, c);
    const double beta = compute_beta_L(trap, c);
    const double sigma = mol.g_S / 2 * state.varpi - alpha * state.M;
    if (!(sigma > 0)) throw std::invalid_argument("sigma <= 0: high-field seeker / untrapped state");
    const double delta = beta / 2 * (vib.A1 - vib.A2 * quadratic_factor(state.J, state.M));
    auto p = PotentialParams::raw(sigma, delta);
    p.sigma_source = "computed";
    p.delta_source = "computed";
    return p;
}

PotentialParams reproduction_params(DeltaSource source) {
    double delta = kDeltaCaption;
    if (source == DeltaSource::text) delta = kDeltaText;
    if (source == DeltaSource::computed)
        delta = make_params(find_molecule(builtin_molecules(), "H2"), TrapSpec{}, RotorState{}).delta;
    auto p = PotentialParams::raw(kSigmaPublished, delta);
    p.sigma_source = "published";
    p.delta_source = to_string(source);
    return p;
}

KeyValues to_key_values(const PotentialParams& p) {
    auto fmt = [](double v) {
        std::ostringstream os;
        os << std::setprecision(17) << v;
        return os.str();
    };
    return {{"sigma", fmt(p.sigma)},
            {"delta", fmt(p.delta)},
            {"eta", fmt(p.eta)},
            {"sigma_source", p.sigma_source},
            {"delta_source", p.delta_source}};
}

PotentialParams params_from(const KeyValues& kv) {
    const auto* s = find_value(kv, "sigma");
    const auto* d = find_value(kv, "delta");
    if (!s || !d) throw std::invalid_argument("params need sigma and delta");
    auto p = PotentialParams::raw(parse_double(*s, "sigma"), parse_double(*d, "delta"));
    if (const auto* e = find_value(kv, "eta")) {
        const double eta = parse_double(*e, "eta");
        if (std::abs(eta - p.eta) > 1e-12 * std::max(1.0, std::abs(p.eta)))
            throw std::invalid_argument("eta inconsistent with delta/sigma");
    }
    if (const auto* v = find_value(kv, "sigma_source")) p.sigma_source = *v;
    if (const auto* v = find_value(kv, "delta_source")) p.delta_source = *v;
    return p;
}

double V1(const FieldPoint& p) { return p.norm(); }
double V2(const FieldPoint& p) { return p.norm2(); }

double V_cartesian(const FieldPoint& p, const PotentialParams& params) {
    return params.sigma * p.norm() + 2 * params.delta * p.norm2();
}

std::array<double, 3> grad_V_cartesian(const FieldPoint& p, const PotentialParams& params) {
    const double b = p.norm();
    if (b < kEpsSingular) throw SingularPointError("gradient undefined at the field zero");
    const double f = params.sigma / b + 4 * params.delta;
    return {f * p.x / 4, f * p.y / 4, f * p.z};
}

double H_cartesian(const std::array<double, 6>& s, const PotentialParams& params) {
    const double t = 0.5 * (s[3] * s[3] + s[4] * s[4] + s[5] * s[5]);
    return t + V_cartesian({s[0], s[1], s[2]}, params);
}

double H_cylindrical(double r, double z, double p_r, double p_z, double p_phi, const PotentialParams& params) {
    if (r < 0) throw std::invalid_argument("negative radius");
    double cent = 0;
    if (p_phi != 0) {
        if (r == 0) throw SingularPointError("centrifugal singularity at r = 0 with p_phi != 0");
        cent = p_phi * p_phi / (r * r);
    }
    const double q = r * r + 4 * z * z;
    return 0.5 * (p_r * p_r + p_z * p_z + cent) + params.sigma / 2 * std::sqrt(q) + params.delta / 2 * q;
}

double time_scale_seconds(const MoleculeSpec& mol, const TrapSpec& trap, const PhysicalConstants& c) {
    mol.validate();
    trap.validate();
    const double mass_kg = (mol.mass_A + mol.mass_B + mol.n_electrons * c.electron_mass_u) * c.atomic_mass_unit_kg;
    const double beta = compute_beta_L(trap, c);
    return trap.D * c.bohr_radius_m * std::sqrt(mass_kg * c.electron_mass_kg) / (c.hbar_Js * std::sqrt(beta));
}

double tau_to_seconds(double tau, const MoleculeSpec& mol, const TrapSpec& trap, const PhysicalConstants& c) {
    return tau * time_scale_seconds(mol, trap, c);
}

double energy_to_kelvin(double h, const TrapSpec& trap, const PhysicalConstants& c) {
    if (h < 0) throw std::invalid_argument("energy must be non-negative");
    return h * compute_beta_L(trap, c) * c.hartree_kelvin;
}

}  // namespace quadtrap
