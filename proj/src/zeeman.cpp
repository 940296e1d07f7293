#include "quadtrap/zeeman.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace quadtrap {

using cd = std::complex<double>;

void MoleculeSpec::validate() const {
    if (!(mass_A > 0) || !(mass_B > 0)) throw std::invalid_argument("molecule " + name + ": masses must be positive");
    if (Z_A < 1 || Z_B < 1) throw std::invalid_argument("molecule " + name + ": atomic numbers must be >= 1");
    if (n_electrons < 0) throw std::invalid_argument("molecule " + name + ": negative electron count");
}

void TrapSpec::validate() const {
    if (!(B1_times_D > 0)) throw std::invalid_argument("trap: B1*D must be positive");
    if (!(D > 0)) throw std::invalid_argument("trap: chamber size must be positive");
}

void RotorState::validate() const {
    if (J < 0) throw std::invalid_argument("rotor: J must be non-negative");
    if (std::abs(M) > J) throw std::invalid_argument("rotor: |M| must not exceed J");
    if (!(std::abs(varpi) <= 1)) throw std::invalid_argument("rotor: |varpi| must not exceed 1");
}

double FieldPoint::norm() const { return std::sqrt(norm2()); }

std::vector<MoleculeSpec> parse_molecules(const KeyValues& kv) {
    std::vector<MoleculeSpec> out;
    for (const auto& [name, value] : kv) {
        auto f = split_list(value);
        if (f.size() < 4 || f.size() > 5)
            throw std::invalid_argument("molecule " + name + ": expected mass_A, mass_B, Z_A, Z_B[, B_e]");
        MoleculeSpec m;
        m.name = name;
        m.mass_A = parse_double(f[0], name + " mass_A");
        m.mass_B = parse_double(f[1], name + " mass_B");
        const double za = parse_double(f[2], name + " Z_A");
        const double zb = parse_double(f[3], name + " Z_B");
        if (za != std::floor(za) || zb != std::floor(zb))
            throw std::invalid_argument("molecule " + name + ": atomic numbers must be integers");
        m.Z_A = static_cast<int>(za);
        m.Z_B = static_cast<int>(zb);
        m.n_electrons = m.Z_A + m.Z_B;
        if (f.size() == 5) m.B_e = parse_double(f[4], name + " B_e");
        m.validate();
        out.push_back(m);
    }
    return out;
}

std::vector<MoleculeSpec> builtin_molecules() {
    static const char* table =
        "H2  = 1.007276466621,   1.007276466621,   1,  1,  60.853\n"
        "N2  = 14.0028599406365, 14.0028599406365, 7,  7,  1.998\n"
        "O2  = 15.9950113607275, 15.9950113607275, 8,  8,  1.4456\n"
        "F2  = 19.1472631086156, 19.1472631086156, 9,  9,  0.8902\n"
        "Cl2 = 35.4436741415459, 35.4436741415459, 17, 17, 0.2440\n"
        "Br2 = 79.8847997031827, 79.8847997031827, 35, 35, 0.0821\n"
        "I2  = 126.875395264820, 126.875395264820, 53, 53, 0.0374\n";
    std::istringstream in(table);
    return parse_molecules(parse_key_values(in));
}

std::vector<MoleculeSpec> load_molecules(const std::string& path) {
    return parse_molecules(read_key_values(path));
}

const MoleculeSpec& find_molecule(const std::vector<MoleculeSpec>& list, const std::string& name) {
    for (const auto& m : list)
        if (m.name == name) return m;
    throw std::invalid_argument("unknown molecule: " + name);
}

double compute_alpha_L(const MoleculeSpec& mol, const PhysicalConstants& c) {
    const double me = c.electron_mass_u;
    const double m = mol.mass_A + mol.mass_B + mol.n_electrons * me;
    return me / (2 * m) *
           (mol.Z_B * mol.mass_A / mol.mass_B + mol.Z_A * mol.mass_B / mol.mass_A + mol.n_electrons * me / mol.mass_B);
}

double compute_beta_L(const TrapSpec& trap, const PhysicalConstants& c) {
    return c.elementary_charge_C * trap.B1_times_D * c.bohr_radius_m * c.bohr_radius_m / c.hbar_Js;
}

double quadratic_factor(int J, int M) {
    const double num = 2.0 * J * J + 2.0 * J - 1 - 2.0 * M * M;
    const double den = (2.0 * J - 1) * (2.0 * J + 3);
    return num / den;
}

Eigen::Matrix3cd spin_zeeman_matrix(const FieldPoint& p) {
    const cd minus(p.Bx(), -p.By());  // Bx - i By
    const cd plus(p.Bx(), p.By());
    const double s = 1 / std::sqrt(2.0);
    Eigen::Matrix3cd h;
    h << p.Bz(), s * minus, 0.0,
         s * plus, 0.0, s * minus,
         0.0, s * plus, -p.Bz();
    return h;
}

namespace {

Eigen::Vector3cd fix_phase(Eigen::Vector3cd v) {
    const double scale = v.norm();
    for (int i = 2; i >= 0; --i) {
        if (std::abs(v(i)) > 1e-14 * scale) {
            v *= std::conj(v(i)) / std::abs(v(i));
            v(i) = std::abs(v(i));
            break;
        }
    }
    return v;
}

}  // namespace

SpinEigensystem spin_zeeman_eigensystem(const FieldPoint& p, double g_S, double beta_L) {
    SpinEigensystem out;
    const double b = p.norm();
    if (b == 0) {
        out.degenerate = true;
        for (int k = 0; k < 3; ++k) out.spinor[k] = Eigen::Vector3cd::Unit(k);
        return out;
    }
    out.lambda = {b, 0.0, -b};
    for (int k = 0; k < 3; ++k) out.energy[k] = g_S / 2 * beta_L * out.lambda[k];

    const double bz = p.Bz();
    const double rho = std::hypot(p.Bx(), p.By());
    // Bx - i By = rho e^{-i psi}
    const cd e1 = rho > 0 ? cd(p.Bx(), -p.By()) / rho : cd(1.0, 0.0);
    const cd e2 = e1 * e1;
    const double r2 = std::sqrt(2.0);

    Eigen::Vector3cd plus, zero, minus;
    plus << (b + bz) / (2 * b) * e2, rho / (r2 * b) * e1, (b - bz) / (2 * b);
    zero << -rho / (r2 * b) * e2, bz / b * e1, rho / (r2 * b);
    minus << (b - bz) / (2 * b) * e2, -rho / (r2 * b) * e1, (b + bz) / (2 * b);
    out.spinor = {fix_phase(plus), fix_phase(zero), fix_phase(minus)};
    return out;
}

ZeemanMatrix linear_zeeman_matrix(int J, const FieldPoint& p) {
    if (J < 0) throw std::invalid_argument("J must be non-negative");
    ZeemanMatrix out;
    out.J = J;
    out.bandwidth = 1;
    out.entries = Eigen::MatrixXcd::Zero(2 * J + 1, 2 * J + 1);
    const cd xm(p.x, -p.y), xp(p.x, p.y);
    for (int M = -J; M <= J; ++M) {
        const int i = M + J;
        out.entries(i, i) = p.z * M;
        if (M - 1 >= -J) out.entries(i, i - 1) = -xm / 4.0 * std::sqrt(double(J - M + 1) * (J + M));
        if (M + 1 <= J) out.entries(i, i + 1) = -xp / 4.0 * std::sqrt(double(J + M + 1) * (J - M));
    }
    return out;
}

ZeemanMatrix quadratic_zeeman_matrix(int J, const FieldPoint& p) {
    if (J < 0) throw std::invalid_argument("J must be non-negative");
    ZeemanMatrix out;
    out.J = J;
    out.bandwidth = 2;
    out.entries = Eigen::MatrixXcd::Zero(2 * J + 1, 2 * J + 1);
    if (J == 0) {
        out.entries(0, 0) = p.norm2() / 3;
        return out;
    }
    const double d = (2.0 * J - 1) * (2.0 * J + 3);
    const double rho2 = (p.x * p.x + p.y * p.y) / 4;
    const cd xm(p.x, -p.y), xp(p.x, p.y);
    for (int M = -J; M <= J; ++M) {
        const int i = M + J;
        out.entries(i, i) = (double(J) * J + J - 1 + double(M) * M) / d * rho2 + quadratic_factor(J, M) * p.z * p.z;
        if (M - 1 >= -J)
            out.entries(i, i - 1) = xm * p.z / 2.0 * std::sqrt(double(J - M + 1) * (J + M)) / d * double(2 * M - 1);
        if (M + 1 <= J)
            out.entries(i, i + 1) = xp * p.z / 2.0 * std::sqrt(double(J - M) * (J + M + 1)) / d * double(2 * M + 1);
        if (M - 2 >= -J)
            out.entries(i, i - 2) =
                -xm * xm / 8.0 * std::sqrt(double(J - M + 1) * (J - M + 2) * (J + M - 1) * (J + M)) / d;
        if (M + 2 <= J)
            out.entries(i, i + 2) =
                -xp * xp / 8.0 * std::sqrt(double(J - M - 1) * (J - M) * (J + M + 1) * (J + M + 2)) / d;
    }
    return out;
}

std::vector<double> linear_zeeman_eigenvalues(int J, const FieldPoint& p) {
    std::vector<double> ev;
    const double b = p.norm();
    for (int M = -J; M <= J; ++M) ev.push_back(M * b);
    std::sort(ev.begin(), ev.end());
    return ev;
}

std::vector<double> quadratic_zeeman_eigenvalues(int J, const FieldPoint& p) {
    std::vector<double> ev;
    for (int M = -J; M <= J; ++M) ev.push_back(quadratic_factor(J, M) * p.norm2());
    std::sort(ev.begin(), ev.end());
    return ev;
}

std::vector<double> hermitian_eigenvalues(const Eigen::MatrixXcd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("Hermitian eigensolver failed");
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(ev.begin(), ev.end());
    return ev;
}

VibronicConstants vibronic_ground() { return {0.5691906099701544, 0.1665675408030196}; }
VibronicConstants vibronic_first_excited() { return {0.5369997783542894, 0.1613113921392951}; }

DepthReport trap_depth_report(const MoleculeSpec& mol, const TrapSpec& trap, const RotorState& state,
                              const VibronicConstants& vib, const PhysicalConstants& c) {
    mol.validate();
    trap.validate();
    state.validate();
    DepthReport r;
    r.beta_L = compute_beta_L(trap, c);
    r.alpha_L = compute_alpha_L(mol, c);
    const double uk = c.hartree_kelvin;
    r.spin_rough = r.beta_L * uk;
    r.linear_rough = r.alpha_L * r.beta_L * uk;
    r.quadratic_rough = r.beta_L * r.beta_L * uk;
    const double edge = std::sqrt(1.5);
    r.spin_term = mol.g_S / 2 * r.beta_L * state.varpi * edge * uk;
    r.linear_term = -r.alpha_L * r.beta_L * state.M * edge * uk;
    const double f = quadratic_factor(state.J, state.M);
    r.quadratic_term = r.beta_L * r.beta_L * (vib.A1 - vib.A2 * f) * 1.5 * uk;
    return r;
}

}  // namespace quadtrap
