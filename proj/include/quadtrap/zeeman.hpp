#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "quadtrap/config.hpp"

namespace quadtrap {

struct MoleculeSpec {
    std::string name;
    double mass_A = 0;  // nuclear masses, u
    double mass_B = 0;
    int Z_A = 1;
    int Z_B = 1;
    int n_electrons = 2;
    double g_S = 2.0;
    double B_e = 0;  // cm^-1, informational

    void validate() const;
};

struct TrapSpec {
    double B1_times_D = 5.0;  // tesla
    double D = 0.04;          // metres

    void validate() const;
};

struct RotorState {
    int J = 10;
    int M = -10;
    double varpi = 0.5;

    void validate() const;
};

struct FieldPoint {
    double x = 0, y = 0, z = 0;

    double Bx() const { return -x / 2; }
    double By() const { return -y / 2; }
    double Bz() const { return z; }
    double norm2() const { return z * z + (x * x + y * y) / 4; }
    double norm() const;
};

struct ZeemanMatrix {
    int J = 0;
    int bandwidth = 0;
    Eigen::MatrixXcd entries;  // rows/cols ordered M = -J..J

    int dim() const { return 2 * J + 1; }
    std::complex<double> at(int N, int M) const { return entries(N + J, M + J); }
};

std::vector<MoleculeSpec> builtin_molecules();
std::vector<MoleculeSpec> parse_molecules(const KeyValues& kv);
std::vector<MoleculeSpec> load_molecules(const std::string& path);
const MoleculeSpec& find_molecule(const std::vector<MoleculeSpec>& list, const std::string& name);

double compute_alpha_L(const MoleculeSpec& mol, const PhysicalConstants& c = active_constants());
double compute_beta_L(const TrapSpec& trap, const PhysicalConstants& c = active_constants());

// (2J^2+2J-1-2M^2)/((2J-1)(2J+3)); J = 0 gives 1/3.
double quadratic_factor(int J, int M);

Eigen::Matrix3cd spin_zeeman_matrix(const FieldPoint& p);

struct SpinEigensystem {
    std::array<double, 3> lambda{};    // +|B|, 0, -|B|
    std::array<double, 3> energy{};    // (g_S/2) beta_L lambda
    std::array<Eigen::Vector3cd, 3> spinor;
    bool degenerate = false;
};

SpinEigensystem spin_zeeman_eigensystem(const FieldPoint& p, double g_S, double beta_L);

ZeemanMatrix linear_zeeman_matrix(int J, const FieldPoint& p);
ZeemanMatrix quadratic_zeeman_matrix(int J, const FieldPoint& p);

// Analytic spectra, ascending.
std::vector<double> linear_zeeman_eigenvalues(int J, const FieldPoint& p);
std::vector<double> quadratic_zeeman_eigenvalues(int J, const FieldPoint& p);

// Numeric spectrum of a Hermitian matrix, ascending.
std::vector<double> hermitian_eigenvalues(const Eigen::MatrixXcd& m);

struct VibronicConstants {
    double A1 = 0.5691906099701544;
    double A2 = 0.1665675408030196;
};

VibronicConstants vibronic_ground();
VibronicConstants vibronic_first_excited();

struct DepthReport {
    double beta_L = 0;
    double alpha_L = 0;
    // rough per-unit estimates beta U_K, alpha beta U_K, beta^2 U_K (kelvin)
    double spin_rough = 0;
    double linear_rough = 0;
    double quadratic_rough = 0;
    // edge-of-chamber differences with the sqrt(3/2) and 3/2 factors (kelvin)
    double spin_term = 0;
    double linear_term = 0;
    double quadratic_term = 0;
};

DepthReport trap_depth_report(const MoleculeSpec& mol, const TrapSpec& trap, const RotorState& state,
                              const VibronicConstants& vib = {},
                              const PhysicalConstants& c = active_constants());

}  // namespace quadtrap
