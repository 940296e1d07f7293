#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "quadtrap/dop853.hpp"
#include "quadtrap/potential.hpp"

namespace quadtrap {

enum class Chart { cartesian = 0, cylindrical = 1 };

std::string to_string(Chart c);

// cartesian:   x, y, z, p_x, p_y, p_z
// cylindrical: r, z, phi, p_r, p_z, p_phi   (p_phi is conserved and carried along)
struct PhaseState {
    Chart chart = Chart::cylindrical;
    std::array<double, 6> v{};

    static PhaseState cartesian(double x, double y, double z, double px, double py, double pz);
    static PhaseState cylindrical(double r, double z, double phi, double p_r, double p_z, double p_phi);

    double r() const { return v[0]; }
    double z() const { return chart == Chart::cylindrical ? v[1] : v[2]; }
    double phi() const { return v[2]; }
    double p_r() const { return v[3]; }
    double p_z() const { return chart == Chart::cylindrical ? v[4] : v[5]; }
    double p_phi() const { return v[5]; }
};

PhaseState convert_chart(const PhaseState& s);
PhaseState to_chart(const PhaseState& s, Chart c);

// Accepts r < 0 in the cylindrical chart when p_phi = 0 (planar motion through the axis).
double energy(const PhaseState& s, const PotentialParams& params);
double angular_momentum(const PhaseState& s);

// State ordered as PhaseState::v; derivative of p_phi is zero.
using StateVec = std::array<double, 6>;

StateVec rhs_cylindrical(const StateVec& y, const PotentialParams& params);
// Same flow with sigma = 1, delta = eta (time tau_s = sqrt(sigma) tau, momenta p / sqrt(sigma)).
StateVec rhs_cylindrical_rescaled(const StateVec& y, double eta);
StateVec rhs_cartesian(const StateVec& y, const PotentialParams& params);

enum class Method { dop853, verlet };

struct IntegratorOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-10;
    // Per-step error target is tol * local_factor; with 0.01 the energy error
    // over tau <= 2000 stays below 100 * rel_tol * max(|H0|, 1).
    double local_factor = 0.01;
    Method method = Method::dop853;
    double verlet_step = 1e-3;
    double max_step = std::numeric_limits<double>::infinity();
    double singular_radius = 1e-10;  // on sqrt(r^2 + 4 z^2)
    double min_step = 1e-14;
    long max_steps = 20'000'000;
    bool keep_samples = true;
    bool keep_segments = true;

    void validate() const;
};

enum class IntegrationStatus { completed, singular_abort, step_limit, stopped };

std::string to_string(IntegrationStatus s);

struct Trajectory {
    Chart chart = Chart::cylindrical;
    PotentialParams params;
    std::vector<double> tau;
    std::vector<PhaseState> states;
    std::vector<double> energies;
    std::vector<double> p_phi;  // angular momentum per sample
    std::vector<dop853::Segment<6>> segments;
    IntegrationStatus status = IntegrationStatus::completed;
    std::string diagnostic;
    long accepted = 0;
    long rejected = 0;
    long evaluations = 0;

    bool ok() const { return status == IntegrationStatus::completed; }
    double tau_end() const { return tau.empty() ? 0.0 : tau.back(); }
    // Dense output inside the integrated range.
    PhaseState at(double t) const;
    // max |H - H0| / max(|H0|, floor)
    double max_energy_drift(double floor = 0) const;
    double max_p_phi_drift() const;
};

// Called once per accepted step with its interpolant; return false to stop.
using StepObserver = std::function<bool(const dop853::Segment<6>&)>;

Trajectory integrate(const PhaseState& s0, const PotentialParams& params, double tau_end,
                     const IntegratorOptions& opt = {}, const StepObserver& observer = {});

// Single untimed DOP853 step (no error control), used to polish event locations.
StateVec advance(const StateVec& y, Chart chart, const PotentialParams& params, double h);

void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
void write_trajectory_binary(std::ostream& out, const Trajectory& traj);

struct BinaryTrajectory {
    Chart chart = Chart::cylindrical;
    std::vector<double> tau;
    std::vector<StateVec> states;
    std::vector<double> energies;
};
BinaryTrajectory read_trajectory_binary(std::istream& in);

}  // namespace quadtrap
