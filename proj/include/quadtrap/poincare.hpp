#pragma once

#include <string>
#include <utility>
#include <vector>

#include "quadtrap/dynamics.hpp"

namespace quadtrap {

// Section plane z = 0, upward crossings (p_z > 0), cylindrical chart.
struct SectionSpec {
    double h = 0.125;
    double p_phi = 0.01;
    int n_crossings = 100;
    double tau_limit = 0;  // 0 picks 1000 * (n_crossings + 1)

    void validate() const;
    double effective_tau_limit() const;
};

struct SectionSeed {
    int id = 0;
    double r = 0;
    double p_r = 0;
};

struct SectionPoint {
    int seed_id = 0;
    int index = 0;
    double tau = 0;
    double r = 0;
    double p_r = 0;
    double z = 0;
    double p_z = 0;
    double energy = 0;
};

struct SeedResult {
    int seed_id = 0;
    std::vector<SectionPoint> points;
    IntegrationStatus status = IntegrationStatus::completed;
    bool transversal = true;
    std::string note;
};

// Effective potential on the plane z = 0 with p_r = p_z = 0.
double section_effective_potential(double r, double p_phi, const PotentialParams& params);

// Returns the state at z = 0 with p_z = +sqrt(2(h - V_eff(r) - p_r^2/2)).
PhaseState seed_from_energy(double h, double p_phi, double r, double p_r, const PotentialParams& params);

// Turning radii on p_r = 0; for p_phi = 0 the planar section spans (-r2, r2).
std::pair<double, double> section_turning_points(double h, double p_phi, const PotentialParams& params);

// n seeds on p_r = 0 strictly between the turning radii.
std::vector<SectionSeed> default_seed_grid(const SectionSpec& spec, const PotentialParams& params, int n);

SeedResult section_for_seed(const SectionSpec& spec, const SectionSeed& seed, const PotentialParams& params,
                            const IntegratorOptions& opt = {});

// threads = 0 uses the hardware concurrency. Results are ordered by seed id.
std::vector<SeedResult> compute_section(const SectionSpec& spec, const std::vector<SectionSeed>& seeds,
                                        const PotentialParams& params, const IntegratorOptions& opt = {},
                                        unsigned threads = 0);

struct Periodicity {
    bool periodic = false;
    int period = 0;
};

Periodicity detect_periodicity(const std::vector<std::pair<double, double>>& points, double tol = 1e-6);
Periodicity detect_periodicity(const std::vector<SectionPoint>& points, double tol = 1e-6);

void write_section_csv(std::ostream& out, const std::vector<SeedResult>& results);

}  // namespace quadtrap
