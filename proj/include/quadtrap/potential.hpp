#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include "quadtrap/config.hpp"
#include "quadtrap/zeeman.hpp"

namespace quadtrap {

inline constexpr double kEpsSingular = 1e-14;

// Published reproduction values.
inline constexpr double kSigmaPublished = 0.502723;
inline constexpr double kDeltaText = 6.01911e-6;
inline constexpr double kDeltaCaption = 1.79305e-5;

class SingularPointError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class DeltaSource { computed, text, caption };

DeltaSource parse_delta_source(const std::string& s);
std::string to_string(DeltaSource s);

struct PotentialParams {
    double sigma = 1;
    double delta = 0;
    double eta = 0;
    std::string sigma_source = "raw";
    std::string delta_source = "raw";

    static PotentialParams raw(double sigma, double delta);
};

PotentialParams make_params(const MoleculeSpec& mol, const TrapSpec& trap, const RotorState& state,
                            const VibronicConstants& vib = {}, const PhysicalConstants& c = active_constants());

// (sigma, delta) used for the published orbits: H2, J=10, M=-10, varpi=1/2, 5 T,
// sigma rounded as printed, delta picked by source.
PotentialParams reproduction_params(DeltaSource source = DeltaSource::caption);

KeyValues to_key_values(const PotentialParams& p);
PotentialParams params_from(const KeyValues& kv);

double V_cartesian(const FieldPoint& p, const PotentialParams& params);
std::array<double, 3> grad_V_cartesian(const FieldPoint& p, const PotentialParams& params);

// Homogeneous parts: V = sigma V1 + 2 delta V2.
double V1(const FieldPoint& p);
double V2(const FieldPoint& p);

double H_cartesian(const std::array<double, 6>& s, const PotentialParams& params);
double H_cylindrical(double r, double z, double p_r, double p_z, double p_phi, const PotentialParams& params);

double time_scale_seconds(const MoleculeSpec& mol, const TrapSpec& trap, const PhysicalConstants& c = active_constants());
double tau_to_seconds(double tau, const MoleculeSpec& mol, const TrapSpec& trap,
                      const PhysicalConstants& c = active_constants());
double energy_to_kelvin(double h, const TrapSpec& trap, const PhysicalConstants& c = active_constants());

}  // namespace quadtrap
