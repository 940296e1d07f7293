#pragma once

#include <string>
#include <vector>

#include "quadtrap/dynamics.hpp"

namespace quadtrap {

// Published initial conditions at h = 0.125, p_phi = 0.01 with y = z = 0.
struct OrbitPreset {
    std::string name;
    double x = 0;
    double p_x = 0;
    double p_y = 0;
    double p_z = 0;

    PhaseState state() const;
    double p_phi() const { return x * p_y; }
};

const std::vector<OrbitPreset>& published_orbits();
const OrbitPreset& find_orbit_preset(const std::string& name);

}  // namespace quadtrap
