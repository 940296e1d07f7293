#include "quadtrap/presets.hpp"

#include <stdexcept>

namespace quadtrap {

PhaseState OrbitPreset::state() const { return PhaseState::cartesian(x, 0, 0, p_x, p_y, p_z); }

const std::vector<OrbitPreset>& published_orbits() {
    static const std::vector<OrbitPreset> list{
        {"P1", 0.112615, 0, 0.0887981, 0.430698},
        {"P2", 0.45325, 0, 0.0220629, 0.14714},
        {"P3", 0.228784, 0.199993, 0.0437094, 0.305084},
        {"Q1", 0.13547, -0.0254729, 0.0738171, 0.419283},
        {"Q2", 0.190487, 0.150348, 0.052497, 0.358994},
        {"Q3", 0.145072, -0.0297181, 0.0689313, 0.414046},
        {"CH", 0.313439, 0.000209503, 0.0319041, 0.302336},
    };
    return list;
}

const OrbitPreset& find_orbit_preset(const std::string& name) {
    for (const auto& p : published_orbits())
        if (p.name == name) return p;
    throw std::invalid_argument("unknown orbit preset '" + name + "'");
}

}  // namespace quadtrap
