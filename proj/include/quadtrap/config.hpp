#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace quadtrap {

// Ordered "key = value" pairs; '#' starts a comment.
using KeyValues = std::vector<std::pair<std::string, std::string>>;

KeyValues parse_key_values(std::istream& in);
KeyValues read_key_values(const std::string& path);
void write_key_values(std::ostream& out, const KeyValues& kv);

const std::string* find_value(const KeyValues& kv, const std::string& key);
double parse_double(const std::string& text, const std::string& what);
std::vector<std::string> split_list(const std::string& text, char sep = ',');

struct PhysicalConstants {
    double electron_mass_u = 5.48579909065e-4;
    double proton_mass_u = 1.007276466621;
    double atomic_mass_unit_kg = 1.66053906660e-27;
    double electron_mass_kg = 9.1093837015e-31;
    double bohr_radius_m = 5.29177210903e-11;
    double hbar_Js = 1.054571817e-34;
    double elementary_charge_C = 1.602176634e-19;
    double hartree_kelvin = 315775.23;
};

PhysicalConstants constants_from(const KeyValues& kv);
PhysicalConstants load_constants(const std::string& path);
KeyValues to_key_values(const PhysicalConstants& c);

// Built-in table, or the file named by QUADTRAP_CONSTANTS when set.
// Read once per process.
const PhysicalConstants& active_constants();

std::string data_path(const std::string& file);

}  // namespace quadtrap
