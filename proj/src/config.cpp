#include "quadtrap/config.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace quadtrap {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

KeyValues parse_key_values(std::istream& in) {
    KeyValues kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
        auto key = trim(line.substr(0, eq));
        if (key.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
        kv.emplace_back(std::move(key), trim(line.substr(eq + 1)));
    }
    return kv;
}

KeyValues read_key_values(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    return parse_key_values(in);
}

void write_key_values(std::ostream& out, const KeyValues& kv) {
    for (const auto& [k, v] : kv) out << k << " = " << v << '\n';
}

const std::string* find_value(const KeyValues& kv, const std::string& key) {
    for (const auto& [k, v] : kv)
        if (k == key) return &v;
    return nullptr;
}

double parse_double(const std::string& text, const std::string& what) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad number for " + what + ": '" + text + "'");
    }
    if (trim(text.substr(used)).size())
        throw std::invalid_argument("bad number for " + what + ": '" + text + "'");
    return v;
}

std::vector<std::string> split_list(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

PhysicalConstants constants_from(const KeyValues& kv) {
    PhysicalConstants c;
    const std::pair<const char*, double*> fields[] = {
        {"electron_mass_u", &c.electron_mass_u},
        {"proton_mass_u", &c.proton_mass_u},
        {"atomic_mass_unit_kg", &c.atomic_mass_unit_kg},
        {"electron_mass_kg", &c.electron_mass_kg},
        {"bohr_radius_m", &c.bohr_radius_m},
        {"hbar_Js", &c.hbar_Js},
        {"elementary_charge_C", &c.elementary_charge_C},
        {"hartree_kelvin", &c.hartree_kelvin},
    };
    for (const auto& [k, v] : kv) {
        bool known = false;
        for (const auto& [name, slot] : fields) {
            if (k == name) {
                *slot = parse_double(v, k);
                if (!(*slot > 0)) throw std::invalid_argument("constant must be positive: " + k);
                known = true;
            }
        }
        if (!known) throw std::invalid_argument("unknown constant: " + k);
    }
    return c;
}

PhysicalConstants load_constants(const std::string& path) {
    return constants_from(read_key_values(path));
}

KeyValues to_key_values(const PhysicalConstants& c) {
    auto fmt = [](double v) {
        std::ostringstream os;
        os << std::setprecision(17) << v;
        return os.str();
    };
    return {
        {"electron_mass_u", fmt(c.electron_mass_u)},
        {"proton_mass_u", fmt(c.proton_mass_u)},
        {"atomic_mass_unit_kg", fmt(c.atomic_mass_unit_kg)},
        {"electron_mass_kg", fmt(c.electron_mass_kg)},
        {"bohr_radius_m", fmt(c.bohr_radius_m)},
        {"hbar_Js", fmt(c.hbar_Js)},
        {"elementary_charge_C", fmt(c.elementary_charge_C)},
        {"hartree_kelvin", fmt(c.hartree_kelvin)},
    };
}

const PhysicalConstants& active_constants() {
    static const PhysicalConstants c = [] {
        if (const char* path = std::getenv("QUADTRAP_CONSTANTS"); path && *path)
            return load_constants(path);
        return PhysicalConstants{};
    }();
    return c;
}

std::string data_path(const std::string& file) {
    return std::string(QUADTRAP_DATA_DIR) + "/" + file;
}

}  // namespace quadtrap
