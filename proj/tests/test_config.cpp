#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include "quadtrap/config.hpp"
#include "quadtrap/potential.hpp"
#include "quadtrap/zeeman.hpp"

using namespace quadtrap;

TEST_CASE("key-value parsing skips comments and blank lines") {
    std::istringstream in("# header\n\na = 1\n b=two words  # trailing\nc = 3\n");
    const auto kv = parse_key_values(in);
    REQUIRE(kv.size() == 3);
    CHECK(kv[0].first == "a");
    CHECK(kv[1].second == "two words");
    CHECK(*find_value(kv, "c") == "3");
    CHECK(find_value(kv, "missing") == nullptr);
}

TEST_CASE("key-value parsing rejects malformed lines") {
    std::istringstream in("no equals sign\n");
    CHECK_THROWS_AS(parse_key_values(in), std::invalid_argument);
    std::istringstream in2(" = 4\n");
    CHECK_THROWS_AS(parse_key_values(in2), std::invalid_argument);
}

TEST_CASE("write then parse round-trips") {
    KeyValues kv{{"sigma", "0.5"}, {"delta", "1e-5"}};
    std::stringstream ss;
    write_key_values(ss, kv);
    CHECK(parse_key_values(ss) == kv);
}

TEST_CASE("numbers and lists") {
    CHECK(parse_double(" 2.5e-3 ", "x") == doctest::Approx(2.5e-3));
    CHECK_THROWS_AS(parse_double("2.5x", "x"), std::invalid_argument);
    CHECK_THROWS_AS(parse_double("", "x"), std::invalid_argument);
    const auto parts = split_list("1, 2 ,3");
    REQUIRE(parts.size() == 3);
    CHECK(parts[1] == "2");
}

TEST_CASE("shipped constants file matches the built-in table") {
    const PhysicalConstants file = load_constants(data_path("constants.cfg"));
    const PhysicalConstants def;
    CHECK(file.electron_mass_u == def.electron_mass_u);
    CHECK(file.bohr_radius_m == def.bohr_radius_m);
    CHECK(file.hbar_Js == def.hbar_Js);
    CHECK(file.hartree_kelvin == def.hartree_kelvin);
}

TEST_CASE("constants reject unknown keys and non-positive values") {
    CHECK_THROWS_AS(constants_from({{"speed_of_light", "3e8"}}), std::invalid_argument);
    CHECK_THROWS_AS(constants_from({{"hbar_Js", "-1"}}), std::invalid_argument);
    const auto c = constants_from({{"hartree_kelvin", "300000"}});
    CHECK(c.hartree_kelvin == 300000);
    CHECK(c.hbar_Js == PhysicalConstants{}.hbar_Js);
}

TEST_CASE("constants round-trip through key-values") {
    PhysicalConstants c;
    c.hartree_kelvin = 123.5;
    const auto back = constants_from(to_key_values(c));
    CHECK(back.hartree_kelvin == 123.5);
    CHECK(back.elementary_charge_C == c.elementary_charge_C);
}

TEST_CASE("molecule file matches the embedded presets") {
    const auto file = load_molecules(data_path("molecules.cfg"));
    const auto builtin = builtin_molecules();
    REQUIRE(file.size() == builtin.size());
    for (std::size_t i = 0; i < file.size(); ++i) {
        CHECK(file[i].name == builtin[i].name);
        CHECK(file[i].mass_A == builtin[i].mass_A);
        CHECK(file[i].Z_A == builtin[i].Z_A);
        CHECK(file[i].n_electrons == file[i].Z_A + file[i].Z_B);
    }
}

TEST_CASE("molecule parsing validates fields") {
    CHECK_THROWS_AS(parse_molecules({{"X2", "1, 1, 1"}}), std::invalid_argument);
    CHECK_THROWS_AS(parse_molecules({{"X2", "1, 1, 1.5, 1"}}), std::invalid_argument);
    CHECK_THROWS_AS(parse_molecules({{"X2", "-1, 1, 1, 1"}}), std::invalid_argument);
    const auto m = parse_molecules({{"X2", "2, 2, 1, 1, 3.0"}});
    REQUIRE(m.size() == 1);
    CHECK(m[0].B_e == 3.0);
    CHECK_THROWS_AS(find_molecule(m, "Y2"), std::invalid_argument);
}

TEST_CASE("potential params round-trip and eta consistency") {
    const auto p = PotentialParams::raw(0.5, 1e-5);
    const auto back = params_from(to_key_values(p));
    CHECK(back.sigma == p.sigma);
    CHECK(back.delta == p.delta);
    CHECK(back.eta == doctest::Approx(2e-5).epsilon(1e-15));
    CHECK_THROWS_AS(params_from({{"sigma", "0.5"}, {"delta", "1e-5"}, {"eta", "1"}}), std::invalid_argument);
    CHECK_THROWS_AS(params_from({{"sigma", "0.5"}}), std::invalid_argument);
}
