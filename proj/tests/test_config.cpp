#include <doctest.h>

#include "abmdp/config.hpp"
#include "abmdp/system_model.hpp"

using namespace abmdp;

TEST_CASE("bundled preset carries the documented constants") {
    RunConfig c = paper_sec4_preset();
    CHECK(c.system.eta == 0.8);
    CHECK(c.system.t0 == 1.0);
    CHECK(c.system.r_b == 1e4);
    CHECK(c.system.delta0_sq == 1e-10);
    CHECK(c.system.delta1_sq == 1e-8);
    CHECK(c.system.h == 5e-5);
    CHECK(c.system.b_c == 9);
    CHECK(c.system.j_cost == 1);
    CHECK(c.system.k_cost == 3);
    CHECK(c.ql_eps0 == 0.2);
    REQUIRE(c.system.gains.size() == 5);
    CHECK(c.system.gains[1] == 3e-5);
    for (std::size_t i = 0; i < 5; ++i)
        CHECK(c.system.gains[i] == doctest::Approx(3e-5 * double(i)));
    // e0 in auto mode tracks eta * G_1 * P_t * T_0.
    CHECK(c.system.e0 == doctest::Approx(0.8 * 3e-5 * c.system.p_t));
    CHECK(c.channel.size() == 5);
    CHECK(c.channel.rows[0][0] == 0.40);
    CHECK(c.channel.rows[4][4] == 0.40);
    CHECK_NOTHROW(c.validate());

    // The quantization convention makes every level harvest its own index.
    for (int i = 0; i <= c.system.y_max(); ++i)
        CHECK(harvested_units(i, c.system) == i);
}

TEST_CASE("serialize then parse is the identity") {
    RunConfig c = paper_sec4_preset();
    c.system.p_t = 1.7;
    c.seed = 123456789;
    c.resolve_e0();
    std::string text = serialize_config(c, true);
    RunConfig back = parse_config(text, paper_sec4_preset());
    CHECK(back.system.p_t == c.system.p_t);
    CHECK(back.system.e0 == c.system.e0);
    CHECK(back.seed == c.seed);
    CHECK(back.system.gains == c.system.gains);
    CHECK(back.channel.rows == c.channel.rows);
    CHECK(back.theta == c.theta);
    CHECK(back.ql_alpha == c.ql_alpha);
    CHECK(back.n_slots == c.n_slots);
    CHECK(back.sweep_powers == c.sweep_powers);
    CHECK(serialize_config(back, true) == text);
}

TEST_CASE("unknown keys and sections are rejected by name") {
    CHECK_THROWS_WITH_AS(parse_config("[system]\nfoo = 1\n", paper_sec4_preset()),
                         doctest::Contains("system.foo"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config("[nonsense]\n", paper_sec4_preset()),
                         doctest::Contains("nonsense"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("loose = 1\n", paper_sec4_preset()), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("[sim]\nn_slots = abc\n", paper_sec4_preset()),
                    std::invalid_argument);
}

TEST_CASE("partial files override the preset") {
    RunConfig c = parse_config("[system]\np_t = 1.5\n\n[sim]\nseed = 9\n", paper_sec4_preset());
    CHECK(c.system.p_t == 1.5);
    CHECK(c.seed == 9);
    CHECK(c.system.b_c == 9);  // untouched preset value
    // auto e0 follows the new power.
    CHECK(c.system.e0 == doctest::Approx(0.8 * 3e-5 * 1.5));
}

TEST_CASE("channel section replaces the whole matrix") {
    std::string text =
        "[system]\ngains = 0 1e-5\n\n[channel]\n0.5 0.5\n0.25 0.75\n";
    RunConfig c = parse_config(text, paper_sec4_preset());
    CHECK(c.channel.size() == 2);
    CHECK(c.channel.rows[1][0] == 0.25);
    CHECK_NOTHROW(c.validate());

    // Changing the gain count without the matrix leaves inconsistent
    // dimensions, which the parser refuses.
    CHECK_THROWS_AS(parse_config("[system]\ngains = 0 1e-5\n", paper_sec4_preset()),
                    std::invalid_argument);
}

TEST_CASE("validation names the failing invariant") {
    RunConfig c = paper_sec4_preset();
    c.e0_auto = false;
    c.system.e0 = -1.0;
    CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("e0"), std::invalid_argument);

    c = paper_sec4_preset();
    c.e_initial = 42;
    CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("e_initial"), std::invalid_argument);

    c = paper_sec4_preset();
    c.channel.rows[2][0] = 0.2;  // row no longer sums to one
    CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("row 2"), std::invalid_argument);
}

TEST_CASE("explicit e0 switches auto mode off") {
    RunConfig c = parse_config("[system]\ne0 = 5e-5\n", paper_sec4_preset());
    CHECK_FALSE(c.e0_auto);
    CHECK(c.system.e0 == 5e-5);
    c.system.p_t = 99.0;
    c.resolve_e0();
    CHECK(c.system.e0 == 5e-5);  // stays pinned
}
