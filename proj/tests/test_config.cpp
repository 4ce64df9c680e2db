#include <doctest.h>

#include "cqmtf/config.hpp"
#include "cqmtf/errors.hpp"

#include <algorithm>
#include <cmath>

using namespace cqmtf;

TEST_CASE("complex literals") {
    CHECK(parse_complex("-i") == cd(0, -1));
    CHECK(parse_complex("i") == cd(0, 1));
    CHECK(parse_complex("1-i") == cd(1, -1));
    CHECK(parse_complex("100-100i") == cd(100, -100));
    CHECK(parse_complex("-4i") == cd(0, -4));
    CHECK(parse_complex("2+3i") == cd(2, 3));
    CHECK(parse_complex("2.5") == cd(2.5, 0));
    CHECK(parse_complex(" 1e1 - 2e-1i ") == cd(10, -0.2));
    CHECK_THROWS_AS(parse_complex("1+"), ConfigError);
    CHECK_THROWS_AS(parse_complex("abc"), ConfigError);
}

TEST_CASE("every preset loads and validates") {
    const auto names = preset_names();
    for (const char* n : {"test0", "test1", "circle2", "square4", "kite2", "freqA", "freqB", "freqC", "freqD"})
        CHECK(std::find(names.begin(), names.end(), n) != names.end());
    for (const auto& n : names) CHECK_NOTHROW(load_preset(n));
}

TEST_CASE("preset values") {
    const RunConfig t0 = load_preset("test0");
    CHECK(t0.experiment == "manufactured");
    CHECK(t0.scene == "circle1");
    CHECK(t0.c == std::vector<double>{1.0, 0.5});
    CHECK(t0.T == 5.0);
    CHECK(t0.omega == 1.0);
    CHECK(t0.reference == "exact");
    CHECK(t0.N_list == std::vector<int>{32, 64, 128, 256});

    const RunConfig c2 = load_preset("circle2");
    CHECK(c2.c == std::vector<double>{1.0, 0.5, 0.25});
    CHECK(c2.omega == 8.0);
    CHECK(c2.d.x() == doctest::Approx(std::sqrt(0.5)));
    CHECK(c2.d.y() == doctest::Approx(-std::sqrt(0.5)));
    CHECK(c2.snapshot_times.size() == 9);

    const RunConfig sq = load_preset("square4");
    CHECK(sq.c.size() == 5);
    CHECK(sq.size == 1.0);

    const RunConfig fd = load_preset("freqD");
    REQUIRE(fd.s.size() == 3);
    CHECK(fd.s[2] == cd(100, -100));
    CHECK(fd.L_list == std::vector<int>{5, 10, 20, 40});
    CHECK(fd.L_ref == 80);
    const RunConfig fa = load_preset("freqA");
    CHECK(fa.s[0] == cd(0, -1));
}

TEST_CASE("unknown preset names the valid ones") {
    try {
        load_preset("nope");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("nope") != std::string::npos);
        CHECK(msg.find("circle2") != std::string::npos);
        CHECK(msg.find("freqA") != std::string::npos);
    }
}

TEST_CASE("overrides and malformed input") {
    RunConfig cfg = load_preset("test0");
    set_option(cfg, "N", "128");
    set_option(cfg, "scheme", "radau2");
    CHECK(cfg.N == 128);
    CHECK(cfg.scheme == "radau2");
    CHECK_THROWS_AS(set_option(cfg, "no_such_key", "1"), ConfigError);
    CHECK_THROWS_AS(set_option(cfg, "N", "many"), ConfigError);
    CHECK_THROWS_AS(parse_config("just a line\n"), ConfigError);
    // circle2 needs three wavespeeds
    CHECK_THROWS_AS(parse_config("experiment = planewave\nscene = circle2\nc = 1, 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("experiment = planewave\nscene = circle1\nc = 1, -1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("experiment = planewave\nscene = hexagon\nc = 1, 1\n"), ConfigError);
}

TEST_CASE("metadata header records the configuration as read") {
    const RunConfig cfg = parse_config("# comment\nname = demo\nexperiment = planewave\nscene = circle1\n"
                                       "c = 1, 0.5\nd = sqrt(0.5), -sqrt(0.5)\n");
    const std::string h = metadata_header(cfg);
    CHECK(h.find("# name = demo\n") != std::string::npos);
    CHECK(h.find("# d = sqrt(0.5), -sqrt(0.5)\n") != std::string::npos);
    CHECK(h.find("comment") == std::string::npos);
}
