#include <doctest.h>

#include <cmath>

#include "coldkick/config.hpp"
#include "coldkick/model.hpp"
#include "coldkick/pipeline.hpp"

using namespace coldkick;

namespace {
double rel(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}
}  // namespace

TEST_SUITE_BEGIN("config");

TEST_CASE("quantity parsing accepts suffixed values") {
    CHECK(parse_quantity("35 ms", "time", "t") == doctest::Approx(0.035));
    CHECK(parse_quantity("1.1 s", "time", "t") == doctest::Approx(1.1));
    CHECK(parse_quantity("56 um", "length", "l") == doctest::Approx(56e-6));
    CHECK(parse_quantity("1600 pK", "temperature", "T") == doctest::Approx(1.6e-9));
    CHECK(parse_quantity("6.7 rad/s", "angular_frequency", "w") == doctest::Approx(6.7));
    CHECK(parse_quantity("1e-8 1/s", "rate", "lam") == doctest::Approx(1e-8));
    CHECK(parse_quantity("1e7 m/s", "velocity", "u") == doctest::Approx(1e7));
    CHECK(parse_quantity("0.95", "dimensionless", "level") == doctest::Approx(0.95));
}

TEST_CASE("quantity parsing rejects bad input") {
    CHECK_THROWS_AS(parse_quantity("35", "time", "t"), ConfigError);          // bare number
    CHECK_THROWS_AS(parse_quantity("35 m", "time", "t"), ConfigError);        // wrong dimension
    CHECK_THROWS_AS(parse_quantity("35 parsec", "length", "l"), ConfigError); // unknown unit
    CHECK_THROWS_AS(parse_quantity("abc ms", "time", "t"), ConfigError);
    CHECK_THROWS_AS(parse_quantity("0.95 s", "dimensionless", "x"), ConfigError);
}

TEST_CASE("full config round trip") {
    const std::string text = R"({
      "protocol": {"dt1": "1.1 s", "dt2": "35 ms", "dt3": "1.8 s",
                   "omega": "6.7 rad/s", "species": "Rb87",
                   "initial_sigma_x": "56 um", "initial_temperature": "1600 pK"},
      "noise": {"model": "dcsl", "lambda": "1e-8 1/s", "rc": "1e-7 m",
                "t_csl": "1 K", "boost": ["1e7 m/s", "0 m/s", "0 m/s"]},
      "scan": {"lambda_min": "1e-12 1/s", "lambda_max": "1e-4 1/s", "lambda_points": 10,
               "rc_min": "1e-8 m", "rc_max": "1e-6 m", "rc_points": 5,
               "band": {"mean": "120 um", "sigma": "40 um", "level": 0.95}},
      "sweep": {"kind": "kick-time", "min": "5 ms", "max": "35 ms", "points": 7},
      "output": {"format": "json", "precision": 12, "sampling": "5 ms"}
    })";
    const RunConfig cfg = parse_config(text);
    CHECK(cfg.protocol.dt2 == doctest::Approx(0.035));
    CHECK(rel(cfg.protocol.initial.x2, 3.0 * 56e-6 * 56e-6) < 1e-14);
    REQUIRE(cfg.noise.has_value());
    const Dcsl& d = std::get<Dcsl>(*cfg.noise);
    CHECK(d.lambda == doctest::Approx(1e-8));
    CHECK(d.boost[0] == doctest::Approx(1e7));
    REQUIRE(cfg.scan.has_value());
    CHECK(cfg.scan->lambda_axis.size() == 10);
    CHECK(cfg.scan->band.lo == doctest::Approx(41.6e-6).epsilon(1e-3));
    REQUIRE(cfg.sweep.has_value());
    CHECK(cfg.sweep->grid.size() == 7);
    CHECK(cfg.sweep->grid.front() == doctest::Approx(0.005));
    CHECK(cfg.sweep->grid.back() == doctest::Approx(0.035));
    CHECK(cfg.output.format == "json");
    CHECK(cfg.output.precision == 12);
    CHECK(cfg.output.sampling == doctest::Approx(0.005));
}

TEST_CASE("unknown keys are rejected with their path") {
    try {
        parse_config(R"({"protocol": {"dt1": "1 s", "bogus": 3}})");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("bogus") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config(R"({"unknown_top": {}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"noise": {"model": "csl", "lambda": "1e-8 1/s",
                                    "rc": "1e-7 m", "tau": "1 ms"}})"),
                    ConfigError);  // tau is not a csl key
}

TEST_CASE("dimensioned fields reject bare numbers") {
    CHECK_THROWS_AS(parse_config(R"({"protocol": {"dt1": 1.1}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"noise": {"model": "csl", "lambda": 1e-8,
                                    "rc": "1e-7 m"}})"),
                    ConfigError);
}

TEST_CASE("missing noise stays empty; defaults fill the protocol") {
    const RunConfig cfg = parse_config("{}");
    CHECK_FALSE(cfg.noise.has_value());
    CHECK(cfg.protocol.dt1 == 1.1);
    CHECK(cfg.protocol.omega == 6.7);
    CHECK(cfg.output.format == "csv");
    CHECK(cfg.output.precision == 17);
}

TEST_CASE("noise model variants parse") {
    CHECK(std::holds_alternative<QmOnly>(*parse_config(R"({"noise": {"model": "qm"}})").noise));
    CHECK(std::holds_alternative<Ccsl>(
        *parse_config(
             R"({"noise": {"model": "ccsl", "lambda": "1e-8 1/s", "rc": "1e-7 m", "tau": "1 ms"}})")
             .noise));
    CHECK_THROWS_AS(parse_config(R"({"noise": {"model": "banana"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"noise": {}})"), ConfigError);
}

TEST_CASE("calibrate mode hits the band mean at lambda = 0") {
    RunConfig cfg = parse_config(R"({"protocol": {"calibrate": true}})");
    CHECK(cfg.calibrate);
    const Protocol p = resolve_protocol(cfg);
    const double sigma = per_axis_sigma(run_protocol_final(p, QmOnly{}));
    CHECK(rel(sigma, 120e-6) < 1e-9);
    // the fitted temperature is of the expected order
    const double t0 = temperature_from_moments(p.initial.p2, p.species);
    CHECK(t0 > 1e-10);
    CHECK(t0 < 1e-8);
}

TEST_CASE("absolute detection-time switch") {
    RunConfig cfg = parse_config(
        R"({"protocol": {"dt3": "2.935 s", "dt3_from_origin": true}})");
    const Protocol p = resolve_protocol(cfg);
    CHECK(p.dt3 == doctest::Approx(1.8).epsilon(1e-12));
    RunConfig bad = parse_config(
        R"({"protocol": {"dt3": "0.5 s", "dt3_from_origin": true}})");
    CHECK_THROWS_AS(resolve_protocol(bad), ConfigError);
}

TEST_CASE("parse errors carry the origin") {
    try {
        parse_config("{ not json", "myfile.json");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("myfile.json") != std::string::npos);
    }
}

TEST_SUITE_END();
