#include "pat/medium.hpp"

#include <doctest.h>

using namespace pat;

TEST_CASE("nondimensional water / Parylene / polycarbonate") {
    const MediumParams p = nondimensionalize(water_parylene_polycarbonate(), 0.01, 1500.0, 1000.0);
    CHECK(p.c == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p.rho == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p.c_s == doctest::Approx(22.0 / 15.0).epsilon(1e-15));
    CHECK(p.rho_s == doctest::Approx(1.18).epsilon(1e-15));
    CHECK(p.c_b == doctest::Approx(2180.0 / 1500.0).epsilon(1e-15));
    CHECK(p.rho_b == doctest::Approx(1.18).epsilon(1e-15));
    CHECK(p.H == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p.h == doctest::Approx(0.004).epsilon(1e-15));
    CHECK(p == default_nondimensional_medium());
}

TEST_CASE("identity scaling leaves parameters unchanged") {
    const MediumParams si = water_parylene_polycarbonate();
    const MediumParams same = nondimensionalize(si, 1.0, 1.0, 1.0);
    CHECK(same == si);
}

TEST_CASE("impedance ratio is scale free") {
    const MediumParams si = water_parylene_polycarbonate();
    const MediumParams nd = default_nondimensional_medium();
    const double before = si.rho * si.c / (si.rho_b * si.c_b);
    CHECK(sensor_coefficients(nd).alpha == doctest::Approx(before).epsilon(1e-14));
}

TEST_CASE("nonpositive reference scales are rejected") {
    CHECK_THROWS_AS(nondimensionalize(water_parylene_polycarbonate(), 0.0, 1500.0), ConfigError);
    CHECK_THROWS_AS(nondimensionalize(water_parylene_polycarbonate(), 0.01, -1.0), ConfigError);
}

TEST_CASE("sensor coefficients") {
    MediumParams flat = default_nondimensional_medium();
    flat.H = 0.0;
    const SensorCoefficients f = sensor_coefficients(flat);
    CHECK(f.a == 0.0);
    CHECK(f.b == 0.0);

    const SensorCoefficients s = sensor_coefficients(default_nondimensional_medium());
    const double alpha = 1.0 / (1.18 * 2180.0 / 1500.0);
    CHECK(s.alpha == doctest::Approx(alpha).epsilon(1e-14));
    CHECK(s.alpha == doctest::Approx(0.58312).epsilon(1e-5));
    CHECK(s.cs2 == doctest::Approx(484.0 / 225.0).epsilon(1e-14));

    MediumParams matched = default_nondimensional_medium();
    matched.rho_b = 2.0;
    matched.c_b = 0.5;
    CHECK(sensor_coefficients(matched).alpha == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("b / a equals H c_b") {
    for (double H : {0.5, 1.0, 3.0}) {
        MediumParams p = default_nondimensional_medium();
        p.H = H;
        const SensorCoefficients s = sensor_coefficients(p);
        REQUIRE(s.a != 0.0);
        CHECK(s.b / s.a == doctest::Approx(H * p.c_b).epsilon(1e-14));
        CHECK(s.a >= 0.0);
        CHECK(s.b >= 0.0);
    }
}

TEST_CASE("coefficients depend on density ratios only") {
    const MediumParams p = default_nondimensional_medium();
    MediumParams q = p;
    q.rho *= 7.5;
    q.rho_s *= 7.5;
    q.rho_b *= 7.5;
    const SensorCoefficients a = sensor_coefficients(p);
    const SensorCoefficients b = sensor_coefficients(q);
    CHECK(a.a == doctest::Approx(b.a).epsilon(1e-14));
    CHECK(a.b == doctest::Approx(b.b).epsilon(1e-14));
    CHECK(a.alpha == doctest::Approx(b.alpha).epsilon(1e-14));
}

TEST_CASE("validation") {
    MediumParams p = default_nondimensional_medium();
    p.c_s = -1.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = default_nondimensional_medium();
    p.h = -0.1;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = default_nondimensional_medium();
    p.c_field = {1.0, 1.0};
    CHECK_THROWS_AS(p.validate(3), ConfigError);
    p.c_field = {1.0, 0.0, 1.0};
    CHECK_THROWS_AS(p.validate(3), ConfigError);
}

TEST_CASE("idealized medium replaces the sensor layers") {
    const MediumParams p = idealized_medium(default_nondimensional_medium());
    CHECK(p.c_s == p.c);
    CHECK(p.c_b == p.c);
    CHECK(p.rho_s == p.rho);
    CHECK(p.rho_b == p.rho);
    CHECK(sensor_coefficients(p).alpha == 1.0);
}
