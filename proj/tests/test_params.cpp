#include <doctest.h>

#include <cmath>

#include "ferronematic/params.hpp"

using namespace ferronematic;

namespace {

DimensionalParams<double> unit_params() { return {1, 1, -1, 1, -1, 1, 1, 1, 1, 1}; }

}  // namespace

TEST_CASE("unit dimensional coefficients") {
    const auto p = nondimensionalize(unit_params());
    // By hand: l1 = K/(2|A|L²), l2 = κ/(|α|L²), ξ = C α²/(A² β_L),
    // coupling scale (μ/|A|) sqrt(C/(2|A|)) |α|/β_L, c3 = μ/|α|.
    CHECK(p.l1 == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p.l2 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p.xi == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p.c1 == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
    CHECK(p.c2 == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
    CHECK(p.c3 == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("scaled coefficients") {
    auto d = unit_params();
    d.A = -3;
    d.L = 0.5;
    d.K = 2 * 3 * 0.25;
    d.C = 2;
    d.alpha = -2;
    d.beta_L = 4;
    d.mu = 5;
    d.gamma1 = 0.7;
    d.chi1 = 0.3;
    const auto p = nondimensionalize(d);
    CHECK(p.l1 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p.l2 == doctest::Approx(1.0 / (2 * 0.25)).epsilon(1e-15));
    CHECK(p.xi == doctest::Approx((2.0 / 9.0) * (4.0 / 4.0)).epsilon(1e-15));
    const double scale = (5.0 / 3.0) * std::sqrt(2.0 / 6.0) * (2.0 / 4.0);
    CHECK(p.c1 == doctest::Approx(0.7 * scale).epsilon(1e-15));
    CHECK(p.c2 == doctest::Approx(0.3 * scale).epsilon(1e-15));
    CHECK(p.c3 == doctest::Approx(2.5).epsilon(1e-15));
}

TEST_CASE("zero coupling strength only removes c1") {
    auto d = unit_params();
    const auto ref = nondimensionalize(d);
    d.gamma1 = 0;
    const auto p = nondimensionalize(d);
    CHECK(p.c1 == 0.0);
    CHECK(p.l1 == ref.l1);
    CHECK(p.l2 == ref.l2);
    CHECK(p.xi == ref.xi);
    CHECK(p.c2 == ref.c2);
    CHECK(p.c3 == ref.c3);
}

TEST_CASE("sign constraints on dimensional input") {
    auto bad = unit_params();
    bad.A = 1;
    CHECK_THROWS_AS(nondimensionalize(bad), std::invalid_argument);
    bad = unit_params();
    bad.K = 0;
    CHECK_THROWS_AS(nondimensionalize(bad), std::invalid_argument);
    bad = unit_params();
    bad.chi1 = -1;
    CHECK_THROWS_AS(nondimensionalize(bad), std::invalid_argument);
}

TEST_CASE("model validation names the offending coefficient") {
    ModelParams<double> p;
    CHECK_NOTHROW(p.validate());
    p.xi = -1;
    try {
        p.validate();
        FAIL("expected a throw");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("xi") != std::string::npos);
    }
    p = {};
    p.c3 = -0.1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    p.h_ext(1) = std::nan("");
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
