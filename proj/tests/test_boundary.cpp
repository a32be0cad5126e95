#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ferronematic/analysis.hpp"
#include "ferronematic/boundary.hpp"
#include "ferronematic/solver.hpp"

using namespace ferronematic;
using G = Grid2D<double>;

namespace {

const double kPi = std::numbers::pi;
const double kSqrt3 = std::sqrt(3.0);

// Node index of a coordinate on an odd grid.
int at(const G& g, double x) { return static_cast<int>(std::lround(x * (g.n() - 1))); }

}  // namespace

TEST_CASE("angle field") {
    const auto g = G::make(11);
    const auto t = theta_field(g);
    CHECK(t(at(g, 1), at(g, 0.5)) == doctest::Approx(-kPi / 2).epsilon(1e-15));
    CHECK(t(at(g, 0.5), at(g, 1)) == doctest::Approx(0.0));
    CHECK(std::abs(t(at(g, 0.5), at(g, 1))) < 1e-15);
    CHECK(t(at(g, 0), at(g, 0.5)) == doctest::Approx(kPi / 2).epsilon(1e-15));
    CHECK(t(5, 5) == doctest::Approx(-kPi / 2).epsilon(1e-15));
    CHECK(has_center_node(g));
    CHECK_FALSE(has_center_node(G::make(8)));
}

TEST_CASE("degree-k boundary values") {
    const auto g = G::make(11);
    const auto b1 = degree_k_boundary(g, 1, 0.25);
    const int i = at(g, 1), j = at(g, 0.5);
    CHECK(b1.values.q.q11(i, j) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(std::abs(b1.values.q.q12(i, j)) < 1e-15);
    CHECK(std::abs(b1.values.m.m1(i, j)) < 1e-15);
    CHECK(b1.values.m.m2(i, j) == doctest::Approx(-kSqrt3).epsilon(1e-15));
    CHECK(b1.values.m.m3(i, j) == 0.25);

    const auto b2 = degree_k_boundary(g, 2);
    const int i2 = at(g, 0.5), j2 = at(g, 1);
    CHECK(b2.values.q.q11(i2, j2) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(b2.values.q.q12(i2, j2)) < 1e-15);
    CHECK(b2.values.m.m1(i2, j2) == doctest::Approx(kSqrt3).epsilon(1e-15));
    CHECK(b2.values.m.m3(i2, j2) == 0.0);

    CHECK(std::isnan(b2.values.q.q11(5, 5)));
    CHECK_THROWS_AS(degree_k_boundary(g, 0), std::invalid_argument);
    CHECK_THROWS_AS(degree_k_initial(g, -1), std::invalid_argument);
}

TEST_CASE("degree-k amplitudes and windings") {
    for (int n : {11, 26, 51}) {
        const auto g = G::make(n);
        for (int k = 1; k <= 3; ++k) {
            const auto b = degree_k_boundary(g, k);
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) {
                    if (!g.is_boundary(i, j)) continue;
                    CHECK(std::abs(std::hypot(b.values.q.q11(i, j), b.values.q.q12(i, j)) - 1) < 1e-12);
                    CHECK(std::abs(std::hypot(b.values.m.m1(i, j), b.values.m.m2(i, j)) - kSqrt3) < 1e-12);
                }
            CHECK(contour_winding(b.values.q.q11, b.values.q.q12, g) == 2 * k);
            CHECK(contour_winding(b.values.m.m1, b.values.m.m2, g) == k);
        }
    }
}

TEST_CASE("degree-k initial state") {
    const auto g = G::make(11);
    const auto s = degree_k_initial(g, 2);
    const auto b = degree_k_boundary(g, 2, 0.25);
    CHECK(s.m.m3(5, 5) == kSqrt3);
    CHECK(s.q.q11(5, 5) == doctest::Approx(std::cos(-2 * kPi)).epsilon(1e-15));
    for (int j = 0; j < 11; ++j)
        for (int i = 0; i < 11; ++i) {
            CHECK(s.m.m3(i, j) == kSqrt3);
            if (g.is_boundary(i, j)) {
                CHECK(s.q.q11(i, j) == b.values.q.q11(i, j));
                CHECK(s.q.q12(i, j) == b.values.q.q12(i, j));
                CHECK(s.m.m1(i, j) == b.values.m.m1(i, j));
            }
        }
    CHECK_FALSE(b.matches(s));

    // After one step the boundary holds the boundary M3, not the initial √3.
    ModelParams<double> p;
    SolverConfig<double> cfg;
    cfg.max_time = cfg.delta_t;
    const auto tr = run(s, b, p, cfg, g);
    CHECK(b.matches(tr.final_state));
    CHECK(tr.final_state.m.m3(0, 3) == 0.25);
    CHECK(tr.final_state.m.m3(5, 5) != 0.25);
}

TEST_CASE("tangent data") {
    const auto g = G::make(11);
    const auto b = tangent_bc(g, 0.1);
    const auto& v = b.values;
    const int mid = 5, top = 10;
    CHECK(v.q.q11(mid, top) == 1.0);
    CHECK(v.q.q12(mid, top) == 0.0);
    CHECK(v.m.m1(mid, top) == 1.0);
    CHECK(v.m.m2(mid, top) == 0.0);
    CHECK(v.m.m3(mid, top) == 0.1);
    CHECK(v.m.m1(mid, 0) == -1.0);
    CHECK(v.q.q11(0, mid) == -1.0);
    CHECK(v.m.m2(0, mid) == 1.0);
    CHECK(v.m.m2(top, mid) == -1.0);

    // The director on the horizontal edges is tangent.
    CHECK(director_at(v.q.q11(mid, 0), v.q.q12(mid, 0)).angle == 0.0);
    CHECK(director_at(v.q.q11(mid, top), v.q.q12(mid, top)).angle == 0.0);

    // Corners follow the vertical edges.
    for (auto [i, j] : {std::pair{0, 0}, {0, top}, {top, 0}, {top, top}}) CHECK(v.q.q11(i, j) == -1.0);
    CHECK(v.m.m2(0, 0) == 1.0);
    CHECK(v.m.m2(top, top) == -1.0);

    CHECK(contour_winding(v.m.m1, v.m.m2, g) == 1);

    const auto s = tangent_ic(g, 0.5, 0.2);
    CHECK(s.q.q11(3, 4) == 0.5);
    CHECK(s.q.q12(0, 0) == 0.5);
    CHECK(s.m.m1(7, 7) == 0.5);
    CHECK(s.m.m2(2, 9) == 0.5);
    CHECK(s.m.m3(2, 9) == 0.2);
}

TEST_CASE("boundary nodes stay pinned over many steps") {
    const auto g = G::make(13);
    const auto b = degree_k_boundary(g, 1, 0.25);
    ModelParams<double> p;
    p.c1 = 2;
    p.c2 = 8;
    p.c3 = 2;
    p.h_ext << 0.4, 0, 0;
    SolverConfig<double> cfg;
    cfg.max_time = 50 * cfg.delta_t;
    cfg.snapshot_every = 1;
    const auto tr = run(degree_k_initial(g, 1), b, p, cfg, g);
    CHECK(tr.snapshots.size() == 51);
    for (const auto& snap : tr.snapshots) CHECK(b.matches(snap.state));
}
