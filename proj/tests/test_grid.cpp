#include <doctest.h>

#include "ferronematic/grid.hpp"

using namespace ferronematic;
using G = Grid2D<double>;

TEST_CASE("spacing follows the node count") {
    CHECK(G::make(51).delta_x() == doctest::Approx(0.02).epsilon(1e-15));
    CHECK(G::make(51).delta_y() == doctest::Approx(0.02).epsilon(1e-15));

    const auto g3 = G::make(3);
    CHECK(g3.delta_x() == 0.5);
    int interior = 0;
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i)
            if (g3.is_interior(i, j)) {
                ++interior;
                CHECK(i == 1);
                CHECK(j == 1);
            }
    CHECK(interior == 1);

    const auto g11 = G::make(11);
    CHECK(g11.x(5) == 0.5);
    CHECK(g11.y(5) == 0.5);
}

TEST_CASE("fewer than three nodes is rejected") {
    CHECK_THROWS_AS(G::make(2), std::invalid_argument);
    CHECK_THROWS_AS(G::make(0), std::invalid_argument);
}

TEST_CASE("every node is boundary xor interior") {
    for (int n : {3, 4, 8, 51}) {
        const auto g = G::make(n);
        std::size_t boundary = 0, interior = 0;
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                CHECK(g.is_boundary(i, j) != g.is_interior(i, j));
                (g.is_boundary(i, j) ? boundary : interior) += 1;
            }
        CHECK(boundary + interior == g.node_count());
        CHECK(interior == std::size_t(n - 2) * std::size_t(n - 2));
    }
}

TEST_CASE("trapezoid weights cover the unit square") {
    for (int n : {3, 8, 26}) {
        const auto g = G::make(n);
        double total = 0;
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) total += g.weight(i, j);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("nested grids share coordinates exactly") {
    const auto coarse = G::make(26), fine = G::make(51);
    for (int i = 0; i < 26; ++i) CHECK(coarse.x(i) == fine.x(2 * i));
    CHECK(fine.x(50) == 1.0);
}

TEST_CASE("state containers") {
    const auto g = G::make(4);
    auto s = State<double>::zeros(g);
    s[Component::M2](1, 2) = 3.5;
    CHECK(s.m.m2(1, 2) == 3.5);
    auto t = s;
    CHECK(t == s);
    t[Component::Q12](0, 0) = 1e-300;
    CHECK_FALSE(t == s);
    CHECK(max_abs_difference(s, t) == 1e-300);
    CHECK(q_norm_sq(1.0, 0.0) == 2.0);

    State<double> wrong{{g.zeros(), g.zeros()}, {g.zeros(), Field<double>::Zero(3, 4), g.zeros()}};
    CHECK_THROWS_AS(require_same_grid(g, wrong), std::invalid_argument);
}
