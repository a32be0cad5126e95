#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ferronematic/grid.hpp"

namespace ferronematic {

/// Dirichlet data on the boundary node set. Interior entries hold NaN so that any
/// accidental read of them is visible.
template <typename Scalar>
struct BoundaryData {
    Grid2D<Scalar> grid;
    State<Scalar> values;

    /// Overwrites every boundary node of `s` with the stored data.
    void pin(State<Scalar>& s) const {
        const int n = grid.n();
        for (auto c : kAllComponents) {
            Field<Scalar>& f = s[c];
            const Field<Scalar>& b = values[c];
            for (int i = 0; i < n; ++i) {
                f(i, 0) = b(i, 0);
                f(i, n - 1) = b(i, n - 1);
            }
            for (int j = 1; j < n - 1; ++j) {
                f(0, j) = b(0, j);
                f(n - 1, j) = b(n - 1, j);
            }
        }
    }

    /// True when every boundary node of `s` equals the data bit for bit.
    bool matches(const State<Scalar>& s) const {
        const int n = grid.n();
        for (auto c : kAllComponents) {
            for (int j = 0; j < n; ++j) {
                for (int i = 0; i < n; ++i) {
                    if (grid.is_boundary(i, j) && s[c](i, j) != values[c](i, j)) return false;
                }
            }
        }
        return true;
    }
};

template <typename Scalar>
BoundaryData<Scalar> empty_boundary(const Grid2D<Scalar>& g) {
    const Scalar nan = std::numeric_limits<Scalar>::quiet_NaN();
    State<Scalar> v{{g.constant(nan), g.constant(nan)}, {g.constant(nan), g.constant(nan), g.constant(nan)}};
    return {g, v};
}

/// θ(x, y) = atan2(y - ½, x - ½) - π/2. At the exact centre atan2(0, 0) is taken
/// as 0, giving θ = -π/2.
template <typename Scalar>
Field<Scalar> theta_field(const Grid2D<Scalar>& g) {
    Field<Scalar> t(g.n(), g.n());
    const Scalar half_pi = std::numbers::pi_v<Scalar> / Scalar(2);
    for (int j = 0; j < g.n(); ++j) {
        for (int i = 0; i < g.n(); ++i) {
            const Scalar dx = g.x(i) - Scalar(0.5);
            const Scalar dy = g.y(j) - Scalar(0.5);
            const Scalar a = (dx == Scalar(0) && dy == Scalar(0)) ? Scalar(0) : std::atan2(dy, dx);
            t(i, j) = a - half_pi;
        }
    }
    return t;
}

/// True when the grid has a node exactly at (½, ½), where θ uses the atan2(0,0) := 0 convention.
template <typename Scalar>
bool has_center_node(const Grid2D<Scalar>& g) {
    return (g.n() - 1) % 2 == 0;
}

namespace detail {

inline void require_degree(int k) {
    if (k < 1) throw std::invalid_argument("degree k must be >= 1, got " + std::to_string(k));
}

template <typename Scalar>
void fill_degree_k(State<Scalar>& s, const Field<Scalar>& theta, int i, int j, int k, Scalar m3) {
    const Scalar sqrt3 = std::sqrt(Scalar(3));
    const Scalar t = theta(i, j);
    s.q.q11(i, j) = std::cos(Scalar(2 * k) * t);
    s.q.q12(i, j) = std::sin(Scalar(2 * k) * t);
    s.m.m1(i, j) = sqrt3 * std::cos(Scalar(k) * t);
    s.m.m2(i, j) = sqrt3 * std::sin(Scalar(k) * t);
    s.m.m3(i, j) = m3;
}

}  // namespace detail

/// Degree-k data: Q = (cos 2kθ, sin 2kθ), M = (√3 cos kθ, √3 sin kθ, m3_b).
template <typename Scalar>
BoundaryData<Scalar> degree_k_boundary(const Grid2D<Scalar>& g, int k, Scalar m3_b = Scalar(0)) {
    detail::require_degree(k);
    auto bd = empty_boundary(g);
    const auto theta = theta_field(g);
    for (int j = 0; j < g.n(); ++j) {
        for (int i = 0; i < g.n(); ++i) {
            if (g.is_boundary(i, j)) detail::fill_degree_k(bd.values, theta, i, j, k, m3_b);
        }
    }
    return bd;
}

/// Degree-k initial state over the whole grid, with M3 = √3 everywhere.
template <typename Scalar>
State<Scalar> degree_k_initial(const Grid2D<Scalar>& g, int k) {
    detail::require_degree(k);
    auto s = State<Scalar>::zeros(g);
    const auto theta = theta_field(g);
    const Scalar sqrt3 = std::sqrt(Scalar(3));
    for (int j = 0; j < g.n(); ++j) {
        for (int i = 0; i < g.n(); ++i) detail::fill_degree_k(s, theta, i, j, k, sqrt3);
    }
    return s;
}

/// Tangent data: Q = (-1, 0) on x = 0, 1 and (1, 0) on y = 0, 1; M = (0, 1), (0, -1),
/// (-1, 0), (1, 0) on x = 0, x = 1, y = 0, y = 1. Corners take the x-edge values.
template <typename Scalar>
BoundaryData<Scalar> tangent_bc(const Grid2D<Scalar>& g, Scalar m3_b = Scalar(0)) {
    auto bd = empty_boundary(g);
    auto& v = bd.values;
    const int n = g.n();
    auto set = [&](int i, int j, Scalar q11, Scalar m1, Scalar m2) {
        v.q.q11(i, j) = q11;
        v.q.q12(i, j) = 0;
        v.m.m1(i, j) = m1;
        v.m.m2(i, j) = m2;
        v.m.m3(i, j) = m3_b;
    };
    for (int i = 0; i < n; ++i) {
        set(i, 0, 1, -1, 0);
        set(i, n - 1, 1, 1, 0);
    }
    for (int j = 0; j < n; ++j) {
        set(0, j, -1, 0, 1);
        set(n - 1, j, -1, 0, -1);
    }
    return bd;
}

/// Uniform initial guess Q = (c, c), M = (c, c, m3_i).
template <typename Scalar>
State<Scalar> tangent_ic(const Grid2D<Scalar>& g, Scalar c1, Scalar m3_i = Scalar(0)) {
    return {{g.constant(c1), g.constant(c1)}, {g.constant(c1), g.constant(c1), g.constant(m3_i)}};
}

}  // namespace ferronematic
