#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

#include "ferronematic/boundary.hpp"
#include "ferronematic/energy.hpp"
#include "ferronematic/grid.hpp"
#include "ferronematic/params.hpp"

namespace ferronematic {

/// Initial state together with its Dirichlet data.
template <typename Scalar>
struct Scenario {
    State<Scalar> initial;
    BoundaryData<Scalar> boundary;
};

template <typename Scalar>
Scenario<Scalar> degree_k_scenario(const Grid2D<Scalar>& g, int k, Scalar m3_b = Scalar(0)) {
    return {degree_k_initial(g, k), degree_k_boundary(g, k, m3_b)};
}

template <typename Scalar>
Scenario<Scalar> tangent_scenario(const Grid2D<Scalar>& g, Scalar c_init, Scalar m3_b = Scalar(0),
                                  Scalar m3_i = Scalar(0)) {
    return {tangent_ic(g, c_init, m3_i), tangent_bc(g, m3_b)};
}

/// Spatially uniform state with zero reaction. Starts from the nematic/magnetic
/// ground state aligned with x, relaxes the local flow, then polishes with Newton.
template <typename Scalar>
NodeValues<Scalar> uniform_equilibrium(const ModelParams<Scalar>& p, Scalar tol = Scalar(1e-13)) {
    using Vec5 = Eigen::Matrix<Scalar, 5, 1>;
    auto residual = [&](const Vec5& z) {
        const NodeValues<Scalar> v{z(0), z(1), z(2), z(3), z(4)};
        Vec5 r;
        for (auto c : kAllComponents) r(static_cast<int>(c)) = reaction(v, p, c);
        if (!p.m3_enabled) r(4) = z(4);
        return r;
    };
    Vec5 z;
    z << Scalar(1), Scalar(0), Scalar(1), Scalar(0), Scalar(0);
    const Scalar stiffness = Scalar(1) + Scalar(3) * p.xi + p.c1 + p.c3 * p.xi;
    const Scalar step = Scalar(0.05) / stiffness;
    for (int it = 0; it < 20000 && residual(z).template lpNorm<Eigen::Infinity>() > Scalar(1e-6); ++it) {
        z += step * residual(z);
    }
    for (int it = 0; it < 50; ++it) {
        const Vec5 r = residual(z);
        if (r.template lpNorm<Eigen::Infinity>() < tol) break;
        Eigen::Matrix<Scalar, 5, 5> jac;
        for (int k = 0; k < 5; ++k) {
            Vec5 dz = Vec5::Zero();
            const Scalar h = Scalar(1e-7) * (Scalar(1) + std::abs(z(k)));
            dz(k) = h;
            jac.col(k) = (residual(z + dz) - residual(z - dz)) / (Scalar(2) * h);
        }
        z -= jac.fullPivLu().solve(r);
    }
    if (!(residual(z).template lpNorm<Eigen::Infinity>() < Scalar(1e-9))) {
        throw std::runtime_error("uniform equilibrium search did not converge");
    }
    return {z(0), z(1), z(2), z(3), z(4)};
}

/// Uniform equilibrium plus interior bumps built from sin(mπx) sin(nπy). The bumps and
/// their Laplacians vanish on ∂Ω, so the data is compatible with the frozen boundary
/// values and the solution stays smooth up to the boundary.
template <typename Scalar>
Scenario<Scalar> smooth_scenario(const Grid2D<Scalar>& g, const ModelParams<Scalar>& p,
                                 Scalar amplitude = Scalar(0.2)) {
    const auto eq = uniform_equilibrium(p);
    const Scalar pi = std::numbers::pi_v<Scalar>;
    auto s = State<Scalar>::zeros(g);
    for (int j = 0; j < g.n(); ++j) {
        for (int i = 0; i < g.n(); ++i) {
            const Scalar x = g.x(i), y = g.y(j);
            const Scalar b1 = std::sin(pi * x) * std::sin(pi * y);
            const Scalar b2 = std::sin(Scalar(2) * pi * x) * std::sin(pi * y);
            s.q.q11(i, j) = eq.q11 + amplitude * b1;
            s.q.q12(i, j) = eq.q12 + Scalar(1.5) * amplitude * b2;
            s.m.m1(i, j) = eq.m1 - amplitude * b1;
            s.m.m2(i, j) = eq.m2 + Scalar(1.25) * amplitude * b2;
            s.m.m3(i, j) = p.m3_enabled ? eq.m3 + Scalar(0.5) * amplitude * b1 : Scalar(0);
        }
    }
    auto bd = empty_boundary(g);
    for (int j = 0; j < g.n(); ++j) {
        for (int i = 0; i < g.n(); ++i) {
            if (!g.is_boundary(i, j)) continue;
            bd.values.q.q11(i, j) = eq.q11;
            bd.values.q.q12(i, j) = eq.q12;
            bd.values.m.m1(i, j) = eq.m1;
            bd.values.m.m2(i, j) = eq.m2;
            bd.values.m.m3(i, j) = p.m3_enabled ? eq.m3 : Scalar(0);
        }
    }
    bd.pin(s);
    return {s, bd};
}

}  // namespace ferronematic
