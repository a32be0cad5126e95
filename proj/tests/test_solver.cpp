#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ferronematic/scenario.hpp"
#include "ferronematic/solver.hpp"

using namespace ferronematic;
using G = Grid2D<double>;

namespace {

State<double> random_state(const G& g, std::mt19937_64& rng, double amplitude) {
    std::uniform_real_distribution<double> u(-amplitude, amplitude);
    auto s = State<double>::zeros(g);
    for (auto c : kAllComponents)
        for (int j = 0; j < g.n(); ++j)
            for (int i = 0; i < g.n(); ++i) s[c](i, j) = u(rng);
    return s;
}

BoundaryData<double> boundary_of(const G& g, const State<double>& s) {
    auto b = empty_boundary(g);
    b.values = s;
    return b;
}

// Dense one-step heat operator on all nodes: boundary rows copy, interior rows
//   (η/δt)(u¹ - u⁰) = l [½ Dxx (u¹ + u⁰) + wy Dyy u¹ + (1 - wy) Dyy u⁰],
// wy = ½ for full Crank–Nicolson and 0 for the x-implicit form.
Field<double> dense_heat_step(const Field<double>& u0, const G& g, double l, double eta, double dt, double wy) {
    const int n = g.n();
    const int N = n * n;
    const double h2 = g.delta_x() * g.delta_x();
    auto idx = [n](int i, int j) { return i + n * j; };
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N), B = Eigen::MatrixXd::Zero(N, N);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const int r = idx(i, j);
            if (g.is_boundary(i, j)) {
                A(r, r) = 1;
                B(r, r) = 1;
                continue;
            }
            A(r, r) += eta / dt;
            B(r, r) += eta / dt;
            const double wx = 0.5;
            for (auto [di, dj, w] : {std::tuple{1, 0, wx}, {-1, 0, wx}, {0, 1, wy}, {0, -1, wy}}) {
                A(r, idx(i + di, j + dj)) -= l * w / h2;
                A(r, r) += l * w / h2;
                B(r, idx(i + di, j + dj)) += l * (1 - w) / h2;
                B(r, r) -= l * (1 - w) / h2;
            }
        }
    Eigen::VectorXd v(N);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) v(idx(i, j)) = u0(i, j);
    const Eigen::VectorXd w = A.partialPivLu().solve(B * v);
    Field<double> out(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) out(i, j) = w(idx(i, j));
    return out;
}

ModelParams<double> linear_params() {
    ModelParams<double> p;
    p.l1 = 0.04;
    p.l2 = 0.09;
    p.xi = 1.5;
    p.eta1 = 0.7;
    p.eta2 = 1.3;
    return p;
}

}  // namespace

TEST_CASE("heat limit of the x-implicit scheme matches the dense operator") {
    std::mt19937_64 rng(1);
    const auto g = G::make(8);
    const auto s = random_state(g, rng, 1.0);
    const auto p = linear_params();
    SolverConfig<double> cfg;
    cfg.delta_t = 1e-3;
    cfg.centering = TimeCentering::Printed;
    cfg.diffusion_only = true;
    const auto res = cn_step(s, boundary_of(g, s), p, cfg, g);
    // The first pass is already the solution; the second only confirms it.
    REQUIRE(res.report.increment_history.size() == 2);
    CHECK(res.report.increment_history[1] == 0.0);
    for (auto c : kAllComponents) {
        const auto ref = dense_heat_step(s[c], g, diffusivity(p, c), friction(p, c), cfg.delta_t, 0.0);
        CHECK((res.state[c] - ref).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("heat limit of the centered scheme is full Crank-Nicolson") {
    std::mt19937_64 rng(2);
    const auto g = G::make(8);
    const auto s = random_state(g, rng, 1.0);
    const auto p = linear_params();
    SolverConfig<double> cfg;
    cfg.delta_t = 1e-3;
    cfg.epsilon = 1e-15;
    cfg.diffusion_only = true;
    const auto res = cn_step(s, boundary_of(g, s), p, cfg, g);
    for (auto c : kAllComponents) {
        const auto ref = dense_heat_step(s[c], g, diffusivity(p, c), friction(p, c), cfg.delta_t, 0.5);
        CHECK((res.state[c] - ref).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("equilibrium input is a fixed point") {
    const auto g = G::make(9);
    const State<double> s{{g.constant(1), g.zeros()}, {g.constant(1), g.zeros(), g.zeros()}};
    ModelParams<double> p;
    for (auto centering : {TimeCentering::Centered, TimeCentering::Printed}) {
        SolverConfig<double> cfg;
        cfg.centering = centering;
        const auto res = cn_step(s, boundary_of(g, s), p, cfg, g);
        CHECK(res.report.inner_iterations == 1);
        CHECK(max_abs_difference(res.state, s) < 1e-12);
        CHECK(res.report.final_increment_norm < cfg.epsilon);
    }
}

TEST_CASE("zero horizon returns the pinned initial state") {
    const auto g = G::make(11);
    SolverConfig<double> cfg;
    cfg.max_time = 0;
    const auto b = degree_k_boundary(g, 1);
    const auto tr = run(degree_k_initial(g, 1), b, ModelParams<double>{}, cfg, g);
    CHECK(tr.snapshots.size() == 1);
    CHECK(tr.energies.size() == 1);
    CHECK(tr.reports.empty());
    CHECK(tr.steps == 0);
    CHECK(tr.final_time == 0.0);
    CHECK(b.matches(tr.final_state));
    CHECK(tr.final_state == tr.snapshots.front().state);
}

TEST_CASE("energy samples follow the cadence") {
    const auto g = G::make(11);
    SolverConfig<double> cfg;
    cfg.max_time = 25 * cfg.delta_t;
    cfg.record_every = 10;
    const auto tr = run(degree_k_initial(g, 1), degree_k_boundary(g, 1), ModelParams<double>{}, cfg, g);
    REQUIRE(tr.energies.size() == 4);
    CHECK(tr.energies[1].step == 10);
    CHECK(tr.energies[3].step == 25);
    CHECK(tr.energies[3].t == doctest::Approx(25e-5).epsilon(1e-12));
    CHECK(tr.steps == 25);
    CHECK(tr.snapshots.size() == 2);
}

TEST_CASE("steady input stops after one step") {
    const auto g = G::make(9);
    const State<double> s{{g.constant(1), g.zeros()}, {g.constant(1), g.zeros(), g.zeros()}};
    SolverConfig<double> cfg;
    cfg.max_time = 1;
    const auto tr = run(s, boundary_of(g, s), ModelParams<double>{}, cfg, g);
    CHECK(tr.reached_steady);
    CHECK(tr.steps == 1);
}

TEST_CASE("identical inputs give identical trajectories") {
    const auto g = G::make(15);
    ModelParams<double> p;
    p.c1 = 2;
    p.c2 = 8;
    p.c3 = 2;
    p.h_ext << 0.875, 0, 0;
    SolverConfig<double> cfg;
    cfg.max_time = 40 * cfg.delta_t;
    cfg.record_every = 1;
    const auto a = run(degree_k_initial(g, 2), degree_k_boundary(g, 2), p, cfg, g);
    const auto b = run(degree_k_initial(g, 2), degree_k_boundary(g, 2), p, cfg, g);
    CHECK(a.final_state == b.final_state);
    REQUIRE(a.energies.size() == b.energies.size());
    for (std::size_t k = 0; k < a.energies.size(); ++k) CHECK(a.energies[k].energy.total == b.energies[k].energy.total);
    for (std::size_t k = 0; k < a.reports.size(); ++k)
        CHECK(a.reports[k].increment_history == b.reports[k].increment_history);
}

TEST_CASE("degree-k flow dissipates energy") {
    const auto g = G::make(21);
    ModelParams<double> p;
    p.c1 = 2;
    p.c2 = 8;
    p.c3 = 2;
    for (double h : {0.0, 4.0}) {
        for (bool m3 : {false, true}) {
            p.h_ext << h, 0, 0;
            p.m3_enabled = m3;
            SolverConfig<double> cfg;
            cfg.max_time = 300 * cfg.delta_t;
            const auto tr = run(degree_k_initial(g, 1), degree_k_boundary(g, 1), p, cfg, g);
            CHECK(count_dissipation_violations(tr.reports) == 0);
            for (const auto& r : tr.reports) CHECK(r.final_increment_norm < cfg.epsilon);
            CHECK(tr.energies.back().energy.total < tr.energies.front().energy.total);
            if (!m3) CHECK(tr.final_state.m.m3.cwiseAbs().maxCoeff() == 0.0);
        }
    }
}

TEST_CASE("one short step follows the residual") {
    const auto g = G::make(11);
    ModelParams<double> p;
    p.l1 = 0.02;
    p.l2 = 0.03;
    p.c1 = 0.8;
    p.c2 = 0.5;
    p.c3 = 0.6;
    p.xi = 1.4;
    p.eta1 = 0.6;
    p.eta2 = 1.7;
    p.h_ext << 0.3, 0.2, 0.1;
    const auto sc = smooth_scenario(g, p, 0.3);
    std::vector<double> err;
    for (double dt : {1e-3, 1e-4, 1e-5}) {
        SolverConfig<double> cfg;
        cfg.delta_t = dt;
        cfg.epsilon = 1e-14;
        const auto res = cn_step(sc.initial, sc.boundary, p, cfg, g);
        const auto r = el_residual(sc.initial, p, g);
        double worst = 0;
        for (auto c : kAllComponents)
            for (int j = 1; j < 10; ++j)
                for (int i = 1; i < 10; ++i) {
                    const double v = (res.state[c](i, j) - sc.initial[c](i, j)) / dt;
                    worst = std::max(worst, std::abs(v - r[c](i, j) / friction(p, c)));
                }
        err.push_back(worst);
    }
    CHECK(err[1] < err[0] / 5);
    CHECK(err[2] < err[1] / 5);
}

TEST_CASE("failures are reported") {
    const auto g = G::make(21);
    ModelParams<double> p;
    p.c1 = 2;
    SolverConfig<double> cfg;
    cfg.max_inner_iters = 1;
    cfg.max_time = 3 * cfg.delta_t;
    try {
        run(degree_k_initial(g, 1), degree_k_boundary(g, 1), p, cfg, g);
        FAIL("expected a throw");
    } catch (const StepFailure& e) {
        CHECK(e.step_index() == 1);
        CHECK(e.last_increment_norm() > cfg.epsilon);
    }

    cfg = {};
    cfg.epsilon = 1e-3;
    CHECK_THROWS_AS(cfg.validate(G::make(51)), std::invalid_argument);
    cfg.epsilon = 1e-6;
    CHECK_NOTHROW(cfg.validate(G::make(51)));
    cfg.delta_t = 0;
    CHECK_THROWS_AS(cfg.validate(G::make(51)), std::invalid_argument);

    const auto other = G::make(11);
    CHECK_THROWS_AS(cn_step(degree_k_initial(g, 1), degree_k_boundary(other, 1), p, SolverConfig<double>{}, g),
                    std::invalid_argument);
}
