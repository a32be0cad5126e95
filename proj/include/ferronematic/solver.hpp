#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "ferronematic/boundary.hpp"
#include "ferronematic/energy.hpp"
#include "ferronematic/grid.hpp"
#include "ferronematic/params.hpp"
#include "ferronematic/tridiagonal.hpp"

namespace ferronematic {

/// How the explicit parts of a step are placed in time.
///
/// Printed: y-differences at level n and the reaction at level n+1. First order in
/// time because of both choices.
/// Centered: y-differences and reaction averaged between levels n and n+1, the n+1
/// parts taken from the current inner iterate. At convergence of the inner loop this
/// is the full Crank–Nicolson step, second order in time.
enum class TimeCentering { Centered, Printed };

inline const char* to_string(TimeCentering c) { return c == TimeCentering::Centered ? "centered" : "printed"; }

template <typename Scalar>
struct SolverConfig {
    Scalar delta_t = Scalar(1e-5);
    Scalar epsilon = Scalar(1e-6);  ///< ∞-norm bound on the inner-iteration increment
    int max_inner_iters = 200;
    Scalar max_time = Scalar(0.01);
    Scalar steady_tol = Scalar(1e-8);  ///< ∞-norm of a committed step below which the run is steady; 0 disables
    int record_every = 100;            ///< energy-series cadence in steps
    int snapshot_every = 0;            ///< state snapshot cadence in steps; 0 keeps first and last only
    TimeCentering centering = TimeCentering::Centered;
    bool diffusion_only = false;  ///< drop every reaction term (pure heat flow); used for verification

    void validate(const Grid2D<Scalar>& g) const {
        if (!(delta_t > 0)) throw std::invalid_argument("delta_t must be > 0");
        if (!(epsilon > 0)) throw std::invalid_argument("epsilon must be > 0");
        if (max_inner_iters < 1) throw std::invalid_argument("max_inner_iters must be >= 1");
        if (!(max_time >= 0)) throw std::invalid_argument("max_time must be >= 0");
        if (!(steady_tol >= 0)) throw std::invalid_argument("steady_tol must be >= 0");
        if (record_every < 1) throw std::invalid_argument("record_every must be >= 1");
        if (snapshot_every < 0) throw std::invalid_argument("snapshot_every must be >= 0");
        const Scalar truncation = g.delta_x() * g.delta_x() + delta_t * delta_t;
        if (!(epsilon < truncation)) {
            throw std::invalid_argument("epsilon " + std::to_string(static_cast<double>(epsilon)) +
                                        " must be below dx^2 + dt^2 = " + std::to_string(static_cast<double>(truncation)));
        }
    }

    bool operator==(const SolverConfig&) const = default;
};

template <typename Scalar>
struct StepReport {
    int inner_iterations = 0;
    Scalar final_increment_norm = 0;  ///< last ||Z^(k+1) - Z^(k)||∞ over all evolved fields
    Scalar step_change_norm = 0;      ///< ||Z^(n+1) - Z^n||∞
    Scalar energy_before = 0;
    Scalar energy_after = 0;
    Scalar max_abs_q = 0;  ///< max sqrt(2(Q11² + Q12²)) after the step
    Scalar max_abs_m = 0;
    std::vector<Scalar> increment_history;  ///< every inner-iteration increment norm, in order
};

class StepFailure : public std::runtime_error {
public:
    StepFailure(const std::string& what, double last_norm, long step_index = -1)
        : std::runtime_error(what), last_norm_(last_norm), step_index_(step_index) {}
    double last_increment_norm() const { return last_norm_; }
    long step_index() const { return step_index_; }

private:
    double last_norm_;
    long step_index_;
};

template <typename Scalar>
struct StepResult {
    State<Scalar> state;
    StepReport<Scalar> report;
};

namespace detail {

inline std::vector<Component> evolved_components(bool m3_enabled) {
    std::vector<Component> out{Component::Q11, Component::Q12, Component::M1, Component::M2};
    if (m3_enabled) out.push_back(Component::M3);
    return out;
}

template <typename Scalar>
std::pair<Scalar, Scalar> max_amplitudes(const State<Scalar>& s) {
    const Scalar q = std::sqrt(Scalar(2) * (s.q.q11.array().square() + s.q.q12.array().square()).maxCoeff());
    const Scalar m = std::sqrt((s.m.m1.array().square() + s.m.m2.array().square() + s.m.m3.array().square()).maxCoeff());
    return {q, m};
}

}  // namespace detail

/// One gradient-flow step of length δt.
///
/// Each field Z solves, row by row, the tridiagonal system
///   (η/δt + l/δx² + γ - θ f'_Z) δZ_i - (l/2δx²)(δZ_{i-1} + δZ_{i+1})
///     = l Dxx Zⁿ + [y part] + [reaction part]
/// for δZ = Z^(n+1) - Zⁿ, where f'_Z is the derivative of the field's own cubic
/// well at the current iterate (θ = 1 printed, ½ centered). In the centered variant
/// γ = l/δy² carries the node's own share of the new-level y-difference, so only the
/// y-neighbours lag; without it the passes stall once 2lδt/(ηδy²) nears 1. Couplings to the other
/// fields use their latest iterate, sweeping Q11, Q12, M1, M2, M3 in order. Passes
/// repeat until the ∞-norm of the change between passes drops below ε.
template <typename Scalar>
StepResult<Scalar> cn_step(const State<Scalar>& state, const BoundaryData<Scalar>& boundary,
                           const ModelParams<Scalar>& params, const SolverConfig<Scalar>& config,
                           const Grid2D<Scalar>& grid) {
    require_same_grid(grid, state);
    if (boundary.grid != grid) throw std::invalid_argument("boundary data lives on a different grid");

    const int n = grid.n();
    const int m = n - 2;
    const Scalar hx2 = grid.delta_x() * grid.delta_x();
    const Scalar hy2 = grid.delta_y() * grid.delta_y();
    const Scalar dt = config.delta_t;
    const bool centered = config.centering == TimeCentering::Centered;
    const Scalar theta = centered ? Scalar(0.5) : Scalar(1);
    const bool react = !config.diffusion_only;
    const auto comps = detail::evolved_components(params.m3_enabled);

    // Reaction at level n, needed by the centered variant.
    std::vector<Field<Scalar>> reaction_old;
    if (centered && react) {
        for (auto c : comps) {
            Field<Scalar> f = grid.zeros();
            for (int j = 1; j < n - 1; ++j) {
                for (int i = 1; i < n - 1; ++i) f(i, j) = reaction(NodeValues<Scalar>::at(state, i, j), params, c);
            }
            reaction_old.push_back(std::move(f));
        }
    }

    StepResult<Scalar> out{state, {}};
    State<Scalar>& next = out.state;
    StepReport<Scalar>& rep = out.report;
    rep.energy_before = total_energy(state, params, grid).total;

    Vector<Scalar> a(m), b(m), c(m), d(m), x(m), scratch(m);
    Field<Scalar> prev;
    bool converged = false;
    for (int k = 1; k <= config.max_inner_iters; ++k) {
        Scalar increment = 0;
        for (std::size_t ci = 0; ci < comps.size(); ++ci) {
            const Component comp = comps[ci];
            const Scalar l = diffusivity(params, comp);
            const Scalar eta = friction(params, comp);
            const Field<Scalar>& zn = state[comp];
            prev = next[comp];
            Field<Scalar>& z = next[comp];
            const Scalar off = -l / (Scalar(2) * hx2);
            const Scalar diag_y = centered ? l / hy2 : Scalar(0);
            for (int j = 1; j < n - 1; ++j) {
                for (int i = 1; i < n - 1; ++i) {
                    const int r = i - 1;
                    Scalar rhs = l * (zn(i - 1, j) - Scalar(2) * zn(i, j) + zn(i + 1, j)) / hx2;
                    const Scalar yn = (zn(i, j - 1) - Scalar(2) * zn(i, j) + zn(i, j + 1)) / hy2;
                    if (centered) {
                        // The node's own y-coefficient is moved into b, only the y-neighbours lag.
                        const Scalar yk = (prev(i, j - 1) - Scalar(2) * zn(i, j) + prev(i, j + 1)) / hy2;
                        rhs += Scalar(0.5) * l * (yn + yk);
                    } else {
                        rhs += l * yn;
                    }
                    Scalar jac = 0;
                    if (react) {
                        const auto v = NodeValues<Scalar>::at(next, i, j);
                        const Scalar fk = reaction(v, params, comp);
                        jac = reaction_self_derivative(v, params, comp);
                        const Scalar dzk = prev(i, j) - zn(i, j);
                        rhs += theta * (fk - jac * dzk);
                        if (centered) rhs += Scalar(0.5) * reaction_old[ci](i, j);
                    }
                    a(r) = off;
                    c(r) = off;
                    b(r) = eta / dt + l / hx2 + diag_y - theta * jac;
                    d(r) = rhs;
                }
                thomas_solve_into<Scalar>(a, b, c, d, x, scratch);
                for (int i = 1; i < n - 1; ++i) z(i, j) = zn(i, j) + x(i - 1);
            }
            increment = std::max(increment, (z - prev).cwiseAbs().maxCoeff());
        }
        rep.inner_iterations = k;
        rep.final_increment_norm = increment;
        rep.increment_history.push_back(increment);
        if (!std::isfinite(static_cast<double>(increment))) break;
        if (increment < config.epsilon) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        throw StepFailure("inner iteration did not reach epsilon = " + std::to_string(static_cast<double>(config.epsilon)) +
                              " within " + std::to_string(config.max_inner_iters) + " passes (last increment " +
                              std::to_string(static_cast<double>(rep.final_increment_norm)) + ")",
                          static_cast<double>(rep.final_increment_norm));
    }
    boundary.pin(next);

    rep.step_change_norm = max_abs_difference(next, state);
    rep.energy_after = total_energy(next, params, grid).total;
    std::tie(rep.max_abs_q, rep.max_abs_m) = detail::max_amplitudes(next);
    return out;
}

template <typename Scalar>
struct Snapshot {
    long step;
    Scalar t;
    State<Scalar> state;
};

template <typename Scalar>
struct EnergySample {
    long step;
    Scalar t;
    EnergyBreakdown<Scalar> energy;
};

template <typename Scalar>
struct Trajectory {
    std::vector<Snapshot<Scalar>> snapshots;  ///< first entry is the pinned initial state
    std::vector<EnergySample<Scalar>> energies;
    std::vector<StepReport<Scalar>> reports;
    State<Scalar> final_state;
    Scalar final_time = 0;
    long steps = 0;
    bool reached_steady = false;

    long cumulative_inner_iterations() const {
        long total = 0;
        for (const auto& r : reports) total += r.inner_iterations;
        return total;
    }
};

/// Steps whose energy rose by more than rel_tol (1 + |E_before|).
template <typename Scalar>
long count_dissipation_violations(const std::vector<StepReport<Scalar>>& reports, Scalar rel_tol = Scalar(1e-8)) {
    long count = 0;
    for (const auto& r : reports) {
        if (r.energy_after > r.energy_before + rel_tol * (Scalar(1) + std::abs(r.energy_before))) ++count;
    }
    return count;
}

/// Copy of the boundary data consistent with the model: M3 ≡ 0 when it is not evolved.
template <typename Scalar>
BoundaryData<Scalar> effective_boundary(const BoundaryData<Scalar>& boundary, const ModelParams<Scalar>& params) {
    BoundaryData<Scalar> bd = boundary;
    if (!params.m3_enabled) {
        const int n = bd.grid.n();
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                if (bd.grid.is_boundary(i, j)) bd.values.m.m3(i, j) = 0;
    }
    return bd;
}

/// Integrates the gradient flow from state0 until max_time or a steady state.
/// The initial state is first made consistent with the boundary data (and with
/// M3 ≡ 0 when M3 is not evolved); that pinned state is snapshot zero.
template <typename Scalar>
Trajectory<Scalar> run(const State<Scalar>& state0, const BoundaryData<Scalar>& boundary,
                       const ModelParams<Scalar>& params, const SolverConfig<Scalar>& config,
                       const Grid2D<Scalar>& grid) {
    params.validate();
    config.validate(grid);
    require_same_grid(grid, state0);

    const BoundaryData<Scalar> bd = effective_boundary(boundary, params);
    State<Scalar> current = state0;
    if (!params.m3_enabled) current.m.m3.setZero();
    bd.pin(current);

    Trajectory<Scalar> traj;
    traj.snapshots.push_back({0, Scalar(0), current});
    traj.energies.push_back({0, Scalar(0), total_energy(current, params, grid)});

    const double ratio = static_cast<double>(config.max_time / config.delta_t);
    const long total_steps = static_cast<long>(std::ceil(ratio - 1e-9));
    long step = 0;
    for (step = 1; step <= total_steps; ++step) {
        StepResult<Scalar> res;
        try {
            res = cn_step(current, bd, params, config, grid);
        } catch (const StepFailure& e) {
            throw StepFailure(std::string("step ") + std::to_string(step) + ": " + e.what(), e.last_increment_norm(), step);
        } catch (const SingularSystemError& e) {
            throw StepFailure(std::string("step ") + std::to_string(step) + ": " + e.what(), 0.0, step);
        }
        current = std::move(res.state);
        const Scalar t = Scalar(step) * config.delta_t;
        const bool steady = config.steady_tol > 0 && res.report.step_change_norm < config.steady_tol;
        traj.reports.push_back(std::move(res.report));
        const bool last = step == total_steps || steady;
        if (step % config.record_every == 0 || last) {
            traj.energies.push_back({step, t, total_energy(current, params, grid)});
        }
        if ((config.snapshot_every > 0 && step % config.snapshot_every == 0) || last) {
            traj.snapshots.push_back({step, t, current});
        }
        if (steady) {
            traj.reached_steady = true;
            break;
        }
    }
    traj.steps = static_cast<long>(traj.reports.size());
    traj.final_time = Scalar(traj.steps) * config.delta_t;
    traj.final_state = std::move(current);
    return traj;
}

}  // namespace ferronematic
