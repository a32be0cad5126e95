#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ferronematic/boundary.hpp"
#include "ferronematic/director.hpp"
#include "ferronematic/grid.hpp"
#include "ferronematic/scenario.hpp"
#include "ferronematic/solver.hpp"

namespace ferronematic {

template <typename Scalar>
struct Defect {
    int i = 0, j = 0;
    Scalar x = 0, y = 0;
    Scalar core_value = 0;  ///< Q11²+Q12² (nematic) or M1²+M2² (magnetic) at the core node
    int vector_winding = 0;  ///< degree of the 2-vector (Q11, Q12) or (M1, M2) around the core
    Scalar charge = 0;       ///< nematic charge = vector_winding / 2; magnetic charge = vector_winding
};

template <typename Scalar>
struct DefectSet {
    std::vector<Defect<Scalar>> q_defects;
    std::vector<Defect<Scalar>> m_defects;
};

/// Angle wrapped to (-π, π].
template <typename Scalar>
Scalar wrap_angle(Scalar a) {
    const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
    a = std::fmod(a, two_pi);
    if (a > std::numbers::pi_v<Scalar>) a -= two_pi;
    if (a <= -std::numbers::pi_v<Scalar>) a += two_pi;
    return a;
}

/// Nodes of the square loop of half-width r around (i, j), counter-clockwise.
inline std::vector<std::pair<int, int>> square_loop(int i, int j, int r) {
    std::vector<std::pair<int, int>> loop;
    for (int jj = j - r; jj < j + r; ++jj) loop.emplace_back(i + r, jj);
    for (int ii = i + r; ii > i - r; --ii) loop.emplace_back(ii, j + r);
    for (int jj = j + r; jj > j - r; --jj) loop.emplace_back(i - r, jj);
    for (int ii = i - r; ii < i + r; ++ii) loop.emplace_back(ii, j - r);
    return loop;
}

/// Nodes of the axis-aligned rectangle with corners (lo, lo) and (hi, hi), counter-clockwise.
inline std::vector<std::pair<int, int>> rectangle_loop(int lo, int hi) {
    std::vector<std::pair<int, int>> loop;
    for (int i = lo; i < hi; ++i) loop.emplace_back(i, lo);
    for (int j = lo; j < hi; ++j) loop.emplace_back(hi, j);
    for (int i = hi; i > lo; --i) loop.emplace_back(i, hi);
    for (int j = hi; j > lo; --j) loop.emplace_back(lo, j);
    return loop;
}

/// Total angle turned by the 2-vector (u, v) along a closed loop, in turns (not rounded).
template <typename Scalar>
Scalar loop_turns(const Field<Scalar>& u, const Field<Scalar>& v, const std::vector<std::pair<int, int>>& loop) {
    Scalar total = 0;
    for (std::size_t k = 0; k < loop.size(); ++k) {
        const auto [i0, j0] = loop[k];
        const auto [i1, j1] = loop[(k + 1) % loop.size()];
        const Scalar a0 = std::atan2(v(i0, j0), u(i0, j0));
        const Scalar a1 = std::atan2(v(i1, j1), u(i1, j1));
        total += wrap_angle(a1 - a0);
    }
    return total / (Scalar(2) * std::numbers::pi_v<Scalar>);
}

template <typename Scalar>
int loop_winding(const Field<Scalar>& u, const Field<Scalar>& v, const std::vector<std::pair<int, int>>& loop) {
    return static_cast<int>(std::lround(loop_turns(u, v, loop)));
}

/// Degree of (u, v) along the rectangle `margin_nodes` nodes inside the boundary
/// (0 = the boundary itself).
template <typename Scalar>
int contour_winding(const Field<Scalar>& u, const Field<Scalar>& v, const Grid2D<Scalar>& g, int margin_nodes = 0) {
    if (margin_nodes < 0 || 2 * margin_nodes >= g.n() - 1) throw std::invalid_argument("contour margin too large");
    return loop_winding(u, v, rectangle_loop(margin_nodes, g.n() - 1 - margin_nodes));
}

/// Net degree carried by the elementary cells of a region.
struct CellCharge {
    int inside = 0;        ///< summed winding of cells at least `margin_nodes` nodes from ∂Ω
    int outside = 0;       ///< summed winding of the remaining cells
    int charged_inside = 0;   ///< number of inside cells with nonzero winding
    int charged_outside = 0;  ///< number of boundary-layer cells with nonzero winding
};

/// Degree of (u, v) summed over the 2x2-node cells. Each edge increment is wrapped
/// once and shared by its two cells, so interior edges cancel exactly (even a jump
/// of exactly pi) and inside + outside equals the boundary winding. A nonzero
/// `charged_outside` means some charge sits in the boundary layer.
template <typename Scalar>
CellCharge cell_charge(const Field<Scalar>& u, const Field<Scalar>& v, const Grid2D<Scalar>& g, int margin_nodes) {
    if (margin_nodes < 0 || 2 * margin_nodes >= g.n() - 1) throw std::invalid_argument("cell margin too large");
    const int n = g.n();
    Field<Scalar> angle(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) angle(i, j) = std::atan2(v(i, j), u(i, j));
    // ex(i, j): (i, j) -> (i+1, j); ey(i, j): (i, j) -> (i, j+1).
    Field<Scalar> ex(n - 1, n), ey(n, n - 1);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i + 1 < n; ++i) ex(i, j) = wrap_angle(angle(i + 1, j) - angle(i, j));
    for (int j = 0; j + 1 < n; ++j)
        for (int i = 0; i < n; ++i) ey(i, j) = wrap_angle(angle(i, j + 1) - angle(i, j));

    const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
    CellCharge out;
    for (int j = 0; j + 1 < n; ++j) {
        for (int i = 0; i + 1 < n; ++i) {
            const Scalar turns = (ex(i, j) + ey(i + 1, j) - ex(i, j + 1) - ey(i, j)) / two_pi;
            const int w = static_cast<int>(std::lround(turns));
            const bool inside = i >= margin_nodes && j >= margin_nodes && i + 1 <= n - 1 - margin_nodes &&
                                j + 1 <= n - 1 - margin_nodes;
            if (inside) {
                out.inside += w;
                out.charged_inside += w != 0;
            } else {
                out.outside += w;
                out.charged_outside += w != 0;
            }
        }
    }
    return out;
}

struct DefectOptions {
    double threshold = 0.1;  ///< fraction of the far-field (boundary mean) order below which a minimum counts
    int loop_radius = 1;
    bool confirm_radius2 = false;  ///< drop cores whose radius-2 winding disagrees with radius 1
    /// Drop minima with zero winding. Tangent data leaves such depressions next to the
    /// corners, where the boundary value jumps; they carry no topological charge.
    bool drop_zero_winding = true;
};

namespace detail {

template <typename Scalar>
std::vector<Defect<Scalar>> order_minima(const Field<Scalar>& u, const Field<Scalar>& v, const Grid2D<Scalar>& g,
                                         const DefectOptions& opt, bool nematic) {
    const int n = g.n();
    Field<Scalar> order = (u.array().square() + v.array().square()).matrix();

    Scalar far = 0;
    int count = 0;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            if (g.is_boundary(i, j)) {
                far += order(i, j);
                ++count;
            }
        }
    }
    far /= Scalar(count);
    const Scalar cutoff = Scalar(opt.threshold) * far;

    std::vector<Defect<Scalar>> candidates;
    for (int j = 1; j < n - 1; ++j) {
        for (int i = 1; i < n - 1; ++i) {
            const Scalar val = order(i, j);
            if (!(val < cutoff)) continue;
            bool minimum = true;
            for (int dj = -1; dj <= 1 && minimum; ++dj)
                for (int di = -1; di <= 1; ++di)
                    if ((di != 0 || dj != 0) && order(i + di, j + dj) < val) {
                        minimum = false;
                        break;
                    }
            if (!minimum) continue;
            Defect<Scalar> d;
            d.i = i;
            d.j = j;
            d.x = g.x(i);
            d.y = g.y(j);
            d.core_value = val;
            candidates.push_back(d);
        }
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const auto& a, const auto& b) { return a.core_value < b.core_value; });

    std::vector<Defect<Scalar>> accepted;
    for (auto& d : candidates) {
        const bool duplicate = std::any_of(accepted.begin(), accepted.end(), [&](const auto& o) {
            return std::abs(o.i - d.i) <= 1 && std::abs(o.j - d.j) <= 1;
        });
        if (duplicate) continue;
        const int r = std::min({opt.loop_radius, d.i, d.j, n - 1 - d.i, n - 1 - d.j});
        d.vector_winding = loop_winding(u, v, square_loop(d.i, d.j, std::max(r, 1)));
        if (opt.confirm_radius2 && std::min({d.i, d.j, n - 1 - d.i, n - 1 - d.j}) >= 2) {
            if (loop_winding(u, v, square_loop(d.i, d.j, 2)) != d.vector_winding) continue;
        }
        if (opt.drop_zero_winding && d.vector_winding == 0) continue;
        d.charge = nematic ? Scalar(d.vector_winding) / Scalar(2) : Scalar(d.vector_winding);
        accepted.push_back(d);
    }
    std::sort(accepted.begin(), accepted.end(), [](const auto& a, const auto& b) {
        return a.j != b.j ? a.j < b.j : a.i < b.i;
    });
    return accepted;
}

}  // namespace detail

/// Interior minima of Q11²+Q12² and M1²+M2² below `threshold` times their boundary mean,
/// merged within a 3×3 neighbourhood, each tagged with the winding of its 2-vector.
template <typename Scalar>
DefectSet<Scalar> find_defects(const State<Scalar>& s, const Grid2D<Scalar>& g, const DefectOptions& opt = {}) {
    require_same_grid(g, s);
    if (!(opt.threshold > 0)) throw std::invalid_argument("defect threshold must be > 0");
    return {detail::order_minima(s.q.q11, s.q.q12, g, opt, true), detail::order_minima(s.m.m1, s.m.m2, g, opt, false)};
}

template <typename Scalar>
int total_vector_winding(const std::vector<Defect<Scalar>>& defects) {
    int total = 0;
    for (const auto& d : defects) total += d.vector_winding;
    return total;
}

template <typename Scalar>
bool within_margin(const Grid2D<Scalar>& g, int i, int j, Scalar margin) {
    const Scalar x = g.x(i), y = g.y(j);
    const Scalar tol = Scalar(1e-12);
    return x >= margin - tol && y >= margin - tol && Scalar(1) - x >= margin - tol && Scalar(1) - y >= margin - tol;
}

/// Mean of |u·axis| / |u| over the planar magnetisation, ignoring a boundary layer of
/// width `margin` and nodes with |u| = 0.
template <typename Scalar>
Scalar alignment_metric(const MField<Scalar>& m, const Grid2D<Scalar>& g, Scalar axis_x, Scalar axis_y, Scalar margin) {
    if (!(margin >= 0)) throw std::invalid_argument("margin must be >= 0");
    const Scalar norm = std::hypot(axis_x, axis_y);
    if (!(norm > 0)) throw std::invalid_argument("axis must be nonzero");
    axis_x /= norm;
    axis_y /= norm;
    Scalar sum = 0;
    long count = 0;
    for (int j = 0; j < g.n(); ++j) {
        for (int i = 0; i < g.n(); ++i) {
            if (!within_margin(g, i, j, margin)) continue;
            const Scalar u1 = m.m1(i, j), u2 = m.m2(i, j);
            const Scalar len = std::hypot(u1, u2);
            if (len == Scalar(0)) continue;
            sum += std::abs(u1 * axis_x + u2 * axis_y) / len;
            ++count;
        }
    }
    return count ? sum / Scalar(count) : Scalar(0);
}

/// Mean of |cos 2(φ - φ_axis)| for the director, same node selection as above.
template <typename Scalar>
Scalar alignment_metric(const QField<Scalar>& q, const Grid2D<Scalar>& g, Scalar axis_x, Scalar axis_y, Scalar margin) {
    if (!(margin >= 0)) throw std::invalid_argument("margin must be >= 0");
    if (!(std::hypot(axis_x, axis_y) > 0)) throw std::invalid_argument("axis must be nonzero");
    const Scalar phi_axis = std::atan2(axis_y, axis_x);
    const Scalar c2 = std::cos(Scalar(2) * phi_axis), s2 = std::sin(Scalar(2) * phi_axis);
    Scalar sum = 0;
    long count = 0;
    for (int j = 0; j < g.n(); ++j) {
        for (int i = 0; i < g.n(); ++i) {
            if (!within_margin(g, i, j, margin)) continue;
            const Scalar q11 = q.q11(i, j), q12 = q.q12(i, j);
            const Scalar s = std::hypot(q11, q12);
            if (s == Scalar(0)) continue;
            sum += std::abs(q11 * c2 + q12 * s2) / s;
            ++count;
        }
    }
    return count ? sum / Scalar(count) : Scalar(0);
}

template <typename Scalar>
struct LinfStats {
    Scalar max_q = 0;  ///< max |Q| = sqrt(2(Q11² + Q12²))
    Scalar max_m = 0;  ///< max |M|
};

template <typename Scalar>
LinfStats<Scalar> linf_stats(const State<Scalar>& s, const Grid2D<Scalar>& g, Scalar margin = Scalar(0)) {
    require_same_grid(g, s);
    LinfStats<Scalar> out;
    for (int j = 0; j < g.n(); ++j) {
        for (int i = 0; i < g.n(); ++i) {
            if (!within_margin(g, i, j, margin)) continue;
            out.max_q = std::max(out.max_q, std::sqrt(q_norm_sq(s.q.q11(i, j), s.q.q12(i, j))));
            out.max_m = std::max(out.max_m, std::sqrt(m_norm_sq(s.m.m1(i, j), s.m.m2(i, j), s.m.m3(i, j))));
        }
    }
    return out;
}

/// Every inner-iteration increment of a run, concatenated in order.
template <typename Scalar>
std::vector<Scalar> iteration_error_curve(const Trajectory<Scalar>& t) {
    std::vector<Scalar> out;
    for (const auto& r : t.reports) out.insert(out.end(), r.increment_history.begin(), r.increment_history.end());
    return out;
}

/// ||Z^(n+1) - Z^n||∞ per committed step.
template <typename Scalar>
std::vector<Scalar> step_change_curve(const Trajectory<Scalar>& t) {
    std::vector<Scalar> out;
    out.reserve(t.reports.size());
    for (const auto& r : t.reports) out.push_back(r.step_change_norm);
    return out;
}

/// Least-squares slope of log(err) against log(h); NaN when fewer than two positive errors.
template <typename Scalar>
Scalar fit_order(const std::vector<std::pair<Scalar, Scalar>>& samples) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& [h, e] : samples) {
        if (h > 0 && e > 0) pts.emplace_back(std::log(static_cast<double>(h)), std::log(static_cast<double>(e)));
    }
    if (pts.size() < 2) return std::numeric_limits<Scalar>::quiet_NaN();
    double mx = 0, my = 0;
    for (auto [x, y] : pts) {
        mx += x;
        my += y;
    }
    mx /= double(pts.size());
    my /= double(pts.size());
    double sxy = 0, sxx = 0;
    for (auto [x, y] : pts) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    return static_cast<Scalar>(sxy / sxx);
}

template <typename Scalar>
struct ConvergenceReport {
    /// (δx, ||u_δx - u_δx/2||∞ on the coarse nodes)
    std::vector<std::pair<Scalar, Scalar>> grid_errors;
    /// (δt, ||u_δt - u_δt/2||∞)
    std::vector<std::pair<Scalar, Scalar>> time_errors;
    Scalar estimated_spatial_order = std::numeric_limits<Scalar>::quiet_NaN();
    Scalar estimated_temporal_order = std::numeric_limits<Scalar>::quiet_NaN();
};

/// Self-convergence protocol. Successive nested resolutions are compared, so three
/// resolutions give two error samples and their log-log slope.
template <typename Scalar>
struct ConvergenceSetup {
    ModelParams<Scalar> params;
    SolverConfig<Scalar> solver;  ///< delta_t and max_time are overridden per run
    std::function<Scenario<Scalar>(const Grid2D<Scalar>&)> scenario;
    Scalar horizon = Scalar(0.005);
    std::vector<int> spatial_n{26, 51, 101};
    Scalar spatial_dt = Scalar(1e-5);
    std::vector<Scalar> temporal_dt{Scalar(4e-5), Scalar(2e-5), Scalar(1e-5)};
    int temporal_n = 51;
    /// Inner-iteration tolerance for the study. The O(δt²) differences between the
    /// temporal runs are far below the production ε = 1e-6, so it is tightened here.
    Scalar inner_epsilon = Scalar(1e-12);
    bool run_spatial = true;
    bool run_temporal = true;
};

namespace detail {

template <typename Scalar>
State<Scalar> run_to_horizon(const ConvergenceSetup<Scalar>& setup, int n, Scalar dt) {
    const auto g = Grid2D<Scalar>::make(n);
    auto sc = setup.scenario(g);
    auto cfg = setup.solver;
    cfg.delta_t = dt;
    cfg.max_time = setup.horizon;
    cfg.epsilon = setup.inner_epsilon;
    cfg.steady_tol = 0;
    cfg.record_every = std::max(1, cfg.record_every);
    cfg.snapshot_every = 0;
    return run(sc.initial, sc.boundary, setup.params, cfg, g).final_state;
}

template <typename Scalar>
Scalar coarse_node_difference(const State<Scalar>& coarse, const State<Scalar>& fine, int stride) {
    Scalar worst = 0;
    const auto n = coarse.q.q11.rows();
    for (auto c : kAllComponents) {
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index i = 0; i < n; ++i)
                worst = std::max(worst, std::abs(coarse[c](i, j) - fine[c](stride * i, stride * j)));
    }
    return worst;
}

}  // namespace detail

template <typename Scalar>
ConvergenceReport<Scalar> convergence_study(const ConvergenceSetup<Scalar>& setup) {
    if (!setup.scenario) throw std::invalid_argument("convergence study needs a scenario");
    ConvergenceReport<Scalar> rep;

    if (setup.run_spatial) {
        for (std::size_t k = 0; k + 1 < setup.spatial_n.size(); ++k) {
            if ((setup.spatial_n[k + 1] - 1) != 2 * (setup.spatial_n[k] - 1)) {
                throw std::invalid_argument("spatial resolutions must be nested by a factor of 2");
            }
        }
        std::vector<State<Scalar>> states;
        for (int n : setup.spatial_n) states.push_back(detail::run_to_horizon(setup, n, setup.spatial_dt));
        for (std::size_t k = 0; k + 1 < states.size(); ++k) {
            const Scalar h = Scalar(1) / Scalar(setup.spatial_n[k] - 1);
            rep.grid_errors.emplace_back(h, detail::coarse_node_difference(states[k], states[k + 1], 2));
        }
        rep.estimated_spatial_order = fit_order(rep.grid_errors);
    }

    if (setup.run_temporal) {
        for (std::size_t k = 0; k + 1 < setup.temporal_dt.size(); ++k) {
            const Scalar ratio = setup.temporal_dt[k] / setup.temporal_dt[k + 1];
            if (std::abs(ratio - Scalar(2)) > Scalar(1e-9)) {
                throw std::invalid_argument("time steps must be nested by a factor of 2");
            }
        }
        for (Scalar dt : setup.temporal_dt) {
            const Scalar steps = setup.horizon / dt;
            if (std::abs(steps - std::round(steps)) > Scalar(1e-6)) {
                throw std::invalid_argument("horizon must be a whole number of every time step");
            }
        }
        std::vector<State<Scalar>> states;
        for (Scalar dt : setup.temporal_dt) states.push_back(detail::run_to_horizon(setup, setup.temporal_n, dt));
        for (std::size_t k = 0; k + 1 < states.size(); ++k) {
            rep.time_errors.emplace_back(setup.temporal_dt[k], max_abs_difference(states[k], states[k + 1]));
        }
        rep.estimated_temporal_order = fit_order(rep.time_errors);
    }
    return rep;
}

}  // namespace ferronematic
