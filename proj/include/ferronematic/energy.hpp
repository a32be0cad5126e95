#pragma once

#include <cmath>
#include <limits>
#include <utility>
#include <stdexcept>

#include "ferronematic/grid.hpp"
#include "ferronematic/params.hpp"

namespace ferronematic {

/// The five unknowns at one node.
template <typename Scalar>
struct NodeValues {
    Scalar q11 = 0, q12 = 0, m1 = 0, m2 = 0, m3 = 0;

    static NodeValues at(const State<Scalar>& s, int i, int j) {
        return {s.q.q11(i, j), s.q.q12(i, j), s.m.m1(i, j), s.m.m2(i, j), s.m.m3(i, j)};
    }
    Scalar get(Component c) const {
        switch (c) {
            case Component::Q11: return q11;
            case Component::Q12: return q12;
            case Component::M1: return m1;
            case Component::M2: return m2;
            case Component::M3: return m3;
        }
        return 0;
    }
};

/// QM·M for the reduced tensor: Q11 (M1^2 - M2^2) + 2 Q12 M1 M2.
template <typename Scalar>
Scalar qm_dot_m(Scalar q11, Scalar q12, Scalar m1, Scalar m2) {
    return q11 * (m1 * m1 - m2 * m2) + Scalar(2) * q12 * m1 * m2;
}

/// Nematic LdG well ¼(½|Q|² - 1)².
template <typename Scalar>
Scalar bulk_q_density(const NodeValues<Scalar>& v) {
    const Scalar a = v.q11 * v.q11 + v.q12 * v.q12 - Scalar(1);
    return Scalar(0.25) * a * a;
}

/// Magnetic Landau well (ξ/4)(|M|² - 1)².
template <typename Scalar>
Scalar bulk_m_density(const NodeValues<Scalar>& v, Scalar xi) {
    const Scalar a = m_norm_sq(v.m1, v.m2, v.m3) - Scalar(1);
    return Scalar(0.25) * xi * a * a;
}

/// Bulk potential f(Q, M) = ¼(½|Q|²-1)² + (ξ/4)(|M|²-1)² - (c1/2) QM·M.
template <typename Scalar>
Scalar bulk_potential_f(const NodeValues<Scalar>& v, const ModelParams<Scalar>& p) {
    return bulk_q_density(v) + bulk_m_density(v, p.xi) - Scalar(0.5) * p.c1 * qm_dot_m(v.q11, v.q12, v.m1, v.m2);
}

/// Local (non-diffusive) part of the gradient-flow right side for one component,
/// i.e. minus the derivative of every non-gradient energy density term.
template <typename Scalar>
Scalar reaction(const NodeValues<Scalar>& v, const ModelParams<Scalar>& p, Component c) {
    const Scalar& h1 = p.h_ext(0);
    const Scalar& h2 = p.h_ext(1);
    const Scalar& h3 = p.h_ext(2);
    const Scalar q_well = v.q11 * v.q11 + v.q12 * v.q12 - Scalar(1);
    const Scalar m_well = m_norm_sq(v.m1, v.m2, v.m3) - Scalar(1);
    switch (c) {
        case Component::Q11:
            return -v.q11 * q_well + Scalar(0.5) * p.c1 * (v.m1 * v.m1 - v.m2 * v.m2) +
                   Scalar(0.5) * p.c2 * (h1 * h1 - h2 * h2);
        case Component::Q12:
            return -v.q12 * q_well + p.c1 * v.m1 * v.m2 + p.c2 * h1 * h2;
        case Component::M1:
            return -p.xi * v.m1 * m_well + p.c1 * (v.q11 * v.m1 + v.q12 * v.m2) + p.c3 * p.xi * h1;
        case Component::M2:
            return -p.xi * v.m2 * m_well + p.c1 * (v.q12 * v.m1 - v.q11 * v.m2) + p.c3 * p.xi * h2;
        case Component::M3:
            return -p.xi * v.m3 * m_well + p.c3 * p.xi * (h3 - v.m3);
    }
    return 0;
}

/// Derivative of the cubic well part of reaction() with respect to its own component.
/// Coupling terms are left out; the solver lags them.
template <typename Scalar>
Scalar reaction_self_derivative(const NodeValues<Scalar>& v, const ModelParams<Scalar>& p, Component c) {
    const Scalar q11s = v.q11 * v.q11, q12s = v.q12 * v.q12;
    const Scalar m1s = v.m1 * v.m1, m2s = v.m2 * v.m2, m3s = v.m3 * v.m3;
    switch (c) {
        case Component::Q11: return -(Scalar(3) * q11s + q12s - Scalar(1));
        case Component::Q12: return -(q11s + Scalar(3) * q12s - Scalar(1));
        case Component::M1: return -p.xi * (Scalar(3) * m1s + m2s + m3s - Scalar(1));
        case Component::M2: return -p.xi * (m1s + Scalar(3) * m2s + m3s - Scalar(1));
        case Component::M3: return -p.xi * (m1s + m2s + Scalar(3) * m3s - Scalar(1));
    }
    return 0;
}

/// Diffusion coefficient multiplying ΔZ: 2 l1 for Q, ξ l2 for M.
template <typename Scalar>
Scalar diffusivity(const ModelParams<Scalar>& p, Component c) {
    return (c == Component::Q11 || c == Component::Q12) ? Scalar(2) * p.l1 : p.xi * p.l2;
}

template <typename Scalar>
Scalar friction(const ModelParams<Scalar>& p, Component c) {
    return (c == Component::Q11 || c == Component::Q12) ? p.eta1 : p.eta2;
}

/// Five-point Laplacian at an interior node.
template <typename Scalar>
Scalar laplacian(const Field<Scalar>& f, const Grid2D<Scalar>& g, int i, int j) {
    const Scalar hx2 = g.delta_x() * g.delta_x();
    const Scalar hy2 = g.delta_y() * g.delta_y();
    return (f(i - 1, j) - Scalar(2) * f(i, j) + f(i + 1, j)) / hx2 +
           (f(i, j - 1) - Scalar(2) * f(i, j) + f(i, j + 1)) / hy2;
}

/// Per-term discrete energy.
template <typename Scalar>
struct EnergyBreakdown {
    Scalar elastic_q = 0;
    Scalar elastic_m = 0;
    Scalar bulk_q = 0;
    Scalar bulk_m = 0;
    Scalar coupling_qm = 0;
    Scalar stray = 0;
    Scalar coupling_qh = 0;
    Scalar zeeman = 0;
    Scalar total = 0;

    Scalar sum_of_parts() const {
        return elastic_q + elastic_m + bulk_q + bulk_m + coupling_qm + stray + coupling_qh + zeeman;
    }
};

/// Edge-based Dirichlet integral ∫|∇f|²: squared forward differences on each grid
/// edge, weighted by the trapezoidal rule across the edge. Its exact gradient with
/// respect to an interior nodal value is -2 w_ij Δf, w_ij the node weight.
template <typename Scalar>
Scalar dirichlet_integral(const Field<Scalar>& f, const Grid2D<Scalar>& g) {
    const int n = g.n();
    const Scalar hx = g.delta_x(), hy = g.delta_y();
    Scalar sum = 0;
    for (int j = 0; j < n; ++j) {
        const Scalar wy = (j == 0 || j == n - 1) ? Scalar(0.5) : Scalar(1);
        for (int i = 0; i + 1 < n; ++i) {
            const Scalar d = f(i + 1, j) - f(i, j);
            sum += wy * d * d * (hy / hx);
        }
    }
    for (int i = 0; i < n; ++i) {
        const Scalar wx = (i == 0 || i == n - 1) ? Scalar(0.5) : Scalar(1);
        for (int j = 0; j + 1 < n; ++j) {
            const Scalar d = f(i, j + 1) - f(i, j);
            sum += wx * d * d * (hx / hy);
        }
    }
    return sum;
}

template <typename Scalar>
EnergyBreakdown<Scalar> total_energy(const State<Scalar>& s, const ModelParams<Scalar>& p, const Grid2D<Scalar>& g) {
    require_same_grid(g, s);
    EnergyBreakdown<Scalar> e;
    // |∇Q|² = 2(|∇Q11|² + |∇Q12|²)
    e.elastic_q = p.l1 * (dirichlet_integral(s.q.q11, g) + dirichlet_integral(s.q.q12, g));
    e.elastic_m = Scalar(0.5) * p.xi * p.l2 *
                  (dirichlet_integral(s.m.m1, g) + dirichlet_integral(s.m.m2, g) + dirichlet_integral(s.m.m3, g));

    const Scalar h1 = p.h_ext(0), h2 = p.h_ext(1), h3 = p.h_ext(2);
    const Scalar qh_11 = h1 * h1 - h2 * h2;
    const Scalar qh_12 = Scalar(2) * h1 * h2;
    const int n = g.n();
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const Scalar w = g.weight(i, j);
            const auto v = NodeValues<Scalar>::at(s, i, j);
            e.bulk_q += w * bulk_q_density(v);
            e.bulk_m += w * bulk_m_density(v, p.xi);
            e.coupling_qm += w * (-Scalar(0.5) * p.c1 * qm_dot_m(v.q11, v.q12, v.m1, v.m2));
            e.stray += w * (Scalar(0.5) * p.c3 * p.xi * v.m3 * v.m3);
            e.coupling_qh += w * (-Scalar(0.5) * p.c2 * (v.q11 * qh_11 + v.q12 * qh_12));
            e.zeeman += w * (-p.c3 * p.xi * (v.m1 * h1 + v.m2 * h2 + v.m3 * h3));
        }
    }
    e.total = e.sum_of_parts();
    return e;
}

template <typename Scalar>
EnergyBreakdown<Scalar> total_energy(const QField<Scalar>& q, const MField<Scalar>& m, const ModelParams<Scalar>& p,
                                     const Grid2D<Scalar>& g) {
    return total_energy(State<Scalar>{q, m}, p, g);
}

/// Euler–Lagrange residuals r = (Laplacian side) - (bulk side) at interior nodes:
/// r_Z = l_Z ΔZ + reaction_Z. Zero at equilibrium; r / η is the gradient-flow
/// velocity. Boundary entries are zero.
template <typename Scalar>
struct ResidualFields {
    Field<Scalar> r_q11, r_q12, r_m1, r_m2, r_m3;

    Field<Scalar>& operator[](Component c) {
        switch (c) {
            case Component::Q11: return r_q11;
            case Component::Q12: return r_q12;
            case Component::M1: return r_m1;
            case Component::M2: return r_m2;
            case Component::M3: return r_m3;
        }
        throw std::logic_error("bad component");
    }
    const Field<Scalar>& operator[](Component c) const { return const_cast<ResidualFields&>(*this)[c]; }
};

template <typename Scalar>
ResidualFields<Scalar> el_residual(const State<Scalar>& s, const ModelParams<Scalar>& p, const Grid2D<Scalar>& g) {
    require_same_grid(g, s);
    ResidualFields<Scalar> r{g.zeros(), g.zeros(), g.zeros(), g.zeros(), g.zeros()};
    const int n = g.n();
    for (auto c : kAllComponents) {
        const Scalar l = diffusivity(p, c);
        Field<Scalar>& out = r[c];
        for (int j = 1; j < n - 1; ++j) {
            for (int i = 1; i < n - 1; ++i) {
                out(i, j) = l * laplacian(s[c], g, i, j) + reaction(NodeValues<Scalar>::at(s, i, j), p, c);
            }
        }
    }
    return r;
}

/// Constant lower bound for the energy on the unit square with |H_ext| <= h_max.
///
/// Young's inequality bounds the three indefinite couplings; completing the squares
/// in ½|Q|² and |M|² leaves
///   g = -a/2 - a²/4 + ξ/4 - (ξ/2 + c3 ξ ε3)² / (4A),
///   a = c1 ε1 + c2 ε2,  A = ξ/4 - c1/(4 ε1),
/// with ε1 = 2 c1/ξ (so A = ξ/8 > 0) and ε2 = ε3 = 1. For c1 = 0 the coupling term
/// is absent and A = ξ/4. The field enters as -(c3 ξ/ε3) h² - (c2/(2 ε2)) h⁴.
template <typename Scalar>
Scalar energy_lower_bound(const ModelParams<Scalar>& p, Scalar h_max) {
    const Scalar eps2 = 1, eps3 = 1;
    Scalar a = p.c2 * eps2;
    Scalar A = p.xi / Scalar(4);
    if (p.c1 > Scalar(0)) {
        const Scalar eps1 = Scalar(2) * p.c1 / p.xi;
        a += p.c1 * eps1;
        A -= p.c1 / (Scalar(4) * eps1);
    }
    const Scalar lin = p.xi / Scalar(2) + p.c3 * p.xi * eps3;
    const Scalar g = -a / Scalar(2) - a * a / Scalar(4) + p.xi / Scalar(4) - lin * lin / (Scalar(4) * A);
    const Scalar h2 = h_max * h_max;
    const Scalar area = 1;
    return area * (g - (p.c3 * p.xi / eps3) * h2 - (p.c2 / (Scalar(2) * eps2)) * h2 * h2);
}

/// Bulk potential with c1 = 2βξ and planar M, without the additive constant k_ξ.
template <typename Scalar>
Scalar bulk_potential_f_xi_raw(const NodeValues<Scalar>& v, Scalar beta, Scalar xi) {
    const Scalar q = v.q11 * v.q11 + v.q12 * v.q12 - Scalar(1);
    const Scalar m = v.m1 * v.m1 + v.m2 * v.m2 - Scalar(1);
    return Scalar(0.25) * q * q + Scalar(0.25) * xi * m * m - beta * xi * qm_dot_m(v.q11, v.q12, v.m1, v.m2);
}

/// Minimiser of the raw f_ξ reduced to the amplitudes s = sqrt(Q11²+Q12²) and
/// m = sqrt(M1²+M2²) (co-aligned director and magnetisation).
template <typename Scalar>
struct BulkMinimum {
    Scalar s;      ///< minimising Q amplitude
    Scalar m;      ///< minimising planar |M|
    Scalar value;  ///< minimum of the raw potential; k_ξ = -value
};

template <typename Scalar>
void require_beta_xi(Scalar beta, Scalar xi) {
    if (!(beta > Scalar(0))) throw std::invalid_argument("beta must be > 0");
    if (!(xi > Scalar(0))) throw std::invalid_argument("xi must be > 0");
}

/// Amplitude form of f_ξ: ¼(s²-1)² + (ξ/4)(m²-1)² - βξ s m².
template <typename Scalar>
Scalar f_xi_amplitudes(Scalar s, Scalar m, Scalar beta, Scalar xi) {
    const Scalar a = s * s - Scalar(1);
    const Scalar b = m * m - Scalar(1);
    return Scalar(0.25) * a * a + Scalar(0.25) * xi * b * b - beta * xi * s * m * m;
}

/// Stationarity gives m² = 1 + 2βs and s³ - (1 + 2β²ξ) s - βξ = 0; the largest root
/// of the cubic is the global minimiser (the m = 0 branch sits at +ξ/4).
template <typename Scalar>
BulkMinimum<Scalar> minimize_f_xi(Scalar beta, Scalar xi) {
    require_beta_xi(beta, xi);
    const Scalar p = Scalar(1) + Scalar(2) * beta * beta * xi;
    const Scalar q = beta * xi;
    // Start right of the largest root: s³ - p s - q > 0 for s >= sqrt(p) + q/p + 1.
    Scalar s = std::sqrt(p) + q / p + Scalar(1);
    for (int it = 0; it < 200; ++it) {
        const Scalar r = s * s * s - p * s - q;
        const Scalar dr = Scalar(3) * s * s - p;
        const Scalar step = r / dr;
        s -= step;
        if (std::abs(step) <= std::numeric_limits<Scalar>::epsilon() * s) break;
    }
    const Scalar m = std::sqrt(Scalar(1) + Scalar(2) * beta * s);
    return {s, m, f_xi_amplitudes(s, m, beta, xi)};
}

/// Constant k_ξ >= 0 making inf f_ξ = 0.
template <typename Scalar>
Scalar compute_k_xi(Scalar beta, Scalar xi) {
    return -minimize_f_xi(beta, xi).value;
}

template <typename Scalar>
Scalar bulk_potential_f_xi(const NodeValues<Scalar>& v, Scalar beta, Scalar xi) {
    return bulk_potential_f_xi_raw(v, beta, xi) + compute_k_xi(beta, xi);
}

/// Small-ξ boundary amplitudes |M| = sqrt(2β+1), |Q| = sqrt(1 + 2β²ξ + βξ).
template <typename Scalar>
std::pair<Scalar, Scalar> boundary_amplitudes_closed_form(Scalar beta, Scalar xi) {
    return {std::sqrt(Scalar(1) + Scalar(2) * beta * beta * xi + beta * xi), std::sqrt(Scalar(2) * beta + Scalar(1))};
}

}  // namespace ferronematic
