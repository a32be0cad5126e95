#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace ferronematic {

/// Node-indexed scalar field. Entry (i, j) lives at (x_i, y_j); column-major
/// storage keeps each x-line (fixed j) contiguous for the line solves.
template <typename Scalar>
using Field = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;

/// Uniform node-centred grid on the unit square, boundary nodes included.
template <typename Scalar>
class Grid2D {
public:
    Grid2D() = default;

    /// n nodes per axis, spacing 1/(n-1). n < 3 has no interior node.
    static Grid2D make(int n) {
        if (n < 3) {
            throw std::invalid_argument("grid needs n >= 3 nodes per axis, got " + std::to_string(n));
        }
        Grid2D g;
        g.n_ = n;
        g.h_ = Scalar(1) / Scalar(n - 1);
        return g;
    }

    int n_x() const { return n_; }
    int n_y() const { return n_; }
    int n() const { return n_; }
    Scalar delta_x() const { return h_; }
    Scalar delta_y() const { return h_; }
    std::size_t node_count() const { return static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_); }

    /// i / (n-1), so nodes shared by nested grids get identical coordinates.
    Scalar x(int i) const { return Scalar(i) / Scalar(n_ - 1); }
    Scalar y(int j) const { return Scalar(j) / Scalar(n_ - 1); }

    bool is_boundary(int i, int j) const { return i == 0 || j == 0 || i == n_ - 1 || j == n_ - 1; }
    bool is_interior(int i, int j) const { return !is_boundary(i, j); }

    /// Trapezoidal weight of node (i, j); the weights sum to the unit area.
    Scalar weight(int i, int j) const {
        Scalar w = h_ * h_;
        if (i == 0 || i == n_ - 1) w *= Scalar(0.5);
        if (j == 0 || j == n_ - 1) w *= Scalar(0.5);
        return w;
    }

    Field<Scalar> zeros() const { return Field<Scalar>::Zero(n_, n_); }
    Field<Scalar> constant(Scalar v) const { return Field<Scalar>::Constant(n_, n_, v); }

    bool operator==(const Grid2D& o) const { return n_ == o.n_; }
    bool operator!=(const Grid2D& o) const { return !(*this == o); }

    /// True when the field has one entry per node of this grid.
    bool fits(const Field<Scalar>& f) const { return f.rows() == n_ && f.cols() == n_; }

private:
    int n_ = 0;
    Scalar h_ = Scalar(0);
};

/// Reduced (planar, traceless, symmetric) Q-tensor: Q22 = -Q11, Q21 = Q12.
template <typename Scalar>
struct QField {
    Field<Scalar> q11;
    Field<Scalar> q12;

    static QField zeros(const Grid2D<Scalar>& g) { return {g.zeros(), g.zeros()}; }
};

template <typename Scalar>
struct MField {
    Field<Scalar> m1;
    Field<Scalar> m2;
    Field<Scalar> m3;

    static MField zeros(const Grid2D<Scalar>& g) { return {g.zeros(), g.zeros(), g.zeros()}; }
};

/// The five scalar unknowns, in the fixed sweep order used by the solver.
enum class Component : int { Q11 = 0, Q12 = 1, M1 = 2, M2 = 3, M3 = 4 };

inline constexpr std::array<Component, 5> kAllComponents = {Component::Q11, Component::Q12, Component::M1,
                                                           Component::M2, Component::M3};

inline const char* component_name(Component c) {
    switch (c) {
        case Component::Q11: return "q11";
        case Component::Q12: return "q12";
        case Component::M1: return "m1";
        case Component::M2: return "m2";
        case Component::M3: return "m3";
    }
    return "?";
}

template <typename Scalar>
struct State {
    QField<Scalar> q;
    MField<Scalar> m;

    static State zeros(const Grid2D<Scalar>& g) { return {QField<Scalar>::zeros(g), MField<Scalar>::zeros(g)}; }

    Field<Scalar>& operator[](Component c) {
        switch (c) {
            case Component::Q11: return q.q11;
            case Component::Q12: return q.q12;
            case Component::M1: return m.m1;
            case Component::M2: return m.m2;
            case Component::M3: return m.m3;
        }
        throw std::logic_error("bad component");
    }
    const Field<Scalar>& operator[](Component c) const { return const_cast<State&>(*this)[c]; }

    bool operator==(const State& o) const {
        for (auto c : kAllComponents) {
            if ((*this)[c].rows() != o[c].rows() || (*this)[c].cols() != o[c].cols() || (*this)[c] != o[c]) {
                return false;
            }
        }
        return true;
    }
};

template <typename Scalar>
void require_same_grid(const Grid2D<Scalar>& g, const State<Scalar>& s) {
    for (auto c : kAllComponents) {
        if (!g.fits(s[c])) {
            throw std::invalid_argument(std::string("field ") + component_name(c) + " does not match the " +
                                        std::to_string(g.n()) + "x" + std::to_string(g.n()) + " grid");
        }
    }
}

/// |Q|^2 = 2 (Q11^2 + Q12^2) for the reduced tensor.
template <typename Scalar>
Scalar q_norm_sq(Scalar q11, Scalar q12) {
    return Scalar(2) * (q11 * q11 + q12 * q12);
}

template <typename Scalar>
Scalar m_norm_sq(Scalar m1, Scalar m2, Scalar m3) {
    return m1 * m1 + m2 * m2 + m3 * m3;
}

/// Maximum absolute entry over all five components of a - b.
template <typename Scalar>
Scalar max_abs_difference(const State<Scalar>& a, const State<Scalar>& b) {
    Scalar worst = 0;
    for (auto c : kAllComponents) worst = std::max(worst, (a[c] - b[c]).cwiseAbs().maxCoeff());
    return worst;
}

}  // namespace ferronematic
