#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace ferronematic {

class SingularSystemError : public std::runtime_error {
public:
    SingularSystemError(Eigen::Index row, double pivot)
        : std::runtime_error("tridiagonal system is singular: pivot " + std::to_string(pivot) + " at row " +
                             std::to_string(row)),
          row_(row) {}
    Eigen::Index row() const { return row_; }

private:
    Eigen::Index row_;
};

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Thomas algorithm for a_i x_{i-1} + b_i x_i + c_i x_{i+1} = d_i (a_0 and c_{n-1}
/// are ignored). Writes the solution into x; `scratch` holds the modified
/// super-diagonal. No pivoting: a pivot below 1e-14 max|b| throws.
template <typename Scalar, typename VA, typename VB, typename VC, typename VD, typename VX, typename VS>
void thomas_solve_into(const VA& a, const VB& b, const VC& c, const VD& d, VX& x, VS& scratch) {
    const Eigen::Index n = b.size();
    if (n < 1) throw std::invalid_argument("tridiagonal system needs at least one row");
    if (a.size() != n || c.size() != n || d.size() != n) {
        throw std::invalid_argument("tridiagonal bands must all have length " + std::to_string(n));
    }
    const Scalar tiny = Scalar(1e-14) * b.cwiseAbs().maxCoeff();

    Scalar pivot = b(0);
    if (!(std::abs(pivot) > tiny)) throw SingularSystemError(0, static_cast<double>(pivot));
    scratch(0) = c(0) / pivot;
    x(0) = d(0) / pivot;
    for (Eigen::Index i = 1; i < n; ++i) {
        pivot = b(i) - a(i) * scratch(i - 1);
        if (!(std::abs(pivot) > tiny)) throw SingularSystemError(i, static_cast<double>(pivot));
        scratch(i) = c(i) / pivot;
        x(i) = (d(i) - a(i) * x(i - 1)) / pivot;
    }
    for (Eigen::Index i = n - 2; i >= 0; --i) x(i) -= scratch(i) * x(i + 1);
}

template <typename Scalar>
Vector<Scalar> thomas_solve(const Vector<Scalar>& a, const Vector<Scalar>& b, const Vector<Scalar>& c,
                            const Vector<Scalar>& d) {
    Vector<Scalar> x(b.size());
    Vector<Scalar> scratch(b.size());
    thomas_solve_into<Scalar>(a, b, c, d, x, scratch);
    return x;
}

}  // namespace ferronematic
