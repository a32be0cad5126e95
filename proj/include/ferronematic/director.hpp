#pragma once

#include <cmath>
#include <utility>

#include "ferronematic/grid.hpp"

namespace ferronematic {

/// Director decomposition Q = s (2 n⊗n - J) of a reduced Q-field.
template <typename Scalar>
struct DirectorField {
    Field<Scalar> s;      ///< scalar order sqrt(Q11^2 + Q12^2)
    Field<Scalar> angle;  ///< director angle phi, n = (cos phi, sin phi, 0)
    Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> defect;  ///< s == 0, angle reported as 0
};

template <typename Scalar>
struct DirectorAt {
    Scalar s;
    Scalar angle;
    bool defect;
};

template <typename Scalar>
DirectorAt<Scalar> director_at(Scalar q11, Scalar q12) {
    const Scalar s = std::hypot(q11, q12);
    if (s == Scalar(0)) return {Scalar(0), Scalar(0), true};
    return {s, Scalar(0.5) * std::atan2(q12, q11), false};
}

template <typename Scalar>
DirectorField<Scalar> director_from_q(const QField<Scalar>& q) {
    const auto rows = q.q11.rows();
    const auto cols = q.q11.cols();
    DirectorField<Scalar> out{Field<Scalar>(rows, cols), Field<Scalar>(rows, cols),
                              Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>(rows, cols)};
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) {
            const auto d = director_at(q.q11(i, j), q.q12(i, j));
            out.s(i, j) = d.s;
            out.angle(i, j) = d.angle;
            out.defect(i, j) = d.defect;
        }
    }
    return out;
}

/// Inverse map: (s, phi) -> (Q11, Q12) = s (cos 2phi, sin 2phi).
template <typename Scalar>
std::pair<Scalar, Scalar> q_from_director(Scalar s, Scalar angle) {
    return {s * std::cos(Scalar(2) * angle), s * std::sin(Scalar(2) * angle)};
}

}  // namespace ferronematic
