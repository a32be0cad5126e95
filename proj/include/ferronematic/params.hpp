#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "ferronematic/grid.hpp"

namespace ferronematic {

/// Dimensionless model coefficients.
template <typename Scalar>
struct ModelParams {
    Scalar l1 = Scalar(0.005);  ///< nematic elasticity; figure captions quote l1' = 2 l1
    Scalar l2 = Scalar(0.01);   ///< magnetic exchange
    Scalar c1 = Scalar(0);      ///< nemato-magnetic coupling
    Scalar c2 = Scalar(0);      ///< Q / external-field coupling
    Scalar c3 = Scalar(0);      ///< stray field and Zeeman
    Scalar xi = Scalar(1);      ///< magnetic-to-nematic energy ratio
    Scalar eta1 = Scalar(1);
    Scalar eta2 = Scalar(1);
    Vec3<Scalar> h_ext = Vec3<Scalar>::Zero();
    bool m3_enabled = true;

    /// Throws std::invalid_argument naming the first violated constraint.
    void validate() const {
        auto positive = [](Scalar v, const char* name) {
            if (!(v > Scalar(0)) || !std::isfinite(static_cast<double>(v))) {
                throw std::invalid_argument(std::string(name) + " must be > 0");
            }
        };
        auto nonnegative = [](Scalar v, const char* name) {
            if (!(v >= Scalar(0)) || !std::isfinite(static_cast<double>(v))) {
                throw std::invalid_argument(std::string(name) + " must be >= 0");
            }
        };
        positive(l1, "l1");
        positive(l2, "l2");
        // c1 = 0 is the decoupled reference case; the constraint is c1 >= 0 in practice.
        nonnegative(c1, "c1");
        nonnegative(c2, "c2");
        nonnegative(c3, "c3");
        positive(xi, "xi");
        positive(eta1, "eta1");
        positive(eta2, "eta2");
        if (!h_ext.allFinite()) throw std::invalid_argument("h_ext must be finite");
    }

    bool operator==(const ModelParams&) const = default;
};

/// Coefficients of the dimensional energy density.
template <typename Scalar>
struct DimensionalParams {
    Scalar K;        ///< nematic elastic constant [N]
    Scalar kappa;    ///< exchange stiffness [N]
    Scalar A;        ///< LdG quadratic coefficient [N m^-2], < 0
    Scalar C;        ///< LdG quartic coefficient [N m^-2], > 0
    Scalar alpha;    ///< Landau quadratic coefficient [N m^-2], < 0
    Scalar beta_L;   ///< Landau quartic coefficient [N m^-2], > 0
    Scalar gamma1;   ///< coupling strength, >= 0
    Scalar chi1;     ///< susceptibility coefficient, >= 0
    Scalar mu;       ///< rescaled permeability [N m^-2], > 0
    Scalar L;        ///< domain length [m], > 0
};

/// Maps dimensional coefficients onto (l1, l2, xi, c1, c2, c3). Friction and field are
/// left at their defaults.
template <typename Scalar>
ModelParams<Scalar> nondimensionalize(const DimensionalParams<Scalar>& d) {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(what);
    };
    require(d.K > 0, "K must be > 0");
    require(d.kappa > 0, "kappa must be > 0");
    require(d.A < 0, "A must be < 0");
    require(d.C > 0, "C must be > 0");
    require(d.alpha < 0, "alpha must be < 0");
    require(d.beta_L > 0, "beta_L must be > 0");
    require(d.gamma1 >= 0, "gamma1 must be >= 0");
    require(d.chi1 >= 0, "chi1 must be >= 0");
    require(d.mu > 0, "mu must be > 0");
    require(d.L > 0, "L must be > 0");

    using std::abs;
    using std::sqrt;
    const Scalar absA = abs(d.A);
    const Scalar absAlpha = abs(d.alpha);
    const Scalar coupling_scale = (d.mu / absA) * sqrt(d.C / (Scalar(2) * absA)) * (absAlpha / d.beta_L);

    ModelParams<Scalar> p;
    p.l1 = d.K / (Scalar(2) * absA * d.L * d.L);
    p.l2 = d.kappa / (absAlpha * d.L * d.L);
    p.xi = (d.C / (absA * absA)) * (absAlpha * absAlpha / d.beta_L);
    p.c1 = d.gamma1 * coupling_scale;
    p.c2 = d.chi1 * coupling_scale;
    p.c3 = d.mu / absAlpha;
    return p;
}

}  // namespace ferronematic
