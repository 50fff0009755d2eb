#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/Core>

namespace spiralmin {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec3L = Eigen::Matrix<long double, 3, 1>;

/// First and second derivatives of a map R^2 -> R^3 at one parameter point.
///
/// The gradient columns are `ds` and `dth`; the Hessian entries are `dss`,
/// `dthth` and the mixed derivative `dsth`. Jets form a vector space, which is
/// what the directional derivatives of the mean curvature functional use.
struct Jet {
    Vec3 ds = Vec3::Zero();
    Vec3 dth = Vec3::Zero();
    Vec3 dss = Vec3::Zero();
    Vec3 dthth = Vec3::Zero();
    Vec3 dsth = Vec3::Zero();

    Jet& operator+=(const Jet& o) {
        ds += o.ds;
        dth += o.dth;
        dss += o.dss;
        dthth += o.dthth;
        dsth += o.dsth;
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        ds -= o.ds;
        dth -= o.dth;
        dss -= o.dss;
        dthth -= o.dthth;
        dsth -= o.dsth;
        return *this;
    }
    Jet& operator*=(double c) {
        ds *= c;
        dth *= c;
        dss *= c;
        dthth *= c;
        dsth *= c;
        return *this;
    }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(double c, Jet a) { return a *= c; }

    /// Frobenius norm of the 3x2 gradient.
    double gradient_norm() const { return std::sqrt(ds.squaredNorm() + dth.squaredNorm()); }
    /// Frobenius norm of the Hessian block.
    double hessian_norm() const {
        return std::sqrt(dss.squaredNorm() + dthth.squaredNorm() + dsth.squaredNorm());
    }
    double norm() const { return std::hypot(gradient_norm(), hessian_norm()); }
    /// Largest absolute component over all five vectors.
    double max_abs() const {
        return std::max({ds.cwiseAbs().maxCoeff(), dth.cwiseAbs().maxCoeff(), dss.cwiseAbs().maxCoeff(),
                         dthth.cwiseAbs().maxCoeff(), dsth.cwiseAbs().maxCoeff()});
    }
    bool all_finite() const {
        return ds.allFinite() && dth.allFinite() && dss.allFinite() && dthth.allFinite() && dsth.allFinite();
    }
};

/// A tangent direction in jet space.
using JetDirection = Jet;

}  // namespace spiralmin
