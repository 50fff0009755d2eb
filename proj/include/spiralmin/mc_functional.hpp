#pragma once

#include "spiralmin/jet.hpp"

namespace spiralmin {

/// Mean curvature of the surface whose 2-jet at a point is `jet`.
///
/// Returns g^{ij} (d_ij . n) with n = (ds x dth)/|ds x dth| in the standard
/// right-handed orientation of R^3 and g = [ds dth]^T [ds dth]. The value is
/// homogeneous of degree -1 under scaling of the jet and invariant under
/// proper rotations; an orientation-reversing map flips its sign.
///
/// Throws DegenerateImmersion when det g <= 1e-24 |grad|^4.
double mean_curvature_of_jet(const Jet& jet);

/// g^{ij} (d_ij . normal) for an externally supplied unit normal.
double trace_second_form(const Jet& jet, const Vec3& normal);

/// |A|^2 = g^{ik} g^{jl} A_ij A_kl. Independent of orientation.
double second_form_length_sq(const Jet& jet);

Jet scale_jet(double c, const Jet& jet);

/// Rotates every vector of the jet. R must be orthogonal with det +1 (checked to 1e-12).
Jet rotate_jet(const Mat3& R, const Jet& jet);

/// Deviation of the gradient from a conformal frame.
struct ConformalDefect {
    double dot = 0;              // ds/|ds| . dth/|dth|
    double ratio_minus_one = 0;  // |ds|/|dth| - 1

    double magnitude() const { return std::hypot(dot, ratio_minus_one); }
};

ConformalDefect conformal_defect(const Jet& jet);

/// Defect at or above which derivative estimates for H are not trusted.
inline constexpr double kMaxConformalDefect = 0.25;

/// Directional derivative of H along `dir` (order 1 or 2), by central
/// differences with one level of Richardson extrapolation. The step is
/// proportional to |grad| / |dir|, so the result respects the homogeneity of H.
///
/// Throws PreconditionViolation when the conformal defect of `jet` is >= 1/4.
double dH(const Jet& jet, const JetDirection& dir, int order);

}  // namespace spiralmin
