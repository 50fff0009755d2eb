#pragma once

#include "spiralmin/jet.hpp"

namespace spiralmin {

/// Upper end of the supported spiral parameter range (0, kMaxDelta].
inline constexpr double kMaxDelta = 0.2;

/// Throws InvalidArgument unless 0 < delta <= kMaxDelta.
void check_delta(double delta);

/// Moving frame: e_r = (sin t, cos t, 0), e_r' = d/dt e_r, e_z.
///
/// Note the frame is left-handed: e_r x e_r' = -e_z.
struct Frame {
    Vec3 e_r;
    Vec3 e_r_prime;
    Vec3 e_z;
};

Frame frame(double theta);

struct ImmersionJet {
    Vec3 point;
    Jet jet;
};

/// The spiraling immersion
///   G(s, t) = (e^{dt} sinh s sin t, e^{dt} sinh s cos t, e^{dt} / d)
/// together with its closed-form first and second derivatives.
ImmersionJet immersion_jet(double s, double theta, double delta);

/// G evaluated in extended precision. Used by finite-difference oracles,
/// where the e^{dt}/d height makes double-precision second differences lose
/// about six digits.
Vec3L immersion_point_ld(long double s, long double theta, long double delta);

/// The unit normal of G in extended precision.
Vec3L unit_normal_ld(long double s, long double theta);

struct NormalDerivatives {
    Vec3 s;
    Vec3 th;
    Vec3 ss;
    Vec3 sth;
    Vec3 thth;
};

/// Coefficients of e^{2dt} cosh^2(s) Lap_g = c_ss d_ss + c_thth d_thth + c_sth d_sth + c_s d_s + c_th d_th.
struct LaplaceCoefficients {
    double ss = 0;
    double thth = 0;
    double sth = 0;
    double s = 0;
    double th = 0;
    double prefactor = 1;  // e^{2dt} cosh^2(s)
};

struct GeometryRecord {
    Frame frame;
    Vec3 point;
    Jet jet;
    Vec3 normal;
    NormalDerivatives normal_derivs;
    double g_ss = 0, g_thth = 0, g_sth = 0;
    double det_g = 0;
    double dual_ss = 0, dual_thth = 0, dual_sth = 0;
    double A_ss = 0, A_thth = 0, A_sth = 0;
    double A_norm_sq = 0;
    /// g^{ij} A_ij with A_ij = d_ij G . normal (sum of principal curvatures).
    double H = 0;
    LaplaceCoefficients laplace;
};

/// Closed-form geometry of G at (s, theta). The normal is
/// -cosh^{-1}(s) e_r' + tanh(s) e_z, which is -(G_s x G_th)/|G_s x G_th|
/// in the right-handed ambient orientation.
GeometryRecord geometry_at(double s, double theta, double delta);

}  // namespace spiralmin
