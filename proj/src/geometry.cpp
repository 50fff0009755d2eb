#include "spiralmin/geometry.hpp"

#include <cmath>
#include <string>

#include "spiralmin/errors.hpp"

namespace spiralmin {

void check_delta(double delta) {
    if (!std::isfinite(delta) || delta <= 0.0 || delta > kMaxDelta) {
        throw InvalidArgument("delta must lie in (0, " + std::to_string(kMaxDelta) + "], got " +
                              std::to_string(delta));
    }
}

namespace {

void check_finite(double s, double theta) {
    if (!std::isfinite(s) || !std::isfinite(theta)) {
        throw InvalidArgument("parameter point must be finite");
    }
}

}  // namespace

Frame frame(double theta) {
    if (!std::isfinite(theta)) {
        throw InvalidArgument("theta must be finite");
    }
    const double st = std::sin(theta);
    const double ct = std::cos(theta);
    return Frame{Vec3(st, ct, 0.0), Vec3(ct, -st, 0.0), Vec3(0.0, 0.0, 1.0)};
}

ImmersionJet immersion_jet(double s, double theta, double delta) {
    check_finite(s, theta);
    check_delta(delta);
    const Frame f = frame(theta);
    const double e = std::exp(delta * theta);
    const double sh = std::sinh(s);
    const double ch = std::cosh(s);

    ImmersionJet out;
    out.point = e * sh * f.e_r + (e / delta) * f.e_z;
    out.jet.ds = e * ch * f.e_r;
    out.jet.dth = e * (delta * sh * f.e_r + sh * f.e_r_prime + f.e_z);
    out.jet.dss = e * sh * f.e_r;
    out.jet.dsth = e * ch * (delta * f.e_r + f.e_r_prime);
    out.jet.dthth = e * ((delta * delta - 1.0) * sh * f.e_r + 2.0 * delta * sh * f.e_r_prime + delta * f.e_z);
    return out;
}

Vec3L immersion_point_ld(long double s, long double theta, long double delta) {
    const long double e = std::exp(delta * theta);
    const long double sh = std::sinh(s);
    return Vec3L(e * sh * std::sin(theta), e * sh * std::cos(theta), e / delta);
}

Vec3L unit_normal_ld(long double s, long double theta) {
    const long double sech = 1.0L / std::cosh(s);
    const long double th = std::tanh(s);
    // -sech * e_r' + tanh * e_z
    return Vec3L(-sech * std::cos(theta), sech * std::sin(theta), th);
}

GeometryRecord geometry_at(double s, double theta, double delta) {
    GeometryRecord r;
    const ImmersionJet ij = immersion_jet(s, theta, delta);
    r.frame = frame(theta);
    r.point = ij.point;
    r.jet = ij.jet;

    const Frame& f = r.frame;
    const double e = std::exp(delta * theta);
    const double e2 = e * e;
    const double ch = std::cosh(s);
    const double sh = std::sinh(s);
    const double th = std::tanh(s);
    const double sech = 1.0 / ch;
    const double sech2 = sech * sech;
    const double d2 = delta * delta;

    r.normal = -sech * f.e_r_prime + th * f.e_z;
    r.normal_derivs.s = sech * th * f.e_r_prime + sech2 * f.e_z;
    r.normal_derivs.th = sech * f.e_r;
    r.normal_derivs.ss = sech * (sech2 - th * th) * f.e_r_prime - 2.0 * sech2 * th * f.e_z;
    r.normal_derivs.sth = -sech * th * f.e_r;
    r.normal_derivs.thth = sech * f.e_r_prime;

    r.g_ss = e2 * ch * ch;
    r.g_thth = e2 * (ch * ch + d2 * sh * sh);
    r.g_sth = delta * e2 * sh * ch;
    r.det_g = e2 * e2 * std::pow(ch, 4);

    const double inv_e2 = 1.0 / e2;
    r.dual_ss = inv_e2 * sech2 * (1.0 + d2 * th * th);
    r.dual_thth = inv_e2 * sech2;
    r.dual_sth = -delta * inv_e2 * th * sech2;

    r.A_ss = 0.0;
    r.A_thth = -delta * e * th;
    r.A_sth = -e;
    r.A_norm_sq = inv_e2 * sech2 * sech2 * (2.0 + d2 * th * th);
    // g^{ss} A_ss + 2 g^{st} A_st + g^{tt} A_tt = 2 d e^{-dt} tanh sech^2 - d e^{-dt} tanh sech^2
    r.H = delta / e * th * sech2;

    r.laplace.ss = 1.0 + d2 * th * th;
    r.laplace.thth = 1.0;
    r.laplace.sth = -2.0 * delta * th;
    r.laplace.s = 2.0 * d2 * th * sech2;
    r.laplace.th = -delta * sech2;
    r.laplace.prefactor = e2 * ch * ch;
    return r;
}

}  // namespace spiralmin
