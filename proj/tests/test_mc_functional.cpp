#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <Eigen/Geometry>

#include "spiralmin/errors.hpp"
#include "spiralmin/geometry.hpp"
#include "spiralmin/mc_functional.hpp"

using namespace spiralmin;

namespace {

Jet plane_jet() { return Jet{Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3::Zero(), Vec3::Zero(), Vec3::Zero()}; }

Jet random_immersed_jet(std::mt19937_64& rng) {
    std::normal_distribution<double> n01;
    for (;;) {
        auto v = [&] { return Vec3(n01(rng), n01(rng), n01(rng)); };
        Jet j{v(), v(), v(), v(), v()};
        if (j.ds.cross(j.dth).squaredNorm() > 1e-2 * j.ds.squaredNorm() * j.dth.squaredNorm()) {
            return j;
        }
    }
}

Jet near_conformal_jet(std::mt19937_64& rng) {
    std::normal_distribution<double> n01;
    std::uniform_real_distribution<double> scale(0.5, 3.0);
    const double a = scale(rng);
    Eigen::Quaterniond q(n01(rng), n01(rng), n01(rng), n01(rng));
    q.normalize();
    const Mat3 R = q.toRotationMatrix();
    auto v = [&] { return Vec3(n01(rng), n01(rng), n01(rng)); };
    Jet j{R * Vec3(a, 0.02 * a * n01(rng), 0), R * Vec3(0.02 * a * n01(rng), a, 0), v(), v(), v()};
    return j;
}

Mat3 random_rotation(std::mt19937_64& rng) {
    std::normal_distribution<double> n01;
    Eigen::Quaterniond q(n01(rng), n01(rng), n01(rng), n01(rng));
    q.normalize();
    return q.toRotationMatrix();
}

}  // namespace

TEST(MeanCurvature, PlaneIsZero) { EXPECT_EQ(mean_curvature_of_jet(plane_jet()), 0.0); }

TEST(MeanCurvature, CylinderRadiusTwo) {
    const Jet cyl{Vec3(0, 2, 0), Vec3(0, 0, 1), Vec3(-2, 0, 0), Vec3::Zero(), Vec3::Zero()};
    EXPECT_NEAR(std::abs(mean_curvature_of_jet(cyl)), 0.5, 1e-15);
}

TEST(MeanCurvature, SphereRadiusThree) {
    // (3 cos s cos t, 3 cos s sin t, 3 sin s) at s = t = 0.
    const Jet sph{Vec3(0, 0, 3), Vec3(0, 3, 0), Vec3(-3, 0, 0), Vec3(-3, 0, 0), Vec3::Zero()};
    EXPECT_NEAR(std::abs(mean_curvature_of_jet(sph)), 2.0 / 3.0, 1e-15);
}

TEST(MeanCurvature, DegenerateJetThrows) {
    const Jet flat{Vec3(1, 0, 0), Vec3(2, 0, 0), Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
    EXPECT_THROW(mean_curvature_of_jet(flat), DegenerateImmersion);
    EXPECT_THROW(mean_curvature_of_jet(Jet{}), DegenerateImmersion);
}

TEST(MeanCurvature, HomogeneityOnRandomJets) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> lc(std::log(0.1), std::log(10.0));
    for (int k = 0; k < 1000; ++k) {
        const Jet j = random_immersed_jet(rng);
        const double c = std::exp(lc(rng));
        const double h = mean_curvature_of_jet(j);
        EXPECT_LE(std::abs(c * mean_curvature_of_jet(scale_jet(c, j)) - h), 1e-10 * std::abs(h) + 1e-14);
    }
    for (double c : {0.5, 2.0, 10.0, -3.0}) {
        const Jet j = random_immersed_jet(rng);
        EXPECT_NEAR(c * mean_curvature_of_jet(scale_jet(c, j)), mean_curvature_of_jet(j),
                    1e-12 * std::abs(mean_curvature_of_jet(j)));
    }
}

TEST(MeanCurvature, RotationInvarianceOnRandomJets) {
    std::mt19937_64 rng(12);
    for (int k = 0; k < 1000; ++k) {
        const Jet j = random_immersed_jet(rng);
        const double h = mean_curvature_of_jet(j);
        EXPECT_NEAR(mean_curvature_of_jet(rotate_jet(random_rotation(rng), j)), h, 1e-10 * std::max(1.0, std::abs(h)));
    }
}

TEST(MeanCurvature, ReflectionFlipsSign) {
    std::mt19937_64 rng(13);
    const Mat3 flip = Eigen::Vector3d(1, 1, -1).asDiagonal();
    const Jet j = random_immersed_jet(rng);
    Jet r{flip * j.ds, flip * j.dth, flip * j.dss, flip * j.dthth, flip * j.dsth};
    EXPECT_NEAR(mean_curvature_of_jet(r), -mean_curvature_of_jet(j), 1e-12 * std::abs(mean_curvature_of_jet(j)));
}

TEST(MeanCurvature, OnJetsOfImmersionEqualsMinusTraceH) {
    // The closed-form normal is -(G_s x G_t)/|G_s x G_t|, so the jet
    // functional, which uses G_s x G_t, returns the opposite sign.
    for (double d : {0.01, 0.1}) {
        for (double s = -3.0; s <= 3.0; s += 0.25) {
            for (double t = 0.0; t <= 12.6; t += 0.9) {
                const GeometryRecord r = geometry_at(s, t, d);
                EXPECT_NEAR(mean_curvature_of_jet(r.jet), -r.H, 1e-10 * std::sqrt(r.A_norm_sq));
                EXPECT_NEAR(trace_second_form(r.jet, r.normal), r.H, 1e-10 * std::sqrt(r.A_norm_sq));
            }
        }
    }
}

TEST(ScaleJet, DoublesEveryVector) {
    const Jet j = scale_jet(2.0, plane_jet());
    EXPECT_EQ(j.ds, Vec3(2, 0, 0));
    EXPECT_EQ(j.dth, Vec3(0, 2, 0));
    EXPECT_THROW(scale_jet(0.0, plane_jet()), InvalidArgument);
    EXPECT_THROW(scale_jet(std::nan(""), plane_jet()), InvalidArgument);
}

TEST(RotateJet, RejectsImproperMatrices) {
    EXPECT_THROW(rotate_jet(Mat3(Eigen::Vector3d(1, 1, -1).asDiagonal()), plane_jet()), InvalidArgument);
    EXPECT_THROW(rotate_jet(2.0 * Mat3::Identity(), plane_jet()), InvalidArgument);
    Mat3 almost = Mat3::Identity();
    almost(0, 1) = 1e-9;
    EXPECT_THROW(rotate_jet(almost, plane_jet()), InvalidArgument);
}

TEST(ConformalDefect, Values) {
    const ConformalDefect at_core = conformal_defect(immersion_jet(0.0, 1.0, 0.1).jet);
    EXPECT_NEAR(at_core.dot, 0.0, 1e-15);
    EXPECT_NEAR(at_core.ratio_minus_one, 0.0, 1e-15);

    const Jet stretched{Vec3(1, 0, 0), Vec3(0, 2, 0), Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
    const ConformalDefect cd = conformal_defect(stretched);
    EXPECT_EQ(cd.dot, 0.0);
    EXPECT_NEAR(cd.ratio_minus_one, -0.5, 1e-15);

    const Jet zero_col{Vec3::Zero(), Vec3(0, 1, 0), Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
    EXPECT_THROW(conformal_defect(zero_col), DegenerateImmersion);
}

TEST(ConformalDefect, ImmersionIsNearlyConformal) {
    for (double d : {0.01, 0.1, 0.2}) {
        for (double s = -4.0; s <= 4.0; s += 0.2) {
            const ConformalDefect cd = conformal_defect(immersion_jet(s, 0.7, d).jet);
            const double sh = std::sinh(s);
            EXPECT_NEAR(std::abs(cd.dot), d * std::abs(sh) / std::sqrt(std::cosh(s) * std::cosh(s) + d * d * sh * sh),
                        1e-14);
            EXPECT_LE(cd.magnitude(), d);
        }
    }
}

TEST(DH, EulerRelation) {
    std::mt19937_64 rng(21);
    for (int k = 0; k < 50; ++k) {
        const Jet j = near_conformal_jet(rng);
        const double h = mean_curvature_of_jet(j);
        EXPECT_NEAR(dH(j, j, 1), -h, 1e-8 * (1.0 + std::abs(h)));
        EXPECT_NEAR(dH(j, j, 2), 2.0 * h, 1e-5 * (1.0 + std::abs(h)));
    }
}

TEST(DH, PlaneNormalResponse) {
    const Jet dir{Vec3::Zero(), Vec3::Zero(), Vec3(0, 0, 1), Vec3::Zero(), Vec3::Zero()};
    EXPECT_NEAR(dH(plane_jet(), dir, 1), 1.0, 1e-9);
    EXPECT_NEAR(dH(plane_jet(), dir, 2), 0.0, 1e-6);
}

TEST(DH, ScalingOfFirstDerivative) {
    std::mt19937_64 rng(22);
    for (int k = 0; k < 20; ++k) {
        const Jet j = near_conformal_jet(rng);
        const Jet dir = near_conformal_jet(rng);
        for (double c : {0.5, 3.0}) {
            const double base = dH(j, dir, 1);
            EXPECT_NEAR(c * c * dH(scale_jet(c, j), dir, 1), base, 1e-7 * (1.0 + std::abs(base)));
        }
    }
}

TEST(DH, ZeroDirectionAndErrors) {
    EXPECT_EQ(dH(plane_jet(), Jet{}, 1), 0.0);
    EXPECT_THROW(dH(plane_jet(), plane_jet(), 3), InvalidArgument);
    const Jet skew{Vec3(1, 0, 0), Vec3(1, 1, 0), Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
    EXPECT_THROW(dH(skew, plane_jet(), 1), PreconditionViolation);
}

TEST(DH, DerivativeBoundProbe) {
    // |dH| |grad|^2 / (1 + |hess| / |grad|) stays bounded for unit directions.
    std::mt19937_64 rng(23);
    double worst = 0;
    for (int k = 0; k < 200; ++k) {
        const Jet j = near_conformal_jet(rng);
        Jet dir = near_conformal_jet(rng);
        dir *= 1.0 / dir.norm();
        const double g = j.gradient_norm();
        worst = std::max(worst, std::abs(dH(j, dir, 1)) * g * g / (1.0 + j.hessian_norm() / g));
    }
    EXPECT_LT(worst, 20.0);
}
