#include "spiralmin/mc_functional.hpp"

#include <cmath>
#include <string>

#include <Eigen/Geometry>

#include "spiralmin/errors.hpp"

namespace spiralmin {

namespace {

struct Metric {
    double g11, g12, g22, det;
};

Metric metric_of(const Jet& jet) {
    Metric m{jet.ds.squaredNorm(), jet.ds.dot(jet.dth), jet.dth.squaredNorm(), 0.0};
    m.det = m.g11 * m.g22 - m.g12 * m.g12;
    const double grad2 = m.g11 + m.g22;
    if (!(m.det > 1e-24 * grad2 * grad2)) {
        throw DegenerateImmersion("degenerate jet: det g = " + std::to_string(m.det));
    }
    return m;
}

double trace_against(const Metric& m, double A11, double A12, double A22) {
    return (m.g22 * A11 - 2.0 * m.g12 * A12 + m.g11 * A22) / m.det;
}

}  // namespace

double mean_curvature_of_jet(const Jet& jet) {
    const Metric m = metric_of(jet);
    const Vec3 n = jet.ds.cross(jet.dth).normalized();
    return trace_against(m, jet.dss.dot(n), jet.dsth.dot(n), jet.dthth.dot(n));
}

double trace_second_form(const Jet& jet, const Vec3& normal) {
    const Metric m = metric_of(jet);
    return trace_against(m, jet.dss.dot(normal), jet.dsth.dot(normal), jet.dthth.dot(normal));
}

double second_form_length_sq(const Jet& jet) {
    const Metric m = metric_of(jet);
    const Vec3 n = jet.ds.cross(jet.dth).normalized();
    Eigen::Matrix2d A;
    A << jet.dss.dot(n), jet.dsth.dot(n), jet.dsth.dot(n), jet.dthth.dot(n);
    Eigen::Matrix2d ginv;
    ginv << m.g22, -m.g12, -m.g12, m.g11;
    ginv /= m.det;
    const Eigen::Matrix2d mixed = ginv * A;  // A^i_j
    return (mixed * mixed).trace();
}

Jet scale_jet(double c, const Jet& jet) {
    if (!std::isfinite(c) || c == 0.0) {
        throw InvalidArgument("scale factor must be finite and nonzero");
    }
    return c * jet;
}

Jet rotate_jet(const Mat3& R, const Jet& jet) {
    const double orth = (R.transpose() * R - Mat3::Identity()).cwiseAbs().maxCoeff();
    if (!R.allFinite() || orth > 1e-12 || std::abs(R.determinant() - 1.0) > 1e-12) {
        throw InvalidArgument("rotate_jet requires a proper rotation matrix");
    }
    Jet out;
    out.ds = R * jet.ds;
    out.dth = R * jet.dth;
    out.dss = R * jet.dss;
    out.dthth = R * jet.dthth;
    out.dsth = R * jet.dsth;
    return out;
}

ConformalDefect conformal_defect(const Jet& jet) {
    const double ns = jet.ds.norm();
    const double nt = jet.dth.norm();
    if (ns == 0.0 || nt == 0.0) {
        throw DegenerateImmersion("conformal defect undefined for a zero tangent column");
    }
    return ConformalDefect{jet.ds.dot(jet.dth) / (ns * nt), ns / nt - 1.0};
}

double dH(const Jet& jet, const JetDirection& dir, int order) {
    if (order != 1 && order != 2) {
        throw InvalidArgument("dH order must be 1 or 2");
    }
    const double defect = conformal_defect(jet).magnitude();
    if (defect >= kMaxConformalDefect) {
        throw PreconditionViolation("conformal defect " + std::to_string(defect) + " is not below 1/4");
    }
    const double dir_norm = dir.norm();
    if (dir_norm == 0.0) {
        return 0.0;
    }
    // Second differences need a larger step to keep roundoff below truncation.
    const double rel = order == 1 ? 1e-5 : 1e-3;
    const double t = rel * jet.gradient_norm() / dir_norm;
    const double h0 = mean_curvature_of_jet(jet);

    auto estimate = [&](double step) {
        const double hp = mean_curvature_of_jet(jet + step * dir);
        const double hm = mean_curvature_of_jet(jet - step * dir);
        if (order == 1) {
            return (hp - hm) / (2.0 * step);
        }
        return (hp - 2.0 * h0 + hm) / (step * step);
    };
    return (4.0 * estimate(0.5 * t) - estimate(t)) / 3.0;
}

}  // namespace spiralmin
