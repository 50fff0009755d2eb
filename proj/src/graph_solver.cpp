#include "spiralmin/graph_solver.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include "spiralmin/errors.hpp"
#include "spiralmin/geometry.hpp"
#include "spiralmin/mc_functional.hpp"

namespace spiralmin {

Jet base_jet(double s, double delta) {
    check_delta(delta);
    if (!std::isfinite(s)) {
        throw InvalidArgument("s must be finite");
    }
    const double sh = std::sinh(s);
    const double ch = std::cosh(s);
    Jet j;
    j.ds = Vec3(ch, 0.0, 0.0);
    j.dth = Vec3(delta * sh, sh, 1.0);
    j.dss = Vec3(sh, 0.0, 0.0);
    j.dsth = Vec3(delta * ch, ch, 0.0);
    j.dthth = Vec3((delta * delta - 1.0) * sh, 2.0 * delta * sh, delta);
    return j;
}

Jet displacement_jet(double s, double u, double du, double ddu, double delta, DisplacementMode mode) {
    if (!std::isfinite(s) || !std::isfinite(u) || !std::isfinite(du) || !std::isfinite(ddu) ||
        !std::isfinite(delta)) {
        throw InvalidArgument("displacement_jet inputs must be finite");
    }
    const double sech = 1.0 / std::cosh(s);
    const double th = std::tanh(s);
    const double d = mode == DisplacementMode::delta ? delta : 0.0;

    // Normal and its derivatives in the pulled-back frame (e_r, e_r', e_z) -> (e_x, e_y, e_z).
    const Vec3 nu(0.0, -sech, th);
    const Vec3 nu_s(0.0, sech * th, sech * sech);
    const Vec3 nu_t(sech, 0.0, 0.0);
    const Vec3 nu_ss(0.0, sech * (sech * sech - th * th), -2.0 * sech * sech * th);
    const Vec3 nu_st(-sech * th, 0.0, 0.0);
    const Vec3 nu_tt(0.0, sech, 0.0);

    Jet j;
    j.ds = du * nu + u * nu_s;
    j.dth = d * u * nu + u * nu_t;
    j.dss = ddu * nu + 2.0 * du * nu_s + u * nu_ss;
    j.dsth = d * du * nu + d * u * nu_s + du * nu_t + u * nu_st;
    j.dthth = d * d * u * nu + 2.0 * d * u * nu_t + u * nu_tt;
    return j;
}

GridFunction minimal_graph_operator(const GridFunction& u, double delta, DisplacementMode mode) {
    check_delta(delta);
    const std::vector<double> du = u.d1();
    const std::vector<double> ddu = u.d2();
    std::vector<double> out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double s = u.node(i);
        const Jet jet = base_jet(s, delta) + displacement_jet(s, u[i], du[i], ddu[i], delta, mode);
        double H = 0.0;
        try {
            const double defect = conformal_defect(jet).magnitude();
            if (!(defect < kMaxConformalDefect)) {
                throw SolverDomainError(i, s, "conformal defect " + std::to_string(defect) + " reaches 1/4");
            }
            H = mean_curvature_of_jet(jet);
        } catch (const DegenerateImmersion& e) {
            throw SolverDomainError(i, s, e.what());
        }
        const double ch = std::cosh(s);
        out[i] = ch * ch * H;
    }
    return u.with_values(std::move(out));
}

GridFunction apply_model_operator(const GridFunction& u) {
    const std::vector<double> ddu = u.d2();
    std::vector<double> out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double sech = 1.0 / std::cosh(u.node(i));
        out[i] = ddu[i] + 2.0 * sech * sech * u[i];
    }
    return u.with_values(std::move(out));
}

namespace {

// Integral of the sampled integrand over [s_i, s_{i+1}].
double interval_integral(const std::vector<double>& a, std::size_t i, double h) {
    const std::size_t n = a.size();
    if (i >= 1 && i + 2 < n) {
        return h * (-a[i - 1] + 13.0 * a[i] + 13.0 * a[i + 1] - a[i + 2]) / 24.0;
    }
    if (i == 0) {
        return h * (5.0 * a[0] + 8.0 * a[1] - a[2]) / 12.0;
    }
    return h * (-a[i - 1] + 8.0 * a[i] + 5.0 * a[i + 1]) / 12.0;
}

// F(s_i) = int_0^{s_i} a, accumulated outward from the center node.
std::vector<double> integral_from_center(const std::vector<double>& a, std::size_t c, double h) {
    const std::size_t n = a.size();
    std::vector<double> F(n, 0.0);
    for (std::size_t i = c; i + 1 < n; ++i) {
        F[i + 1] = F[i] + interval_integral(a, i, h);
    }
    for (std::size_t i = c; i > 0; --i) {
        F[i - 1] = F[i] - interval_integral(a, i - 1, h);
    }
    return F;
}

}  // namespace

GridFunction invert_model_operator(const GridFunction& f) {
    const std::size_t n = f.size();
    const std::size_t c = f.center();
    const double h = f.step();

    std::vector<double> t(n);
    std::vector<double> tf(n);
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = std::tanh(f.node(i));
        tf[i] = t[i] * f[i];
    }
    const std::vector<double> inner = integral_from_center(tf, c, h);

    std::vector<double> outer_integrand(n);
    for (std::size_t i = 0; i < n; ++i) {
        outer_integrand[i] = i == c ? 0.5 * f[c] : inner[i] / (t[i] * t[i]);
    }
    const std::vector<double> outer = integral_from_center(outer_integrand, c, h);

    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) {
        u[i] = t[i] * outer[i];
    }
    u[c] = 0.0;
    return f.with_values(std::move(u));
}

GridFunction apply_linearization(const GridFunction& u, double delta) {
    if (!std::isfinite(delta)) {
        throw InvalidArgument("delta must be finite");
    }
    const std::vector<double> du = u.d1();
    const std::vector<double> ddu = u.d2();
    const double d2 = delta * delta;
    std::vector<double> out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double s = u.node(i);
        const double th = std::tanh(s);
        const double sech2 = 1.0 / (std::cosh(s) * std::cosh(s));
        // Zeroth-order part is d^2 tanh^2 + sech^2 (2 + d^2 tanh^2), i.e. the
        // conformal factor plus the rescaled |A|^2.
        out[i] = (1.0 + d2 * th * th) * ddu[i] + d2 * u[i] - 2.0 * d2 * th * du[i] + 2.0 * d2 * th * sech2 * du[i] -
                 d2 * sech2 * u[i] + 2.0 * sech2 * u[i] + d2 * th * th * sech2 * u[i];
    }
    return u.with_values(std::move(out));
}

std::vector<double> local_holder_norm(const GridFunction& f, int k, double alpha) {
    if (k != 0 && k != 2) {
        throw InvalidArgument("local Hoelder norm order must be 0 or 2");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw InvalidArgument("alpha must lie in (0, 1)");
    }
    const std::size_t n = f.size();
    const double h = f.step();

    std::vector<double> base(n);
    std::vector<double> top;  // f^{(k)}
    if (k == 0) {
        for (std::size_t i = 0; i < n; ++i) {
            base[i] = std::abs(f[i]);
        }
        top.assign(f.values().begin(), f.values().end());
    } else {
        const std::vector<double> d1 = f.d1();
        top = f.d2();
        for (std::size_t i = 0; i < n; ++i) {
            base[i] = std::abs(f[i]) + std::abs(d1[i]) + std::abs(top[i]);
        }
    }

    // Window B_1(s_i) covers indices i-w..i+w (clipped to the grid).
    const auto w = static_cast<std::size_t>(std::floor(1.0 / h + 1e-9));
    std::vector<double> inv_dist(2 * w + 1, 0.0);
    for (std::size_t m = 1; m <= 2 * w; ++m) {
        inv_dist[m] = std::pow(static_cast<double>(m) * h, -alpha);
    }

    // For each left endpoint a, sweep right endpoints b with a running max;
    // window c collects the running max at its right edge.
    std::vector<double> holder(n, 0.0);
    std::vector<double> running(2 * w + 1, 0.0);
    for (std::size_t a = 0; a < n; ++a) {
        const std::size_t b_end = std::min(n - 1, a + 2 * w);
        double r = 0.0;
        for (std::size_t b = a + 1; b <= b_end; ++b) {
            r = std::max(r, std::abs(top[a] - top[b]) * inv_dist[b - a]);
            running[b - a] = r;
        }
        const std::size_t c_lo = a >= w ? a - w : 0;
        const std::size_t c_hi = std::min(n - 1, a + w);
        for (std::size_t c = c_lo; c <= c_hi; ++c) {
            const std::size_t right = std::min(n - 1, c + w);
            if (right > a) {
                holder[c] = std::max(holder[c], running[right - a]);
            }
        }
    }

    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = base[i] + holder[i];
    }
    return out;
}

double weighted_norm(const GridFunction& f, int k, double alpha) {
    const std::vector<double> local = local_holder_norm(f, k, alpha);
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double weight = std::pow(std::max(std::abs(f.node(i)), 1.0), k);
        m = std::max(m, local[i] / weight);
    }
    return m;
}

double interior_sup(const GridFunction& f) {
    double m = 0.0;
    for (std::size_t i = 1; i + 1 < f.size(); ++i) {
        m = std::max(m, std::abs(f[i]));
    }
    return m;
}

GridFunction with_extrapolated_boundary(GridFunction f) {
    const std::size_t n = f.size();
    f[0] = 3.0 * f[1] - 3.0 * f[2] + f[3];
    f[n - 1] = 3.0 * f[n - 2] - 3.0 * f[n - 3] + f[n - 4];
    return f;
}

GridFunction picard_map(const GridFunction& u, double delta) {
    return u - invert_model_operator(with_extrapolated_boundary(minimal_graph_operator(u, delta)));
}

double SolverConfig::half_width() const { return epsilon * std::pow(delta, -0.25); }

double SolverConfig::step() const { return 2.0 * half_width() / static_cast<double>(n - 1); }

void SolverConfig::validate() const {
    auto fail = [](const std::string& key, const std::string& why) {
        throw InvalidArgument(key + ": " + why);
    };
    if (!std::isfinite(delta) || delta <= 0.0 || delta > kMaxDelta) {
        fail("delta", "must lie in (0, 0.2]");
    }
    if (!std::isfinite(epsilon) || epsilon <= 0.0 || epsilon > 1.0) {
        fail("epsilon", "must lie in (0, 1]");
    }
    if (!std::isfinite(zeta) || zeta <= 1.0) {
        fail("zeta", "must exceed 1");
    }
    if (n < 5 || n % 2 == 0) {
        fail("grid_n", "must be odd and at least 5");
    }
    if (!std::isfinite(alpha) || alpha <= 0.0 || alpha >= 1.0) {
        fail("alpha", "must lie in (0, 1)");
    }
    if (!std::isfinite(tol_residual) || tol_residual <= 0.0) {
        fail("tol_residual", "must be positive");
    }
    if (!std::isfinite(tol_step) || tol_step <= 0.0) {
        fail("tol_step", "must be positive");
    }
    if (max_iters < 1) {
        fail("max_iters", "must be at least 1");
    }
    if (step() > 0.01) {
        fail("grid_n", "grid spacing " + std::to_string(step()) + " exceeds 0.01");
    }
}

SolveResult picard_solve(const SolverConfig& config) {
    config.validate();
    SolveResult result;
    const double delta = config.delta;

    GridFunction u(config.half_width(), config.n);
    GridFunction q = minimal_graph_operator(u, delta);
    double residual = interior_sup(q);
    result.residual_history.push_back(residual);

    constexpr double kMinDamping = 1.0 / 64.0;
    for (int iter = 0;; ++iter) {
        if (residual <= config.tol_residual) {
            result.converged = true;
            result.stop_reason = "residual";
            break;
        }
        if (iter == config.max_iters) {
            throw Diverged("no convergence after " + std::to_string(iter) + " iterations", result.residual_history);
        }
        const GridFunction correction = invert_model_operator(with_extrapolated_boundary(q));
        if (correction.sup_norm() <= config.tol_step) {
            throw Diverged("step fell below tol_step with residual " + std::to_string(residual),
                           result.residual_history);
        }

        bool accepted = false;
        for (double lambda = 1.0; lambda >= kMinDamping; lambda *= 0.5) {
            GridFunction candidate = u - lambda * correction;
            try {
                GridFunction q_candidate = minimal_graph_operator(candidate, delta);
                const double r = interior_sup(q_candidate);
                if (r < residual) {
                    u = std::move(candidate);
                    q = std::move(q_candidate);
                    residual = r;
                    result.damping_history.push_back(lambda);
                    accepted = true;
                    break;
                }
            } catch (const SolverDomainError&) {
                // shorter step
            }
        }
        if (!accepted) {
            throw Diverged("residual stalled at " + std::to_string(residual) + " after " + std::to_string(iter) +
                               " iterations",
                           result.residual_history);
        }
        result.residual_history.push_back(residual);
        result.iterations = iter + 1;
    }

    const double h = u.step();
    double margin = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double s = u.node(i);
        margin = std::max(margin, std::abs(u[i]) / (config.zeta * delta * std::max(s * s, h * h)));
    }
    result.pointwise_margin = margin;
    result.boundary_residual = std::max(std::abs(q[0]), std::abs(q[q.size() - 1]));
    result.norm_X2 = weighted_norm(u, 2, config.alpha);
    result.in_ball = result.norm_X2 <= config.zeta * delta;
    result.u = std::move(u);
    return result;
}

struct ProfileInterpolant::Impl {
    boost::math::interpolators::cardinal_cubic_b_spline<double> spline;
};

ProfileInterpolant::ProfileInterpolant(const GridFunction& u) : half_width_(u.half_width()) {
    // Fourth-order one-sided end slopes: the second-order ones spoil the
    // curvature of the reconstructed graph in the outermost intervals.
    const auto& v = u.values();
    const std::size_t n = v.size();
    const double inv = 1.0 / (12.0 * u.step());
    const double left = (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]) * inv;
    const double right =
        (25.0 * v[n - 1] - 48.0 * v[n - 2] + 36.0 * v[n - 3] - 16.0 * v[n - 4] + 3.0 * v[n - 5]) * inv;
    impl_ = std::make_unique<Impl>(Impl{boost::math::interpolators::cardinal_cubic_b_spline<double>(
        v.begin(), v.end(), u.node(0), u.step(), left, right)});
}

ProfileInterpolant::~ProfileInterpolant() = default;
ProfileInterpolant::ProfileInterpolant(ProfileInterpolant&&) noexcept = default;
ProfileInterpolant& ProfileInterpolant::operator=(ProfileInterpolant&&) noexcept = default;

void ProfileInterpolant::check(double s) const {
    if (!(std::abs(s) <= half_width_ * (1.0 + 1e-12))) {
        throw OutOfDomain("s = " + std::to_string(s) + " lies outside [-" + std::to_string(half_width_) + ", " +
                          std::to_string(half_width_) + "]");
    }
}

double ProfileInterpolant::operator()(double s) const {
    check(s);
    return impl_->spline(s);
}

double ProfileInterpolant::prime(double s) const {
    check(s);
    return impl_->spline.prime(s);
}

double ProfileInterpolant::double_prime(double s) const {
    check(s);
    return impl_->spline.double_prime(s);
}

Vec3 graph_point(double s, double theta, double delta, const ProfileInterpolant& u) {
    const double value = u(s);
    const GeometryRecord g = geometry_at(s, theta, delta);
    return g.point + std::exp(delta * theta) * value * g.normal;
}

Vec3 graph_point(double s, double theta, double delta, const GridFunction& u) {
    return graph_point(s, theta, delta, ProfileInterpolant(u));
}

}  // namespace spiralmin
