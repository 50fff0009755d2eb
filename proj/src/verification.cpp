#include "spiralmin/verification.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <random>
#include <string>

#include "spiralmin/errors.hpp"
#include "spiralmin/geometry.hpp"
#include "spiralmin/mc_functional.hpp"

namespace spiralmin {

namespace {

Vec3 to_double(const Vec3L& v) { return v.cast<double>(); }

}  // namespace

Jet fd_jet(const SurfaceMap& map, double s, double theta, double h_step) {
    if (!std::isfinite(h_step) || h_step <= 0.0) {
        throw InvalidArgument("h_step must be positive");
    }
    const long double h = h_step;
    const long double s0 = s;
    const long double t0 = theta;
    auto P = [&](int a, int b) { return map(s0 + a * h, t0 + b * h); };

    const Vec3L c = P(0, 0);
    const Vec3L sp = P(1, 0), sm = P(-1, 0);
    const Vec3L tp = P(0, 1), tm = P(0, -1);
    const Vec3L pp = P(1, 1), pm = P(1, -1), mp = P(-1, 1), mm = P(-1, -1);

    Jet j;
    j.ds = to_double((sp - sm) / (2 * h));
    j.dth = to_double((tp - tm) / (2 * h));
    j.dss = to_double((sp - 2 * c + sm) / (h * h));
    j.dthth = to_double((tp - 2 * c + tm) / (h * h));
    j.dsth = to_double((pp - pm - mp + mm) / (4 * h * h));
    return j;
}

Jet fd_jet_extrapolated(const SurfaceMap& map, double s, double theta, double h_step) {
    const Jet coarse = fd_jet(map, s, theta, h_step);
    const Jet fine = fd_jet(map, s, theta, 0.5 * h_step);
    return (1.0 / 3.0) * (4.0 * fine - coarse);
}

SurfaceMap immersion_map(double delta) {
    check_delta(delta);
    const long double d = delta;
    return [d](long double s, long double theta) {
        const long double e = std::exp(d * theta);
        const long double sh = std::sinh(s);
        return Vec3L(e * sh * std::sin(theta), e * sh * std::cos(theta), std::expm1(d * theta) / d);
    };
}

SurfaceMap graph_map(double delta, const GridFunction& u) {
    check_delta(delta);
    auto profile = std::make_shared<const ProfileInterpolant>(u);
    const SurfaceMap base = immersion_map(delta);
    const long double d = delta;
    return [profile, base, d](long double s, long double theta) {
        const long double w = std::exp(d * theta) * static_cast<long double>((*profile)(static_cast<double>(s)));
        return Vec3L(base(s, theta) + w * unit_normal_ld(s, theta));
    };
}

SurfaceMap helicoid_map() {
    return [](long double s, long double theta) {
        const long double sh = std::sinh(s);
        return Vec3L(sh * std::sin(theta), sh * std::cos(theta), theta);
    };
}

double surface_residual(const SurfaceMap& map, double s_max, std::span<const double> theta_samples,
                        std::size_t s_samples, double h_step) {
    if (s_samples < 2) {
        throw InvalidArgument("surface_residual needs at least two s samples");
    }
    double worst = 0.0;
    for (double theta : theta_samples) {
        for (std::size_t j = 0; j < s_samples; ++j) {
            const double s = -s_max + 2.0 * s_max * static_cast<double>(j) / static_cast<double>(s_samples - 1);
            worst = std::max(worst, std::abs(mean_curvature_of_jet(fd_jet(map, s, theta, h_step))));
        }
    }
    return worst;
}

double surface_residual(const GridFunction& u, double delta, std::span<const double> theta_samples,
                        std::size_t s_samples, double h_step) {
    // Keep the stencil inside the profile's domain.
    const double s_max = u.half_width() - 2.0 * h_step;
    return surface_residual(graph_map(delta, u), s_max, theta_samples, s_samples, h_step);
}

ScalingRow blowup_scaling(double delta, double h0) {
    check_delta(delta);
    // theta ranges over the whole line, so {h > h0} is nonempty for every h0 > 0.
    if (!std::isfinite(h0) || h0 <= 0.0) {
        throw InvalidArgument("blowup_scaling requires a finite height h0 > 0");
    }
    ScalingRow row;
    row.delta = delta;
    row.h0 = h0;
    row.theta0 = std::log(delta * h0) / delta;
    row.sup_A2_exact = 2.0 / ((delta * h0) * (delta * h0));

    // |A|^2 decays in theta and away from s = 0; search a window at the lower
    // theta edge of the region, contracting the jet directly.
    constexpr int kS = 241;
    constexpr int kTheta = 101;
    double best = 0.0;
    for (int i = 0; i < kTheta; ++i) {
        const double theta = row.theta0 + 2.0 * std::numbers::pi * i / (kTheta - 1);
        for (int j = 0; j < kS; ++j) {
            const double s = -3.0 + 6.0 * j / (kS - 1);
            best = std::max(best, second_form_length_sq(immersion_jet(s, theta, delta).jet));
        }
    }
    row.sup_A2_grid = best;
    row.ratio = best * delta * delta * h0 * h0;
    return row;
}

ScalingReport blowup_scaling(double delta, std::span<const double> h0_list) {
    ScalingReport report;
    report.delta = delta;
    for (double h0 : h0_list) {
        const ScalingRow row = blowup_scaling(delta, h0);
        report.h0_list.push_back(h0);
        report.sup_A2.push_back(row.sup_A2_grid);
        report.sup_A2_exact.push_back(row.sup_A2_exact);
        report.ratios.push_back(row.ratio);
    }
    return report;
}

std::vector<HelicoidRow> helicoid_limit(std::span<const double> deltas, double s_max, double theta_max) {
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        check_delta(deltas[i]);
        if (i > 0 && !(deltas[i] < deltas[i - 1])) {
            throw InvalidArgument("helicoid_limit expects strictly decreasing deltas");
        }
    }
    if (!(s_max > 0.0) || !(theta_max > 0.0)) {
        throw InvalidArgument("helicoid_limit needs a nonempty window");
    }
    constexpr int kS = 41;
    constexpr int kTheta = 81;
    std::vector<HelicoidRow> rows;
    for (double delta : deltas) {
        double worst = 0.0;
        for (int i = 0; i < kTheta; ++i) {
            const double theta = theta_max * i / (kTheta - 1);
            const double grow = std::expm1(delta * theta);  // e^{dt} - 1
            for (int j = 0; j < kS; ++j) {
                const double s = -s_max + 2.0 * s_max * j / (kS - 1);
                const double sh = std::sinh(s);
                const Vec3 diff(grow * sh * std::sin(theta), grow * sh * std::cos(theta), grow / delta - theta);
                worst = std::max(worst, diff.norm());
            }
        }
        rows.push_back({delta, worst});
    }
    return rows;
}

std::vector<double> convergence_orders(std::span<const HelicoidRow> rows) {
    std::vector<double> orders;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        orders.push_back(std::log(rows[i - 1].max_error / rows[i].max_error) /
                         std::log(rows[i - 1].delta / rows[i].delta));
    }
    return orders;
}

EmbeddednessReport embeddedness_check(const GridFunction& u, double delta, double theta_min, double theta_max) {
    check_delta(delta);
    constexpr double kTurn = 2.0 * std::numbers::pi;
    if (!std::isfinite(theta_min) || !std::isfinite(theta_max) || theta_max - theta_min < kTurn * (1.0 - 1e-12)) {
        throw InvalidArgument("embeddedness_check needs a theta window of at least 2 pi");
    }
    EmbeddednessReport report;
    const double sup_u = u.sup_norm();
    const double epsilon = u.half_width() * std::pow(delta, 0.25);
    report.envelope_ratio = sup_u / (epsilon * std::sqrt(delta) / 4.0);
    report.max_displacement = std::exp(delta * theta_max) * sup_u;
    report.trivial = sup_u == 0.0;

    const double sheet_factor = std::expm1(kTurn * delta);
    const double last = theta_max - kTurn;
    constexpr int kTheta = 64;
    double min_gap = std::numeric_limits<double>::infinity();
    double min_margin = std::numeric_limits<double>::infinity();
    double min_bound_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kTheta; ++i) {
        const double theta = theta_min + (last - theta_min) * i / (kTheta - 1);
        double gap = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < u.size(); ++j) {
            const double s = u.node(j);
            const Vec3 lower = immersion_jet(s, theta, delta).point;
            const Vec3 upper = immersion_jet(s, theta + kTurn, delta).point;
            gap = std::min(gap, (upper - lower).norm());
        }
        min_gap = std::min(min_gap, gap);
        min_bound_ratio = std::min(min_bound_ratio, gap / (sheet_factor * std::exp(delta * theta) / delta));
        if (!report.trivial) {
            // Both sheets move by at most the larger (upper) displacement.
            const double displacement = std::exp(delta * (theta + kTurn)) * sup_u;
            min_margin = std::min(min_margin, gap / (2.0 * displacement));
        }
    }
    report.min_sheet_gap = min_gap;
    report.margin = min_margin;
    report.gap_bound_ratio = min_bound_ratio;
    return report;
}

namespace {

using Basis = std::vector<std::function<double(double)>>;

const Basis& generic_basis() {
    static const Basis basis = {
        [](double) { return 1.0; },
        [](double s) { return s; },
        [](double s) { return s * s; },
        [](double s) { return std::sin(2.0 * s); },
        [](double s) { return s * std::cos(3.0 * s); },
    };
    return basis;
}

// Functions vanishing to second order at s = 0.
const Basis& flat_basis() {
    static const Basis basis = {
        [](double s) { return s * s; },
        [](double s) { return s * s * s; },
        [](double s) { return s * s * std::sin(s); },
        [](double s) { return s * s * std::cos(2.0 * s); },
    };
    return basis;
}

struct Sample {
    std::vector<double> coeffs;
    double amplitude;  // fraction of the admissible size
};

Sample draw(std::mt19937_64& rng, std::size_t terms, double amp_lo, double amp_hi) {
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::uniform_real_distribution<double> amp(amp_lo, amp_hi);
    Sample out;
    for (std::size_t i = 0; i < terms; ++i) {
        out.coeffs.push_back(coef(rng));
    }
    out.amplitude = amp(rng);
    return out;
}

GridFunction realize(const Sample& sample, const Basis& basis, double half_width, std::size_t n) {
    return GridFunction::sample(half_width, n, [&](double s) {
        double v = 0.0;
        for (std::size_t i = 0; i < basis.size(); ++i) {
            v += sample.coeffs[i] * basis[i](s);
        }
        return v;
    });
}

// Rescale so that max_s ||u||_{2,a}(s) / (epsilon cosh s) equals the sample amplitude.
GridFunction within_envelope(GridFunction u, double amplitude, double epsilon, double alpha) {
    const std::vector<double> local = local_holder_norm(u, 2, alpha);
    double worst = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        worst = std::max(worst, local[i] / (epsilon * std::cosh(u.node(i))));
    }
    return worst > 0.0 ? (amplitude / worst) * u : u;
}

double max_local_ratio(const std::vector<double>& num, const std::vector<double>& den) {
    double worst = 0.0;
    for (std::size_t i = 0; i < num.size(); ++i) {
        if (den[i] > 0.0) {
            worst = std::max(worst, num[i] / den[i]);
        }
    }
    return worst;
}

}  // namespace

std::vector<ConstantsRow> constants_probe(std::span<const double> deltas, std::size_t sample_count,
                                          const SolverConfig& base, std::uint64_t seed) {
    std::vector<ConstantsRow> rows;
    for (double delta : deltas) {
        SolverConfig cfg = base;
        cfg.delta = delta;
        cfg.validate();
        const double S = cfg.half_width();
        const double alpha = cfg.alpha;
        const double eps = cfg.epsilon;

        std::mt19937_64 rng(seed);
        ConstantsRow row;
        row.delta = delta;
        row.samples = sample_count;
        for (std::size_t k = 0; k < sample_count; ++k) {
            const Sample su = draw(rng, generic_basis().size(), 0.5, 0.95);
            const Sample sv = draw(rng, generic_basis().size(), 0.5, 0.95);
            const Sample sf = draw(rng, generic_basis().size(), 1.0, 1.0);
            const Sample bu = draw(rng, flat_basis().size(), 0.1, 1.0);
            const Sample bv = draw(rng, flat_basis().size(), 0.1, 1.0);

            const GridFunction u = within_envelope(realize(su, generic_basis(), S, cfg.n), su.amplitude, eps, alpha);
            const GridFunction v = within_envelope(realize(sv, generic_basis(), S, cfg.n), sv.amplitude, eps, alpha);

            // Perturbation in delta of the displacement jet.
            {
                const GridFunction diff = minimal_graph_operator(u, delta, DisplacementMode::delta) -
                                          minimal_graph_operator(u, delta, DisplacementMode::zero);
                std::vector<double> den = local_holder_norm(u, 2, alpha);
                for (double& x : den) {
                    x *= delta;
                }
                row.c1 = std::max(row.c1, max_local_ratio(local_holder_norm(diff, 0, alpha), den));
            }
            // Quadratic remainder of the linearization.
            {
                const GridFunction w = v - u;
                const GridFunction rem =
                    minimal_graph_operator(v, delta) - minimal_graph_operator(u, delta) - apply_linearization(w, delta);
                std::vector<double> den = local_holder_norm(w, 2, alpha);
                for (std::size_t i = 0; i < den.size(); ++i) {
                    den[i] = den[i] * den[i] / std::cosh(w.node(i));
                }
                row.c2 = std::max(row.c2, max_local_ratio(local_holder_norm(rem, 0, alpha), den));
            }
            // Inversion bound.
            {
                const GridFunction f = realize(sf, generic_basis(), S, cfg.n);
                const double fn = weighted_norm(f, 0, alpha);
                if (fn > 0.0) {
                    row.c3 = std::max(row.c3, weighted_norm(invert_model_operator(f), 2, alpha) / fn);
                }
            }
            // Contraction on the ball ||.||_{X,2} <= zeta delta.
            {
                const double radius = cfg.zeta * delta;
                GridFunction a = realize(bu, flat_basis(), S, cfg.n);
                GridFunction b = realize(bv, flat_basis(), S, cfg.n);
                a *= bu.amplitude * radius / weighted_norm(a, 2, alpha);
                b *= bv.amplitude * radius / weighted_norm(b, 2, alpha);
                const double dn = weighted_norm(b - a, 2, alpha);
                if (dn > 0.0) {
                    const GridFunction dpsi = picard_map(b, delta) - picard_map(a, delta);
                    row.contraction = std::max(row.contraction, weighted_norm(dpsi, 2, alpha) / dn);
                }
            }
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace spiralmin
