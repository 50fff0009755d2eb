#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "spiralmin/errors.hpp"
#include "spiralmin/geometry.hpp"
#include "spiralmin/graph_solver.hpp"
#include "spiralmin/grid_function.hpp"
#include "spiralmin/mc_functional.hpp"
#include "spiralmin/verification.hpp"

using namespace spiralmin;

namespace {

constexpr double kPi = std::numbers::pi;

double sech2(double s) { return 1.0 / (std::cosh(s) * std::cosh(s)); }

double interior_error(const GridFunction& a, const std::function<double(double)>& f) {
    double e = 0;
    for (std::size_t i = 1; i + 1 < a.size(); ++i) {
        e = std::max(e, std::abs(a[i] - f(a.node(i))));
    }
    return e;
}

double all_error(const GridFunction& a, const std::function<double(double)>& f) {
    double e = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        e = std::max(e, std::abs(a[i] - f(a.node(i))));
    }
    return e;
}

Mat3 frame_matrix(double t) {
    const Frame f = frame(t);
    Mat3 R;
    R.col(0) = f.e_r;
    R.col(1) = f.e_r_prime;
    R.col(2) = f.e_z;
    return R;
}

Jet apply(const Mat3& M, const Jet& j) { return Jet{M * j.ds, M * j.dth, M * j.dss, M * j.dthth, M * j.dsth}; }

}  // namespace

TEST(GridFunction, ShapeAndNodes) {
    EXPECT_THROW(GridFunction(1.0, 4), InvalidArgument);
    EXPECT_THROW(GridFunction(1.0, 3), InvalidArgument);
    EXPECT_THROW(GridFunction(0.0, 5), InvalidArgument);
    EXPECT_THROW(GridFunction(-1.0, 5), InvalidArgument);
    const GridFunction g(2.0, 401);
    EXPECT_EQ(g.node(g.center()), 0.0);
    EXPECT_DOUBLE_EQ(g.node(0), -2.0);
    EXPECT_DOUBLE_EQ(g.node(400), 2.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        EXPECT_EQ(g.node(i), -g.node(g.size() - 1 - i));
    }
}

TEST(GridFunction, DerivativesSecondOrderIncludingEnds) {
    auto err = [](std::size_t n) {
        const GridFunction g = GridFunction::sample(1.5, n, [](double s) { return std::sin(2 * s); });
        const auto d1 = g.d1();
        const auto d2 = g.d2();
        double e1 = 0, e2 = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double s = g.node(i);
            e1 = std::max(e1, std::abs(d1[i] - 2 * std::cos(2 * s)));
            e2 = std::max(e2, std::abs(d2[i] + 4 * std::sin(2 * s)));
        }
        return std::pair{e1, e2};
    };
    const auto [a1, a2] = err(201);
    const auto [b1, b2] = err(401);
    EXPECT_NEAR(a1 / b1, 4.0, 0.6);
    EXPECT_NEAR(a2 / b2, 4.0, 0.6);
}

TEST(GridFunction, ArithmeticChecksGrid) {
    GridFunction a(1.0, 11), b(1.0, 13), c(2.0, 11);
    EXPECT_THROW(a += b, InvalidArgument);
    EXPECT_THROW(a -= c, InvalidArgument);
    EXPECT_THROW(a.with_values(std::vector<double>(3)), InvalidArgument);
    GridFunction d = GridFunction::sample(1.0, 11, [](double s) { return s; });
    EXPECT_DOUBLE_EQ((2.0 * d)[10], 2.0);
    EXPECT_DOUBLE_EQ((d - d).sup_norm(), 0.0);
}

TEST(BaseJet, Values) {
    const Jet j0 = base_jet(0.0, 0.1);
    EXPECT_NEAR((j0.ds - Vec3(1, 0, 0)).norm(), 0.0, 1e-15);
    EXPECT_NEAR((j0.dth - Vec3(0, 0, 1)).norm(), 0.0, 1e-15);
    const Jet j1 = base_jet(1.0, 0.1);
    EXPECT_NEAR((j1.dth - Vec3(0.1 * std::sinh(1.0), std::sinh(1.0), 1.0)).norm(), 0.0, 1e-15);
}

TEST(BaseJet, PullbackOfImmersionIsThetaIndependent) {
    const double d = 0.07;
    for (double s : {-2.0, -0.3, 0.0, 1.1, 2.5}) {
        const Jet b = base_jet(s, d);
        for (double t : {0.0, 1.0, 2 * kPi, 5.5}) {
            const Jet pulled = std::exp(-d * t) * apply(frame_matrix(t).transpose(), immersion_jet(s, t, d).jet);
            EXPECT_LT((pulled - b).norm(), 1e-13 * b.norm()) << "s=" << s << " t=" << t;
        }
    }
}

TEST(DisplacementJet, LinearAndVanishing) {
    for (auto mode : {DisplacementMode::delta, DisplacementMode::zero}) {
        EXPECT_EQ(displacement_jet(0.4, 0, 0, 0, 0.1, mode).norm(), 0.0);
        const Jet a = displacement_jet(0.4, 0.1, -0.2, 0.3, 0.1, mode);
        const Jet b = displacement_jet(0.4, 0.2, -0.4, 0.6, 0.1, mode);
        EXPECT_LT((b - 2.0 * a).norm(), 1e-15);
    }
    EXPECT_THROW(displacement_jet(0.4, NAN, 0, 0, 0.1, DisplacementMode::delta), InvalidArgument);
}

TEST(DisplacementJet, ModeDifferenceIsOrderDelta) {
    double worst = 0;
    for (double d : {0.01, 0.05, 0.1, 0.2}) {
        for (double s = -2.0; s <= 2.0; s += 0.25) {
            for (auto [u, du, ddu] : {std::tuple{0.3, -0.1, 0.5}, std::tuple{-1.0, 0.2, 0.0}, std::tuple{0.0, 1.0, 1.0}}) {
                const Jet diff = displacement_jet(s, u, du, ddu, d, DisplacementMode::delta) -
                                 displacement_jet(s, u, du, ddu, d, DisplacementMode::zero);
                worst = std::max(worst, diff.norm() / (d * (std::abs(u) + std::abs(du) + std::abs(ddu))));
            }
        }
    }
    EXPECT_LT(worst, 3.0);
}

TEST(DisplacementJet, ReconstructsGraphJetAtAnyAngle) {
    // u(s) = 0.02 s^2 + 0.01 s^3 with exact derivatives; compare the
    // separated-variables path with the ambient jet of G + e^{dt} u nu.
    const double d = 0.1;
    auto u = [](double s) { return 0.02 * s * s + 0.01 * s * s * s; };
    auto du = [](double s) { return 0.04 * s + 0.03 * s * s; };
    auto ddu = [](double s) { return 0.04 + 0.06 * s; };
    const SurfaceMap graph = [&](long double s, long double t) {
        const long double us = 0.02L * s * s + 0.01L * s * s * s;
        return Vec3L(immersion_map(d)(s, t) + std::exp(d * t) * us * unit_normal_ld(s, t));
    };
    for (double s : {-1.0, -0.2, 0.5, 1.3}) {
        const Jet pulled = base_jet(s, d) + displacement_jet(s, u(s), du(s), ddu(s), d, DisplacementMode::delta);
        const double q = std::cosh(s) * std::cosh(s) * mean_curvature_of_jet(pulled);
        for (double t : {0.0, 1.0, 2 * kPi}) {
            const double expected = -std::exp(-d * t) * sech2(s) * q;
            const Jet world = std::exp(d * t) * apply(frame_matrix(t), pulled);
            EXPECT_NEAR(mean_curvature_of_jet(world), expected, 1e-10 * (1e-3 + std::abs(expected)));
            const double fd = mean_curvature_of_jet(fd_jet_extrapolated(graph, s, t, 1e-3));
            EXPECT_NEAR(fd, expected, 1e-8 * (1e-2 + std::abs(expected)));
        }
    }
}

TEST(MinimalGraphOperator, ZeroProfileGivesDeltaTanh) {
    for (double d : {0.01, 0.05, 0.1, 0.2}) {
        SolverConfig c;
        c.delta = d;
        const GridFunction q = minimal_graph_operator(GridFunction(c.half_width(), c.n), d);
        EXPECT_LE(all_error(q, [d](double s) { return d * std::tanh(s); }), 1e-12);
        const GridFunction q0 = minimal_graph_operator(GridFunction(c.half_width(), c.n), d, DisplacementMode::zero);
        EXPECT_LE(all_error(q0, [d](double s) { return d * std::tanh(s); }), 1e-12);
    }
    const GridFunction tiny = minimal_graph_operator(GridFunction(1.0, 101), 1e-9, DisplacementMode::zero);
    EXPECT_LE(tiny.sup_norm(), 1e-9);
}

TEST(MinimalGraphOperator, NamesOffendingNode) {
    const GridFunction big = GridFunction::sample(1.0, 101, [](double s) { return 5.0 * s * s; });
    try {
        minimal_graph_operator(big, 0.1);
        FAIL() << "expected SolverDomainError";
    } catch (const SolverDomainError& e) {
        EXPECT_LT(e.node(), 101u);
        EXPECT_NE(std::string(e.what()).find("node"), std::string::npos);
    }
}

TEST(ModelOperator, KnownImages) {
    const GridFunction t = GridFunction::sample(2.0, 801, [](double s) { return std::tanh(s); });
    EXPECT_LE(interior_error(apply_model_operator(t), [](double) { return 0.0; }), 1e-4);
    const GridFunction sq = GridFunction::sample(2.0, 801, [](double s) { return s * s; });
    EXPECT_LE(all_error(apply_model_operator(sq), [](double s) { return 2 + 2 * s * s * sech2(s); }), 1e-10);
    EXPECT_EQ(apply_model_operator(GridFunction(2.0, 801)).sup_norm(), 0.0);
}

TEST(ModelInverse, ZeroAndKnownPreimage) {
    EXPECT_EQ(invert_model_operator(GridFunction(1.5, 301)).sup_norm(), 0.0);
    const GridFunction f = GridFunction::sample(1.5, 1501, [](double s) { return 2 + 2 * s * s * sech2(s); });
    const GridFunction u = invert_model_operator(f);
    EXPECT_LE(all_error(u, [](double s) { return s * s; }), 1e-6);
    EXPECT_EQ(u[u.center()], 0.0);
}

TEST(ModelInverse, RightInverseSecondOrder) {
    auto err = [](std::size_t n) {
        const GridFunction f = GridFunction::sample(1.5, n, [](double s) { return std::cos(s); });
        return interior_error(apply_model_operator(invert_model_operator(f)), [](double s) { return std::cos(s); });
    };
    const double ratio = err(401) / err(801);
    EXPECT_NEAR(std::log2(ratio), 2.0, 0.3);
}

TEST(ModelInverse, LeftInverseSecondOrder) {
    auto exact = [](double s) { return s * s * std::cos(s); };
    auto err = [&](std::size_t n) {
        const GridFunction u = GridFunction::sample(1.5, n, exact);
        return all_error(invert_model_operator(apply_model_operator(u)), exact);
    };
    const double ratio = err(401) / err(801);
    EXPECT_NEAR(std::log2(ratio), 2.0, 0.3);
}

TEST(Linearization, ReducesToModelAtZeroDelta) {
    const GridFunction u = GridFunction::sample(1.0, 201, [](double s) { return std::sin(s) + s * s; });
    EXPECT_LE((apply_linearization(u, 0.0) - apply_model_operator(u)).sup_norm(), 1e-13);
}

TEST(Linearization, ConstantFunction) {
    const double d = 0.1;
    const GridFunction one = GridFunction::sample(1.0, 201, [](double) { return 1.0; });
    const GridFunction l = apply_linearization(one, d);
    EXPECT_LE(all_error(l, [d](double s) {
                  const double t = std::tanh(s);
                  return d * d - d * d * sech2(s) + 2 * sech2(s) + d * d * t * t * sech2(s);
              }),
              1e-13);
}

TEST(Linearization, MatchesDerivativeOfOperator) {
    const double d = 0.1;
    const GridFunction v = GridFunction::sample(1.0, 401, [](double s) { return std::cos(2 * s) + s; });
    const GridFunction base = minimal_graph_operator(GridFunction(1.0, 401), d);
    const GridFunction L = apply_linearization(v, d);
    auto remainder = [&](double t) {
        return ((minimal_graph_operator(t * v, d) - base) - t * L).sup_norm();
    };
    const double r1 = remainder(1e-3);
    const double r2 = remainder(5e-4);
    EXPECT_NEAR(r1 / r2, 4.0, 0.2);
    EXPECT_LT(r1, 1e-4);
}

TEST(WeightedNorm, BasicProperties) {
    const GridFunction zero(3.0, 601);
    EXPECT_EQ(weighted_norm(zero, 0, 0.5), 0.0);
    EXPECT_EQ(weighted_norm(zero, 2, 0.5), 0.0);
    const GridFunction sq = GridFunction::sample(3.0, 601, [](double s) { return s * s; });
    const double n2 = weighted_norm(sq, 2, 0.5);
    EXPECT_NEAR(n2, 5.0, 1e-9);  // at s = 1: 1 + 2 + 2, Hoelder term of a constant is 0
    EXPECT_NEAR(weighted_norm(-3.0 * sq, 2, 0.5), 3.0 * n2, 1e-12 * n2);
    const GridFunction sq4 = GridFunction::sample(6.0, 1201, [](double s) { return s * s; });
    EXPECT_LT(weighted_norm(sq4, 2, 0.5) / n2, 2.0);
    EXPECT_THROW(local_holder_norm(sq, 1, 0.5), InvalidArgument);
    EXPECT_THROW(local_holder_norm(sq, 2, 1.0), InvalidArgument);
}

TEST(WeightedNorm, HoelderQuotientOfAbs) {
    // |s| around the origin: |f(0)| = 0 and the 1/2-Hoelder quotient over
    // B_1(0) peaks at the pair (0, 1) with value 1.
    const GridFunction a = GridFunction::sample(2.0, 2001, [](double s) { return std::abs(s); });
    const auto local = local_holder_norm(a, 0, 0.5);
    EXPECT_NEAR(local[a.center()], 1.0, 1e-12);
    // At s = 1 the window is [0, 2]: |f| = 1 plus the quotient (2 - 0) / sqrt(2).
    EXPECT_NEAR(local[a.center() + 500], 1.0 + std::sqrt(2.0), 1e-12);
}

TEST(PicardSolve, ConvergesWithCertificates) {
    SolverConfig c;
    c.delta = 0.05;
    const SolveResult r = picard_solve(c);
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.stop_reason, "residual");
    EXPECT_LE(r.final_residual(), 1e-10);
    EXPECT_LE(r.iterations, 30);
    EXPECT_TRUE(r.in_ball);
    EXPECT_LE(r.norm_X2, c.zeta * c.delta);
    EXPECT_LE(r.pointwise_margin, 1.0);
    for (std::size_t k = 2; k < r.residual_history.size(); ++k) {
        EXPECT_LT(r.residual_history[k], r.residual_history[k - 1]);
    }
    EXPECT_LE(std::abs(r.u[r.u.center()]), 1e-12);
    const double h = r.u.step();
    EXPECT_LE(std::abs(r.u.d1()[r.u.center()]), h * h);
    EXPECT_LE(interior_sup(minimal_graph_operator(r.u, c.delta)), 1e-10);
    EXPECT_LT(r.boundary_residual, 1e-6);
}

TEST(PicardSolve, FirstIterate) {
    const double d = 0.05;
    SolverConfig c;
    c.delta = d;
    const GridFunction zero(c.half_width(), c.n);
    const GridFunction u1 = picard_map(zero, d);
    const GridFunction q0 = GridFunction::sample(c.half_width(), c.n, [d](double s) { return d * std::tanh(s); });
    const GridFunction expected = -1.0 * invert_model_operator(with_extrapolated_boundary(q0));
    EXPECT_LE((u1 - expected).sup_norm(), 1e-15);
    double ratio = 0;
    for (std::size_t i = 0; i < u1.size(); ++i) {
        const double s = u1.node(i);
        if (s != 0.0) {
            ratio = std::max(ratio, std::abs(u1[i]) / (d * s * s));
        }
    }
    EXPECT_LT(ratio, 1.0);
}

TEST(PicardSolve, AmplitudeScalesLikeRootDelta) {
    SolverConfig a, b;
    a.delta = 0.05;
    b.delta = 0.025;
    const double ratio = picard_solve(b).u.sup_norm() / picard_solve(a).u.sup_norm();
    EXPECT_NEAR(ratio, 1.0 / std::sqrt(2.0), 0.15);
}

TEST(PicardSolve, IterationCapThrowsDivergedWithHistory) {
    SolverConfig c;
    c.max_iters = 1;
    try {
        picard_solve(c);
        FAIL() << "expected Diverged";
    } catch (const Diverged& e) {
        EXPECT_GE(e.residual_history().size(), 2u);
    }
}

TEST(SolverConfig, ValidationNamesKey) {
    auto message = [](SolverConfig c) {
        try {
            c.validate();
        } catch (const InvalidArgument& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    SolverConfig c;
    EXPECT_EQ(message(c), "");
    c.delta = -1;
    EXPECT_EQ(message(c).rfind("delta", 0), 0u);
    c = {};
    c.n = 101;
    EXPECT_EQ(message(c).rfind("grid_n", 0), 0u);
    c = {};
    c.zeta = 1.0;
    EXPECT_EQ(message(c).rfind("zeta", 0), 0u);
    c = {};
    c.alpha = 0;
    EXPECT_EQ(message(c).rfind("alpha", 0), 0u);
    c = {};
    c.epsilon = 1.5;
    EXPECT_EQ(message(c).rfind("epsilon", 0), 0u);
}

TEST(ProfileInterpolant, NodesDerivativesAndDomain) {
    const GridFunction f = GridFunction::sample(1.0, 401, [](double s) { return std::sin(3 * s); });
    const ProfileInterpolant p(f);
    for (std::size_t i = 0; i < f.size(); i += 37) {
        EXPECT_NEAR(p(f.node(i)), f[i], 1e-14);
    }
    for (double s : {-0.99, -0.3337, 0.0021, 0.8}) {
        EXPECT_NEAR(p(s), std::sin(3 * s), 1e-9);
        EXPECT_NEAR(p.prime(s), 3 * std::cos(3 * s), 1e-6);
        EXPECT_NEAR(p.double_prime(s), -9 * std::sin(3 * s), 1e-3);
    }
    EXPECT_NO_THROW(p(1.0));
    EXPECT_THROW(p(1.001), OutOfDomain);
    EXPECT_THROW(p.prime(-2.0), OutOfDomain);
}

TEST(GraphPoint, ZeroProfileAndCore) {
    const GridFunction zero(1.0, 101);
    for (double s : {-0.7, 0.0, 0.4}) {
        const Vec3 p = graph_point(s, 1.2, 0.1, zero);
        EXPECT_LT((p - immersion_jet(s, 1.2, 0.1).point).norm(), 1e-14);
    }
    SolverConfig c;
    const SolveResult r = picard_solve(c);
    for (double t : {0.0, 3.0}) {
        const Vec3 p = graph_point(0.0, t, c.delta, r.u);
        EXPECT_NEAR(p.x(), 0.0, 1e-12);
        EXPECT_NEAR(p.y(), 0.0, 1e-12);
        EXPECT_NEAR(p.z(), std::exp(c.delta * t) / c.delta, 1e-12);
    }
    for (double s = -r.u.half_width(); s <= r.u.half_width(); s += 0.05) {
        const double disp = (graph_point(s, 2.0, c.delta, r.u) - immersion_jet(s, 2.0, c.delta).point).norm();
        EXPECT_LE(disp, std::exp(2.0 * c.delta) * c.zeta * c.delta * std::max(s * s, c.step() * c.step()) + 1e-15);
    }
    EXPECT_THROW(graph_point(5.0, 0.0, c.delta, r.u), OutOfDomain);
}
