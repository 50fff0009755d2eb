#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "spiralmin/graph_solver.hpp"
#include "spiralmin/grid_function.hpp"
#include "spiralmin/jet.hpp"

namespace spiralmin {

/// Parametric surface evaluated in extended precision.
using SurfaceMap = std::function<Vec3L(long double s, long double theta)>;

/// Central O(h^2) differences for all five derivative vectors of `map`.
Jet fd_jet(const SurfaceMap& map, double s, double theta, double h_step);

/// One Richardson step on fd_jet: (4 fd(h/2) - fd(h)) / 3, O(h^4).
Jet fd_jet_extrapolated(const SurfaceMap& map, double s, double theta, double h_step);

/// G translated by -(0, 0, 1/delta). The translation leaves every derivative
/// unchanged and keeps the sampled values O(1), so second differences do not
/// lose digits to the 1/delta height.
SurfaceMap immersion_map(double delta);

/// Normal graph G + e^{dt} u nu (translated like immersion_map), with u
/// evaluated through a cubic spline. Throws OutOfDomain outside the grid.
SurfaceMap graph_map(double delta, const GridFunction& u);

/// (sinh s sin t, sinh s cos t, t).
SurfaceMap helicoid_map();

/// max over samples of |H| of the finite-difference jet of the graph surface,
/// on `s_samples` points spread over the grid interior and the given angles.
double surface_residual(const GridFunction& u, double delta, std::span<const double> theta_samples,
                        std::size_t s_samples = 41, double h_step = 1e-4);

/// Same measurement for an arbitrary surface on [-s_max, s_max].
double surface_residual(const SurfaceMap& map, double s_max, std::span<const double> theta_samples,
                        std::size_t s_samples = 41, double h_step = 1e-4);

struct ScalingRow {
    double delta = 0;
    double h0 = 0;
    double theta0 = 0;        // height h0 is reached at theta0 = ln(delta h0) / delta
    double sup_A2_grid = 0;   // grid search of |A|^2 over {h > h0}
    double sup_A2_exact = 0;  // 2 (delta h0)^{-2}
    double ratio = 0;         // sup_A2_grid * delta^2 * h0^2
};

struct ScalingReport {
    double delta = 0;
    std::vector<double> h0_list;
    std::vector<double> sup_A2;
    std::vector<double> sup_A2_exact;
    std::vector<double> ratios;
};

/// sup of |A|^2 above height h0. Requires 0 < delta h0 < 1.
ScalingRow blowup_scaling(double delta, double h0);
ScalingReport blowup_scaling(double delta, std::span<const double> h0_list);

struct HelicoidRow {
    double delta = 0;
    double max_error = 0;
};

/// max over [-s_max, s_max] x [0, theta_max] of |G - (0,0,1/delta) - helicoid|.
/// `deltas` must be strictly decreasing.
std::vector<HelicoidRow> helicoid_limit(std::span<const double> deltas, double s_max, double theta_max);

/// log(err_i / err_{i+1}) / log(delta_i / delta_{i+1}) for consecutive rows.
std::vector<double> convergence_orders(std::span<const HelicoidRow> rows);

struct EmbeddednessReport {
    double max_displacement = 0;  // sup e^{dt} |u| over the theta window
    double min_sheet_gap = 0;     // min |G(s, t + 2 pi) - G(s, t)|
    double margin = 0;            // min over t of gap(t) / (2 sup_s e^{d(t+2pi)} |u|)
    bool trivial = false;         // u == 0; margin is +infinity
    /// sup |u| / (epsilon delta^{1/2} / 4), with epsilon = S delta^{1/4}
    double envelope_ratio = 0;
    /// min over t of gap(t) / ((e^{2 pi delta} - 1) e^{dt} / delta); >= 1, attained at s = 0
    double gap_bound_ratio = 0;
};

/// Sheet separation versus normal displacement between consecutive turns.
/// Requires theta_max - theta_min >= 2 pi.
EmbeddednessReport embeddedness_check(const GridFunction& u, double delta, double theta_min, double theta_max);

struct ConstantsRow {
    double delta = 0;
    double c1 = 0;           // max ||Q_d(u) - Q_0(u)||_{0,a}(s) / (d ||u||_{2,a}(s))
    double c2 = 0;           // max ||Q(v) - Q(u) - L(v - u)||_{0,a}(s) / (sech(s) ||v - u||^2_{2,a}(s))
    double c3 = 0;           // max ||L0^{-1} f||_{X,2} / ||f||_{X,0}
    double contraction = 0;  // max ||Psi(v) - Psi(u)||_{X,2} / ||v - u||_{X,2} over the ball
    std::size_t samples = 0;
};

/// Empirical estimate of the constants in the perturbation, quadratic
/// remainder and inversion estimates, plus the observed contraction ratio.
/// The same random sample functions (seeded) are used for every delta.
/// Uses epsilon, zeta, n and alpha from `base`.
std::vector<ConstantsRow> constants_probe(std::span<const double> deltas, std::size_t sample_count,
                                          const SolverConfig& base, std::uint64_t seed = 20240611);

}  // namespace spiralmin
