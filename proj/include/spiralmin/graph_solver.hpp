#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "spiralmin/grid_function.hpp"
#include "spiralmin/jet.hpp"

namespace spiralmin {

/// Whether the normal displacement e^{dt} u nu keeps the e^{dt} growth when
/// differentiated in theta (`delta`) or drops it (`zero`). The base jet keeps
/// its delta dependence in both modes.
enum class DisplacementMode { delta, zero };

/// theta-independent jet e^{-dt} R_t^{-1} (jet of G), where R_t sends
/// e_x, e_y, e_z to e_r, e_r', e_z. R_t reverses orientation, so the mean
/// curvature of this jet equals the mean curvature of G taken with the normal
/// -cosh^{-1}(s) e_r' + tanh(s) e_z, scaled by e^{dt}.
Jet base_jet(double s, double delta);

/// theta-independent jet of the displacement e^{dt} u(s) nu(s, t), pulled
/// back like base_jet. Linear in (u, du, ddu).
Jet displacement_jet(double s, double u, double du, double ddu, double delta, DisplacementMode mode);

/// u -> cosh^2(s) H(base_jet + displacement_jet), node by node. The mean
/// curvature of the normal graph G + e^{dt} u nu (with the normal above) is
/// e^{-dt} cosh^{-2}(s) times this operator.
///
/// Throws SolverDomainError naming the first node where the jet is degenerate
/// or its conformal defect reaches 1/4.
GridFunction minimal_graph_operator(const GridFunction& u, double delta,
                                    DisplacementMode mode = DisplacementMode::delta);

/// u'' + 2 cosh^{-2}(s) u.
GridFunction apply_model_operator(const GridFunction& u);

/// tanh(s) * int_0^s tanh^{-2}(r) int_0^r tanh(q) f(q) dq dr.
///
/// Both prefix integrals are accumulated outward from s = 0 with a
/// fourth-order four-point rule (three-point next to the boundary). At s = 0
/// the outer integrand takes its limit f(0)/2. The result vanishes to second
/// order at the origin.
GridFunction invert_model_operator(const GridFunction& f);

/// Linearization of minimal_graph_operator at u = 0:
/// (1 + d^2 tanh^2) u'' + d^2 u - 2 d^2 tanh u' + 2 d^2 tanh sech^2 u'
///   - d^2 sech^2 u + 2 sech^2 u + 2 d^2 tanh^2 sech^2 u.
GridFunction apply_linearization(const GridFunction& u, double delta);

/// Local Hoelder function at every node: sum_{j<=k} |f^{(j)}(s)| plus the
/// discrete alpha-Hoelder quotient of f^{(k)} over node pairs in B_1(s).
/// k must be 0 or 2.
std::vector<double> local_holder_norm(const GridFunction& f, int k, double alpha);

/// max_i local_holder_norm(f)_i / max(|s_i|, 1)^k.
double weighted_norm(const GridFunction& f, int k, double alpha);

/// max |f_i| over the interior nodes 1..n-2.
double interior_sup(const GridFunction& f);

/// Copy of f whose two boundary values are replaced by quadratic
/// extrapolation of the three nearest interior values.
GridFunction with_extrapolated_boundary(GridFunction f);

/// u - invert_model_operator(Q(u)), with Q's boundary values extrapolated
/// from the interior.
///
/// The boundary nodes of Q use one-sided derivative stencils; their O(h^2)
/// truncation error cannot be annihilated without giving up u'(0) = 0, so the
/// iteration solves the interior equations and treats the boundary values as
/// closure.
GridFunction picard_map(const GridFunction& u, double delta);

struct SolverConfig {
    double delta = 0.05;
    double epsilon = 0.5;
    double zeta = 10.0;
    std::size_t n = 2001;
    double alpha = 0.5;
    double tol_residual = 1e-10;
    double tol_step = 1e-12;
    int max_iters = 50;

    /// epsilon * delta^{-1/4}
    double half_width() const;
    double step() const;
    /// Throws InvalidArgument naming the offending field.
    void validate() const;
};

struct SolveResult {
    bool converged = false;
    std::string stop_reason;
    GridFunction u;
    std::vector<double> residual_history;  // interior sup |Q(u_k)|, k = 0, 1, ...
    std::vector<double> damping_history;   // accepted step factor per iteration
    int iterations = 0;
    double norm_X2 = 0;
    /// max_i |u_i| / (zeta delta max(s_i^2, h^2)); <= 1 certifies the pointwise bound.
    double pointwise_margin = 0;
    bool in_ball = false;
    /// |Q(u)| at the two boundary nodes (one-sided stencils); O(h^2), diagnostic only.
    double boundary_residual = 0;

    double final_residual() const { return residual_history.empty() ? 0.0 : residual_history.back(); }
};

/// Fixed-point iteration u_{k+1} = u_k - lambda (u_k - picard_map(u_k)) from u_0 = 0.
/// lambda starts at 1 and halves (down to 1/64) whenever the interior residual
/// fails to decrease. Converged means the interior residual is <= tol_residual.
///
/// Throws Diverged (carrying the residual history) when no damped step
/// decreases the residual, the step drops below tol_step first, or max_iters
/// is reached.
SolveResult picard_solve(const SolverConfig& config);

/// C^2 cubic spline of a profile on its grid, used to evaluate the graph away from nodes.
class ProfileInterpolant {
public:
    explicit ProfileInterpolant(const GridFunction& u);
    ~ProfileInterpolant();
    ProfileInterpolant(ProfileInterpolant&&) noexcept;
    ProfileInterpolant& operator=(ProfileInterpolant&&) noexcept;

    double half_width() const noexcept { return half_width_; }
    /// Throws OutOfDomain when |s| exceeds the grid half width.
    double operator()(double s) const;
    double prime(double s) const;
    double double_prime(double s) const;

private:
    void check(double s) const;

    struct Impl;
    std::unique_ptr<Impl> impl_;
    double half_width_;
};

/// G(s, t) + e^{dt} u(s) nu(s, t).
Vec3 graph_point(double s, double theta, double delta, const ProfileInterpolant& u);
Vec3 graph_point(double s, double theta, double delta, const GridFunction& u);

}  // namespace spiralmin
