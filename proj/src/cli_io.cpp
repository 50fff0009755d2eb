#include "spiralmin/cli_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include <Eigen/Geometry>

#include "json.hpp"
#include "spiralmin/errors.hpp"
#include "spiralmin/geometry.hpp"
#include "spiralmin/mc_functional.hpp"
#include "spiralmin/verification.hpp"

namespace spiralmin {

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const char* const kPaper = "paper-claim";
const char* const kDerived = "derived-constant";

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmt6(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

[[noreturn]] void bad_key(const std::string& key, const std::string& why) { throw InvalidArgument(key + ": " + why); }

double jet_rel_err(const Jet& a, const Jet& b) { return (a - b).norm() / b.norm(); }

}  // namespace

std::string to_string(OutputFormat format) {
    switch (format) {
        case OutputFormat::obj:
            return "obj";
        case OutputFormat::csv:
            return "csv";
        case OutputFormat::json_report:
            return "json-report";
    }
    return "json-report";
}

OutputFormat parse_format(const std::string& text) {
    if (text == "obj") {
        return OutputFormat::obj;
    }
    if (text == "csv") {
        return OutputFormat::csv;
    }
    if (text == "json-report") {
        return OutputFormat::json_report;
    }
    bad_key("format", "expected obj, csv or json-report, got '" + text + "'");
}

void RunConfig::validate() const {
    solver.validate();
    if (!std::isfinite(theta_min)) {
        bad_key("theta_min", "must be finite");
    }
    if (!std::isfinite(theta_max) || theta_max <= theta_min) {
        bad_key("theta_max", "must be finite and exceed theta_min");
    }
    if (mesh_n_s < 2) {
        bad_key("mesh_n_s", "must be at least 2");
    }
    if (mesh_n_theta < 2) {
        bad_key("mesh_n_theta", "must be at least 2");
    }
}

namespace {

double json_number(const ordered_json& v, const std::string& key) {
    if (!v.is_number()) {
        bad_key(key, "expected a number");
    }
    return v.get<double>();
}

std::size_t json_count(const ordered_json& v, const std::string& key) {
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        bad_key(key, "expected a non-negative integer");
    }
    return v.get<std::size_t>();
}

void apply_overrides(RunConfig& c, const ConfigOverrides& o) {
    auto set = [](auto& field, const auto& value) {
        if (value) {
            field = *value;
        }
    };
    set(c.solver.delta, o.delta);
    set(c.solver.epsilon, o.epsilon);
    set(c.solver.zeta, o.zeta);
    set(c.solver.alpha, o.alpha);
    set(c.solver.tol_residual, o.tol_residual);
    set(c.solver.tol_step, o.tol_step);
    set(c.solver.n, o.grid_n);
    set(c.solver.max_iters, o.max_iters);
    set(c.theta_min, o.theta_min);
    set(c.theta_max, o.theta_max);
    set(c.mesh_n_s, o.mesh_n_s);
    set(c.mesh_n_theta, o.mesh_n_theta);
    set(c.output, o.output);
    if (o.format) {
        c.format = parse_format(*o.format);
    }
}

}  // namespace

RunConfig parse_config(const std::string& json_text, const ConfigOverrides& overrides) {
    RunConfig c;
    const bool blank = std::all_of(json_text.begin(), json_text.end(), [](unsigned char ch) { return std::isspace(ch); });
    if (!blank) {
        ordered_json doc;
        try {
            doc = ordered_json::parse(json_text);
        } catch (const nlohmann::json::parse_error& e) {
            bad_key("config", std::string("malformed JSON: ") + e.what());
        }
        if (!doc.is_object()) {
            bad_key("config", "expected a JSON object");
        }
        for (const auto& [key, v] : doc.items()) {
            if (key == "delta") {
                c.solver.delta = json_number(v, key);
            } else if (key == "epsilon") {
                c.solver.epsilon = json_number(v, key);
            } else if (key == "zeta") {
                c.solver.zeta = json_number(v, key);
            } else if (key == "alpha") {
                c.solver.alpha = json_number(v, key);
            } else if (key == "tol_residual") {
                c.solver.tol_residual = json_number(v, key);
            } else if (key == "tol_step") {
                c.solver.tol_step = json_number(v, key);
            } else if (key == "grid_n") {
                c.solver.n = json_count(v, key);
            } else if (key == "max_iters") {
                c.solver.max_iters = static_cast<int>(std::min<std::size_t>(json_count(v, key), 1000000));
            } else if (key == "theta_min") {
                c.theta_min = json_number(v, key);
            } else if (key == "theta_max") {
                c.theta_max = json_number(v, key);
            } else if (key == "mesh_n_s") {
                c.mesh_n_s = json_count(v, key);
            } else if (key == "mesh_n_theta") {
                c.mesh_n_theta = json_count(v, key);
            } else if (key == "output") {
                if (!v.is_string()) {
                    bad_key(key, "expected a string");
                }
                c.output = v.get<std::string>();
            } else if (key == "format") {
                if (!v.is_string()) {
                    bad_key(key, "expected a string");
                }
                c.format = parse_format(v.get<std::string>());
            } else {
                bad_key(key, "unknown configuration key");
            }
        }
    }
    apply_overrides(c, overrides);
    c.validate();
    return c;
}

RunConfig load_config(const std::optional<std::string>& path, const ConfigOverrides& overrides) {
    if (!path) {
        return parse_config("", overrides);
    }
    std::string text;
    try {
        text = read_file(*path);
    } catch (const std::exception& e) {
        bad_key("config", e.what());
    }
    return parse_config(text, overrides);
}

namespace {

CheckResult make_check(std::string name, double value, Relation rel, double target, double tol, bool passed,
                       std::string provenance) {
    return CheckResult{std::move(name), value, rel, target, tol, passed, std::move(provenance)};
}

}  // namespace

CheckResult check_at_most(std::string name, double value, double bound, std::string provenance) {
    return make_check(std::move(name), value, Relation::at_most, 0, bound, value <= bound, std::move(provenance));
}

CheckResult check_less_than(std::string name, double value, double bound, std::string provenance) {
    return make_check(std::move(name), value, Relation::less_than, 0, bound, value < bound, std::move(provenance));
}

CheckResult check_greater_than(std::string name, double value, double bound, std::string provenance) {
    return make_check(std::move(name), value, Relation::greater_than, 0, bound, value > bound, std::move(provenance));
}

CheckResult check_within(std::string name, double value, double target, double tolerance, std::string provenance) {
    return make_check(std::move(name), value, Relation::within, target, tolerance,
                      std::abs(value - target) <= tolerance, std::move(provenance));
}

bool Report::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::vector<std::string> Report::failed() const {
    std::vector<std::string> names;
    for (const auto& c : checks) {
        if (!c.passed) {
            names.push_back(c.name);
        }
    }
    return names;
}

void Report::append(const Report& other) {
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
    notes.insert(notes.end(), other.notes.begin(), other.notes.end());
    series.insert(series.end(), other.series.begin(), other.series.end());
}

namespace {

const char* relation_name(Relation r) {
    switch (r) {
        case Relation::at_most:
            return "<=";
        case Relation::less_than:
            return "<";
        case Relation::greater_than:
            return ">";
        case Relation::within:
            return "within";
    }
    return "?";
}

ordered_json config_json(const RunConfig& c) {
    ordered_json j;
    j["delta"] = c.solver.delta;
    j["epsilon"] = c.solver.epsilon;
    j["zeta"] = c.solver.zeta;
    j["grid_n"] = c.solver.n;
    j["alpha"] = c.solver.alpha;
    j["tol_residual"] = c.solver.tol_residual;
    j["tol_step"] = c.solver.tol_step;
    j["max_iters"] = c.solver.max_iters;
    j["theta_min"] = c.theta_min;
    j["theta_max"] = c.theta_max;
    j["mesh_n_s"] = c.mesh_n_s;
    j["mesh_n_theta"] = c.mesh_n_theta;
    return j;
}

}  // namespace

std::string Report::to_json(const RunConfig& config) const {
    ordered_json j;
    j["command"] = command;
    j["passed"] = all_passed();
    j["config"] = config_json(config);
    ordered_json list = ordered_json::array();
    for (const auto& c : checks) {
        ordered_json item;
        item["name"] = c.name;
        item["value"] = c.value;
        item["relation"] = relation_name(c.relation);
        if (c.relation == Relation::within) {
            item["target"] = c.target;
        }
        item["tolerance"] = c.tolerance;
        item["passed"] = c.passed;
        item["provenance"] = c.provenance;
        list.push_back(std::move(item));
    }
    j["checks"] = std::move(list);
    j["notes"] = notes;
    ordered_json tables = ordered_json::object();
    for (const auto& [name, values] : series) {
        tables[name] = values;
    }
    j["series"] = std::move(tables);
    return j.dump(2) + "\n";
}

std::string Report::to_text() const {
    std::ostringstream out;
    for (const auto& c : checks) {
        out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << fmt6(c.value) << ' ' << relation_name(c.relation)
            << ' ';
        if (c.relation == Relation::within) {
            out << fmt6(c.target) << " +/- ";
        }
        out << fmt6(c.tolerance) << " [" << c.provenance << "]\n";
    }
    for (const auto& n : notes) {
        out << "NOTE " << n << '\n';
    }
    return out.str();
}

namespace {

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) {
        v[i] = a + (b - a) * i / (n - 1);
    }
    return v;
}

Vec3 laplacian_of_G(const GeometryRecord& r) {
    const LaplaceCoefficients& c = r.laplace;
    const Jet& j = r.jet;
    return (c.ss * j.dss + c.thth * j.dthth + c.sth * j.dsth + c.s * j.ds + c.th * j.dth) / c.prefactor;
}

Jet random_jet(std::mt19937_64& rng) {
    std::normal_distribution<double> n01(0.0, 1.0);
    auto v = [&] { return Vec3(n01(rng), n01(rng), n01(rng)); };
    return Jet{v(), v(), v(), v(), v()};
}

Mat3 random_rotation(std::mt19937_64& rng) {
    std::normal_distribution<double> n01(0.0, 1.0);
    Eigen::Quaterniond q(n01(rng), n01(rng), n01(rng), n01(rng));
    q.normalize();
    return q.toRotationMatrix();
}

void geometry_oracles(const RunConfig& config, Report& rep) {
    const double delta = config.solver.delta;
    const auto s_grid = linspace(-3.0, 3.0, 25);
    const auto t_grid = linspace(config.theta_min, config.theta_max, 25);
    const SurfaceMap G = immersion_map(delta);
    const SurfaceMap N = [](long double s, long double t) { return unit_normal_ld(s, t); };

    double unit = 0, ortho = 0, det = 0, dual = 0, a_form = 0, a_sq = 0, h_trace = 0, h_orient = 0, lap = 0;
    double fd_jet_err = 0, fd_normal_derivs = 0, fd_metric = 0, fd_normal = 0, fd_A = 0, fd_A2 = 0, fd_H = 0;
    double halving_lo = std::numeric_limits<double>::infinity(), halving_hi = 0, defect = 0, euler = 0;

    for (double t : t_grid) {
        for (double s : s_grid) {
            const GeometryRecord r = geometry_at(s, t, delta);
            const Jet& j = r.jet;
            const Vec3& nu = r.normal;
            unit = std::max(unit, std::abs(nu.norm() - 1.0));
            ortho = std::max({ortho, std::abs(nu.dot(j.ds)), std::abs(nu.dot(j.dth))});

            const double det_exact = std::exp(4.0 * delta * t) * std::pow(std::cosh(s), 4);
            det = std::max(det, std::abs(r.det_g - det_exact) / det_exact);

            Eigen::Matrix2d g, gi;
            g << r.g_ss, r.g_sth, r.g_sth, r.g_thth;
            gi << r.dual_ss, r.dual_sth, r.dual_sth, r.dual_thth;
            dual = std::max(dual, (gi * g - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff());

            const double a_ss = j.dss.dot(nu), a_tt = j.dthth.dot(nu), a_st = j.dsth.dot(nu);
            const double a_norm = std::max({std::abs(r.A_ss), std::abs(r.A_thth), std::abs(r.A_sth)});
            a_form = std::max(a_form, std::max({std::abs(a_ss - r.A_ss), std::abs(a_tt - r.A_thth),
                                                std::abs(a_st - r.A_sth)}) / a_norm);

            a_sq = std::max(a_sq, std::abs(second_form_length_sq(j) - r.A_norm_sq) / r.A_norm_sq);
            const double h_scale = std::sqrt(r.A_norm_sq);
            h_trace = std::max(h_trace, std::abs(trace_second_form(j, nu) - r.H) / h_scale);
            h_orient = std::max(h_orient, std::abs(mean_curvature_of_jet(j) + r.H) / h_scale);
            lap = std::max(lap, (laplacian_of_G(r) - r.H * nu).cwiseAbs().maxCoeff() / h_scale);

            fd_jet_err = std::max(fd_jet_err, jet_rel_err(fd_jet(G, s, t, 1e-4), j));
            const Jet nj = fd_jet(N, s, t, 1e-4);
            const NormalDerivatives& nd = r.normal_derivs;
            const Jet nj_exact{nd.s, nd.th, nd.ss, nd.thth, nd.sth};
            fd_normal_derivs = std::max(fd_normal_derivs, jet_rel_err(nj, nj_exact));

            const double coarse = jet_rel_err(fd_jet(G, s, t, 1e-3), j);
            const double fine = jet_rel_err(fd_jet(G, s, t, 5e-4), j);
            halving_lo = std::min(halving_lo, coarse / fine);
            halving_hi = std::max(halving_hi, coarse / fine);

            // Derived quantities from an independent O(h^4) jet.
            const Jet fj = fd_jet_extrapolated(G, s, t, 1e-3);
            const double g_scale = j.ds.squaredNorm() + j.dth.squaredNorm();
            fd_metric = std::max({fd_metric, std::abs(fj.ds.dot(fj.ds) - r.g_ss) / g_scale,
                                  std::abs(fj.dth.dot(fj.dth) - r.g_thth) / g_scale,
                                  std::abs(fj.ds.dot(fj.dth) - r.g_sth) / g_scale});
            const Vec3 fn = -fj.ds.cross(fj.dth).normalized();
            fd_normal = std::max(fd_normal, (fn - nu).norm());
            fd_A = std::max(fd_A, std::max({std::abs(fj.dss.dot(fn) - r.A_ss), std::abs(fj.dthth.dot(fn) - r.A_thth),
                                            std::abs(fj.dsth.dot(fn) - r.A_sth)}) / a_norm);
            fd_A2 = std::max(fd_A2, std::abs(second_form_length_sq(fj) - r.A_norm_sq) / r.A_norm_sq);
            fd_H = std::max(fd_H, std::abs(-mean_curvature_of_jet(fj) - r.H) / h_scale);

            defect = std::max(defect, conformal_defect(j).magnitude());
            const double hj = mean_curvature_of_jet(j);
            euler = std::max(euler, std::abs(dH(j, j, 1) + hj) / h_scale);
        }
    }

    rep.checks.push_back(check_at_most("normal unit length", unit, 1e-12, kPaper));
    rep.checks.push_back(check_at_most("normal orthogonal to tangents", ortho, 1e-12, kPaper));
    rep.checks.push_back(check_at_most("det g vs e^{4dt}cosh^4 (rel)", det, 1e-10, kPaper));
    rep.checks.push_back(check_at_most("dual metric inverts metric", dual, 1e-12, kPaper));
    rep.checks.push_back(check_at_most("second form hess.nu vs closed form (rel)", a_form, 1e-12, kPaper));
    rep.checks.push_back(check_at_most("|A|^2 contraction vs closed form (rel)", a_sq, 1e-10, kPaper));
    rep.checks.push_back(check_at_most("H trace vs closed form (rel |A|)", h_trace, 1e-10, kDerived));
    rep.checks.push_back(check_at_most("jet functional on G equals -H (rel |A|)", h_orient, 1e-10, kDerived));
    rep.checks.push_back(check_at_most("Laplacian of G equals H nu (rel |A|)", lap, 1e-8, kPaper));
    rep.checks.push_back(check_at_most("closed-form jet vs finite differences (rel)", fd_jet_err, 1e-8, kDerived));
    rep.checks.push_back(check_at_most("normal derivatives vs finite differences (rel)", fd_normal_derivs, 1e-8, kDerived));
    rep.checks.push_back(check_within("step halving error ratio (min)", halving_lo, 4.0, 0.5, kDerived));
    rep.checks.push_back(check_within("step halving error ratio (max)", halving_hi, 4.0, 0.5, kDerived));
    rep.checks.push_back(check_at_most("metric vs finite differences (rel)", fd_metric, 1e-8, kDerived));
    rep.checks.push_back(check_at_most("normal vs finite differences", fd_normal, 1e-8, kDerived));
    rep.checks.push_back(check_at_most("second form vs finite differences (rel)", fd_A, 1e-8, kDerived));
    rep.checks.push_back(check_at_most("|A|^2 vs finite differences (rel)", fd_A2, 1e-8, kDerived));
    rep.checks.push_back(check_at_most("H vs finite differences (rel |A|)", fd_H, 1e-8, kDerived));
    rep.checks.push_back(check_at_most("conformal defect of G over delta", defect / delta, 1.0, kPaper));
    rep.checks.push_back(check_at_most("Euler relation dH(j; j) = -H (rel |A|)", euler, 1e-8, kDerived));
}

void functional_properties(const RunConfig& config, Report& rep) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> log_c(std::log(0.1), std::log(10.0));
    double homog = 0, rot = 0;
    int used = 0;
    while (used < 1000) {
        const Jet j = random_jet(rng);
        const Vec3 n = j.ds.cross(j.dth);
        if (n.squaredNorm() < 1e-2 * j.ds.squaredNorm() * j.dth.squaredNorm()) {
            continue;  // keep away from degenerate gradients
        }
        ++used;
        const double h = mean_curvature_of_jet(j);
        const double c = std::exp(log_c(rng));
        homog = std::max(homog, std::abs(c * mean_curvature_of_jet(scale_jet(c, j)) - h) / (std::abs(h) + 1e-4));
        rot = std::max(rot, std::abs(mean_curvature_of_jet(rotate_jet(random_rotation(rng), j)) - h) /
                                std::max(1.0, std::abs(h)));
    }
    rep.checks.push_back(check_at_most("homogeneity c H(c j) = H(j) on 1000 jets (rel)", homog, 1e-10, kPaper));
    rep.checks.push_back(check_at_most("rotation invariance on 1000 jets", rot, 1e-10, kPaper));

    const Jet cylinder{Vec3(0, 2, 0), Vec3(0, 0, 1), Vec3(-2, 0, 0), Vec3::Zero(), Vec3::Zero()};
    rep.checks.push_back(
        check_within("radius-2 cylinder |H|", std::abs(mean_curvature_of_jet(cylinder)), 0.5, 1e-14, kDerived));

    const SolverConfig& sc = config.solver;
    const GridFunction q = minimal_graph_operator(GridFunction(sc.half_width(), sc.n), sc.delta);
    double err = 0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        err = std::max(err, std::abs(q[i] - sc.delta * std::tanh(q.node(i))));
    }
    rep.checks.push_back(check_at_most("Q(0) = delta tanh(s) at every node", err, 1e-12, kPaper));
}

}  // namespace

Report cmd_geometry_check(const RunConfig& config) {
    config.validate();
    Report rep;
    rep.command = "geometry-check";
    geometry_oracles(config, rep);
    functional_properties(config, rep);
    rep.notes.push_back("H-sign-convention: trace(+) vs Corollary(-)");
    rep.notes.push_back("H := g^{ij} (d_ij G . nu) with nu = -sech(s) e_r' + tanh(s) e_z gives +delta e^{-dt} tanh(s) sech^2(s)");
    rep.notes.push_back("nu = -(G_s x G_t)/|G_s x G_t|, so the jet functional on G returns -H");
    return rep;
}

namespace {

void certify_solution(const RunConfig& config, const SolveResult& r, Report& rep) {
    const SolverConfig& sc = config.solver;
    const double delta = sc.delta;
    rep.checks.push_back(check_at_most("interior residual sup|Q(u)|", r.final_residual(), sc.tol_residual, kPaper));
    int increases = 0;
    for (std::size_t k = 2; k < r.residual_history.size(); ++k) {
        increases += r.residual_history[k] > r.residual_history[k - 1] ? 1 : 0;
    }
    rep.checks.push_back(check_at_most("residual increases after first step", increases, 0, kDerived));
    rep.checks.push_back(check_at_most("||u||_X2 within ball zeta delta", r.norm_X2, sc.zeta * delta, kPaper));
    rep.checks.push_back(check_at_most("pointwise |u| / (zeta delta max(s^2,h^2))", r.pointwise_margin, 1.0, kPaper));

    const std::size_t c = r.u.center();
    const std::vector<double> du = r.u.d1();
    rep.checks.push_back(check_at_most("|u(0)|", std::abs(r.u[c]), 1e-12, kPaper));
    // The integral inverse fixes u'(0) = 0 only up to the O(h^2) stencil error.
    const double h = r.u.step();
    rep.checks.push_back(check_at_most("|u'(0)| (centered difference, bound h^2)", std::abs(du[c]), h * h, kPaper));

    const std::vector<double> thetas{config.theta_min, config.theta_min + 1.0, config.theta_min + kTwoPi};
    rep.checks.push_back(
        check_at_most("surface mean curvature of graph (finite differences)", surface_residual(r.u, delta, thetas), 1e-6,
                      kDerived));

    if (config.theta_max - config.theta_min >= kTwoPi) {
        const EmbeddednessReport e = embeddedness_check(r.u, delta, config.theta_min, config.theta_max);
        rep.checks.push_back(check_greater_than("sheet gap margin", e.margin, 1.0, kPaper));
        rep.checks.push_back(check_at_most("sup|u| / (epsilon delta^{1/2} / 4)", e.envelope_ratio, 1.0, kPaper));
        rep.checks.push_back(check_at_most("gap lower bound (e^{2pi d}-1)e^{dt}/d over gap", 1.0 / e.gap_bound_ratio,
                                           1.0 + 1e-12, kDerived));
        rep.notes.push_back("min sheet gap " + fmt6(e.min_sheet_gap) + ", max displacement " +
                            fmt6(e.max_displacement));
    } else {
        rep.notes.push_back("embeddedness skipped: theta window shorter than 2 pi");
    }
    rep.notes.push_back("stop reason: " + r.stop_reason + " after " + std::to_string(r.iterations) + " iterations");
    rep.notes.push_back("boundary-node residual (one-sided stencils): " + fmt6(r.boundary_residual));
}

}  // namespace

SolveOutcome cmd_solve(const RunConfig& config) {
    config.validate();
    SolveOutcome out;
    out.report.command = "solve";
    try {
        SolveResult r = picard_solve(config.solver);
        out.residual_history = r.residual_history;
        out.report.series.emplace_back("residual_history", r.residual_history);
        out.report.series.emplace_back("damping_history", r.damping_history);
        certify_solution(config, r, out.report);
        out.result = std::move(r);
        out.exit_code = out.report.all_passed() ? kExitOk : kExitCheckFailed;
    } catch (const Diverged& e) {
        out.residual_history = e.residual_history();
        out.report.series.emplace_back("residual_history", e.residual_history());
        out.report.checks.push_back(check_at_most(
            "interior residual sup|Q(u)|", e.residual_history().empty() ? std::nan("") : e.residual_history().back(),
            config.solver.tol_residual, kPaper));
        out.report.checks.back().passed = false;
        out.report.notes.push_back(std::string("diverged: ") + e.what());
        out.exit_code = kExitDiverged;
    } catch (const SolverDomainError& e) {
        out.report.checks.push_back(check_at_most("iterate stays in the admissible jet domain", 1.0, 0.0, kPaper));
        out.report.notes.push_back(std::string("diverged: ") + e.what());
        out.exit_code = kExitDiverged;
    }
    return out;
}

Report cmd_verify(const RunConfig& config) {
    config.validate();
    Report rep;
    rep.command = "verify";

    const SolveOutcome solved = cmd_solve(config);
    for (auto c : solved.report.checks) {
        c.name = "solve: " + c.name;
        rep.checks.push_back(std::move(c));
    }
    rep.notes.insert(rep.notes.end(), solved.report.notes.begin(), solved.report.notes.end());
    rep.checks.push_back(check_at_most("solve: converged", solved.result ? 0.0 : 1.0, 0.0, kPaper));

    std::vector<double> deltas{0.01, 0.05, 0.1};
    if (std::find(deltas.begin(), deltas.end(), config.solver.delta) == deltas.end()) {
        deltas.push_back(config.solver.delta);
    }
    const std::vector<double> heights{0.01, 0.02, 0.05, 0.1, 0.2, 0.5};  // delta h0
    double ratio_err = 0, grid_vs_exact = 0;
    for (double d : deltas) {
        std::vector<double> h0s;
        for (double dh : heights) {
            h0s.push_back(dh / d);
        }
        const ScalingReport sr = blowup_scaling(d, h0s);
        for (std::size_t i = 0; i < sr.ratios.size(); ++i) {
            ratio_err = std::max(ratio_err, std::abs(sr.ratios[i] - 2.0));
            grid_vs_exact = std::max(grid_vs_exact, std::abs(sr.sup_A2[i] - sr.sup_A2_exact[i]) / sr.sup_A2_exact[i]);
        }
        rep.series.emplace_back("blowup_ratios_delta_" + fmt6(d), sr.ratios);
    }
    rep.checks.push_back(check_within("blowup ratio sup|A|^2 delta^2 h0^2 (worst)", 2.0 + ratio_err, 2.0, 1e-3, kDerived));
    rep.checks.push_back(check_at_most("blowup grid search vs analytic sup (rel)", grid_vs_exact, 1e-6, kDerived));

    const std::vector<double> hel_deltas{0.04, 0.02, 0.01};
    const auto rows = helicoid_limit(hel_deltas, 1.0, kTwoPi);
    const auto orders = convergence_orders(rows);
    std::vector<double> errs;
    for (const auto& r : rows) {
        errs.push_back(r.max_error);
    }
    rep.series.emplace_back("helicoid_deltas", hel_deltas);
    rep.series.emplace_back("helicoid_errors", errs);
    rep.series.emplace_back("helicoid_orders", orders);
    for (std::size_t i = 0; i < orders.size(); ++i) {
        rep.checks.push_back(check_within("helicoid convergence order " + std::to_string(i + 1), orders[i], 1.0, 0.1,
                                          kPaper));
    }

    const std::vector<double> probe_deltas{0.01, 0.05, 0.1};
    const auto probe = constants_probe(probe_deltas, 20, config.solver);
    std::vector<double> c1, c2, c3, con;
    for (const auto& r : probe) {
        c1.push_back(r.c1);
        c2.push_back(r.c2);
        c3.push_back(r.c3);
        con.push_back(r.contraction);
    }
    auto spread = [](const std::vector<double>& v) {
        const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        return *lo > 0.0 && std::isfinite(*hi) ? *hi / *lo : std::numeric_limits<double>::infinity();
    };
    rep.series.emplace_back("constants_deltas", probe_deltas);
    rep.series.emplace_back("C1", c1);
    rep.series.emplace_back("C2", c2);
    rep.series.emplace_back("C3", c3);
    rep.series.emplace_back("contraction", con);
    rep.checks.push_back(check_less_than("C1 spread across delta", spread(c1), 2.0, kPaper));
    rep.checks.push_back(check_less_than("C2 spread across delta", spread(c2), 2.0, kPaper));
    rep.checks.push_back(check_less_than("C3 spread across delta", spread(c3), 2.0, kPaper));
    rep.checks.push_back(
        check_less_than("contraction ratio on ball samples (max)", *std::max_element(con.begin(), con.end()), 1.0,
                        kPaper));
    return rep;
}

Report cmd_report(const RunConfig& config) {
    Report rep = cmd_geometry_check(config);
    rep.command = "report";
    rep.append(cmd_verify(config));
    return rep;
}

std::string profile_csv(const GridFunction& u, double delta) {
    const std::vector<double> du = u.d1();
    const std::vector<double> ddu = u.d2();
    const GridFunction q = minimal_graph_operator(u, delta);
    std::string out = "s,u,du,ddu,Q\n";
    for (std::size_t i = 0; i < u.size(); ++i) {
        out += fmt17(u.node(i)) + ',' + fmt17(u[i]) + ',' + fmt17(du[i]) + ',' + fmt17(ddu[i]) + ',' + fmt17(q[i]) +
               '\n';
    }
    return out;
}

GridFunction parse_profile_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("s,u", 0) != 0) {
        throw InvalidArgument("profile CSV must start with a header 's,u,...'");
    }
    std::vector<double> s, u;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) {
            continue;
        }
        const char* p = line.c_str();
        char* end = nullptr;
        const double sv = std::strtod(p, &end);
        if (end == p || *end != ',') {
            throw InvalidArgument("profile CSV row " + std::to_string(row) + ": bad s value");
        }
        p = end + 1;
        const double uv = std::strtod(p, &end);
        if (end == p || (*end != ',' && *end != '\0')) {
            throw InvalidArgument("profile CSV row " + std::to_string(row) + ": bad u value");
        }
        s.push_back(sv);
        u.push_back(uv);
    }
    if (s.size() < 5 || s.size() % 2 == 0 || s.front() != -s.back()) {
        throw InvalidArgument("profile CSV must hold an odd number (>= 5) of rows on a symmetric grid");
    }
    // node(n-1) = c * (2S / (n-1)) can miss S by an ulp; take the neighbouring
    // double that regenerates every node exactly.
    const auto regenerates = [&](double half_width) {
        const GridFunction g(half_width, s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (g.node(i) != s[i]) {
                return false;
            }
        }
        return true;
    };
    double lo = s.back(), hi = s.back();
    for (int k = 0; k <= 8; ++k) {
        if (regenerates(lo)) {
            return GridFunction(lo, std::move(u));
        }
        if (regenerates(hi)) {
            return GridFunction(hi, std::move(u));
        }
        lo = std::nextafter(lo, 0.0);
        hi = std::nextafter(hi, INFINITY);
    }
    const GridFunction g(s.back(), s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (std::abs(g.node(i) - s[i]) > 1e-9 * s.back()) {
            throw InvalidArgument("profile CSV row " + std::to_string(i + 2) + ": s is off the uniform grid");
        }
    }
    return GridFunction(s.back(), std::move(u));
}

Mesh build_mesh(const RunConfig& config, const GridFunction* u) {
    config.validate();
    const double delta = config.solver.delta;
    const double S = u ? u->half_width() : config.solver.half_width();
    const std::size_t ns = config.mesh_n_s;
    const std::size_t nt = config.mesh_n_theta;
    std::optional<ProfileInterpolant> profile;
    if (u) {
        profile.emplace(*u);
    }
    Mesh mesh;
    mesh.vertices.reserve(ns * nt);
    for (std::size_t j = 0; j < nt; ++j) {
        const double t = config.theta_min + (config.theta_max - config.theta_min) * static_cast<double>(j) /
                                                static_cast<double>(nt - 1);
        for (std::size_t i = 0; i < ns; ++i) {
            const double s = -S + 2.0 * S * static_cast<double>(i) / static_cast<double>(ns - 1);
            mesh.vertices.push_back(profile ? graph_point(s, t, delta, *profile) : immersion_jet(s, t, delta).point);
        }
    }
    // (G_t x G_s) points along nu, so walk each quad theta-first.
    mesh.faces.reserve(2 * (ns - 1) * (nt - 1));
    for (std::size_t j = 0; j + 1 < nt; ++j) {
        for (std::size_t i = 0; i + 1 < ns; ++i) {
            const std::size_t a = j * ns + i + 1;
            const std::size_t b = a + 1;
            const std::size_t d = a + ns;
            const std::size_t c = d + 1;
            mesh.faces.push_back({a, d, c});
            mesh.faces.push_back({a, c, b});
        }
    }
    return mesh;
}

std::string mesh_obj(const Mesh& mesh) {
    std::string out;
    out.reserve(mesh.vertices.size() * 64 + mesh.faces.size() * 24);
    for (const Vec3& v : mesh.vertices) {
        out += "v " + fmt17(v.x()) + ' ' + fmt17(v.y()) + ' ' + fmt17(v.z()) + '\n';
    }
    for (const auto& f : mesh.faces) {
        out += "f " + std::to_string(f[0]) + ' ' + std::to_string(f[1]) + ' ' + std::to_string(f[2]) + '\n';
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
    out << contents;
    if (!out) {
        throw std::runtime_error("write to '" + path + "' failed");
    }
}

}  // namespace spiralmin
