#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spiralmin/cli_io.hpp"
#include "spiralmin/errors.hpp"
#include "spiralmin/geometry.hpp"
#include "spiralmin/graph_solver.hpp"
#include "spiralmin/mc_functional.hpp"
#include "spiralmin/verification.hpp"

namespace py = pybind11;
namespace sm = spiralmin;

namespace {

sm::Jet jet_from(const std::vector<sm::Vec3>& v) {
    if (v.size() != 5) {
        throw sm::InvalidArgument("a jet is five 3-vectors: ds, dth, dss, dthth, dsth");
    }
    return sm::Jet{v[0], v[1], v[2], v[3], v[4]};
}

std::vector<sm::Vec3> jet_to(const sm::Jet& j) { return {j.ds, j.dth, j.dss, j.dthth, j.dsth}; }

sm::GridFunction profile(double half_width, std::vector<double> values) {
    return sm::GridFunction(half_width, std::move(values));
}

std::vector<double> values_of(const sm::GridFunction& f) { return {f.values().begin(), f.values().end()}; }

py::dict geometry_dict(double s, double theta, double delta) {
    const sm::GeometryRecord r = sm::geometry_at(s, theta, delta);
    py::dict d;
    d["point"] = r.point;
    d["jet"] = jet_to(r.jet);
    d["normal"] = r.normal;
    d["metric"] = std::vector<double>{r.g_ss, r.g_sth, r.g_thth};
    d["det_g"] = r.det_g;
    d["dual_metric"] = std::vector<double>{r.dual_ss, r.dual_sth, r.dual_thth};
    d["second_form"] = std::vector<double>{r.A_ss, r.A_sth, r.A_thth};
    d["A_norm_sq"] = r.A_norm_sq;
    d["H"] = r.H;
    return d;
}

py::dict solve(double delta, double epsilon, double zeta, std::size_t grid_n, int max_iters) {
    sm::SolverConfig c;
    c.delta = delta;
    c.epsilon = epsilon;
    c.zeta = zeta;
    c.n = grid_n;
    c.max_iters = max_iters;
    sm::SolveResult r;
    {
        py::gil_scoped_release release;
        r = sm::picard_solve(c);
    }
    py::dict d;
    d["converged"] = r.converged;
    d["half_width"] = r.u.half_width();
    d["s"] = r.u.nodes();
    d["u"] = values_of(r.u);
    d["residual_history"] = r.residual_history;
    d["iterations"] = r.iterations;
    d["norm_X2"] = r.norm_X2;
    d["pointwise_margin"] = r.pointwise_margin;
    d["in_ball"] = r.in_ball;
    d["boundary_residual"] = r.boundary_residual;
    return d;
}

std::string report_json(const std::string& command, const std::string& config_json) {
    const sm::RunConfig config = sm::parse_config(config_json);
    sm::Report rep;
    if (command == "geometry-check") {
        rep = sm::cmd_geometry_check(config);
    } else if (command == "verify") {
        rep = sm::cmd_verify(config);
    } else if (command == "report") {
        rep = sm::cmd_report(config);
    } else if (command == "solve") {
        rep = sm::cmd_solve(config).report;
    } else {
        throw sm::InvalidArgument("command: expected geometry-check, solve, verify or report");
    }
    return rep.to_json(config);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Minimal graphs over a spiraling immersion";

    py::register_exception<sm::Diverged>(m, "Diverged", PyExc_RuntimeError);
    py::register_exception<sm::SolverDomainError>(m, "SolverDomainError", PyExc_RuntimeError);
    py::register_exception<sm::DegenerateImmersion>(m, "DegenerateImmersion", PyExc_ValueError);
    py::register_exception<sm::PreconditionViolation>(m, "PreconditionViolation", PyExc_ValueError);
    py::register_exception<sm::InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);

    m.def("geometry_at", &geometry_dict, py::arg("s"), py::arg("theta"), py::arg("delta"));
    m.def("immersion_jet", [](double s, double theta, double delta) {
        const sm::ImmersionJet ij = sm::immersion_jet(s, theta, delta);
        return py::make_tuple(ij.point, jet_to(ij.jet));
    }, py::arg("s"), py::arg("theta"), py::arg("delta"));
    m.def("mean_curvature_of_jet", [](const std::vector<sm::Vec3>& j) { return sm::mean_curvature_of_jet(jet_from(j)); },
          py::arg("jet"));
    m.def("minimal_graph_operator", [](double half_width, std::vector<double> u, double delta) {
        return values_of(sm::minimal_graph_operator(profile(half_width, std::move(u)), delta));
    }, py::arg("half_width"), py::arg("u"), py::arg("delta"));
    m.def("invert_model_operator", [](double half_width, std::vector<double> f) {
        return values_of(sm::invert_model_operator(profile(half_width, std::move(f))));
    }, py::arg("half_width"), py::arg("f"));
    m.def("apply_model_operator", [](double half_width, std::vector<double> u) {
        return values_of(sm::apply_model_operator(profile(half_width, std::move(u))));
    }, py::arg("half_width"), py::arg("u"));
    m.def("solve", &solve, py::arg("delta") = 0.05, py::arg("epsilon") = 0.5, py::arg("zeta") = 10.0,
          py::arg("grid_n") = 2001, py::arg("max_iters") = 50);
    m.def("surface_residual", [](double half_width, std::vector<double> u, double delta, std::vector<double> thetas) {
        return sm::surface_residual(profile(half_width, std::move(u)), delta, thetas);
    }, py::arg("half_width"), py::arg("u"), py::arg("delta"), py::arg("thetas"));
    m.def("blowup_ratio", [](double delta, double h0) { return sm::blowup_scaling(delta, h0).ratio; },
          py::arg("delta"), py::arg("h0"));
    m.def("helicoid_errors", [](std::vector<double> deltas, double s_max, double theta_max) {
        std::vector<double> errs;
        for (const auto& row : sm::helicoid_limit(deltas, s_max, theta_max)) {
            errs.push_back(row.max_error);
        }
        return errs;
    }, py::arg("deltas"), py::arg("s_max"), py::arg("theta_max"));
    m.def("embeddedness_margin", [](double half_width, std::vector<double> u, double delta, double t0, double t1) {
        return sm::embeddedness_check(profile(half_width, std::move(u)), delta, t0, t1).margin;
    }, py::arg("half_width"), py::arg("u"), py::arg("delta"), py::arg("theta_min"), py::arg("theta_max"));
    m.def("report_json", &report_json, py::arg("command"), py::arg("config_json") = "",
          "Runs a checking command and returns its JSON report.");
}
