// Command-line front end: geometry-check, solve, verify, export-mesh, report.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "spiralmin/cli_io.hpp"
#include "spiralmin/errors.hpp"

namespace sm = spiralmin;

namespace {

struct Flags {
    std::optional<std::string> config_path;
    sm::ConfigOverrides overrides;
    std::optional<std::string> u_file;
    bool raw = false;
};

void add_config_flags(CLI::App& cmd, Flags& f) {
    auto& o = f.overrides;
    cmd.add_option("--config", f.config_path, "JSON configuration file");
    cmd.add_option("--delta", o.delta, "spiral parameter in (0, 0.2]");
    cmd.add_option("--epsilon", o.epsilon, "domain scale; half width is epsilon * delta^{-1/4}");
    cmd.add_option("--zeta", o.zeta, "ball radius factor");
    cmd.add_option("--grid-n", o.grid_n, "solver grid points (odd)");
    cmd.add_option("--alpha", o.alpha, "Hoelder exponent");
    cmd.add_option("--tol", o.tol_residual, "residual tolerance");
    cmd.add_option("--tol-step", o.tol_step, "step tolerance");
    cmd.add_option("--max-iters", o.max_iters, "iteration cap");
    cmd.add_option("--theta-min", o.theta_min, "lower end of the angle window");
    cmd.add_option("--theta-max", o.theta_max, "upper end of the angle window");
    cmd.add_option("--mesh-n-s", o.mesh_n_s, "mesh vertices across s");
    cmd.add_option("--mesh-n-theta", o.mesh_n_theta, "mesh vertices across theta");
    cmd.add_option("--output", o.output, "output path");
    cmd.add_option("--format", o.format, "obj, csv or json-report");
}

sm::OutputFormat format_or(const sm::RunConfig& c, sm::OutputFormat fallback, const char* command) {
    const sm::OutputFormat f = c.format.value_or(fallback);
    if (f != fallback) {
        throw sm::InvalidArgument(std::string("format: ") + command + " writes " + sm::to_string(fallback));
    }
    return f;
}

std::string report_path_for(const std::string& csv_path) {
    const std::string ext = ".csv";
    std::string stem = csv_path;
    if (stem.size() > ext.size() && stem.compare(stem.size() - ext.size(), ext.size(), ext) == 0) {
        stem.resize(stem.size() - ext.size());
    }
    return stem + ".report.json";
}

int finish_report(const sm::Report& rep, const sm::RunConfig& config) {
    std::cout << rep.to_text();
    if (!config.output.empty()) {
        sm::write_file(config.output, rep.to_json(config));
    }
    const auto failed = rep.failed();
    for (const auto& name : failed) {
        std::cerr << "failed check: " << name << '\n';
    }
    return failed.empty() ? sm::kExitOk : sm::kExitCheckFailed;
}

int run_solve(const sm::RunConfig& config) {
    format_or(config, sm::OutputFormat::csv, "solve");
    const std::string csv_path = config.output.empty() ? "profile.csv" : config.output;
    const sm::SolveOutcome out = sm::cmd_solve(config);
    if (out.result) {
        sm::write_file(csv_path, sm::profile_csv(out.result->u, config.solver.delta));
    }
    sm::write_file(report_path_for(csv_path), out.report.to_json(config));
    std::cout << out.report.to_text();
    if (out.exit_code == sm::kExitDiverged) {
        std::cerr << "solver diverged; residual history written to " << report_path_for(csv_path) << '\n';
    }
    for (const auto& name : out.report.failed()) {
        std::cerr << "failed check: " << name << '\n';
    }
    return out.exit_code;
}

int run_export(const sm::RunConfig& config, const Flags& f) {
    format_or(config, sm::OutputFormat::obj, "export-mesh");
    if (!f.u_file && !f.raw) {
        throw sm::InvalidArgument("u_file: pass --u-file PROFILE.csv, or --raw to mesh the immersion itself");
    }
    std::optional<sm::GridFunction> u;
    if (f.u_file) {
        std::string text;
        try {
            text = sm::read_file(*f.u_file);
        } catch (const std::exception& e) {
            throw sm::InvalidArgument(std::string("u_file: ") + e.what());
        }
        u = sm::parse_profile_csv(text);
    }
    const sm::Mesh mesh = sm::build_mesh(config, u ? &*u : nullptr);
    const std::string path = config.output.empty() ? "mesh.obj" : config.output;
    sm::write_file(path, sm::mesh_obj(mesh));
    std::cout << "wrote " << mesh.vertices.size() << " vertices and " << mesh.faces.size() << " faces to " << path
              << '\n';
    return sm::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Minimal graphs over a spiraling immersion"};
    app.require_subcommand(1);

    Flags flags;
    auto* geometry = app.add_subcommand("geometry-check", "closed-form geometry against independent oracles");
    auto* solve = app.add_subcommand("solve", "fixed-point solve of the profile equation");
    auto* verify = app.add_subcommand("verify", "blowup law, helicoid limit, embeddedness, lemma constants");
    auto* mesh = app.add_subcommand("export-mesh", "triangulated graph surface as OBJ");
    auto* report = app.add_subcommand("report", "geometry-check and verify in one report");
    for (auto* cmd : {geometry, solve, verify, mesh, report}) {
        add_config_flags(*cmd, flags);
    }
    mesh->add_option("--u-file", flags.u_file, "profile CSV written by solve");
    mesh->add_flag("--raw", flags.raw, "mesh the immersion without displacement");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? sm::kExitOk : sm::kExitUsage;
    }

    try {
        const sm::RunConfig config = sm::load_config(flags.config_path, flags.overrides);
        if (*geometry) {
            format_or(config, sm::OutputFormat::json_report, "geometry-check");
            return finish_report(sm::cmd_geometry_check(config), config);
        }
        if (*solve) {
            return run_solve(config);
        }
        if (*verify) {
            format_or(config, sm::OutputFormat::json_report, "verify");
            return finish_report(sm::cmd_verify(config), config);
        }
        if (*mesh) {
            return run_export(config, flags);
        }
        format_or(config, sm::OutputFormat::json_report, "report");
        return finish_report(sm::cmd_report(config), config);
    } catch (const sm::InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return sm::kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return sm::kExitCheckFailed;
    }
}
