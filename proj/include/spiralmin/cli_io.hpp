#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spiralmin/graph_solver.hpp"
#include "spiralmin/grid_function.hpp"
#include "spiralmin/jet.hpp"

namespace spiralmin {

enum class OutputFormat { obj, csv, json_report };

std::string to_string(OutputFormat format);
/// Accepts "obj", "csv" and "json-report".
OutputFormat parse_format(const std::string& text);

struct RunConfig {
    SolverConfig solver;
    double theta_min = 0.0;
    double theta_max = 12.566370614359172;  // two full turns
    std::size_t mesh_n_s = 50;
    std::size_t mesh_n_theta = 200;
    std::string output;                 // empty: command default
    std::optional<OutputFormat> format; // empty: command default

    /// Throws InvalidArgument whose message starts with the offending key.
    void validate() const;
};

/// Values given on the command line. Each set field overrides the file.
struct ConfigOverrides {
    std::optional<double> delta, epsilon, zeta, alpha, tol_residual, tol_step, theta_min, theta_max;
    std::optional<std::size_t> grid_n, mesh_n_s, mesh_n_theta;
    std::optional<int> max_iters;
    std::optional<std::string> output, format;
};

/// Reads a flat JSON object (an empty file means all defaults), applies the
/// overrides and validates. Unknown keys, wrong value types and out-of-range
/// values throw InvalidArgument naming the key.
RunConfig load_config(const std::optional<std::string>& path, const ConfigOverrides& overrides = {});
RunConfig parse_config(const std::string& json_text, const ConfigOverrides& overrides = {});

enum class Relation { at_most, less_than, greater_than, within };

struct CheckResult {
    std::string name;
    double value = 0;
    Relation relation = Relation::at_most;
    double target = 0;     // only used by `within`
    double tolerance = 0;  // bound, or allowed |value - target|
    bool passed = false;
    std::string provenance;  // "paper-claim" or "derived-constant"
};

CheckResult check_at_most(std::string name, double value, double bound, std::string provenance);
CheckResult check_less_than(std::string name, double value, double bound, std::string provenance);
CheckResult check_greater_than(std::string name, double value, double bound, std::string provenance);
CheckResult check_within(std::string name, double value, double target, double tolerance, std::string provenance);

struct Report {
    std::string command;
    std::vector<CheckResult> checks;
    std::vector<std::string> notes;
    std::vector<std::pair<std::string, std::vector<double>>> series;

    bool all_passed() const;
    std::vector<std::string> failed() const;
    void append(const Report& other);

    /// Fixed key order, no timestamps; identical input gives identical bytes.
    std::string to_json(const RunConfig& config) const;
    /// One line per check and note.
    std::string to_text() const;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDiverged = 3;

Report cmd_geometry_check(const RunConfig& config);

struct SolveOutcome {
    Report report;
    std::optional<SolveResult> result;  // empty when the iteration diverged
    std::vector<double> residual_history;
    int exit_code = kExitOk;
};

/// Runs the solver and certifies the result. Never throws Diverged; a
/// diverged run yields exit code 3 with the history kept in the report.
SolveOutcome cmd_solve(const RunConfig& config);

/// Geometry of the blowup law, helicoid limit, embeddedness of the solved
/// graph and the lemma-constant probe.
Report cmd_verify(const RunConfig& config);

/// cmd_geometry_check followed by cmd_verify in one report.
Report cmd_report(const RunConfig& config);

/// Columns s,u,du,ddu,Q with 17 significant digits.
std::string profile_csv(const GridFunction& u, double delta);
/// Rebuilds the profile from the s and u columns of profile_csv output.
GridFunction parse_profile_csv(const std::string& text);

struct Mesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<std::size_t, 3>> faces;  // 1-based
};

/// Grid of graph points over [-S, S] x [theta_min, theta_max], two triangles
/// per quad, oriented so face normals point to the side of the surface normal.
/// A null profile meshes G itself over the configured solver domain.
Mesh build_mesh(const RunConfig& config, const GridFunction* u);
std::string mesh_obj(const Mesh& mesh);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace spiralmin
