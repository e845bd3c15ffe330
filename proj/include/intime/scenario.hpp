#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "intime/amplitudes.hpp"
#include "intime/geometry.hpp"
#include "intime/oracle.hpp"
#include "intime/oscillator.hpp"
#include "intime/pes.hpp"

namespace intime {

/// Parsed run configuration (see README for the JSON schema).
struct Scenario {
    CollisionSystem system;
    nlohmann::json surface_spec;          // empty when profile is analytic
    PathOptions path_options;
    nlohmann::json profile_spec;          // {"source": ...}
    std::vector<MatrixMode> modes;
    int n_max = 10;
    Normalization normalization = Normalization::PoissonMatched;
    std::string sweep_parameter = "energy"; // "energy" | "transition-time"
    std::vector<double> sweep_values;       // empty: single point at E_kin_in
    GridSpec oracle_grid;
    double oracle_dt = 0.0;
    int oracle_margin = 4;
    double ode_tol = 1e-10;
    double asym_tol = 1e-8;
    double wronskian_tol = 1e-6;
    int jobs = 1;
    std::filesystem::path out_dir = "out";

    static Scenario from_json(const nlohmann::json& j);
    static Scenario from_file(const std::filesystem::path& config_path);
};

struct PointResult {
    std::size_t index = 0;
    double swept_value = 0.0;
    std::string status = "ok";            // "ok" or an error code
    std::string message;
    double theta = 0.0, delta1 = 0.0, delta2 = 0.0, nu = 0.0, beta = 0.0, phi = 0.0;
    double omega_in = 0.0, omega_out = 0.0;
    double W00 = 0.0;
    double unitarity_defect = 0.0;
    double max_mode_discrepancy = 0.0;
    std::vector<std::pair<std::string, TransitionMatrix>> matrices;
};

struct RunResult {
    std::vector<PointResult> points;
    std::vector<std::string> warnings;
    std::filesystem::path out_dir;
    int exit_code = 0;
};

/// Executes the scenario: per point writes path/profile dumps, the parameter
/// record, one W-matrix CSV per mode and a cross-mode difference report, then
/// a summary CSV and a machine-readable manifest. Deterministic byte-for-byte.
RunResult run_scenario(const Scenario& scenario);

/// `sweep` entry point: scenario with the value list replaced.
RunResult run_sweep(Scenario scenario, const std::vector<double>& values);

} // namespace intime
