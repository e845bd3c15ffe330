#include "intime/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <future>
#include <sstream>

namespace intime {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

void require_object(const json& j, const char* what) {
    if (!j.is_object()) throw Error("domain", std::string(what) + " must be a JSON object");
}

// typos in config keys fail loudly instead of silently falling back to defaults
void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* what) {
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* k : allowed)
            if (item.key() == k) {
                known = true;
                break;
            }
        if (!known)
            throw Error("domain", "unknown key '" + item.key() + "' in " + what);
    }
}

void validate_surface_spec(const json& spec) {
    require_object(spec, "surface");
    check_keys(spec, {"family", "params"}, "surface");
    const std::string family = spec.value("family", "");
    const json params = spec.value("params", json::object());
    require_object(params, "surface.params");
    if (family == "flat-channel")
        check_keys(params, {"omega0"}, "surface.params");
    else if (family == "two-channel-harmonic")
        check_keys(params, {"omega_in", "omega_out", "L", "barrier_height", "barrier_width"},
                   "surface.params");
    else if (family == "custom-tabulated")
        check_keys(params, {"x_nodes", "y_nodes", "values"}, "surface.params");
    else
        throw Error("domain", "unknown surface family '" + family + "'");
}

void validate_profile_spec(const json& spec) {
    require_object(spec, "profile");
    check_keys(spec, {"source", "shape", "force"}, "profile");
    const std::string source = spec.value("source", "from-path");
    if (source != "from-path" && source != "analytic-profile")
        throw Error("domain", "unknown profile source '" + source + "'");
    if (source == "analytic-profile" && !spec.contains("shape"))
        throw Error("domain", "analytic-profile needs a shape");
    if (source == "from-path" && spec.contains("shape"))
        throw Error("domain", "from-path profiles take their shape from the traced path");
    if (spec.contains("shape")) {
        const json& shape = spec.at("shape");
        require_object(shape, "profile.shape");
        const std::string type = shape.value("type", "");
        if (type == "constant")
            check_keys(shape, {"type", "omega0", "tau_span", "n"}, "profile.shape");
        else if (type == "step")
            check_keys(shape, {"type", "omega_in", "omega_out", "tau_span", "n"}, "profile.shape");
        else if (type == "tanh")
            check_keys(shape, {"type", "omega_in", "omega_out", "T", "tau_span", "n"},
                       "profile.shape");
        else
            throw Error("domain", "unknown profile shape '" + type + "'");
    }
    if (spec.contains("force")) {
        const json& force = spec.at("force");
        require_object(force, "profile.force");
        const std::string type = force.value("type", "");
        if (type == "gaussian-pulse")
            check_keys(force, {"type", "amplitude", "width", "carrier", "center"}, "profile.force");
        else if (type == "curvature")
            check_keys(force, {"type", "scale"}, "profile.force");
        else
            throw Error("domain", "unknown force type '" + type + "'");
    }
}

PotentialSurface build_surface(const json& spec, double mu0) {
    require_object(spec, "surface");
    std::string family = spec.value("family", "");
    const json params = spec.value("params", json::object());
    if (family == "flat-channel") {
        return PotentialSurface::flat_channel(mu0, params.value("omega0", 1.0));
    }
    if (family == "two-channel-harmonic") {
        return PotentialSurface::two_channel(
            mu0, params.value("omega_in", 1.0), params.value("omega_out", 1.0),
            params.value("L", 1.0), params.value("barrier_height", 0.0),
            params.value("barrier_width", 1.0));
    }
    if (family == "custom-tabulated") {
        std::vector<double> xs = params.at("x_nodes").get<std::vector<double>>();
        std::vector<double> ys = params.at("y_nodes").get<std::vector<double>>();
        std::vector<std::vector<double>> vals =
            params.at("values").get<std::vector<std::vector<double>>>();
        return PotentialSurface::tabulated(std::move(xs), std::move(ys), std::move(vals));
    }
    throw Error("domain", "unknown surface family '" + family + "'");
}

FrequencyProfile build_analytic_profile(const json& spec, double swept_T, bool use_swept_T) {
    const json shape = spec.value("shape", json::object());
    std::string type = shape.value("type", "");
    double span = shape.value("tau_span", 0.0);
    std::size_t n = shape.value("n", std::size_t(0));
    if (type == "constant") {
        return profile_constant(shape.value("omega0", 1.0), span > 0 ? span : 6.0,
                                n > 0 ? n : 801);
    }
    if (type == "step") {
        return profile_step(shape.value("omega_in", 1.0), shape.value("omega_out", 1.0),
                            span > 0 ? span : 8.0, n > 0 ? n : 801);
    }
    if (type == "tanh") {
        double T = use_swept_T ? swept_T : shape.value("T", 1.0);
        return profile_tanh(shape.value("omega_in", 1.0), shape.value("omega_out", 1.0), T, span,
                            n);
    }
    throw Error("domain", "unknown profile shape '" + type + "'");
}

void apply_force(FrequencyProfile& profile, const json& spec, const ReactionPath* path) {
    if (!spec.contains("force")) return;
    const json force = spec.at("force");
    std::string type = force.value("type", "");
    if (type == "gaussian-pulse") {
        set_gaussian_force(profile, force.value("amplitude", 0.0), force.value("width", 1.0),
                           force.value("carrier", 0.0), force.value("center", 0.0));
        return;
    }
    if (type == "curvature") {
        if (path == nullptr)
            throw Error("domain", "curvature force needs a from-path profile");
        set_curvature_force(profile, *path, force.value("scale", 1.0));
        return;
    }
    throw Error("domain", "unknown force type '" + type + "'");
}

std::string csv_cell(double x) { return format_sci(x); }

void write_matrix_csv(const std::filesystem::path& file, const TransitionMatrix& mat,
                      const ScatteringParameters& params, Normalization norm) {
    std::ofstream out(file);
    out << "# mode," << matrix_mode_name(mat.mode) << "\n";
    out << "# normalization," << normalization_name(norm) << "\n";
    out << "# theta," << csv_cell(params.theta) << "\n";
    out << "# nu," << csv_cell(params.nu) << "\n";
    out << "# phi," << csv_cell(params.phi) << "\n";
    out << "m\\n";
    for (int n = 0; n <= mat.n_max; ++n) out << "," << n;
    out << "\n";
    for (int m = 0; m <= mat.m_max; ++m) {
        out << m;
        for (int n = 0; n <= mat.n_max; ++n) out << "," << csv_cell(mat.W[m][n]);
        out << "\n";
    }
    out << "sum";
    for (double s : mat.column_sums) out << "," << csv_cell(s);
    out << "\n";
    out << "# unitarity_defect," << csv_cell(mat.unitarity_defect) << "\n";
    if (!mat.warning.empty()) out << "# warning," << mat.warning << "\n";
}

void write_path_csv(const std::filesystem::path& file, const ReactionPath& path) {
    auto rep = quasiclassical_report(path);
    std::ofstream out(file);
    out << "u,x,y,p,rho1,rho2,lambda1,tau,ratio1,ratio2,ratio_product\n";
    const auto& ss = path.samples();
    for (std::size_t i = 0; i < ss.size(); ++i) {
        out << csv_cell(ss[i].u) << "," << csv_cell(ss[i].x) << "," << csv_cell(ss[i].y) << ","
            << csv_cell(ss[i].p) << "," << csv_cell(ss[i].rho1) << "," << csv_cell(ss[i].rho2)
            << "," << csv_cell(ss[i].lambda1) << "," << csv_cell(ss[i].tau) << ","
            << csv_cell(rep.ratio1[i]) << "," << csv_cell(rep.ratio2[i]) << ","
            << csv_cell(rep.product[i]) << "\n";
    }
}

void write_profile_csv(const std::filesystem::path& file, const FrequencyProfile& profile,
                       const OscillatorSolution& sol) {
    std::ofstream out(file);
    out << "tau,omega2,F,Re_xi,Im_xi\n";
    for (std::size_t i = 0; i < profile.tau_grid.size(); ++i) {
        double tau = profile.tau_grid[i];
        Complex xi = sol.xi(tau);
        out << csv_cell(tau) << "," << csv_cell(profile.omega2[i]) << ","
            << csv_cell(profile.force.empty() ? 0.0 : profile.force[i]) << ","
            << csv_cell(xi.real()) << "," << csv_cell(xi.imag()) << "\n";
    }
}

struct PointFiles {
    std::vector<std::string> names;
};

PointResult eval_point(const Scenario& cfg, std::size_t index, double value, bool is_sweep_T,
                       PointFiles& files) {
    PointResult res;
    res.index = index;
    res.swept_value = value;
    try {
        CollisionSystem sys = cfg.system;
        std::optional<ReactionPath> path;
        FrequencyProfile profile;
        const std::string source = cfg.profile_spec.value("source", "from-path");

        if (source == "from-path") {
            if (!is_sweep_T) {
                double offset = cfg.system.E - cfg.system.E_kin_in;
                sys = CollisionSystem::make(cfg.system.mA, cfg.system.mB, cfg.system.mC,
                                            value + offset, value, cfg.system.hbar);
            }
            PotentialSurface surface = build_surface(cfg.surface_spec, sys.mu0);
            path = ReactionPath::trace(surface, sys, cfg.path_options);
            profile = effective_frequency(*path, sys);
        } else if (source == "analytic-profile") {
            profile = build_analytic_profile(cfg.profile_spec, value, is_sweep_T);
        } else {
            throw Error("domain", "unknown profile source '" + source + "'");
        }
        apply_force(profile, cfg.profile_spec, path ? &*path : nullptr);

        XiOptions xo;
        xo.tol = cfg.ode_tol;
        xo.wronskian_tol = 0.1 * cfg.wronskian_tol;
        xo.asym_eps = cfg.asym_tol;
        OscillatorSolution sol = solve_xi(profile, xo);
        DriveSolution drive = solve_eta(profile, sol);
        ScatteringParameters params = extract_parameters(sol.c1, sol.c2, drive.d_inf,
                                                         sol.omega_in, sol.omega_out,
                                                         cfg.wronskian_tol);
        res.theta = params.theta;
        res.delta1 = params.delta1;
        res.delta2 = params.delta2;
        res.nu = params.nu;
        res.beta = params.beta;
        res.phi = params.phi;
        res.omega_in = params.omega_in;
        res.omega_out = params.omega_out;

        for (MatrixMode mode : cfg.modes) {
            TransitionMatrix mat =
                mode == MatrixMode::Oracle
                    ? oracle_matrix(profile, cfg.n_max, cfg.oracle_grid, cfg.oracle_dt,
                                    cfg.oracle_margin)
                    : assemble_matrix(params, cfg.n_max, mode, cfg.normalization);
            res.matrices.emplace_back(matrix_mode_name(mode), std::move(mat));
        }
        if (!res.matrices.empty()) {
            res.W00 = res.matrices.front().second.W[0][0];
            res.unitarity_defect = res.matrices.front().second.unitarity_defect;
        }

        // cross-mode agreement over the low corner of the matrix
        res.max_mode_discrepancy = 0.0;
        const int cmp = std::min(6, cfg.n_max);
        for (std::size_t a = 0; a < res.matrices.size(); ++a)
            for (std::size_t b = a + 1; b < res.matrices.size(); ++b)
                for (int m = 0; m <= cmp; ++m)
                    for (int n = 0; n <= cmp; ++n) {
                        double wa = res.matrices[a].second.W[m][n];
                        double wb = res.matrices[b].second.W[m][n];
                        double d = std::abs(wa - wb) / std::max({wa, wb, 1e-6});
                        res.max_mode_discrepancy = std::max(res.max_mode_discrepancy, d);
                    }

        // per-point artifacts
        const std::string suffix = "_" + std::to_string(index);
        if (path) {
            write_path_csv(cfg.out_dir / ("path" + suffix + ".csv"), *path);
            files.names.push_back("path" + suffix + ".csv");
        }
        write_profile_csv(cfg.out_dir / ("profile" + suffix + ".csv"), profile, sol);
        files.names.push_back("profile" + suffix + ".csv");
        for (const auto& [name, mat] : res.matrices) {
            std::string fname = "W_" + name + suffix + ".csv";
            write_matrix_csv(cfg.out_dir / fname, mat, params, cfg.normalization);
            files.names.push_back(fname);
        }
        if (res.matrices.size() > 1) {
            std::string fname = "crossmode" + suffix + ".csv";
            std::ofstream out(cfg.out_dir / fname);
            out << "mode_a,mode_b,m,n,w_a,w_b,discrepancy\n";
            for (std::size_t a = 0; a < res.matrices.size(); ++a)
                for (std::size_t b = a + 1; b < res.matrices.size(); ++b)
                    for (int m = 0; m <= cmp; ++m)
                        for (int n = 0; n <= cmp; ++n) {
                            double wa = res.matrices[a].second.W[m][n];
                            double wb = res.matrices[b].second.W[m][n];
                            double d = std::abs(wa - wb) / std::max({wa, wb, 1e-6});
                            out << res.matrices[a].first << "," << res.matrices[b].first << ","
                                << m << "," << n << "," << csv_cell(wa) << "," << csv_cell(wb)
                                << "," << csv_cell(d) << "\n";
                        }
            files.names.push_back(fname);
        }

        ordered_json pj;
        pj["index"] = index;
        pj["value"] = value;
        pj["status"] = "ok";
        pj["theta"] = params.theta;
        pj["delta1"] = params.delta1;
        pj["delta2"] = params.delta2;
        pj["nu"] = params.nu;
        pj["beta"] = params.beta;
        pj["phi"] = params.phi;
        pj["omega_in"] = params.omega_in;
        pj["omega_out"] = params.omega_out;
        pj["c1"] = {sol.c1.real(), sol.c1.imag()};
        pj["c2"] = {sol.c2.real(), sol.c2.imag()};
        pj["wronskian_drift"] = sol.wronskian_drift;
        pj["W00"] = res.W00;
        pj["unitarity_defect"] = res.unitarity_defect;
        pj["max_mode_discrepancy"] = res.max_mode_discrepancy;
        std::ofstream pout(cfg.out_dir / ("params" + suffix + ".json"));
        pout << pj.dump(2) << "\n";
        files.names.push_back("params" + suffix + ".json");
    } catch (const Error& e) {
        res.status = e.code();
        res.message = e.what();
    }
    return res;
}

ordered_json effective_config(const Scenario& s) {
    ordered_json j;
    j["system"] = {{"mA", s.system.mA},         {"mB", s.system.mB},
                   {"mC", s.system.mC},         {"E", s.system.E},
                   {"E_kin_in", s.system.E_kin_in}, {"hbar", s.system.hbar}};
    j["surface"] = s.surface_spec.is_null() ? json(nullptr) : s.surface_spec;
    j["path"] = {{"u_min", s.path_options.u_min},
                 {"u_max", s.path_options.u_max},
                 {"n_samples", s.path_options.n_samples},
                 {"transverse_offset", s.path_options.transverse_offset},
                 {"caustic_eps", s.path_options.caustic_eps},
                 {"chart_rho2_threshold", s.path_options.chart_rho2_threshold}};
    j["profile"] = s.profile_spec;
    ordered_json modes = ordered_json::array();
    for (auto m : s.modes) modes.push_back(matrix_mode_name(m));
    j["modes"] = modes;
    j["n_max"] = s.n_max;
    j["normalization"] = normalization_name(s.normalization);
    j["sweep"] = {{"parameter", s.sweep_parameter}, {"values", s.sweep_values}};
    j["oracle"] = {{"n_points", s.oracle_grid.n_points},
                   {"z_span", s.oracle_grid.z_span},
                   {"dt", s.oracle_dt},
                   {"margin", s.oracle_margin}};
    j["tolerances"] = {{"ode", s.ode_tol}, {"asym", s.asym_tol}, {"wronskian", s.wronskian_tol}};
    j["jobs"] = s.jobs;
    j["output"] = {{"dir", s.out_dir.string()}};
    return j;
}

void write_summary(const Scenario& cfg, const std::vector<PointResult>& points) {
    std::vector<std::size_t> order(points.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return points[a].swept_value < points[b].swept_value;
    });
    std::ofstream out(cfg.out_dir / "summary.csv");
    const char* first = cfg.sweep_parameter == "transition-time" ? "T" : "E_k";
    out << first << ",theta,W_00,unitarity_defect,max_mode_discrepancy,status\n";
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i : order) {
        const auto& p = points[i];
        bool ok = p.status == "ok";
        out << csv_cell(p.swept_value) << "," << csv_cell(ok ? p.theta : nan) << ","
            << csv_cell(ok ? p.W00 : nan) << "," << csv_cell(ok ? p.unitarity_defect : nan) << ","
            << csv_cell(ok ? p.max_mode_discrepancy : nan) << "," << p.status << "\n";
    }
}

void write_manifest(const Scenario& cfg, const std::vector<PointResult>& points,
                    const std::vector<PointFiles>& files, const std::vector<std::string>& warnings) {
    ordered_json man;
    man["tool"] = "intime";
    man["version"] = "0.1.0";
    man["config"] = effective_config(cfg);
    man["conventions"] = {
        {"normalization", normalization_name(cfg.normalization)},
        {"drive_phase", "d(tau) = i (2 Omega_in)^{-1/2} integral xi F dtau"},
        {"nu_zero",
         "exact nu == 0 dispatches the driven formula to the parametric closed form"}};
    ordered_json pts = ordered_json::array();
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        ordered_json pj;
        pj["index"] = p.index;
        pj["value"] = p.swept_value;
        pj["status"] = p.status;
        if (!p.message.empty()) pj["message"] = p.message;
        if (p.status == "ok") {
            pj["theta"] = p.theta;
            pj["nu"] = p.nu;
            pj["omega_in"] = p.omega_in;
            pj["omega_out"] = p.omega_out;
            pj["W00"] = p.W00;
            pj["unitarity_defect"] = p.unitarity_defect;
            pj["max_mode_discrepancy"] = p.max_mode_discrepancy;
        }
        pj["files"] = files[i].names;
        pts.push_back(pj);
    }
    man["points"] = pts;
    man["warnings"] = warnings;
    std::ofstream out(cfg.out_dir / "manifest.json");
    out << man.dump(2) << "\n";
}

} // namespace

Scenario Scenario::from_json(const nlohmann::json& j) {
    try {
        require_object(j, "config");
        check_keys(j,
                   {"system", "surface", "path", "profile", "modes", "n_max", "normalization",
                    "sweep", "oracle", "tolerances", "jobs", "output"},
                   "config");
        Scenario s;
        if (j.contains("system")) {
            const json& sys = j.at("system");
            require_object(sys, "system");
            check_keys(sys, {"mA", "mB", "mC", "E", "E_kin_in", "hbar"}, "system");
            s.system = CollisionSystem::make(sys.value("mA", 1.0), sys.value("mB", 1.0),
                                             sys.value("mC", 1.0), sys.value("E", 2.0),
                                             sys.value("E_kin_in", 1.0), sys.value("hbar", 1.0));
        } else {
            s.system = CollisionSystem::make(1.0, 1.0, 1.0, 2.0, 1.0, 1.0);
        }
        s.surface_spec = j.value("surface", json(nullptr));
        if (!s.surface_spec.is_null()) validate_surface_spec(s.surface_spec);
        if (j.contains("path")) {
            const json& p = j.at("path");
            require_object(p, "path");
            check_keys(p,
                       {"u_min", "u_max", "n_samples", "transverse_offset", "caustic_eps",
                        "chart_rho2_threshold"},
                       "path");
            s.path_options.u_min = p.value("u_min", s.path_options.u_min);
            s.path_options.u_max = p.value("u_max", s.path_options.u_max);
            s.path_options.n_samples = p.value("n_samples", s.path_options.n_samples);
            s.path_options.transverse_offset =
                p.value("transverse_offset", s.path_options.transverse_offset);
            s.path_options.caustic_eps = p.value("caustic_eps", s.path_options.caustic_eps);
            s.path_options.chart_rho2_threshold =
                p.value("chart_rho2_threshold", s.path_options.chart_rho2_threshold);
        }
        s.profile_spec = j.value("profile", json({{"source", "from-path"}}));
        validate_profile_spec(s.profile_spec);
        if (j.contains("modes")) {
            if (!j.at("modes").is_array())
                throw Error("domain", "modes must be an array of mode names");
            for (const auto& m : j.at("modes")) {
                std::string name = m.get<std::string>();
                if (name == "hermite")
                    s.modes.push_back(MatrixMode::Hermite);
                else if (name == "legendre")
                    s.modes.push_back(MatrixMode::Legendre);
                else if (name == "oracle")
                    s.modes.push_back(MatrixMode::Oracle);
                else
                    throw Error("domain", "unknown mode '" + name + "'");
            }
        } else {
            s.modes = {MatrixMode::Hermite};
        }
        s.n_max = j.value("n_max", 10);
        if (s.n_max < 0) throw Error("domain", "n_max must be non-negative");
        std::string norm = j.value("normalization", "poisson-matched");
        if (norm == "poisson-matched")
            s.normalization = Normalization::PoissonMatched;
        else if (norm == "paper-literal")
            s.normalization = Normalization::PaperLiteral;
        else
            throw Error("domain", "unknown normalization '" + norm + "'");
        if (j.contains("sweep")) {
            const json& sw = j.at("sweep");
            require_object(sw, "sweep");
            check_keys(sw, {"parameter", "values"}, "sweep");
            s.sweep_parameter = sw.value("parameter", "energy");
            if (s.sweep_parameter != "energy" && s.sweep_parameter != "transition-time")
                throw Error("domain", "unknown sweep parameter '" + s.sweep_parameter + "'");
            if (sw.contains("values")) s.sweep_values = sw.at("values").get<std::vector<double>>();
        }
        if (s.sweep_parameter == "transition-time" &&
            s.profile_spec.value("source", "from-path") != "analytic-profile")
            throw Error("domain", "transition-time sweep needs an analytic tanh profile");
        if (j.contains("oracle")) {
            const json& o = j.at("oracle");
            require_object(o, "oracle");
            check_keys(o, {"n_points", "z_span", "dt", "margin"}, "oracle");
            s.oracle_grid.n_points = o.value("n_points", s.oracle_grid.n_points);
            s.oracle_grid.z_span = o.value("z_span", s.oracle_grid.z_span);
            s.oracle_dt = o.value("dt", 0.0);
            s.oracle_margin = o.value("margin", 4);
        }
        if (j.contains("tolerances")) {
            const json& t = j.at("tolerances");
            require_object(t, "tolerances");
            check_keys(t, {"ode", "asym", "wronskian"}, "tolerances");
            s.ode_tol = t.value("ode", s.ode_tol);
            s.asym_tol = t.value("asym", s.asym_tol);
            s.wronskian_tol = t.value("wronskian", s.wronskian_tol);
        }
        s.jobs = j.value("jobs", 1);
        if (s.jobs < 1) throw Error("domain", "jobs must be >= 1");
        if (j.contains("output")) {
            const json& o = j.at("output");
            require_object(o, "output");
            check_keys(o, {"dir"}, "output");
            s.out_dir = o.value("dir", "out");
        }
        return s;
    } catch (const json::exception& e) {
        throw Error("domain", std::string("config error: ") + e.what());
    }
}

Scenario Scenario::from_file(const std::filesystem::path& config_path) {
    std::ifstream in(config_path);
    if (!in) throw Error("domain", "cannot open config file " + config_path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i)
            if (text[i] == '\n') ++line;
        throw Error("domain", config_path.string() + ":" + std::to_string(line) + ": " + e.what());
    }
    return from_json(j);
}

RunResult run_scenario(const Scenario& scenario) {
    RunResult result;
    result.out_dir = scenario.out_dir;
    std::filesystem::create_directories(scenario.out_dir);

    const bool is_sweep_T = scenario.sweep_parameter == "transition-time";
    std::vector<double> values = scenario.sweep_values;
    if (values.empty()) {
        values.push_back(is_sweep_T ? scenario.profile_spec.value("shape", nlohmann::json::object())
                                          .value("T", 1.0)
                                    : scenario.system.E_kin_in);
    }

    {
        std::vector<double> sorted = values;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            result.warnings.push_back("sweep contains duplicate values");
    }

    std::vector<PointResult> points(values.size());
    std::vector<PointFiles> files(values.size());
    const int jobs = std::max(1, std::min<int>(scenario.jobs, int(values.size())));
    if (jobs == 1) {
        for (std::size_t i = 0; i < values.size(); ++i)
            points[i] = eval_point(scenario, i, values[i], is_sweep_T, files[i]);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= values.size()) break;
                points[i] = eval_point(scenario, i, values[i], is_sweep_T, files[i]);
            }
        };
        std::vector<std::future<void>> pool;
        for (int w = 0; w < jobs; ++w) pool.push_back(std::async(std::launch::async, worker));
        for (auto& f : pool) f.get();
    }

    std::size_t failed = 0;
    for (const auto& p : points)
        if (p.status != "ok") {
            ++failed;
            result.warnings.push_back("point " + std::to_string(p.index) + " failed: " +
                                      p.message);
        }

    write_summary(scenario, points);
    write_manifest(scenario, points, files, result.warnings);
    result.points = std::move(points);
    result.exit_code = (!result.points.empty() && failed == result.points.size()) ? 1 : 0;
    return result;
}

RunResult run_sweep(Scenario scenario, const std::vector<double>& values) {
    if (values.empty()) {
        RunResult result;
        result.out_dir = scenario.out_dir;
        std::filesystem::create_directories(scenario.out_dir);
        result.warnings.push_back("empty sweep: no points evaluated");
        scenario.sweep_values.clear();
        write_summary(scenario, {});
        write_manifest(scenario, {}, {}, result.warnings);
        result.exit_code = 0;
        return result;
    }
    scenario.sweep_values = values;
    return run_scenario(scenario);
}

} // namespace intime
