#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <nlohmann/json.hpp>

#include "intime/amplitudes.hpp"
#include "intime/oracle.hpp"
#include "intime/oscillator.hpp"
#include "intime/pes.hpp"
#include "intime/scenario.hpp"

namespace py = pybind11;
using namespace intime;

namespace {

py::dict point_to_dict(const PointResult& p) {
    py::dict d;
    d["index"] = p.index;
    d["value"] = p.swept_value;
    d["status"] = p.status;
    d["message"] = p.message;
    d["theta"] = p.theta;
    d["nu"] = p.nu;
    d["beta"] = p.beta;
    d["phi"] = p.phi;
    d["delta1"] = p.delta1;
    d["delta2"] = p.delta2;
    d["omega_in"] = p.omega_in;
    d["omega_out"] = p.omega_out;
    d["W00"] = p.W00;
    d["unitarity_defect"] = p.unitarity_defect;
    d["max_mode_discrepancy"] = p.max_mode_discrepancy;
    py::dict mats;
    for (const auto& [name, m] : p.matrices) mats[py::str(name)] = m;
    d["matrices"] = mats;
    return d;
}

} // namespace

PYBIND11_MODULE(_intime, m) {
    m.doc() = "Internal-time reduction of collinear reactive scattering: "
              "reaction-path geometry, effective oscillator, transition matrices.";

    // ---- masses and system ------------------------------------------------
    m.def("reduced_mass", &reduced_mass, py::arg("mA"), py::arg("mB"), py::arg("mC"),
          "sqrt(mA*mB*mC / (mA+mB+mC))");

    py::class_<CollisionSystem>(m, "CollisionSystem")
        .def_static("make", &CollisionSystem::make, py::arg("mA"), py::arg("mB"), py::arg("mC"),
                    py::arg("E"), py::arg("E_kin_in"), py::arg("hbar") = 1.0)
        .def_readonly("mA", &CollisionSystem::mA)
        .def_readonly("mB", &CollisionSystem::mB)
        .def_readonly("mC", &CollisionSystem::mC)
        .def_readonly("E", &CollisionSystem::E)
        .def_readonly("E_kin_in", &CollisionSystem::E_kin_in)
        .def_readonly("mu0", &CollisionSystem::mu0)
        .def_readonly("hbar", &CollisionSystem::hbar)
        .def("__repr__", [](const CollisionSystem& s) {
            return "CollisionSystem(mA=" + std::to_string(s.mA) + ", mB=" + std::to_string(s.mB) +
                   ", mC=" + std::to_string(s.mC) + ", E=" + std::to_string(s.E) +
                   ", E_kin_in=" + std::to_string(s.E_kin_in) + ")";
        });

    // ---- frequency profiles ------------------------------------------------
    py::class_<FrequencyProfile>(m, "FrequencyProfile")
        .def_readonly("omega_in", &FrequencyProfile::omega_in)
        .def_readonly("omega_out", &FrequencyProfile::omega_out)
        .def_readonly("source", &FrequencyProfile::source)
        .def_readonly("has_force", &FrequencyProfile::has_force)
        .def_readonly("tau_grid", &FrequencyProfile::tau_grid)
        .def_readonly("omega2", &FrequencyProfile::omega2)
        .def_readonly("force", &FrequencyProfile::force)
        .def("tau_in", &FrequencyProfile::tau_in)
        .def("tau_out", &FrequencyProfile::tau_out)
        .def("omega2_at", &FrequencyProfile::omega2_at, py::arg("tau"))
        .def("force_at", &FrequencyProfile::force_at, py::arg("tau"));

    m.def("profile_constant", &profile_constant, py::arg("omega0"), py::arg("tau_span") = 6.0,
          py::arg("n") = 801);
    m.def("profile_step", &profile_step, py::arg("omega_in"), py::arg("omega_out"),
          py::arg("tau_span") = 8.0, py::arg("n") = 801);
    m.def("profile_tanh", &profile_tanh, py::arg("omega_in"), py::arg("omega_out"), py::arg("T"),
          py::arg("tau_span") = 0.0, py::arg("n") = 0,
          "tau_span/n of 0 pick sizes from the slowest frequency.");
    m.def("set_gaussian_force", &set_gaussian_force, py::arg("profile"), py::arg("amplitude"),
          py::arg("width"), py::arg("carrier"), py::arg("center") = 0.0);
    m.def("tanh_profile_theta", &tanh_profile_theta, py::arg("omega_in"), py::arg("omega_out"),
          py::arg("T"), "Closed-form reflection ratio of the tanh profile.");

    // ---- oscillator solutions ----------------------------------------------
    py::class_<XiOptions>(m, "XiOptions")
        .def(py::init<>())
        .def_readwrite("tol", &XiOptions::tol)
        .def_readwrite("wronskian_tol", &XiOptions::wronskian_tol)
        .def_readwrite("asym_eps", &XiOptions::asym_eps);

    py::class_<OscillatorSolution>(m, "OscillatorSolution")
        .def_readonly("c1", &OscillatorSolution::c1)
        .def_readonly("c2", &OscillatorSolution::c2)
        .def_readonly("omega_in", &OscillatorSolution::omega_in)
        .def_readonly("omega_out", &OscillatorSolution::omega_out)
        .def_readonly("wronskian_drift", &OscillatorSolution::wronskian_drift)
        .def("theta", &OscillatorSolution::theta)
        .def("xi", &OscillatorSolution::xi, py::arg("tau"))
        .def("xi_dot", &OscillatorSolution::xi_dot, py::arg("tau"));

    m.def("solve_xi", &solve_xi, py::arg("profile"), py::arg("options") = XiOptions{});

    py::class_<DriveSolution>(m, "DriveSolution")
        .def_readonly("d_inf", &DriveSolution::d_inf)
        .def_readonly("nu", &DriveSolution::nu)
        .def_readonly("beta", &DriveSolution::beta)
        .def_readonly("tau", &DriveSolution::tau)
        .def_readonly("eta", &DriveSolution::eta)
        .def_readonly("eta_dot", &DriveSolution::eta_dot)
        .def("eta_at", &DriveSolution::eta_at, py::arg("tau"))
        .def("eta_dot_at", &DriveSolution::eta_dot_at, py::arg("tau"));

    m.def("solve_eta", &solve_eta, py::arg("profile"), py::arg("solution"));

    // ---- amplitudes ----------------------------------------------------------
    py::enum_<Normalization>(m, "Normalization")
        .value("PoissonMatched", Normalization::PoissonMatched)
        .value("PaperLiteral", Normalization::PaperLiteral);

    py::enum_<MatrixMode>(m, "MatrixMode")
        .value("Legendre", MatrixMode::Legendre)
        .value("Hermite", MatrixMode::Hermite)
        .value("Oracle", MatrixMode::Oracle);

    py::class_<ScatteringParameters>(m, "ScatteringParameters")
        .def(py::init([](double theta, double nu, double phi, double omega_in, double omega_out) {
                 Complex c1 = std::sqrt(1.0 / (1.0 - theta));
                 Complex c2 = std::sqrt(theta / (1.0 - theta));
                 Complex d_inf = std::polar(std::sqrt(nu), phi);
                 return extract_parameters(c1, c2, d_inf, omega_in, omega_out);
             }),
             py::arg("theta"), py::arg("nu") = 0.0, py::arg("phi") = 0.0, py::arg("omega_in") = 1.0,
             py::arg("omega_out") = 1.0,
             "Convenience constructor from real invariants (zero phases).")
        .def_readonly("theta", &ScatteringParameters::theta)
        .def_readonly("delta1", &ScatteringParameters::delta1)
        .def_readonly("delta2", &ScatteringParameters::delta2)
        .def_readonly("nu", &ScatteringParameters::nu)
        .def_readonly("beta", &ScatteringParameters::beta)
        .def_readonly("phi", &ScatteringParameters::phi)
        .def_readonly("b1", &ScatteringParameters::b1)
        .def_readonly("b2", &ScatteringParameters::b2)
        .def_readonly("omega_in", &ScatteringParameters::omega_in)
        .def_readonly("omega_out", &ScatteringParameters::omega_out);

    m.def("extract_parameters", &extract_parameters, py::arg("c1"), py::arg("c2"),
          py::arg("d_inf"), py::arg("omega_in"), py::arg("omega_out"),
          py::arg("wronskian_tol") = 1e-6);

    m.def("complex_hermite", &complex_hermite, py::arg("m"), py::arg("n"), py::arg("x"),
          py::arg("y"));
    m.def("transition_probability", &transition_probability, py::arg("params"), py::arg("m"),
          py::arg("n"), py::arg("normalization") = Normalization::PoissonMatched);
    m.def("transition_probability_parametric", &transition_probability_parametric,
          py::arg("theta"), py::arg("m"), py::arg("n"),
          "Undriven closed form (parametric Legendre series).");

    py::class_<TransitionMatrix>(m, "TransitionMatrix")
        .def_readonly("n_max", &TransitionMatrix::n_max)
        .def_readonly("m_max", &TransitionMatrix::m_max)
        .def_readonly("W", &TransitionMatrix::W)
        .def_readonly("column_sums", &TransitionMatrix::column_sums)
        .def_readonly("unitarity_defect", &TransitionMatrix::unitarity_defect)
        .def_readonly("mode", &TransitionMatrix::mode)
        .def_readonly("warning", &TransitionMatrix::warning)
        .def("__getitem__",
             [](const TransitionMatrix& t, std::pair<int, int> mn) {
                 auto [mm, nn] = mn;
                 if (mm < 0 || nn < 0 || mm > t.m_max || nn > t.n_max)
                     throw py::index_error("mode indices out of range");
                 return t.W[static_cast<std::size_t>(mm)][static_cast<std::size_t>(nn)];
             })
        .def("__repr__", [](const TransitionMatrix& t) {
            return std::string("TransitionMatrix(mode=") + matrix_mode_name(t.mode) +
                   ", m_max=" + std::to_string(t.m_max) + ", n_max=" + std::to_string(t.n_max) +
                   ")";
        });

    m.def("assemble_matrix", &assemble_matrix, py::arg("params"), py::arg("n_max"),
          py::arg("mode"), py::arg("normalization") = Normalization::PoissonMatched);

    // ---- oracle ---------------------------------------------------------------
    py::class_<GridSpec>(m, "GridSpec")
        .def(py::init<>())
        .def(py::init([](double z_span, std::size_t n_points) {
                 return GridSpec{z_span, n_points};
             }),
             py::arg("z_span"), py::arg("n_points"))
        .def_readwrite("z_span", &GridSpec::z_span)
        .def_readwrite("n_points", &GridSpec::n_points);

    m.def("oracle_matrix", &oracle_matrix, py::arg("profile"), py::arg("n_max"),
          py::arg("grid") = GridSpec{}, py::arg("dt") = 0.0, py::arg("margin") = 4,
          "Direct split-step propagation; rows extend margin modes past n_max.");

    // ---- scenarios ---------------------------------------------------------------
    m.def(
        "run_config",
        [](const std::string& json_text) {
            auto scenario = Scenario::from_json(nlohmann::json::parse(json_text));
            RunResult result = run_scenario(scenario);
            py::dict d;
            d["exit_code"] = result.exit_code;
            d["out_dir"] = result.out_dir.string();
            d["warnings"] = result.warnings;
            py::list pts;
            for (const auto& p : result.points) pts.append(point_to_dict(p));
            d["points"] = pts;
            return d;
        },
        py::arg("json_text"),
        "Parse a scenario configuration (JSON text) and execute it; returns a "
        "dict with per-point parameters and transition matrices.");

    m.def(
        "run_config_file",
        [](const std::filesystem::path& path) {
            auto scenario = Scenario::from_file(path);
            RunResult result = run_scenario(scenario);
            py::dict d;
            d["exit_code"] = result.exit_code;
            d["out_dir"] = result.out_dir.string();
            d["warnings"] = result.warnings;
            py::list pts;
            for (const auto& p : result.points) pts.append(point_to_dict(p));
            d["points"] = pts;
            return d;
        },
        py::arg("path"), "Same as run_config but reading the configuration from a file.");

    // errors surface as ValueError with the domain prefix kept
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });
}
