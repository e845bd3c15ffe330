// Acceptance gate: one line per criterion, exit code = number of failures.
// Tolerances are pinned here on purpose; loosening them is a release decision,
// not a test fix.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "intime/amplitudes.hpp"
#include "intime/geometry.hpp"
#include "intime/oracle.hpp"
#include "intime/oscillator.hpp"
#include "intime/pes.hpp"
#include "intime/scenario.hpp"

using namespace intime;
namespace fs = std::filesystem;
using nlohmann::json;
using clk = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void verdict(bool ok, int index, const char* title, const std::string& detail) {
    if (!ok) ++g_failures;
    std::printf("[%s] %2d. %s — %s\n", ok ? "PASS" : "FAIL", index, title, detail.c_str());
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

ScatteringParameters parametric_only(double theta) {
    ScatteringParameters p{};
    p.theta = theta;
    p.omega_in = 1.0;
    p.omega_out = 1.0;
    return p;
}

PotentialSurface surface_from_spec(const json& spec, double mu0) {
    const json params = spec.value("params", json::object());
    const std::string family = spec.value("family", "");
    if (family == "flat-channel")
        return PotentialSurface::flat_channel(mu0, params.value("omega0", 1.0));
    if (family == "two-channel-harmonic")
        return PotentialSurface::two_channel(mu0, params.value("omega_in", 1.0),
                                             params.value("omega_out", 1.0),
                                             params.value("L", 1.0),
                                             params.value("barrier_height", 0.0),
                                             params.value("barrier_width", 1.0));
    throw Error("domain", "unsupported surface family in acceptance config");
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& tag) {
    fs::path d = fs::temp_directory_path() / ("intime_acceptance_" + tag);
    fs::remove_all(d);
    return d;
}

// resonant gaussian pulse on a constant-frequency channel tuned to a target
// mean excitation nu
FrequencyProfile resonant_profile(double omega, double width, double nu_target) {
    const double I1 =
        0.5 * std::sqrt(2.0 * M_PI) * width *
        (1.0 + std::exp(-2.0 * omega * omega * width * width));
    const double amplitude = std::sqrt(2.0 * omega * nu_target) / I1;
    auto prof = profile_constant(omega, 24.0, 1921);
    set_gaussian_force(prof, amplitude, width, omega, 0.0);
    return prof;
}

// ---------------------------------------------------------------------------

void criterion_identity_limit() {
    auto mat = assemble_matrix(parametric_only(0.0), 10, MatrixMode::Legendre);
    double worst = 0.0;
    for (int m = 0; m <= 10; ++m)
        for (int n = 0; n <= 10; ++n)
            worst = std::max(worst, std::abs(mat.W[m][n] - (m == n ? 1.0 : 0.0)));
    verdict(worst < 1e-12, 1, "identity limit (theta = 0, nu = 0 gives W = I, n_max = 10)",
            "max deviation " + fmt(worst) + ", tol 1e-12");
}

void criterion_unitarity_truncated() {
    const double tol = 1e-6;
    bool ok = true;
    std::string detail;
    struct OracleCase {
        double theta, span, dt;
    };
    const OracleCase ocase[] = {{0.1, 8.0, 0.002}, {0.3, 8.0, 8.0 / 2400}, {0.6, 3.0, 3.0 / 4800}};
    for (const auto& c : ocase) {
        auto mat = assemble_matrix(parametric_only(c.theta), 30, MatrixMode::Legendre);
        double wp = 0.0;
        for (int n = 0; n <= 6; ++n) wp = std::max(wp, std::abs(1.0 - mat.column_sums[n]));

        const double r = (1.0 + std::sqrt(c.theta)) / (1.0 - std::sqrt(c.theta));
        auto prof = profile_step(1.0, r, c.span, 1601);
        auto om = oracle_matrix(prof, 6, GridSpec{12.0, 2048}, c.dt, 28);
        double wo = 0.0;
        for (int n = 0; n <= 6; ++n) wo = std::max(wo, std::abs(1.0 - om.column_sums[n]));

        if (wp >= tol || wo >= tol) ok = false;
        char label[16];
        std::snprintf(label, sizeof label, "%.1f", c.theta);
        detail += std::string("theta=") + label + ": closed-form " + fmt(wp) + ", oracle " +
                  fmt(wo) + "; ";
    }
    // reachable variant: the same column sums converge once the row cutoff
    // clears the physical tail of the distribution
    double demo = 0.0;
    for (double theta : {0.1, 0.3, 0.6})
        for (int n = 0; n <= 6; n += 2) {
            double sum = 0.0;
            for (int m = 0; m <= 140; ++m) sum += transition_probability_parametric(theta, m, n);
            demo = std::max(demo, std::abs(1.0 - sum));
        }
    detail += "tol 1e-6 at rows <= 30 (+4 oracle margin)";
    verdict(ok, 2, "unitarity of truncated columns n <= 6 at n_max = 30, theta in {0.1,0.3,0.6}",
            detail);
    if (!ok)
        std::printf("        note: columns carry physical tail mass beyond row 30 at theta >= 0.3\n"
                    "        (mean excitation of column 6 is ~(1+theta)/(1-theta)*6.5); the bound\n"
                    "        holds once rows reach 140: worst column deviation there %s\n",
                    fmt(demo).c_str());
}

void criterion_symmetry_parity() {
    bool ok = true;
    double worst_sym = 0.0, worst_par = 0.0;
    for (double theta : {0.2, 0.37, 0.65})
        for (int m = 0; m <= 10; ++m)
            for (int n = 0; n <= 10; ++n) {
                double a = transition_probability_parametric(theta, m, n);
                double b = transition_probability_parametric(theta, n, m);
                if (a != b) ok = false; // bitwise: same closed form both ways
                worst_sym = std::max(worst_sym, std::abs(a - b));
                if ((m - n) % 2 != 0) {
                    if (a != 0.0) ok = false;
                    worst_par = std::max(worst_par, std::abs(a));
                }
            }
    verdict(ok, 3, "detailed balance and parity (W_mn = W_nm exactly, odd m-n vanish), m,n <= 10",
            "symmetry gap " + fmt(worst_sym) + ", parity residue " + fmt(worst_par) +
                ", both required exactly 0");
}

void criterion_wronskian_consistency() {
    const double tol = 1e-8;
    bool ok = true;
    double worst = 0.0;
    int points = 0;
    std::string failures;
    const char* names[] = {"flat_channel.json", "two_channel_sweep.json",
                           "two_channel_barrier.json", "driven_pulse.json",
                           "adiabatic_family.json"};
    for (const char* name : names) {
        auto sc = Scenario::from_file(fs::path(INTIME_CONFIG_DIR) / name);
        sc.out_dir = fresh_dir(std::string("wronskian_") + name);
        sc.modes = {MatrixMode::Hermite};
        sc.n_max = std::min(sc.n_max, 4);
        auto res = run_scenario(sc);
        for (const auto& pt : res.points) {
            if (pt.status != "ok") {
                ok = false;
                failures += std::string(name) + " point failed; ";
                continue;
            }
            auto pj = json::parse(
                slurp(sc.out_dir / ("params_" + std::to_string(pt.index) + ".json")));
            std::complex<double> c1(pj["c1"][0].get<double>(), pj["c1"][1].get<double>());
            std::complex<double> c2(pj["c2"][0].get<double>(), pj["c2"][1].get<double>());
            double ratio = pj["omega_in"].get<double>() / pj["omega_out"].get<double>();
            double dev = std::abs(std::norm(c1) - std::norm(c2) - ratio);
            worst = std::max(worst, dev);
            if (dev >= tol) ok = false;
            ++points;
        }
        fs::remove_all(sc.out_dir);
    }
    verdict(ok, 4, "asymptotic-constants consistency |c1|^2 - |c2|^2 = w_in/w_out, all shipped profiles",
            failures + std::to_string(points) + " profile points, worst " + fmt(worst) +
                ", tol 1e-8");
}

void criterion_sudden_jump() {
    auto prof = profile_step(1.0, 2.0, 8.0, 1601);
    auto sol = solve_xi(prof);
    const double theta = sol.theta();
    const double dev_theta = std::abs(theta - 1.0 / 9.0);

    auto om = oracle_matrix(prof, 0, GridSpec{12.0, 1024}, 0.001, 4);
    const double p00 = om.W[0][0];
    const double dev_p00 = std::abs(p00 - 2.0 * std::sqrt(2.0) / 3.0);
    const double dev_mutual = std::abs(p00 - std::sqrt(1.0 - theta));

    bool ok = dev_theta < 1e-6 && dev_p00 < 1e-4 && dev_mutual < 1e-4;
    verdict(ok, 5, "sudden-jump closed forms (step 1 -> 2: theta = 1/9, P(0->0) = 2*sqrt(2)/3)",
            "theta dev " + fmt(dev_theta) + " (tol 1e-6), oracle P00 dev " + fmt(dev_p00) +
                " (tol 1e-4), W00 = sqrt(1-theta) dev " + fmt(dev_mutual) + " (tol 1e-4)");
}

void criterion_oracle_equivalence() {
    auto t0 = clk::now();
    struct Case {
        double omega_out, T, span;
    };
    const Case cases[] = {{2.0, 0.35, 0.0}, {4.0, 0.12, 0.0}, {9.0, 0.05, 4.0}};
    bool ok = true;
    std::string detail;
    for (const auto& c : cases) {
        auto prof = c.span > 0 ? profile_tanh(1.0, c.omega_out, c.T, c.span, 4001)
                               : profile_tanh(1.0, c.omega_out, c.T);
        auto sol = solve_xi(prof);
        auto params = extract_parameters(sol.c1, sol.c2, Complex(0.0, 0.0), sol.omega_in,
                                         sol.omega_out);
        auto cf = assemble_matrix(params, 6, MatrixMode::Legendre);
        auto om = oracle_matrix(prof, 6, GridSpec{14.0, 4096}, 0.04 / (c.omega_out * c.omega_out),
                                4);
        double worst = 0.0;
        for (int m = 0; m <= 6; ++m)
            for (int n = 0; n <= 6; ++n)
                worst = std::max(worst, std::abs(cf.W[m][n] - om.W[m][n]) /
                                            std::max({cf.W[m][n], om.W[m][n], 1e-12}));
        if (worst >= 1e-3) ok = false;
        detail += "theta=" + fmt(params.theta) + " rel " + fmt(worst) + "; ";
    }
    double seconds = std::chrono::duration<double>(clk::now() - t0).count();
    if (seconds >= 120.0) ok = false;
    char tbuf[32];
    std::snprintf(tbuf, sizeof tbuf, "%.1f", seconds);
    verdict(ok, 6, "closed form vs direct propagation, nu = 0, entries m,n <= 6",
            detail + "tol rel 1e-3, runtime " + tbuf + "s < 120s");
}

void criterion_driven_arbitration() {
    bool ok = true;
    std::string detail;
    for (double nu_target : {0.25, 1.0}) {
        auto prof = resonant_profile(1.0, 3.0, nu_target);
        auto sol = solve_xi(prof);
        auto drv = solve_eta(prof, sol);
        auto params = extract_parameters(sol.c1, sol.c2, drv.d_inf, sol.omega_in, sol.omega_out);
        auto matched = assemble_matrix(params, 6, MatrixMode::Hermite,
                                       Normalization::PoissonMatched);
        auto literal = assemble_matrix(params, 6, MatrixMode::Hermite,
                                       Normalization::PaperLiteral);
        auto om = oracle_matrix(prof, 0, GridSpec{12.0, 1024}, 0.005, 6);
        double worst_matched = 0.0, worst_literal = 0.0;
        for (int m = 0; m <= 6; ++m) {
            double denom = std::max(om.W[m][0], 1e-300);
            worst_matched = std::max(worst_matched,
                                     std::abs(matched.W[m][0] - om.W[m][0]) / denom);
            worst_literal = std::max(worst_literal,
                                     std::abs(literal.W[m][0] - om.W[m][0]) / denom);
        }
        if (worst_matched >= 1e-3) ok = false;
        if (worst_literal <= 1e-3) ok = false; // the variants must be distinguishable
        detail += "nu=" + fmt(params.nu) + ": poisson-matched rel " + fmt(worst_matched) +
                  ", paper-literal rel " + fmt(worst_literal) + "; ";
    }

    // the manifest must record the normalization convention in force
    const double I1 = 0.5 * std::sqrt(2.0 * M_PI) * 3.0 * (1.0 + std::exp(-18.0));
    json cfg = {
        {"profile",
         {{"source", "analytic-profile"},
          {"shape",
           {{"type", "constant"}, {"omega0", 1.0}, {"tau_span", 24.0}, {"n", 1921}}},
          {"force",
           {{"type", "gaussian-pulse"},
            {"amplitude", std::sqrt(0.5) / I1},
            {"width", 3.0},
            {"carrier", 1.0},
            {"center", 0.0}}}}},
        {"modes", {"hermite"}},
        {"n_max", 4}};
    auto sc = Scenario::from_json(cfg);
    sc.out_dir = fresh_dir("norm_record");
    (void)run_scenario(sc);
    auto man = json::parse(slurp(sc.out_dir / "manifest.json"));
    bool recorded = man["conventions"]["normalization"] == "poisson-matched";
    fs::remove_all(sc.out_dir);
    sc.normalization = Normalization::PaperLiteral;
    sc.out_dir = fresh_dir("norm_record_lit");
    (void)run_scenario(sc);
    auto man2 = json::parse(slurp(sc.out_dir / "manifest.json"));
    recorded = recorded && man2["conventions"]["normalization"] == "paper-literal";
    fs::remove_all(sc.out_dir);
    if (!recorded) ok = false;

    verdict(ok, 7, "driven-case normalization arbitration against the oracle, W_m0, m <= 6",
            detail + std::string("manifest records variant: ") + (recorded ? "yes" : "NO") +
                ", tol rel 1e-3");
}

void criterion_geometry() {
    auto sys = CollisionSystem::make(1.0, 1.0, 1.0, 3.0, 3.0);
    auto pes = PotentialSurface::two_channel(sys.mu0, 2.0, 4.0, 1.0);
    PathOptions opt;
    opt.u_min = -18.0;
    opt.u_max = 18.0;
    opt.n_samples = 1201;
    opt.transverse_offset = 0.15;
    auto path = ReactionPath::trace(pes, sys, opt);

    // (a) connection coefficients vs fourth-order finite differences of the
    // metric at 100 reproducible random points
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> du(-8.0, 8.0), dv(-0.4, 0.4);
    const double h = 0.01;
    double worst_gamma = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        double u = du(rng), v = dv(rng);
        auto g0 = metric_at(path, u, v);
        auto d4 = [&](bool along_u, bool of_g11) {
            auto comp = [&](double a, double b) {
                auto g = metric_at(path, a, b);
                return of_g11 ? g.g11 : g.g22;
            };
            double p1 = along_u ? comp(u + h, v) : comp(u, v + h);
            double m1 = along_u ? comp(u - h, v) : comp(u, v - h);
            double p2 = along_u ? comp(u + 2 * h, v) : comp(u, v + 2 * h);
            double m2 = along_u ? comp(u - 2 * h, v) : comp(u, v - 2 * h);
            return (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * h);
        };
        double dg[2][2][2] = {}; // dg[l][i][j] = d g_ij / d x^l, metric diagonal
        dg[0][0][0] = d4(true, true);
        dg[0][1][1] = d4(true, false);
        dg[1][0][0] = d4(false, true);
        dg[1][1][1] = d4(false, false);
        double ginv[2] = {1.0 / g0.g11, 1.0 / g0.g22};
        for (int k = 0; k < 2; ++k)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    double fd = 0.5 * ginv[k] * (dg[i][k][j] + dg[j][i][k] - dg[k][i][j]);
                    double ref = g0.christoffels[k][i][j];
                    worst_gamma = std::max(
                        worst_gamma, std::abs(ref - fd) / std::max({std::abs(ref), std::abs(fd), 1.0}));
                }
    }

    // (b) frame trajectories on a flat metric stay straight
    auto flat_sys = CollisionSystem::make(1.0, 2.0, 3.0, 0.5, 0.5);
    std::vector<PathSample> samples(801);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        double u = -20.0 + 40.0 * double(i) / double(samples.size() - 1);
        auto& s = samples[i];
        s.u = u;
        s.x = u;
        s.y = 0.0;
        s.s_u = 1.0;
        s.p = 1.0;
        s.p_u = s.p_v = s.p_uu = s.p_vv = 0.0;
    }
    auto flat = ReactionPath::from_samples(flat_sys, std::move(samples));
    FrameState init;
    init.x1 = -5.0;
    init.x2 = 0.3;
    init.v1 = 0.8;
    init.v2 = 0.12;
    FrameOptions fopt;
    fopt.mode = FrameMode::Geodesic;
    auto traj = integrate_frame(flat, init, 10.0, fopt);
    double worst_line = 0.0;
    for (int i = 0; i <= 100; ++i) {
        double t = 10.0 * double(i) / 100.0;
        auto st = traj.at(t);
        worst_line = std::max({worst_line, std::abs(st.x1 - (init.x1 + init.v1 * t)),
                               std::abs(st.x2 - (init.x2 + init.v2 * t))});
    }

    // (c) curvature-radius identities against the analytic surface
    double worst_id = 0.0;
    for (std::size_t i = 60; i < path.samples().size(); i += 37) {
        const auto& s = path.samples()[i];
        worst_id = std::max(worst_id, std::abs(s.rho2 + s.p / s.p_v) / std::abs(s.rho2));
        auto e = pes.evaluate(s.x, s.y);
        double pv_surface = -sys.mu0 * e.grad[1] / s.p;
        worst_id = std::max(worst_id,
                            std::abs(s.p_v - pv_surface) / std::max(std::abs(pv_surface), 1e-10));
        double p_energy = std::sqrt(2.0 * sys.mu0 * (sys.E_kin_in - (e.V - path.U_in())));
        worst_id = std::max(worst_id, std::abs(s.p - p_energy) / p_energy);
    }

    bool ok = worst_gamma < 1e-6 && worst_line < 1e-8 && worst_id < 1e-10;
    verdict(ok, 8, "geometry: connection vs metric FD, flat-metric straightness, radius identities",
            "FD rel " + fmt(worst_gamma) + " (tol 1e-6), line dev " + fmt(worst_line) +
                " (tol 1e-8), identity rel " + fmt(worst_id) + " (tol 1e-10)");
}

void criterion_internal_time() {
    bool ok = true;
    double worst_slope = 0.0;
    std::string detail;
    const char* names[] = {"flat_channel.json", "two_channel_sweep.json",
                           "two_channel_barrier.json"};
    for (const char* name : names) {
        auto sc = Scenario::from_file(fs::path(INTIME_CONFIG_DIR) / name);
        auto pes = surface_from_spec(sc.surface_spec, sc.system.mu0);
        auto path = ReactionPath::trace(pes, sc.system, sc.path_options);

        double u1 = sc.path_options.u_min + 0.2, u2 = sc.path_options.u_min + 0.8;
        double slope = (internal_time(path, u2) - internal_time(path, u1)) / (u2 - u1);
        double expected = path.p_minus() / sc.system.E_kin_in;
        double dev = std::abs(slope - expected) / expected;
        worst_slope = std::max(worst_slope, dev);
        if (dev >= 1e-10) ok = false;

        const auto& ss = path.samples();
        for (std::size_t i = 1; i < ss.size(); ++i)
            if (!(ss[i].tau > ss[i - 1].tau)) {
                ok = false;
                detail += std::string(name) + " tau not strictly monotone; ";
            }
    }
    verdict(ok, 9, "internal time: tail slope p_-/E_k and strict monotonicity on shipped paths",
            detail + "worst tail slope rel dev " + fmt(worst_slope) + ", tol 1e-10");
}

void criterion_adiabatic_trend() {
    double prev = 2.0;
    bool ok = true;
    std::string thetas;
    for (double T : {0.3, 0.6, 1.2, 2.4}) {
        auto sol = solve_xi(profile_tanh(1.0, 2.0, T));
        double theta = sol.theta();
        if (!(theta < prev)) ok = false;
        prev = theta;
        thetas += fmt(theta) + " ";
    }
    verdict(ok, 10, "adiabatic trend: stretching the transition by 2, 4, 8 shrinks theta strictly",
            "theta(T=0.3,0.6,1.2,2.4) = " + thetas);
}

void criterion_determinism() {
    fs::path dir_a = fresh_dir("sweep_a");
    fs::path dir_b = fresh_dir("sweep_b");
    auto invoke = [&](const fs::path& dir) {
        std::string cmd = std::string("\"") + INTIME_CLI_PATH + "\" sweep \"" + INTIME_CONFIG_DIR +
                          "/two_channel_sweep.json\" --energies 2.0,3.0,4.0 --modes legendre "
                          "--out-dir \"" +
                          dir.string() + "\" > /dev/null 2>&1";
        return std::system(cmd.c_str());
    };
    int rc_a = invoke(dir_a);
    int rc_b = invoke(dir_b);
    bool ok = rc_a == 0 && rc_b == 0;
    int compared = 0;
    std::string mismatch;
    if (ok) {
        for (const auto& entry : fs::directory_iterator(dir_a)) {
            if (entry.path().extension() != ".csv") continue;
            ++compared;
            if (slurp(entry.path()) != slurp(dir_b / entry.path().filename())) {
                ok = false;
                mismatch += entry.path().filename().string() + " differs; ";
            }
        }
        if (compared == 0) ok = false;
    }
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
    verdict(ok, 11, "determinism: two identical sweep invocations, byte-identical CSV bodies",
            mismatch + (rc_a == 0 && rc_b == 0 ? std::to_string(compared) + " CSV files compared"
                                               : "CLI exit codes " + std::to_string(rc_a) + "/" +
                                                     std::to_string(rc_b)));
}

} // namespace

int main() {
    std::printf("acceptance gate: state-to-state transition probabilities\n");
    criterion_identity_limit();
    criterion_unitarity_truncated();
    criterion_symmetry_parity();
    criterion_wronskian_consistency();
    criterion_sudden_jump();
    criterion_oracle_equivalence();
    criterion_driven_arbitration();
    criterion_geometry();
    criterion_internal_time();
    criterion_adiabatic_trend();
    criterion_determinism();
    std::printf("%d of 11 criteria failed\n", g_failures);
    return g_failures;
}
