#include "intime/oscillator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace intime {

namespace {

std::size_t segment_index(const std::vector<double>& breakpoints, double tau) {
    // a tau exactly at a jump belongs to the right-hand plateau
    return static_cast<std::size_t>(
        std::upper_bound(breakpoints.begin(), breakpoints.end(), tau) - breakpoints.begin());
}

} // namespace

void FrequencyProfile::rebuild_splines() {
    omega2_segments_.clear();
    force_segments_.clear();
    segment_lo_.clear();
    const std::size_t n_seg = breakpoints.size() + 1;
    std::vector<std::vector<double>> ts(n_seg), os(n_seg), fs(n_seg);
    for (std::size_t i = 0; i < tau_grid.size(); ++i) {
        std::size_t s = segment_index(breakpoints, tau_grid[i]);
        ts[s].push_back(tau_grid[i]);
        os[s].push_back(omega2[i]);
        fs[s].push_back(force.empty() ? 0.0 : force[i]);
    }
    for (std::size_t s = 0; s < n_seg; ++s) {
        if (ts[s].size() < 2)
            throw Error("domain", "profile segment needs at least 2 grid points");
        segment_lo_.push_back(ts[s].front());
        omega2_segments_.emplace_back(ts[s], os[s]);
        force_segments_.emplace_back(ts[s], fs[s]);
    }
}

double FrequencyProfile::omega2_at(double tau) const {
    return omega2_segments_[segment_index(breakpoints, tau)](tau);
}

double FrequencyProfile::force_at(double tau) const {
    if (!has_force) return 0.0;
    return force_segments_[segment_index(breakpoints, tau)](tau);
}

void FrequencyProfile::check_asymptotes(double eps) const {
    const std::size_t n = tau_grid.size();
    const std::size_t tail = std::max<std::size_t>(3, n / 20);
    auto flat = [&](std::size_t lo, std::size_t hi) {
        double mn = std::numeric_limits<double>::infinity(), mx = -mn;
        for (std::size_t i = lo; i < hi; ++i) {
            mn = std::min(mn, omega2[i]);
            mx = std::max(mx, omega2[i]);
        }
        return (mx - mn) <= eps * std::max(std::abs(mx), 1e-300);
    };
    if (!flat(0, tail) || !flat(n - tail, n))
        throw Error("bad-asymptote", "Omega^2(tau) not flat in the asymptotic tails");
}

FrequencyProfile profile_constant(double omega0, double tau_span, std::size_t n) {
    if (!(omega0 > 0)) throw Error("domain", "omega0 must be positive");
    if (n < 2 || !(tau_span > 0)) throw Error("domain", "bad constant-profile grid");
    FrequencyProfile pr;
    pr.source = "analytic-profile";
    pr.omega_in = pr.omega_out = omega0;
    pr.tau_grid.resize(n);
    pr.omega2.assign(n, omega0 * omega0);
    pr.force.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        pr.tau_grid[i] = -tau_span + 2.0 * tau_span * double(i) / double(n - 1);
    pr.rebuild_splines();
    return pr;
}

FrequencyProfile profile_step(double omega_in, double omega_out, double tau_span, std::size_t n) {
    if (!(omega_in > 0) || !(omega_out > 0)) throw Error("domain", "frequencies must be positive");
    if (n < 8 || !(tau_span > 0)) throw Error("domain", "bad step-profile grid");
    if (n % 2 == 0) ++n; // keep a grid point exactly on the jump
    FrequencyProfile pr;
    pr.source = "analytic-profile";
    pr.omega_in = omega_in;
    pr.omega_out = omega_out;
    pr.breakpoints = {0.0};
    pr.tau_grid.resize(n);
    pr.omega2.resize(n);
    pr.force.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double tau = -tau_span + 2.0 * tau_span * double(i) / double(n - 1);
        pr.tau_grid[i] = tau;
        pr.omega2[i] = tau < 0 ? omega_in * omega_in : omega_out * omega_out;
    }
    pr.rebuild_splines();
    return pr;
}

FrequencyProfile profile_tanh(double omega_in, double omega_out, double T, double tau_span,
                              std::size_t n) {
    if (!(omega_in > 0) || !(omega_out > 0)) throw Error("domain", "frequencies must be positive");
    if (!(T > 0)) throw Error("domain", "transition time must be positive");
    if (tau_span <= 0) tau_span = std::max(14.0 * T, 6.0 / std::min(omega_in, omega_out));
    if (n == 0)
        n = std::clamp<std::size_t>(static_cast<std::size_t>(tau_span / T * 40.0), 2001, 20001);
    FrequencyProfile pr;
    pr.source = "analytic-profile";
    pr.omega_in = omega_in;
    pr.omega_out = omega_out;
    pr.tau_grid.resize(n);
    pr.omega2.resize(n);
    pr.force.assign(n, 0.0);
    const double mid = 0.5 * (omega_in * omega_in + omega_out * omega_out);
    const double amp = 0.5 * (omega_out * omega_out - omega_in * omega_in);
    for (std::size_t i = 0; i < n; ++i) {
        double tau = -tau_span + 2.0 * tau_span * double(i) / double(n - 1);
        pr.tau_grid[i] = tau;
        pr.omega2[i] = mid + amp * std::tanh(tau / T);
    }
    pr.rebuild_splines();
    return pr;
}

void set_gaussian_force(FrequencyProfile& profile, double amplitude, double width, double carrier,
                        double center) {
    if (!(width > 0)) throw Error("domain", "force width must be positive");
    profile.force.resize(profile.tau_grid.size());
    for (std::size_t i = 0; i < profile.tau_grid.size(); ++i) {
        double t = profile.tau_grid[i] - center;
        profile.force[i] =
            amplitude * std::exp(-t * t / (2.0 * width * width)) * std::cos(carrier * t);
    }
    profile.has_force = true;
    profile.rebuild_splines();
}

void set_curvature_force(FrequencyProfile& profile, const ReactionPath& path, double scale) {
    const auto& samples = path.samples();
    std::vector<double> tau(samples.size()), f(samples.size());
    const double E_k = path.system().E_kin_in;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        tau[i] = samples[i].tau;
        double ratio = E_k / samples[i].p;
        double inv_rho1 = std::isinf(samples[i].rho1) ? 0.0 : 1.0 / samples[i].rho1;
        f[i] = scale * ratio * ratio * inv_rho1;
    }
    CubicSpline fs(tau, f);
    profile.force.resize(profile.tau_grid.size());
    for (std::size_t i = 0; i < profile.tau_grid.size(); ++i) {
        double t = std::clamp(profile.tau_grid[i], tau.front(), tau.back());
        profile.force[i] = fs(t);
    }
    profile.has_force = true;
    profile.rebuild_splines();
}

FrequencyProfile effective_frequency(const ReactionPath& path, const CollisionSystem& system) {
    const auto& samples = path.samples();
    FrequencyProfile pr;
    pr.source = "from-path";
    pr.E_kin = system.E_kin_in;
    pr.hbar = system.hbar;
    pr.tau_grid.reserve(samples.size());
    pr.omega2.reserve(samples.size());
    std::vector<double> ps;
    ps.reserve(samples.size());
    for (const auto& s : samples) {
        double ratio = system.E_kin_in / s.p;
        // 1/rho2^2 written via k2 = -p_v/p so a flat channel (p_v = 0) stays finite
        double bracket = s.p_vv / s.p + (s.p_v / s.p) * (s.p_v / s.p) + s.k2 * s.k2 +
                         s.p_uu / s.p + (s.p_u / s.p) * (s.p_u / s.p);
        double w2 = -ratio * ratio * bracket;
        if (!(w2 > 0))
            throw Error("tachyonic-frequency",
                        "Omega^2 <= 0 at tau = " + std::to_string(s.tau));
        pr.tau_grid.push_back(s.tau);
        pr.omega2.push_back(w2);
        ps.push_back(s.p);
    }
    pr.force.assign(pr.tau_grid.size(), 0.0);
    pr.omega_in = std::sqrt(pr.omega2.front());
    pr.omega_out = std::sqrt(pr.omega2.back());
    pr.p_of_tau = CubicSpline(pr.tau_grid, ps);
    pr.rebuild_splines();
    return pr;
}

double tanh_profile_theta(double omega_in, double omega_out, double T) {
    if (!(omega_in > 0) || !(omega_out > 0)) throw Error("domain", "frequencies must be positive");
    if (omega_in == omega_out) return 0.0;
    double a = std::abs(0.5 * M_PI * (omega_out - omega_in) * T);
    double b = 0.5 * M_PI * (omega_out + omega_in) * T;
    if (b == 0.0) { // sudden limit
        double r = (omega_out - omega_in) / (omega_out + omega_in);
        return r * r;
    }
    // sinh(a)/sinh(b) = e^{a-b} (1 - e^{-2a}) / (1 - e^{-2b}), stable for large b
    double log_ratio = (a - b) + std::log1p(-std::exp(-2.0 * a)) - std::log1p(-std::exp(-2.0 * b));
    double r = std::exp(log_ratio);
    return r * r;
}

Complex OscillatorSolution::xi(double tau) const {
    auto y = dense.at(tau);
    return Complex(y[0], y[1]);
}

Complex OscillatorSolution::xi_dot(double tau) const {
    auto y = dense.at(tau);
    return Complex(y[2], y[3]);
}

namespace {

struct CPair {
    Complex c1, c2;
};

CPair extract_c(const OdeSolution& dense, double tau, double omega_out) {
    auto y = dense.at(tau);
    Complex xi(y[0], y[1]), xid(y[2], y[3]);
    Complex iwt = Complex(0, 1) * omega_out * tau;
    Complex c1 = std::exp(-iwt) * (xi - Complex(0, 1) * xid / omega_out) * 0.5;
    Complex c2 = -std::exp(iwt) * (xi + Complex(0, 1) * xid / omega_out) * 0.5;
    return {c1, c2};
}

} // namespace

OscillatorSolution solve_xi(const FrequencyProfile& profile, const XiOptions& options) {
    profile.check_asymptotes(options.asym_eps);

    const double tau0 = profile.tau_in();
    const double tau1 = profile.tau_out();
    const double w_in = profile.omega_in;
    const double w_out = profile.omega_out;

    OdeRhs rhs = [&profile](double tau, const std::vector<double>& y, std::vector<double>& dy) {
        double w2 = profile.omega2_at(tau);
        dy.resize(4);
        dy[0] = y[2];
        dy[1] = y[3];
        dy[2] = -w2 * y[0];
        dy[3] = -w2 * y[1];
    };

    std::vector<double> y0 = {std::cos(w_in * tau0), std::sin(w_in * tau0),
                              -w_in * std::sin(w_in * tau0), w_in * std::cos(w_in * tau0)};

    OdeOptions oo;
    oo.rel_tol = options.tol;
    oo.abs_tol = options.tol * 1e-2;

    OscillatorSolution sol;
    sol.omega_in = w_in;
    sol.omega_out = w_out;
    sol.tau_begin = tau0;
    sol.tau_end = tau1;
    sol.dense = integrate(rhs, y0, tau0, tau1, oo);

    double drift = 0.0;
    for (const auto& st : sol.dense.steps()) {
        double w = st.y1[3] * st.y1[0] - st.y1[2] * st.y1[1]; // Im(xi' xi*)
        drift = std::max(drift, std::abs(w - w_in));
    }
    sol.wronskian_drift = drift;
    if (drift > options.wronskian_tol * w_in)
        throw Error("integration-drift",
                    "Wronskian drift " + format_sci(drift) + " exceeds budget");

    auto cs = extract_c(sol.dense, tau1, w_out);
    sol.c1 = cs.c1;
    sol.c2 = cs.c2;

    // the decomposition must be stationary over the out tail
    double back = std::min(2.0 * M_PI / w_out, 0.1 * (tau1 - tau0));
    auto cs2 = extract_c(sol.dense, tau1 - back, w_out);
    double scale = std::abs(sol.c1) + std::abs(sol.c2);
    if (std::abs(cs2.c1 - sol.c1) + std::abs(cs2.c2 - sol.c2) > 1e-4 * scale)
        throw Error("bad-asymptote", "out-channel decomposition not stationary");

    return sol;
}

double DriveSolution::eta_at(double t) const { return eta_spline_.empty() ? 0.0 : eta_spline_(t); }
double DriveSolution::eta_dot_at(double t) const {
    return eta_dot_spline_.empty() ? 0.0 : eta_dot_spline_(t);
}

DriveSolution solve_eta(const FrequencyProfile& profile, const OscillatorSolution& solution) {
    DriveSolution out;
    out.tau = profile.tau_grid;
    const std::size_t n = out.tau.size();

    double fmax = 0.0;
    for (double f : profile.force) fmax = std::max(fmax, std::abs(f));
    if (!profile.has_force || fmax == 0.0) {
        out.eta.assign(n, 0.0);
        out.eta_dot.assign(n, 0.0);
        out.d.assign(n, Complex(0, 0));
        out.d_inf = Complex(0, 0);
        out.nu = 0.0;
        out.beta = 0.0;
        out.eta_spline_ = CubicSpline(out.tau, out.eta);
        out.eta_dot_spline_ = CubicSpline(out.tau, out.eta_dot);
        return out;
    }

    const std::size_t tail = std::max<std::size_t>(3, n / 20);
    double ftail = 0.0;
    for (std::size_t i = 0; i < tail; ++i)
        ftail = std::max({ftail, std::abs(profile.force[i]), std::abs(profile.force[n - 1 - i])});
    if (ftail > 1e-6 * fmax)
        throw Error("non-integrable-drive", "drive does not decay in the asymptotic tails");

    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    const double pref = 1.0 / std::sqrt(2.0 * solution.omega_in);
    out.d.resize(n);
    out.eta.resize(n);
    out.eta_dot.resize(n);
    Complex acc(0, 0);
    auto record = [&](std::size_t i) {
        Complex d = Complex(0, 1) * pref * acc;
        out.d[i] = d;
        Complex xi = solution.xi(out.tau[i]);
        Complex xid = solution.xi_dot(out.tau[i]);
        out.eta[i] = pref * 2.0 * std::real(xi * std::conj(d));
        out.eta_dot[i] = pref * 2.0 * std::real(xid * std::conj(d));
    };
    record(0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        auto re = [&](double t) { return std::real(solution.xi(t)) * profile.force_at(t); };
        auto im = [&](double t) { return std::imag(solution.xi(t)) * profile.force_at(t); };
        acc += Complex(GK::integrate(re, out.tau[i], out.tau[i + 1], 2, 1e-12),
                       GK::integrate(im, out.tau[i], out.tau[i + 1], 2, 1e-12));
        record(i + 1);
    }
    out.d_inf = out.d.back();
    out.nu = std::norm(out.d_inf);
    out.beta = std::arg(out.d_inf);
    out.eta_spline_ = CubicSpline(out.tau, out.eta);
    out.eta_dot_spline_ = CubicSpline(out.tau, out.eta_dot);
    return out;
}

} // namespace intime
