#pragma once

#include <optional>
#include <string>
#include <vector>

#include "intime/common.hpp"
#include "intime/geometry.hpp"
#include "intime/interp.hpp"
#include "intime/ode.hpp"

namespace intime {

/// Internal-time frequency profile Omega^2(tau) and drive F(tau).
/// Piecewise-smooth: interior discontinuities (step profiles) are recorded in
/// `breakpoints` and every consumer integrates segment by segment.
struct FrequencyProfile {
    std::vector<double> tau_grid;
    std::vector<double> omega2;
    std::vector<double> force;
    double omega_in = 0.0, omega_out = 0.0;
    std::string source;                  // "from-path" | "analytic-profile"
    std::vector<double> breakpoints;     // interior jump locations
    bool has_force = false;

    /// Collision energy and momentum backing the profile (1 and flat when the
    /// profile is purely analytic); used by wavefunction phases and dumps.
    double E_kin = 1.0;
    double hbar = 1.0;
    CubicSpline p_of_tau; // empty when analytic

    double tau_in() const { return tau_grid.front(); }
    double tau_out() const { return tau_grid.back(); }
    double omega2_at(double tau) const;
    double force_at(double tau) const;

    /// Sanity: tails flat to eps relative; throws Error("bad-asymptote").
    void check_asymptotes(double eps = 1e-8) const;

    // built by the factories below
    std::vector<CubicSpline> omega2_segments_;
    std::vector<CubicSpline> force_segments_;
    std::vector<double> segment_lo_;
    void rebuild_splines();
};

FrequencyProfile profile_constant(double omega0, double tau_span = 6.0, std::size_t n = 801);
FrequencyProfile profile_step(double omega_in, double omega_out, double tau_span = 8.0,
                              std::size_t n = 801);
/// Omega^2(tau) = (w_in^2 + w_out^2)/2 + (w_out^2 - w_in^2)/2 * tanh(tau / T).
FrequencyProfile profile_tanh(double omega_in, double omega_out, double T,
                              double tau_span = 0.0 /* 0: auto */, std::size_t n = 0 /* 0: auto */);

/// F(tau) = amplitude * exp(-(tau-center)^2 / (2 width^2)) * cos(carrier * (tau-center)).
void set_gaussian_force(FrequencyProfile& profile, double amplitude, double width, double carrier,
                        double center = 0.0);

/// Heuristic curvature-induced drive F = scale * (E_k/p)^2 * (1/rho1),
/// mapped onto the profile's tau grid. Labeled model, not derived.
void set_curvature_force(FrequencyProfile& profile, const ReactionPath& path, double scale);

/// Verbatim effective frequency of the reduced problem:
///   Omega^2(tau) = -(E_k/p)^2 [ p_vv/p + p_v^2/p^2 + 1/rho2^2 + p_uu/p + p_u^2/p^2 ]
/// evaluated on the tau grid induced by internal_time.
/// Throws Error("tachyonic-frequency") if the value is not positive.
FrequencyProfile effective_frequency(const ReactionPath& path, const CollisionSystem& system);

/// Exact reflection ratio of the tanh profile (independent closed form used
/// as a test oracle): theta = sinh^2(pi (w_out - w_in) T / 2) / sinh^2(pi (w_out + w_in) T / 2).
double tanh_profile_theta(double omega_in, double omega_out, double T);

struct XiOptions {
    double tol = 1e-10;
    double wronskian_tol = 1e-7; // relative drift budget
    double asym_eps = 1e-8;
};

/// xi'' + Omega^2(tau) xi = 0 integrated from the in-tail plane wave
/// xi = exp(i Omega_in tau); the out-tail is decomposed as
/// xi = c1 exp(i Omega_out tau) - c2 exp(-i Omega_out tau).
class OscillatorSolution {
public:
    Complex c1, c2;
    double omega_in, omega_out;
    double wronskian_drift; // max |Im(xi' xi*) - Omega_in|
    double tau_begin, tau_end;

    Complex xi(double tau) const;
    Complex xi_dot(double tau) const;
    double theta() const { return std::norm(c2 / c1); }

    OdeSolution dense;
};

OscillatorSolution solve_xi(const FrequencyProfile& profile, const XiOptions& options = {});

struct DriveSolution {
    std::vector<double> tau;
    std::vector<double> eta, eta_dot;
    std::vector<Complex> d;
    Complex d_inf;
    double nu;   // |d_inf|^2
    double beta; // arg d_inf

    double eta_at(double tau) const;
    double eta_dot_at(double tau) const;
    CubicSpline eta_spline_, eta_dot_spline_;
};

/// d(tau) = i (2 Omega_in)^{-1/2} * integral xi F dtau'  (the i makes
/// eta'' + Omega^2 eta = F hold; beta convention recorded in the manifest),
/// eta = (2 Omega_in)^{-1/2} (xi d* + xi* d).
/// Throws Error("non-integrable-drive") when F does not decay in the tails.
DriveSolution solve_eta(const FrequencyProfile& profile, const OscillatorSolution& solution);

} // namespace intime
