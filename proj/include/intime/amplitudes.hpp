#pragma once

#include <string>
#include <vector>

#include "intime/common.hpp"
#include "intime/oscillator.hpp"

namespace intime {

/// Reduced scattering parameters of the parametric+driven oscillator:
///   c1 = e^{i d1} (W_in/W_out)^{1/2} (1-theta)^{-1/2},
///   c2 = e^{i d2} (W_in/W_out)^{1/2} (theta/(1-theta))^{1/2},
///   d_inf = sqrt(nu) e^{i beta},   phi = (d1 + d2)/2 - beta,
///   b1 = sqrt(nu (1-theta)) e^{i phi},
///   b2 = -sqrt(nu) (e^{-i phi} - sqrt(theta) e^{i phi}).
struct ScatteringParameters {
    double theta;
    double delta1, delta2;
    double nu, beta;
    double phi;
    Complex b1, b2;
    double omega_in, omega_out;
};

/// Throws Error("inconsistent-constants") when |c1|^2 - |c2|^2 deviates from
/// Omega_in/Omega_out by more than wronskian_tol (relative).
ScatteringParameters extract_parameters(Complex c1, Complex c2, Complex d_inf, double omega_in,
                                        double omega_out, double wronskian_tol = 1e-6);

/// Two-index complex Hermite polynomial from the generating function
/// exp(s x + t y + s t) = sum H_mn(x,y) s^m t^n / (m! n!), via the recurrence
/// H_{m+1,n} = x H_{m,n} + n H_{m,n-1}, H_{0,n} = y^n. (This sign convention
/// is the one whose theta -> 0 limit reproduces the displaced-oscillator
/// Poisson/Laguerre probabilities; the direct propagation oracle confirms it.)
/// This is the zero-squeeze special case of the polynomial used by
/// transition_probability.
Complex complex_hermite(int m, int n, Complex x, Complex y);

enum class Normalization { PoissonMatched, PaperLiteral };

inline const char* normalization_name(Normalization n) {
    return n == Normalization::PoissonMatched ? "poisson-matched" : "paper-literal";
}

/// Driven-parametric transition probability
///   W_mn = pref * |K_mn|^2 * exp[-nu (1 - sqrt(theta) cos 2 phi)],
/// where K_mn is the two-variable Hermite-type polynomial generated by
///   exp[b1 s + b2 t + sqrt(1-theta) s t - (sqrt(theta)/2) s^2
///       + (sqrt(theta)/2) t^2] = sum K_mn s^m t^n / (m! n!).
/// The quadratic terms carry the parametric (squeeze) contribution; dropping
/// them (theta = 0) reduces K_mn to complex_hermite(m, n, b1, b2).  The full
/// form follows from the ladder-operator relation between in and out modes,
///   b = (Omega_out/Omega_in)^{1/2} [ conj(c1) (a + d) - c2 (a^+ + conj(d)) ],
/// and is confirmed entrywise by the direct propagation oracle in the mixed
/// theta > 0, nu > 0 regime.
/// pref = sqrt(1-theta)/(m! n!) (poisson-matched, oracle-selected default) or
/// pref = ((1-theta)/(m! n!))^{1/2} (literal variant).
/// Exact nu == 0 dispatches to the parametric closed form (the polynomial
/// route is equivalent there but the Legendre form is cheaper and stable to
/// much higher quantum numbers).
double transition_probability(const ScatteringParameters& params, int m, int n,
                              Normalization norm = Normalization::PoissonMatched);

/// Parametric-only closed form:
///   W_mn = (n_<! / n_>!) sqrt(1-theta) |P^{(n_>-n_<)/2}_{(n_>+n_<)/2}(sqrt(1-theta))|^2,
/// zero for odd m-n (parity selection).
double transition_probability_parametric(double theta, int m, int n);

enum class MatrixMode { Hermite, Legendre, Oracle };

inline const char* matrix_mode_name(MatrixMode m) {
    switch (m) {
    case MatrixMode::Hermite: return "hermite";
    case MatrixMode::Legendre: return "legendre";
    default: return "oracle";
    }
}

struct TransitionMatrix {
    int n_max;                           // column truncation
    int m_max;                           // row truncation (== n_max unless oracle margin)
    std::vector<std::vector<double>> W;  // W[m][n]
    std::vector<double> column_sums;
    double unitarity_defect;             // max_n |1 - column_sums[n]|
    MatrixMode mode;
    std::string warning;                 // non-empty when the defect exceeds the tail estimate

    void finalize();                     // fills sums/defect/warning from W
};

/// Fills W from the closed-form expressions (Hermite or Legendre mode);
/// oracle matrices are produced by oracle_matrix().
TransitionMatrix assemble_matrix(const ScatteringParameters& params, int n_max, MatrixMode mode,
                                 Normalization norm = Normalization::PoissonMatched);

struct SemiclassicalState {
    int n;
    double E_v;                   // Omega_in (n + 1/2)
    std::vector<double> z_grid;
    std::vector<Complex> values;
    double S_cl;                  // classical action at tau (real part accumulators)
    double norm;                  // integral |Psi|^2 dz on the grid
};

/// Semiclassical channel wavefunction
///   Psi(n; z, tau) = [ (W_in/pi)^{1/2} / (2^n n! |xi|) ]^{1/2}
///                    exp(i S_eff) H_n( sqrt(W_in) (z - eta) / |xi| )
/// with the effective action of the parabolic reduction (drive may be null).
/// Throws Error("focal-point") if |xi(tau)| vanishes.
SemiclassicalState evaluate_wavefunction(const FrequencyProfile& profile,
                                         const OscillatorSolution& solution,
                                         const DriveSolution* drive, int n, double tau,
                                         const std::vector<double>& z_grid);

} // namespace intime
