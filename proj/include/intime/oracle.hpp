#pragma once

#include <vector>

#include "intime/amplitudes.hpp"
#include "intime/common.hpp"
#include "intime/oscillator.hpp"

namespace intime {

/// Uniform transverse grid z in [-z_span, z_span) / sqrt(Omega_min), N points
/// (half-open for FFT periodicity).
struct GridSpec {
    double z_span = 12.0;
    std::size_t n_points = 2048;
};

struct GridWavefunction {
    std::vector<double> z;
    std::vector<Complex> psi;
    double tau;
    double norm;
    double dz;
};

/// n-th eigenstate of the frequency-omega oscillator on the given grid,
/// by the stable Hermite-function recurrence.
std::vector<double> oscillator_eigenstate(int n, double omega, const std::vector<double>& z);

/// Direct unitary propagation of i d_tau psi = [-1/2 d_z^2 + 1/2 Omega^2(tau) z^2 - F(tau) z] psi
/// from the n_in-th in-channel eigenstate at tau_in to tau_out, by Strang-split
/// spectral steps (norm-exact per step; second order in dt).
/// dt <= 0 picks the default 0.01 / Omega_max.
/// Throws Error("grid-too-small") on boundary contamination and
/// Error("nonunitary-step") on norm drift above 1e-6.
GridWavefunction propagate(const FrequencyProfile& profile, int n_in, const GridSpec& grid = {},
                           double dt = 0.0);

/// S_mn = <out eigenstate m | propagated state n> by quadrature over z;
/// W = |S|^2 with rows m <= n_max + margin, columns n <= n_max.
TransitionMatrix oracle_matrix(const FrequencyProfile& profile, int n_max,
                               const GridSpec& grid = {}, double dt = 0.0, int margin = 4);

} // namespace intime
