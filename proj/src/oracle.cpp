#include "intime/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include <fftw3.h>

namespace intime {

namespace {

std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

struct FftPair {
    fftw_plan fwd = nullptr, bwd = nullptr;

    FftPair(std::vector<Complex>& buf) {
        auto* p = reinterpret_cast<fftw_complex*>(buf.data());
        std::lock_guard<std::mutex> lock(fftw_mutex());
        int n = static_cast<int>(buf.size());
        fwd = fftw_plan_dft_1d(n, p, p, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_1d(n, p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~FftPair() {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
    }
    FftPair(const FftPair&) = delete;
    FftPair& operator=(const FftPair&) = delete;
};

double max_abs(const std::vector<Complex>& v) {
    double m = 0.0;
    for (const auto& c : v) m = std::max(m, std::abs(c));
    return m;
}

} // namespace

std::vector<double> oscillator_eigenstate(int n, double omega, const std::vector<double>& z) {
    if (n < 0) throw Error("domain", "quantum number must be non-negative");
    if (!(omega > 0)) throw Error("domain", "omega must be positive");
    std::vector<double> phi(z.size()), prev(z.size(), 0.0);
    const double a = std::pow(omega / M_PI, 0.25);
    for (std::size_t i = 0; i < z.size(); ++i) {
        double xt = std::sqrt(omega) * z[i];
        phi[i] = a * std::exp(-0.5 * xt * xt);
    }
    for (int k = 0; k < n; ++k) {
        std::vector<double> next(z.size());
        double c1 = std::sqrt(2.0 / (k + 1.0));
        double c2 = std::sqrt(k / (k + 1.0));
        for (std::size_t i = 0; i < z.size(); ++i) {
            double xt = std::sqrt(omega) * z[i];
            next[i] = c1 * xt * phi[i] - c2 * prev[i];
        }
        prev = std::move(phi);
        phi = std::move(next);
    }
    return phi;
}

GridWavefunction propagate(const FrequencyProfile& profile, int n_in, const GridSpec& grid,
                           double dt) {
    if (grid.n_points < 16 || grid.n_points % 2 != 0)
        throw Error("domain", "grid size must be even and >= 16");
    if (!(grid.z_span > 0)) throw Error("domain", "z_span must be positive");

    const double w_min = std::min(profile.omega_in, profile.omega_out);
    const double scale = 1.0 / std::sqrt(w_min);
    const std::size_t N = grid.n_points;
    const double dz = 2.0 * grid.z_span * scale / double(N);

    GridWavefunction out;
    out.z.resize(N);
    for (std::size_t i = 0; i < N; ++i) out.z[i] = -grid.z_span * scale + double(i) * dz;
    out.dz = dz;

    double w_max2 = 0.0;
    for (double w2 : profile.omega2) w_max2 = std::max(w_max2, w2);
    if (dt <= 0) dt = 0.01 / std::sqrt(w_max2);

    const double tau0 = profile.tau_in(), tau1 = profile.tau_out();
    const std::size_t n_steps = std::max<std::size_t>(1, std::size_t(std::ceil((tau1 - tau0) / dt)));
    dt = (tau1 - tau0) / double(n_steps);

    auto phi0 = oscillator_eigenstate(n_in, profile.omega_in, out.z);
    std::vector<Complex> psi(N);
    for (std::size_t i = 0; i < N; ++i) psi[i] = Complex(phi0[i], 0.0);

    FftPair plans(psi);

    // kinetic phase per full step, from the FFT wavenumbers
    std::vector<Complex> expT(N);
    for (std::size_t j = 0; j < N; ++j) {
        double k = 2.0 * M_PI * (j < N / 2 ? double(j) : double(j) - double(N)) / (dz * double(N));
        expT[j] = std::exp(Complex(0, -0.5 * k * k * dt));
    }

    std::vector<Complex> expVh(N);
    const double inv_n = 1.0 / double(N);
    auto boundary_ok = [&]() {
        double m = max_abs(psi);
        for (std::size_t i = 0; i < 3; ++i)
            if (std::abs(psi[i]) > 1e-10 * m || std::abs(psi[N - 1 - i]) > 1e-10 * m)
                return false;
        return true;
    };
    if (!boundary_ok())
        throw Error("grid-too-small", "initial state touches the grid boundary");

    for (std::size_t s = 0; s < n_steps; ++s) {
        double tm = tau0 + (double(s) + 0.5) * dt;
        double w2 = profile.omega2_at(tm);
        double f = profile.force_at(tm);
        for (std::size_t i = 0; i < N; ++i) {
            double v = 0.5 * w2 * out.z[i] * out.z[i] - f * out.z[i];
            expVh[i] = std::exp(Complex(0, -0.5 * v * dt));
        }
        for (std::size_t i = 0; i < N; ++i) psi[i] *= expVh[i];
        fftw_execute(plans.fwd);
        for (std::size_t i = 0; i < N; ++i) psi[i] *= expT[i];
        fftw_execute(plans.bwd);
        for (std::size_t i = 0; i < N; ++i) psi[i] *= inv_n * expVh[i];
        if (s % 64 == 63 && !boundary_ok())
            throw Error("grid-too-small",
                        "state reached the grid boundary at tau = " + std::to_string(tm));
    }
    if (!boundary_ok())
        throw Error("grid-too-small", "final state touches the grid boundary");

    double norm2 = 0.0;
    for (const auto& c : psi) norm2 += std::norm(c);
    norm2 *= dz;
    if (std::abs(norm2 - 1.0) > 1e-6)
        throw Error("nonunitary-step", "norm drifted to " + format_sci(norm2));

    out.psi = std::move(psi);
    out.tau = tau1;
    out.norm = norm2;
    return out;
}

TransitionMatrix oracle_matrix(const FrequencyProfile& profile, int n_max, const GridSpec& grid,
                               double dt, int margin) {
    if (n_max < 0 || margin < 0) throw Error("domain", "bad matrix extents");
    TransitionMatrix out;
    out.n_max = n_max;
    out.m_max = n_max + margin;
    out.mode = MatrixMode::Oracle;
    out.W.assign(out.m_max + 1, std::vector<double>(n_max + 1, 0.0));

    std::vector<std::vector<double>> phis;
    for (int n = 0; n <= n_max; ++n) {
        auto wf = propagate(profile, n, grid, dt);
        if (phis.empty()) {
            phis.reserve(out.m_max + 1);
            for (int m = 0; m <= out.m_max; ++m)
                phis.push_back(oscillator_eigenstate(m, profile.omega_out, wf.z));
        }
        for (int m = 0; m <= out.m_max; ++m) {
            Complex s(0, 0);
            for (std::size_t i = 0; i < wf.z.size(); ++i) s += phis[m][i] * wf.psi[i];
            s *= wf.dz;
            out.W[m][n] = std::norm(s);
        }
    }
    out.finalize();
    return out;
}

} // namespace intime
