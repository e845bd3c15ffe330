#include "intime/amplitudes.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace intime {

ScatteringParameters extract_parameters(Complex c1, Complex c2, Complex d_inf, double omega_in,
                                        double omega_out, double wronskian_tol) {
    if (!(omega_in > 0) || !(omega_out > 0))
        throw Error("domain", "frequencies must be positive");
    double target = omega_in / omega_out;
    double got = std::norm(c1) - std::norm(c2);
    if (std::abs(got - target) > wronskian_tol * target)
        throw Error("inconsistent-constants",
                    "|c1|^2 - |c2|^2 = " + format_sci(got) + " but Omega_in/Omega_out = " +
                        format_sci(target));

    ScatteringParameters p;
    p.omega_in = omega_in;
    p.omega_out = omega_out;
    p.theta = std::norm(c2) / std::norm(c1);
    p.delta1 = std::arg(c1);
    p.delta2 = c2 == Complex(0, 0) ? 0.0 : std::arg(c2);
    p.nu = std::norm(d_inf);
    p.beta = d_inf == Complex(0, 0) ? 0.0 : std::arg(d_inf);
    p.phi = 0.5 * (p.delta1 + p.delta2) - p.beta;
    Complex eip = std::polar(1.0, p.phi);
    p.b1 = std::sqrt(p.nu * (1.0 - p.theta)) * eip;
    p.b2 = -std::sqrt(p.nu) * (std::conj(eip) - std::sqrt(p.theta) * eip);
    return p;
}

Complex complex_hermite(int m, int n, Complex x, Complex y) {
    if (m < 0 || n < 0) throw Error("domain", "quantum numbers must be non-negative");
    std::vector<Complex> row(n + 1);
    row[0] = Complex(1, 0);
    for (int j = 1; j <= n; ++j) row[j] = row[j - 1] * y; // H_{0,j} = y^j
    for (int i = 0; i < m; ++i) {
        std::vector<Complex> next(n + 1);
        next[0] = x * row[0];
        for (int j = 1; j <= n; ++j) next[j] = x * row[j] + double(j) * row[j - 1];
        row = std::move(next);
    }
    return row[n];
}

namespace {

// K_mn for transition_probability: generating function
//   exp[b1 s + b2 t + sqrt(1-theta) s t - (sqrt(theta)/2) s^2 + (sqrt(theta)/2) t^2],
// built by the coupled recurrences
//   K_{0,n+1} = b2 K_{0,n} + sqrt(theta) n K_{0,n-1}
//   K_{m+1,n} = b1 K_{m,n} + sqrt(1-theta) n K_{m,n-1} - sqrt(theta) m K_{m-1,n}.
// Long double: K grows like sqrt(m! n!), which squared still fits comfortably.
std::complex<long double> driven_parametric_polynomial(int m, int n,
                                                       const ScatteringParameters& params) {
    using CL = std::complex<long double>;
    const long double lam = std::sqrt(1.0L - (long double)params.theta);
    const long double st = std::sqrt((long double)params.theta);
    const CL b1((long double)params.b1.real(), (long double)params.b1.imag());
    const CL b2((long double)params.b2.real(), (long double)params.b2.imag());

    std::vector<CL> prev, row(n + 1);
    row[0] = CL(1, 0);
    for (int j = 1; j <= n; ++j)
        row[j] = b2 * row[j - 1] + (j >= 2 ? st * (long double)(j - 1) * row[j - 2] : CL(0, 0));
    for (int i = 0; i < m; ++i) {
        std::vector<CL> next(n + 1);
        for (int j = 0; j <= n; ++j) {
            next[j] = b1 * row[j];
            if (j >= 1) next[j] += lam * (long double)j * row[j - 1];
            if (i >= 1) next[j] -= st * (long double)i * prev[j];
        }
        prev = std::move(row);
        row = std::move(next);
    }
    return row[n];
}

} // namespace

double transition_probability(const ScatteringParameters& params, int m, int n,
                              Normalization norm) {
    if (m < 0 || n < 0) throw Error("domain", "quantum numbers must be non-negative");
    if (!(params.theta >= 0.0) || !(params.theta < 1.0))
        throw Error("domain", "theta must lie in [0, 1)");
    if (params.nu == 0.0) return transition_probability_parametric(params.theta, m, n);

    std::complex<long double> K = driven_parametric_polynomial(m, n, params);
    long double k2 = std::norm(K);
    if (k2 == 0.0L) return 0.0;
    double log_fact = std::lgamma(m + 1.0) + std::lgamma(n + 1.0);
    double log_pref = norm == Normalization::PoissonMatched
                          ? 0.5 * std::log1p(-params.theta) - log_fact
                          : 0.5 * (std::log1p(-params.theta) - log_fact);
    double expo = -params.nu * (1.0 - std::sqrt(params.theta) * std::cos(2.0 * params.phi));
    return std::exp(log_pref + (double)std::log(k2) + expo);
}

double transition_probability_parametric(double theta, int m, int n) {
    if (m < 0 || n < 0) throw Error("domain", "quantum numbers must be non-negative");
    if (!(theta >= 0.0) || !(theta < 1.0)) throw Error("domain", "theta must lie in [0, 1)");
    if ((m - n) % 2 != 0) return 0.0; // parity selection of the parametric problem

    const int n_lo = std::min(m, n), n_hi = std::max(m, n);
    const int k = (n_hi - n_lo) / 2;
    const int l = (n_hi + n_lo) / 2;
    const long double x = std::sqrt(1.0L - (long double)theta);

    // associated Legendre P_l^k(x) by upward recurrence in degree, long double
    // to survive the large intermediate values at high quantum numbers
    long double pkk = 1.0L;
    for (int j = 1; j <= k; ++j) pkk *= -(2.0L * j - 1.0L);
    pkk *= std::pow((long double)theta, 0.5L * k); // (1 - x^2)^{k/2}
    long double p_prev = 0.0L, p_cur = pkk;
    for (int ll = k; ll < l; ++ll) {
        long double p_next =
            ((2.0L * ll + 1.0L) * x * p_cur - (ll + k) * p_prev) / (long double)(ll - k + 1);
        p_prev = p_cur;
        p_cur = p_next;
    }
    // scale by sqrt(n_<!/n_>!) before squaring to keep intermediates bounded
    long double q = std::exp(0.5L * (std::lgamma((long double)n_lo + 1.0L) -
                                     std::lgamma((long double)n_hi + 1.0L))) *
                    p_cur;
    return (double)(x * q * q);
}

void TransitionMatrix::finalize() {
    const std::size_t cols = W.empty() ? 0 : W[0].size();
    column_sums.assign(cols, 0.0);
    for (const auto& row : W)
        for (std::size_t j = 0; j < cols; ++j) column_sums[j] += row[j];
    unitarity_defect = 0.0;
    double tail_est = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
        unitarity_defect = std::max(unitarity_defect, std::abs(1.0 - column_sums[j]));
        if (!W.empty()) tail_est = std::max(tail_est, W.back()[j] * double(W.size()));
    }
    warning.clear();
    if (unitarity_defect > 10.0 * tail_est + 1e-10)
        warning = "unitarity defect " + format_sci(unitarity_defect) +
                  " exceeds the truncation-tail estimate " + format_sci(tail_est);
}

TransitionMatrix assemble_matrix(const ScatteringParameters& params, int n_max, MatrixMode mode,
                                 Normalization norm) {
    if (n_max < 0) throw Error("domain", "n_max must be non-negative");
    if (mode == MatrixMode::Oracle)
        throw Error("domain", "oracle matrices come from the propagation backend");
    TransitionMatrix out;
    out.n_max = n_max;
    out.m_max = n_max;
    out.mode = mode;
    out.W.assign(n_max + 1, std::vector<double>(n_max + 1, 0.0));
    for (int m = 0; m <= n_max; ++m)
        for (int n = 0; n <= n_max; ++n)
            out.W[m][n] = mode == MatrixMode::Hermite
                              ? transition_probability(params, m, n, norm)
                              : transition_probability_parametric(params.theta, m, n);
    out.finalize();
    return out;
}

SemiclassicalState evaluate_wavefunction(const FrequencyProfile& profile,
                                         const OscillatorSolution& solution,
                                         const DriveSolution* drive, int n, double tau,
                                         const std::vector<double>& z_grid) {
    if (n < 0) throw Error("domain", "quantum number must be non-negative");
    if (z_grid.empty()) throw Error("domain", "empty z grid");

    const double w_in = solution.omega_in;
    const Complex xi = solution.xi(tau);
    const Complex xid = solution.xi_dot(tau);
    const double axi = std::abs(xi);
    if (axi < 1e-8) throw Error("focal-point", "|xi| vanishes at tau = " + std::to_string(tau));

    const double eta = drive ? drive->eta_at(tau) : 0.0;
    const double eta_dot = drive ? drive->eta_dot_at(tau) : 0.0;

    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    const double tau0 = solution.tau_begin;

    // vibrational phase integral with its in-channel counterterm: on a path
    // the counterterm is 2 mu0 E_k / p^2 (which is 1 in the entrance tail);
    // for a bare analytic profile it is the constant 1
    const bool on_path = !profile.p_of_tau.empty();
    const double p_minus = on_path ? profile.p_of_tau.values().front() : 1.0;
    auto counterterm = [&](double t) {
        if (!on_path) return 1.0;
        double p = profile.p_of_tau(t);
        return p_minus * p_minus / (p * p); // = 2 mu0 E_k / p^2 (p_-^2 = 2 mu0 E_k)
    };
    auto xi_integrand = [&](double t) {
        auto y = solution.dense.at(t);
        double a2 = y[0] * y[0] + y[1] * y[1];
        return 1.0 / a2 - counterterm(t);
    };
    double I_xi = GK::integrate(xi_integrand, tau0, tau, 10, 1e-11);
    double E_v = w_in * (n + 0.5);

    // classical drive action
    double S_drive = 0.0;
    if (drive != nullptr) {
        auto lagr = [&](double t) {
            double e = drive->eta_at(t);
            double ed = drive->eta_dot_at(t);
            double w2 = profile.omega2_at(t);
            return 0.5 * (ed * ed - w2 * e * e) + profile.force_at(t) * e;
        };
        S_drive = GK::integrate(lagr, tau0, tau, 10, 1e-11);
    }
    const double E_k = profile.E_kin;
    double S_cl = E_k * tau / profile.hbar - E_k * S_drive;

    double p_dot_over_p = 0.0;
    if (on_path) p_dot_over_p = profile.p_of_tau.derivative(tau) / profile.p_of_tau(tau);

    SemiclassicalState st;
    st.n = n;
    st.E_v = E_v;
    st.z_grid = z_grid;
    st.S_cl = S_cl;
    st.values.resize(z_grid.size());

    double log_amp = 0.25 * std::log(w_in / M_PI) -
                     0.5 * (n * std::log(2.0) + std::lgamma(n + 1.0) + std::log(axi));
    double amp = std::exp(log_amp);
    Complex xi_ratio = xid / xi;

    for (std::size_t i = 0; i < z_grid.size(); ++i) {
        double z = z_grid[i];
        double dz = z - eta;
        Complex S_eff = Complex(S_cl - E_v * I_xi, 0.0) +
                        Complex(eta_dot * dz, 0.0) + 0.5 * xi_ratio * dz * dz -
                        Complex(0.5 * p_dot_over_p * z * z, 0.0);
        double arg = std::sqrt(w_in) * dz / axi;
        double h0 = 1.0, h1 = 2.0 * arg;
        double h = n == 0 ? h0 : h1;
        for (int k = 1; k < n; ++k) {
            double h2 = 2.0 * arg * h1 - 2.0 * k * h0;
            h0 = h1;
            h1 = h2;
            h = h2;
        }
        st.values[i] = amp * std::exp(Complex(0, 1) * S_eff) * h;
    }

    st.norm = 0.0;
    for (std::size_t i = 0; i + 1 < z_grid.size(); ++i)
        st.norm += 0.5 * (std::norm(st.values[i]) + std::norm(st.values[i + 1])) *
                   (z_grid[i + 1] - z_grid[i]);
    return st;
}

} // namespace intime
