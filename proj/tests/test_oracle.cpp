#include <doctest.h>

#include <cmath>
#include <vector>

#include "intime/amplitudes.hpp"
#include "intime/common.hpp"
#include "intime/oracle.hpp"
#include "intime/oscillator.hpp"

using namespace intime;

namespace {

std::vector<double> make_grid(double span, std::size_t n) {
    std::vector<double> z(n);
    double dz = 2.0 * span / double(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = -span + dz * double(i);
    return z;
}

} // namespace

TEST_CASE("oscillator eigenstates are orthonormal on the grid") {
    auto z = make_grid(12.0, 1024);
    double dz = z[1] - z[0];
    for (double w : {1.0, 2.5}) {
        std::vector<std::vector<double>> phi;
        for (int n = 0; n < 6; ++n) phi.push_back(oscillator_eigenstate(n, w, z));
        for (int a = 0; a < 6; ++a)
            for (int b = a; b < 6; ++b) {
                double s = 0.0;
                for (std::size_t i = 0; i < z.size(); ++i) s += phi[a][i] * phi[b][i];
                s *= dz;
                CHECK(s == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-9).scale(1.0));
            }
    }
}

TEST_CASE("constant profile propagation is the identity on populations") {
    auto prof = profile_constant(1.3, 10.0, 1001);
    auto m = oracle_matrix(prof, 3, GridSpec{10.0, 512});
    for (int n = 0; n <= 3; ++n) {
        CHECK(m.W[n][n] == doctest::Approx(1.0).epsilon(1e-8));
        for (int k = 0; k <= 3; ++k)
            if (k != n) CHECK(m.W[k][n] < 1e-9);
    }
}

TEST_CASE("sudden jump populations match the closed form") {
    auto prof = profile_step(1.0, 2.0, 8.0, 1601);
    // dt divides the span exactly, so step boundaries land on the jump and
    // the midpoint rule never averages across it
    auto m = oracle_matrix(prof, 4, GridSpec{12.0, 1024}, 0.001);
    double th = 1.0 / 9.0;
    CHECK(m.W[0][0] == doctest::Approx(2.0 * std::sqrt(2.0) / 3.0).epsilon(1e-6));
    for (int mm = 0; mm <= 4; ++mm)
        for (int n = 0; n <= 4; ++n)
            CHECK(m.W[mm][n] ==
                  doctest::Approx(transition_probability_parametric(th, mm, n))
                      .epsilon(2e-5)
                      .scale(1.0));
}

TEST_CASE("propagation self-converges in time step and grid size") {
    auto prof = profile_tanh(1.0, 2.0, 0.35);
    GridSpec grid{12.0, 1024};
    auto ref = oracle_matrix(prof, 5, grid, 0.0025);
    auto entry_err = [&](double dt) {
        auto m = oracle_matrix(prof, 5, grid, dt);
        double e = 0.0;
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = 0; j < m.W[i].size(); ++j)
                e = std::max(e, std::abs(m.W[i][j] - ref.W[i][j]));
        return e;
    };
    double ec = entry_err(0.08);
    double ef = entry_err(0.04);
    // second order in dt: halving dt quarters the residual; the coarse steps
    // sit far above round-off so the ratio is meaningful
    REQUIRE(ec > 1e-9);
    CHECK(ec / ef > 3.0);
    CHECK(ec / ef < 7.0);

    // doubling the grid at fixed dt leaves converged entries unchanged
    auto small = oracle_matrix(prof, 5, GridSpec{12.0, 512}, 0.01);
    auto big = oracle_matrix(prof, 5, grid, 0.01);
    for (std::size_t j = 0; j < 6; ++j)
        CHECK(small.W[0][j] == doctest::Approx(big.W[0][j]).epsilon(1e-7).scale(1.0));
}

TEST_CASE("norm is conserved to tight tolerance") {
    auto prof = profile_tanh(1.0, 3.0, 0.2);
    auto w = propagate(prof, 2, GridSpec{12.0, 1024});
    CHECK(w.norm == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(w.tau == doctest::Approx(prof.tau_out()));
}

TEST_CASE("escaping probability is detected rather than wrapped") {
    // a grid far too small for the n = 3 state of the soft out-channel
    auto prof = profile_tanh(1.0, 2.0, 0.35);
    try {
        (void)propagate(prof, 3, GridSpec{2.5, 64});
        FAIL("expected grid-too-small");
    } catch (const Error& e) {
        CHECK(e.code() == "grid-too-small");
    }
}

TEST_CASE("oracle matrix carries margin rows and truncation bookkeeping") {
    auto prof = profile_tanh(1.0, 2.0, 0.35);
    auto m = oracle_matrix(prof, 3, GridSpec{12.0, 512}, 0.0, 4);
    CHECK(m.n_max == 3);
    CHECK(m.m_max == 7);
    REQUIRE(m.W.size() == 8);
    REQUIRE(m.W[0].size() == 4);
    REQUIRE(m.column_sums.size() == 4);
    // margin rows catch nearly all of the column mass here
    for (double s : m.column_sums) CHECK(s == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(m.mode == MatrixMode::Oracle);
}

TEST_CASE("driven propagation matches the displaced-oscillator law") {
    const double W = 1.0, T = 3.0, nu = 0.25;
    const double I1 = 0.5 * std::sqrt(2.0 * M_PI) * T * (1.0 + std::exp(-2.0 * W * W * T * T));
    double A = std::sqrt(2.0 * W * nu) / I1;
    auto prof = profile_constant(W, 24.0, 1921);
    set_gaussian_force(prof, A, T, W);
    auto m = oracle_matrix(prof, 3, GridSpec{12.0, 512});
    for (int k = 0; k <= 3; ++k) {
        double ref = std::exp(-nu) * std::pow(nu, k) / std::tgamma(k + 1.0);
        CHECK(m.W[k][0] == doctest::Approx(ref).epsilon(2e-5));
    }
}
