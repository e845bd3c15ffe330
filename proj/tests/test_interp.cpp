#include <doctest.h>

#include <cmath>
#include <vector>

#include "intime/common.hpp"
#include "intime/interp.hpp"

using intime::BicubicSpline;
using intime::CubicSpline;

namespace {

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = a + (b - a) * double(i) / double(n - 1);
    return out;
}

} // namespace

TEST_CASE("cubic spline reproduces smooth data and derivatives") {
    auto x = linspace(0.0, 6.0, 241);
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::sin(x[i]);
    CubicSpline s(x, y);

    for (double q : {0.3, 1.7, 2.9441, 4.0, 5.83}) {
        CHECK(s(q) == doctest::Approx(std::sin(q)).epsilon(1e-7));
        CHECK(s.derivative(q) == doctest::Approx(std::cos(q)).epsilon(1e-5));
        CHECK(s.second_derivative(q) == doctest::Approx(-std::sin(q)).epsilon(1e-3));
    }
}

TEST_CASE("cubic spline interpolates knots exactly") {
    std::vector<double> x{0.0, 0.5, 1.3, 2.0, 3.7};
    std::vector<double> y{1.0, -2.0, 0.25, 4.0, -1.5};
    CubicSpline s(x, y);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(s(x[i]) == doctest::Approx(y[i]).epsilon(1e-14));
}

TEST_CASE("cubic spline integral matches quadrature of the piecewise cubic") {
    auto x = linspace(-2.0, 3.0, 101);
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::exp(-x[i] * x[i]);
    CubicSpline s(x, y);

    // the integral member must agree with dense trapezoid sums of the spline
    // itself (not of the underlying function) to high order
    for (double q : {-1.0, 0.0, 0.31, 2.5, 3.0}) {
        const std::size_t n = 20001;
        double acc = 0.0;
        double lo = x.front();
        double h = (q - lo) / double(n - 1);
        for (std::size_t i = 0; i < n; ++i) {
            double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
            acc += w * s(lo + h * double(i));
        }
        acc *= h;
        CHECK(s.integral(q) == doctest::Approx(acc).epsilon(1e-9));
    }

    // and it must be exact (to roundoff) for linear data, which the natural
    // end conditions reproduce identically
    std::vector<double> yl(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) yl[i] = 1.0 + 0.5 * x[i];
    CubicSpline lin(x, yl);
    auto F = [](double t) { return t + 0.25 * t * t; };
    CHECK(lin.integral(2.0) == doctest::Approx(F(2.0) - F(-2.0)).epsilon(1e-12));
}

TEST_CASE("cubic spline extrapolates by clamping to the end intervals") {
    auto x = linspace(0.0, 1.0, 11);
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] * x[i];
    CubicSpline s(x, y);
    // evaluation outside the knots continues the end cubic; it stays finite
    // and continuous across the boundary
    CHECK(std::isfinite(s(-0.5)));
    CHECK(std::isfinite(s(1.5)));
    CHECK(s(1.0 + 1e-12) == doctest::Approx(s(1.0)).epsilon(1e-9));
}

TEST_CASE("bicubic spline reproduces values and derivatives of a smooth surface") {
    auto x = linspace(-2.0, 2.0, 61);
    auto y = linspace(-1.5, 1.5, 49);
    std::vector<std::vector<double>> v(x.size(), std::vector<double>(y.size()));
    auto f = [](double a, double b) { return std::sin(a) * std::exp(-0.5 * b * b) + 0.3 * a * b; };
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < y.size(); ++j) v[i][j] = f(x[i], y[j]);
    BicubicSpline s(x, y, v);

    for (auto [qx, qy] : {std::pair{0.37, 0.21}, {-1.1, -0.9}, {1.63, 1.17}}) {
        auto e = s.evaluate(qx, qy);
        CHECK(e.f == doctest::Approx(f(qx, qy)).epsilon(1e-6));
        // finite-difference oracle for the gradient and Hessian
        double h = 1e-4;
        double fx = (s.evaluate(qx + h, qy).f - s.evaluate(qx - h, qy).f) / (2 * h);
        double fy = (s.evaluate(qx, qy + h).f - s.evaluate(qx, qy - h).f) / (2 * h);
        CHECK(e.fx == doctest::Approx(fx).epsilon(1e-5));
        CHECK(e.fy == doctest::Approx(fy).epsilon(1e-5));
        double fxy = (s.evaluate(qx + h, qy + h).f - s.evaluate(qx + h, qy - h).f -
                      s.evaluate(qx - h, qy + h).f + s.evaluate(qx - h, qy - h).f) /
                     (4 * h * h);
        CHECK(e.fxy == doctest::Approx(fxy).epsilon(1e-3));
        CHECK(e.fxx == doctest::Approx(-std::sin(qx) * std::exp(-0.5 * qy * qy)).epsilon(2e-3));
        CHECK(e.fyy ==
              doctest::Approx(std::sin(qx) * std::exp(-0.5 * qy * qy) * (qy * qy - 1.0)).epsilon(2e-3));
    }
}

TEST_CASE("bicubic spline rejects queries outside the grid") {
    auto x = linspace(0.0, 1.0, 5);
    auto y = linspace(0.0, 1.0, 5);
    std::vector<std::vector<double>> v(5, std::vector<double>(5, 1.0));
    BicubicSpline s(x, y, v);
    CHECK_THROWS_AS((void)s.evaluate(1.2, 0.5), intime::Error);
    CHECK_THROWS_AS((void)s.evaluate(0.5, -0.1), intime::Error);
}
