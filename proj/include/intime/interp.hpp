#pragma once

#include <vector>

namespace intime {

/// Natural cubic spline through (x_i, y_i) with strictly increasing x.
/// Evaluation clamps to the end intervals (linear-in-cubic extrapolation).
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;
    double derivative(double x) const;
    double second_derivative(double x) const;

    /// Exact integral of the piecewise cubic from x[0] to x.
    double integral(double x) const;

    bool empty() const { return x_.empty(); }
    const std::vector<double>& knots() const { return x_; }
    const std::vector<double>& values() const { return y_; }

private:
    std::size_t interval(double x) const;

    std::vector<double> x_, y_, m_;   // m_ = second derivatives at knots
    std::vector<double> cumint_;      // integral from x_[0] to x_[i]
};

/// Bicubic tensor interpolation on a rectangular grid: per-row splines in y,
/// re-splined across x at query time. Derivatives come from the splines.
class BicubicSpline {
public:
    BicubicSpline() = default;
    BicubicSpline(std::vector<double> x, std::vector<double> y,
                  std::vector<std::vector<double>> values); // values[i][j] = f(x[i], y[j])

    /// f, df/dx, df/dy, d2f/dx2, d2f/dy2, d2f/dxdy at (x, y).
    struct Eval {
        double f, fx, fy, fxx, fyy, fxy;
    };
    Eval evaluate(double x, double y) const;

    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }
    double y_min() const { return y_.front(); }
    double y_max() const { return y_.back(); }

private:
    std::vector<double> x_, y_;
    std::vector<CubicSpline> rows_;    // rows_[i]: spline in y of values[i][.]
};

} // namespace intime
