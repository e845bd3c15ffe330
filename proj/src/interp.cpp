#include "intime/interp.hpp"

#include <algorithm>
#include <cmath>

#include "intime/common.hpp"

namespace intime {

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || n != y_.size()) throw Error("domain", "spline needs >= 2 matching knots");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1])) throw Error("domain", "spline knots must increase strictly");

    // natural boundary: solve the tridiagonal system for second derivatives
    m_.assign(n, 0.0);
    if (n > 2) {
        std::vector<double> diag(n - 2), rhs(n - 2), upper(n - 2);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            double h0 = x_[i] - x_[i - 1];
            double h1 = x_[i + 1] - x_[i];
            diag[i - 1] = 2.0 * (h0 + h1);
            upper[i - 1] = h1;
            rhs[i - 1] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
        }
        for (std::size_t i = 1; i < n - 2; ++i) {
            double h = x_[i + 1] - x_[i]; // sub-diagonal entry
            double w = h / diag[i - 1];
            diag[i] -= w * upper[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        for (std::size_t i = n - 2; i-- > 0;) {
            double acc = rhs[i];
            if (i + 1 < n - 2) acc -= upper[i] * m_[i + 2];
            m_[i + 1] = acc / diag[i];
        }
    }

    // cumulative exact integrals of the piecewise cubic
    cumint_.assign(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double h = x_[i + 1] - x_[i];
        cumint_[i + 1] = cumint_[i] + 0.5 * h * (y_[i] + y_[i + 1]) -
                         h * h * h * (m_[i] + m_[i + 1]) / 24.0;
    }
}

std::size_t CubicSpline::interval(double x) const {
    if (x <= x_.front()) return 0;
    if (x >= x_.back()) return x_.size() - 2;
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    return static_cast<std::size_t>(it - x_.begin()) - 1;
}

double CubicSpline::operator()(double x) const {
    std::size_t i = interval(x);
    double h = x_[i + 1] - x_[i];
    double a = (x_[i + 1] - x) / h, b = (x - x_[i]) / h;
    return a * y_[i] + b * y_[i + 1] +
           ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

double CubicSpline::derivative(double x) const {
    std::size_t i = interval(x);
    double h = x_[i + 1] - x_[i];
    double a = (x_[i + 1] - x) / h, b = (x - x_[i]) / h;
    return (y_[i + 1] - y_[i]) / h +
           ((3.0 * b * b - 1.0) * m_[i + 1] - (3.0 * a * a - 1.0) * m_[i]) * h / 6.0;
}

double CubicSpline::second_derivative(double x) const {
    std::size_t i = interval(x);
    double h = x_[i + 1] - x_[i];
    double a = (x_[i + 1] - x) / h, b = (x - x_[i]) / h;
    return a * m_[i] + b * m_[i + 1];
}

double CubicSpline::integral(double x) const {
    std::size_t i = interval(x);
    double h = x_[i + 1] - x_[i];
    double a = (x_[i + 1] - x) / h, b = (x - x_[i]) / h;
    // integral of the segment polynomial from x_[i] to x
    double base = cumint_[i];
    double seg = h * (0.5 * (1.0 - a * a) * y_[i] + 0.5 * b * b * y_[i + 1]) +
                 h * h * h / 6.0 *
                     (m_[i] * (0.25 * (1.0 - a * a * a * a) - 0.5 * (1.0 - a * a)) +
                      m_[i + 1] * (0.25 * b * b * b * b - 0.5 * b * b));
    return base + seg;
}

BicubicSpline::BicubicSpline(std::vector<double> x, std::vector<double> y,
                             std::vector<std::vector<double>> values)
    : x_(std::move(x)), y_(std::move(y)) {
    if (values.size() != x_.size()) throw Error("domain", "bicubic rows must match x nodes");
    rows_.reserve(values.size());
    for (auto& row : values) {
        if (row.size() != y_.size()) throw Error("domain", "bicubic cols must match y nodes");
        rows_.emplace_back(y_, row);
    }
}

BicubicSpline::Eval BicubicSpline::evaluate(double x, double y) const {
    if (x < x_.front() || x > x_.back() || y < y_.front() || y > y_.back())
        throw Error("domain", "tabulated surface queried outside its grid");
    const std::size_t nx = x_.size();
    std::vector<double> f(nx), fy(nx), fyy(nx);
    for (std::size_t i = 0; i < nx; ++i) {
        f[i] = rows_[i](y);
        fy[i] = rows_[i].derivative(y);
        fyy[i] = rows_[i].second_derivative(y);
    }
    CubicSpline sx(x_, f), sxy(x_, fy), sxyy(x_, fyy);
    Eval e;
    e.f = sx(x);
    e.fx = sx.derivative(x);
    e.fxx = sx.second_derivative(x);
    e.fy = sxy(x);
    e.fxy = sxy.derivative(x);
    e.fyy = sxyy(x);
    return e;
}

} // namespace intime
