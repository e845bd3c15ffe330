#include "intime/ode.hpp"

#include <algorithm>
#include <cmath>

#include "intime/common.hpp"

namespace intime {

namespace {

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// error weights: 5th-order minus embedded 4th-order
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

void hermite_eval(const OdeStep& s, double t, std::vector<double>* y, std::vector<double>* dy) {
    double h = s.t1 - s.t0;
    double u = (t - s.t0) / h;
    double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
    double h10 = u * (1 - u) * (1 - u);
    double h01 = u * u * (3 - 2 * u);
    double h11 = u * u * (u - 1);
    double d00 = 6 * u * (u - 1) / h;
    double d10 = (1 - u) * (1 - 3 * u);
    double d01 = -6 * u * (u - 1) / h;
    double d11 = u * (3 * u - 2);
    std::size_t n = s.y0.size();
    if (y) {
        y->resize(n);
        for (std::size_t i = 0; i < n; ++i)
            (*y)[i] = h00 * s.y0[i] + h * h10 * s.f0[i] + h01 * s.y1[i] + h * h11 * s.f1[i];
    }
    if (dy) {
        dy->resize(n);
        for (std::size_t i = 0; i < n; ++i)
            (*dy)[i] = d00 * s.y0[i] + d10 * s.f0[i] + d01 * s.y1[i] + d11 * s.f1[i];
    }
}

} // namespace

const OdeStep& OdeSolution::segment(double t) const {
    if (steps_.empty()) throw Error("domain", "empty ODE solution");
    auto it = std::lower_bound(steps_.begin(), steps_.end(), t,
                               [](const OdeStep& s, double v) { return s.t1 < v; });
    if (it == steps_.end()) --it;
    return *it;
}

std::vector<double> OdeSolution::at(double t) const {
    std::vector<double> y;
    hermite_eval(segment(t), t, &y, nullptr);
    return y;
}

std::vector<double> OdeSolution::derivative_at(double t) const {
    std::vector<double> dy;
    hermite_eval(segment(t), t, nullptr, &dy);
    return dy;
}

OdeSolution integrate(const OdeRhs& f, std::vector<double> y0, double t0, double t1,
                      const OdeOptions& opt) {
    if (!(t1 > t0)) throw Error("domain", "ODE integration requires t1 > t0");
    const std::size_t n = y0.size();
    OdeSolution sol;

    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
    std::vector<double> y(y0), ytmp(n), ynew(n), err(n);

    f(t0, y, k1);
    double span = t1 - t0;
    double h = opt.h_init > 0 ? opt.h_init : span * 1e-3;
    if (opt.h_max > 0) h = std::min(h, opt.h_max);
    h = std::min(h, span);

    double t = t0;
    double err_prev = 1.0;
    std::size_t steps = 0;

    while (t < t1 - 1e-14 * span) {
        if (++steps > opt.max_steps) throw Error("stiff", "step count exceeded");
        if (h < 1e-14 * std::max(std::abs(t), 1.0))
            throw Error("stiff", "step size underflow at t = " + std::to_string(t));
        h = std::min(h, t1 - t);

        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
        f(t + c2 * h, ytmp, k2);
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        f(t + c3 * h, ytmp, k3);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        f(t + c4 * h, ytmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        f(t + c5 * h, ytmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                  a65 * k5[i]);
        f(t + h, ytmp, k6);
        for (std::size_t i = 0; i < n; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        f(t + h, ynew, k7);

        double err_norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                            e7 * k7[i]);
            double sc = opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err_norm += (e / sc) * (e / sc);
        }
        err_norm = std::sqrt(err_norm / double(n));

        if (err_norm <= 1.0) {
            OdeStep step;
            step.t0 = t;
            step.t1 = t + h;
            step.y0 = y;
            step.y1 = ynew;
            step.f0 = k1;
            step.f1 = k7;
            sol.steps_.push_back(std::move(step));

            t += h;
            y = ynew;
            k1 = k7; // FSAL

            if (opt.stop && opt.stop(t, y)) {
                sol.truncated_ = true;
                return sol;
            }

            double fac = 0.9 * std::pow(std::max(err_norm, 1e-10), -0.7 / 5.0) *
                         std::pow(err_prev, 0.4 / 5.0);
            err_prev = std::max(err_norm, 1e-10);
            h *= std::clamp(fac, 0.2, 5.0);
            if (opt.h_max > 0) h = std::min(h, opt.h_max);
        } else {
            h *= std::clamp(0.9 * std::pow(err_norm, -0.2), 0.1, 1.0);
            ++sol.n_rejected_;
        }
    }
    return sol;
}

} // namespace intime
