#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace intime {

/// dy/dt = f(t, y); y is a flat array of doubles.
using OdeRhs =
    std::function<void(double t, const std::vector<double>& y, std::vector<double>& dydt)>;

struct OdeOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double h_init = 0.0;   // <= 0: choose automatically
    double h_max = 0.0;    // <= 0: no cap
    std::size_t max_steps = 4'000'000;
    /// Checked after every accepted step; returning true truncates the
    /// integration at that step without error.
    std::function<bool(double t, const std::vector<double>& y)> stop;
};

/// One accepted step, kept for cubic Hermite dense output.
struct OdeStep {
    double t0, t1;
    std::vector<double> y0, y1, f0, f1;
};

class OdeSolution {
public:
    std::vector<double> at(double t) const;
    std::vector<double> derivative_at(double t) const;

    double t_begin() const { return steps_.empty() ? 0.0 : steps_.front().t0; }
    double t_end() const { return steps_.empty() ? 0.0 : steps_.back().t1; }
    const std::vector<double>& y_end() const { return steps_.back().y1; }

    const std::vector<OdeStep>& steps() const { return steps_; }
    bool truncated() const { return truncated_; }
    std::size_t n_accepted() const { return steps_.size(); }
    std::size_t n_rejected() const { return n_rejected_; }

private:
    friend OdeSolution integrate(const OdeRhs&, std::vector<double>, double, double,
                                 const OdeOptions&);
    const OdeStep& segment(double t) const;

    std::vector<OdeStep> steps_;
    bool truncated_ = false;
    std::size_t n_rejected_ = 0;
};

/// Dormand-Prince 5(4) embedded pair with PI step-size control and cubic
/// Hermite dense output. Forward integration only (t1 > t0).
/// Throws Error("stiff", ...) on step-size underflow or step-count overflow.
OdeSolution integrate(const OdeRhs& f, std::vector<double> y0, double t0, double t1,
                      const OdeOptions& opt = {});

} // namespace intime
