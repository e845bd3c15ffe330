#include "intime/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace intime {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double safe_ratio(double num, double den) { return den == 0.0 ? kInf : num / den; }

/// Momentum field derivatives from the ambient potential at a path point:
/// P = sqrt(2 mu0 (E_kin - Vt)), dP = -mu0 dVt / P, etc.
struct MomentumDerivs {
    double p, p_u, p_v, p_uu, p_vv;
};

MomentumDerivs momentum_derivs(const SurfaceEval& ev, double U_in, double E_kin, double mu0,
                               const double T[2], const double N[2], double kappa, double u) {
    double Vt = ev.V - U_in;
    double p2 = 2.0 * mu0 * (E_kin - Vt);
    if (!(p2 > 0))
        throw Error("classically-forbidden",
                    "E_k below potential on path at u = " + std::to_string(u));
    double p = std::sqrt(p2);
    double Pi[2], Pij[2][2];
    for (int i = 0; i < 2; ++i) Pi[i] = -mu0 * ev.grad[i] / p;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            Pij[i][j] = -mu0 * ev.hess[i][j] / p -
                        mu0 * mu0 * ev.grad[i] * ev.grad[j] / (p * p * p);
    auto quad = [&](const double a[2], const double b[2]) {
        return a[0] * Pij[0][0] * b[0] + a[0] * Pij[0][1] * b[1] + a[1] * Pij[1][0] * b[0] +
               a[1] * Pij[1][1] * b[1];
    };
    MomentumDerivs d;
    d.p = p;
    d.p_u = Pi[0] * T[0] + Pi[1] * T[1];
    d.p_v = Pi[0] * N[0] + Pi[1] * N[1];
    d.p_uu = quad(T, T) + kappa * d.p_v; // dT/du = kappa N turns the gradient
    d.p_vv = quad(N, N);
    return d;
}

void fill_derived(PathSample& s, const CollisionSystem& sys) {
    // Vt recovered from p keeps from_samples() consistent with traced paths
    double Vt = sys.E_kin_in - s.p * s.p / (2.0 * sys.mu0);
    double P0 = std::sqrt(2.0 * sys.mu0 * (sys.E - Vt));
    s.lambda1 = sys.hbar / P0;
    s.rho1 = safe_ratio(-s.p, s.p_u);
    s.rho2 = safe_ratio(-s.p, s.p_v);
    s.k1 = -sys.hbar * s.p_u / (P0 * s.p);
    s.k2 = -s.p_v / s.p;
}

} // namespace

ReactionPath ReactionPath::trace(const PotentialSurface& surface, const CollisionSystem& system,
                                 const PathOptions& options) {
    if (!(options.n_samples >= 16)) throw Error("domain", "need at least 16 path samples");
    if (!(options.u_max > options.u_min)) throw Error("domain", "u_max must exceed u_min");

    ReactionPath path;
    path.system_ = system;
    path.surface_ = std::make_shared<PotentialSurface>(surface);
    path.options_ = options;

    const std::size_t n = options.n_samples;
    const double c = options.transverse_offset;
    const bool analytic = surface.family() != PotentialSurface::Family::CustomTabulated;

    std::vector<double> xs(n), ys(n);
    if (analytic) {
        // valley floor is y = 0 for both analytic families; the offset path is
        // the straight line y = c, already arc-length parametrized
        for (std::size_t i = 0; i < n; ++i) {
            xs[i] = options.u_min + (options.u_max - options.u_min) * double(i) / double(n - 1);
            ys[i] = c;
        }
    } else {
        // follow the valley floor: minimize V over y at each x by golden section
        std::vector<double> fx(n), fy(n);
        for (std::size_t i = 0; i < n; ++i) {
            double x = options.u_min + (options.u_max - options.u_min) * double(i) / double(n - 1);
            double lo = -8.0, hi = 8.0;
            if (i > 0) {
                lo = fy[i - 1] - 2.0;
                hi = fy[i - 1] + 2.0;
            }
            const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
            double a = lo, b = hi;
            double p1 = b - gr * (b - a), p2 = a + gr * (b - a);
            double f1 = surface.evaluate(x, p1).V, f2 = surface.evaluate(x, p2).V;
            for (int it = 0; it < 120; ++it) {
                if (f1 < f2) {
                    b = p2;
                    p2 = p1;
                    f2 = f1;
                    p1 = b - gr * (b - a);
                    f1 = surface.evaluate(x, p1).V;
                } else {
                    a = p1;
                    p1 = p2;
                    f1 = f2;
                    p2 = a + gr * (b - a);
                    f2 = surface.evaluate(x, p2).V;
                }
            }
            fx[i] = x;
            fy[i] = 0.5 * (a + b);
        }
        // offset along the floor normal, then reparametrize by arc length
        CubicSpline floor_y(fx, fy);
        std::vector<double> ox(n), oy(n);
        for (std::size_t i = 0; i < n; ++i) {
            double ty = floor_y.derivative(fx[i]);
            double norm = std::sqrt(1.0 + ty * ty);
            ox[i] = fx[i] - c * ty / norm;
            oy[i] = fy[i] + c / norm;
        }
        CubicSpline sx(fx, ox), sy(fx, oy);
        std::vector<double> speed(n);
        for (std::size_t i = 0; i < n; ++i)
            speed[i] = std::hypot(sx.derivative(fx[i]), sy.derivative(fx[i]));
        CubicSpline speed_spline(fx, speed);
        std::vector<double> arc(n);
        for (std::size_t i = 0; i < n; ++i) arc[i] = speed_spline.integral(fx[i]);
        double s0 = speed_spline.integral(0.0);
        CubicSpline x_of_s(arc, fx);
        for (std::size_t i = 0; i < n; ++i) {
            double s = arc.front() + (arc.back() - arc.front()) * double(i) / double(n - 1);
            double x = x_of_s(s);
            xs[i] = sx(x);
            ys[i] = sy(x);
        }
        // ambient samples now uniform in arc length; u = s - s(x=0)
        std::vector<double> us(n);
        for (std::size_t i = 0; i < n; ++i)
            us[i] = arc.front() - s0 + (arc.back() - arc.front()) * double(i) / double(n - 1);
        std::vector<PathSample> samples(n);
        CubicSpline px(us, xs), py(us, ys);
        path.U_in_ = surface.evaluate(xs.front(), ys.front()).V;
        for (std::size_t i = 0; i < n; ++i) {
            PathSample& s = samples[i];
            s.u = us[i];
            s.x = xs[i];
            s.y = ys[i];
            double tx = px.derivative(s.u), ty = py.derivative(s.u);
            double sp = std::hypot(tx, ty);
            s.s_u = 1.0;
            double T[2] = {tx / sp, ty / sp};
            double N[2] = {-T[1], T[0]};
            double kappa =
                (tx * py.second_derivative(s.u) - ty * px.second_derivative(s.u)) / (sp * sp * sp);
            auto ev = surface.evaluate(s.x, s.y);
            auto d = momentum_derivs(ev, path.U_in_, system.E_kin_in, system.mu0, T, N, kappa,
                                     s.u);
            s.p = d.p;
            s.p_u = d.p_u;
            s.p_v = d.p_v;
            s.p_uu = d.p_uu;
            s.p_vv = d.p_vv;
            fill_derived(s, system);
        }
        path.samples_ = std::move(samples);
        path.finalize(options);
        return path;
    }

    std::vector<PathSample> samples(n);
    path.U_in_ = surface.evaluate(xs.front(), ys.front()).V;
    const double T[2] = {1.0, 0.0}, N[2] = {0.0, 1.0};
    for (std::size_t i = 0; i < n; ++i) {
        PathSample& s = samples[i];
        s.u = xs[i];
        s.x = xs[i];
        s.y = ys[i];
        s.s_u = 1.0;
        auto ev = surface.evaluate(s.x, s.y);
        auto d = momentum_derivs(ev, path.U_in_, system.E_kin_in, system.mu0, T, N, 0.0, s.u);
        s.p = d.p;
        s.p_u = d.p_u;
        s.p_v = d.p_v;
        s.p_uu = d.p_uu;
        s.p_vv = d.p_vv;
        fill_derived(s, system);
    }
    path.samples_ = std::move(samples);
    path.finalize(options);
    return path;
}

ReactionPath ReactionPath::from_samples(const CollisionSystem& system,
                                        std::vector<PathSample> samples,
                                        const PathOptions& options) {
    if (samples.size() < 4) throw Error("domain", "need at least 4 samples");
    ReactionPath path;
    path.system_ = system;
    path.options_ = options;
    for (auto& s : samples) {
        if (!(s.p > 0))
            throw Error("classically-forbidden", "p <= 0 at u = " + std::to_string(s.u));
        fill_derived(s, system);
    }
    path.U_in_ = 0.0;
    path.samples_ = std::move(samples);
    path.finalize(options);
    return path;
}

void ReactionPath::finalize(const PathOptions& options) {
    const auto& ss = samples_;
    const std::size_t n = ss.size();
    for (std::size_t i = 1; i < n; ++i)
        if (!(ss[i].u > ss[i - 1].u)) throw Error("domain", "u must increase strictly");

    // asymptotic flatness of p in both tails
    std::size_t tail = std::max<std::size_t>(2, std::size_t(double(n) * options.tail_fraction));
    auto flat = [&](std::size_t lo, std::size_t hi) {
        double pmin = kInf, pmax = -kInf;
        for (std::size_t i = lo; i < hi; ++i) {
            pmin = std::min(pmin, ss[i].p);
            pmax = std::max(pmax, ss[i].p);
        }
        return (pmax - pmin) <= options.asym_tol * pmax;
    };
    if (!flat(0, tail) || !flat(n - tail, n))
        throw Error("no-asymptote", "p(u) not flat in the asymptotic tails");
    p_minus_ = ss.front().p;

    std::vector<double> u(n), p(n), su(n), k1(n), k2(n), x(n), y(n), integrand(n);
    for (std::size_t i = 0; i < n; ++i) {
        u[i] = ss[i].u;
        p[i] = ss[i].p;
        su[i] = ss[i].s_u;
        k1[i] = ss[i].k1;
        k2[i] = ss[i].k2;
        x[i] = ss[i].x;
        y[i] = ss[i].y;
        integrand[i] = ss[i].p * ss[i].s_u;
    }
    p_spline_ = CubicSpline(u, p);
    su_spline_ = CubicSpline(u, su);
    k1_spline_ = CubicSpline(u, k1);
    k2_spline_ = CubicSpline(u, k2);
    x_spline_ = CubicSpline(u, x);
    y_spline_ = CubicSpline(u, y);
    integrand_spline_ = CubicSpline(u, integrand);

    double tau0 = integrand_spline_.integral(0.0);
    for (std::size_t i = 0; i < n; ++i)
        samples_[i].tau = (integrand_spline_.integral(u[i]) - tau0) / system_.E_kin_in;

    // charts: split where |rho2| dips below the bookkeeping threshold
    charts_.clear();
    auto below = [&](const PathSample& s) {
        return std::abs(s.rho2) < options.chart_rho2_threshold;
    };
    double lo = ss.front().u;
    bool state = below(ss.front());
    for (std::size_t i = 1; i < n; ++i) {
        if (below(ss[i]) != state) {
            charts_.push_back({lo, ss[i].u});
            lo = ss[i].u;
            state = !state;
        }
    }
    charts_.push_back({lo, ss.back().u});
}

void ReactionPath::frame_at(double u, double T[2], double N[2], double* kappa) const {
    double tx = x_spline_.derivative(u), ty = y_spline_.derivative(u);
    double sp = std::hypot(tx, ty);
    if (sp == 0.0) {
        T[0] = 1.0;
        T[1] = 0.0;
    } else {
        T[0] = tx / sp;
        T[1] = ty / sp;
    }
    N[0] = -T[1];
    N[1] = T[0];
    if (kappa) {
        double axx = x_spline_.second_derivative(u), ayy = y_spline_.second_derivative(u);
        *kappa = sp == 0.0 ? 0.0 : (tx * ayy - ty * axx) / (sp * sp * sp);
    }
}

namespace {

struct MetricLocal {
    double g[2], dg[2][2][2]; // g diagonal; dg[l][i][j] = d g_ij / d x^l
    double h1, h2;            // 1 + k1, 1 + v k2
};

MetricLocal metric_local(const ReactionPath& path, double u, double v) {
    MetricLocal m{};
    double k1 = path.k1(u), k2 = path.k2(u);
    double k1p = path.k1_prime(u), k2p = path.k2_prime(u);
    m.h1 = 1.0 + k1;
    m.h2 = 1.0 + v * k2;
    m.g[0] = m.h1 * m.h1;
    m.g[1] = m.h2 * m.h2;
    m.dg[0][0][0] = 2.0 * m.h1 * k1p;
    m.dg[0][1][1] = 2.0 * m.h2 * v * k2p;
    m.dg[1][1][1] = 2.0 * m.h2 * k2;
    return m;
}

void christoffels_from(const MetricLocal& m, double gamma[2][2][2]) {
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                gamma[k][i][j] =
                    0.5 / m.g[k] * (m.dg[i][k][j] + m.dg[j][i][k] - m.dg[k][i][j]);
}

} // namespace

MetricPoint metric_at(const ReactionPath& path, double u, double v) {
    auto m = metric_local(path, u, v);
    double eps = path.caustic_eps();
    if (std::abs(m.h2) <= eps || std::abs(m.h1) <= eps)
        throw Error("caustic", "metric degenerates at u = " + std::to_string(u) +
                                   ", v = " + std::to_string(v));
    MetricPoint out;
    out.g11 = m.g[0];
    out.g22 = m.g[1];
    out.det_g = m.g[0] * m.g[1];
    christoffels_from(m, out.christoffels);
    return out;
}

namespace {

/// Ambient potential data at local point (u, v) via the tube map r(u) + v N(u).
struct ClassicalField {
    double f;      // P0 / mu0
    double df[2];  // partial derivatives in (u, v)
};

ClassicalField classical_field(const ReactionPath& path, double u, double v) {
    const auto* surf = path.surface();
    const auto& sys = path.system();
    double T[2], N[2], kappa;
    path.frame_at(u, T, N, &kappa);
    double x = path.x_of(u) + v * N[0];
    double y = path.y_of(u) + v * N[1];
    auto ev = surf->evaluate(x, y);
    // tube-map chain rule: moving along u at offset v sweeps (1 - v kappa) of
    // ambient arc length, so dU/du picks up that factor; dU/dv is the normal
    // derivative directly
    double dUu = (ev.grad[0] * T[0] + ev.grad[1] * T[1]) * (1.0 - v * kappa);
    double dUv = ev.grad[0] * N[0] + ev.grad[1] * N[1];
    double P0sq = 2.0 * sys.mu0 * (sys.E - (ev.V - path.U_in()));
    if (!(P0sq > 0))
        throw Error("classically-forbidden",
                    "total energy below potential at u = " + std::to_string(u));
    double P0 = std::sqrt(P0sq);
    ClassicalField out;
    out.f = P0 / sys.mu0;
    out.df[0] = -dUu / P0;
    out.df[1] = -dUv / P0;
    return out;
}

} // namespace

FrameTrajectory integrate_frame(const ReactionPath& path, const FrameState& initial, double t_end,
                                const FrameOptions& options) {
    const bool classical = options.mode == FrameMode::Classical;
    if (classical && path.surface() == nullptr)
        throw Error("domain", "classical frame mode needs a surface-backed path");

    std::vector<double> y0 = {initial.x1, initial.x2, initial.v1, initial.v2};
    {
        auto m = metric_local(path, initial.x1, initial.x2);
        double speed =
            std::sqrt(m.g[0] * initial.v1 * initial.v1 + m.g[1] * initial.v2 * initial.v2);
        if (!(speed > 0)) throw Error("domain", "initial frame speed must be positive");
        if (classical) {
            double f = classical_field(path, initial.x1, initial.x2).f;
            y0[2] *= f / speed;
            y0[3] *= f / speed;
        }
    }

    auto a_of = [&](const std::vector<double>& y) {
        if (!classical) return 0.0;
        auto cf = classical_field(path, y[0], y[1]);
        return (cf.df[0] * y[2] + cf.df[1] * y[3]) / cf.f;
    };

    const double caustic_guard = std::max(path.caustic_eps(), 1e-4);
    OdeRhs rhs = [&](double, const std::vector<double>& y, std::vector<double>& dydt) {
        auto m = metric_local(path, y[0], y[1]);
        // clamp the metric factor so trial stages near the caustic stay finite
        if (std::abs(m.h2) < 0.5 * caustic_guard) {
            double s = m.h2 < 0 ? -1.0 : 1.0;
            m.h2 = 0.5 * caustic_guard * s;
            m.g[1] = m.h2 * m.h2;
        }
        double gamma[2][2][2];
        christoffels_from(m, gamma);
        double a = a_of(y);
        dydt.resize(4);
        dydt[0] = y[2];
        dydt[1] = y[3];
        for (int k = 0; k < 2; ++k) {
            double acc = a * y[2 + k];
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) acc -= gamma[k][i][j] * y[2 + i] * y[2 + j];
            dydt[2 + k] = acc;
        }
    };

    OdeOptions oo;
    oo.rel_tol = options.tol;
    oo.abs_tol = options.tol * 1e-2;
    oo.max_steps = options.max_steps;
    oo.stop = [&](double, const std::vector<double>& y) {
        return std::abs(1.0 + y[1] * path.k2(y[0])) < caustic_guard;
    };

    FrameTrajectory traj;
    traj.dense = integrate(rhs, y0, initial.t, initial.t + t_end, oo);
    traj.truncated = traj.dense.truncated();
    if (traj.truncated) traj.truncation_reason = "caustic";

    auto record = [&](double t, const std::vector<double>& y) {
        FrameState s;
        s.t = t;
        s.x1 = y[0];
        s.x2 = y[1];
        s.v1 = y[2];
        s.v2 = y[3];
        s.a_t = a_of(y);
        traj.states.push_back(s);
    };
    const auto& steps = traj.dense.steps();
    if (!steps.empty()) {
        record(steps.front().t0, steps.front().y0);
        for (const auto& s : steps) record(s.t1, s.y1);
    }
    return traj;
}

FrameState FrameTrajectory::at(double t) const {
    auto y = dense.at(t);
    FrameState s;
    s.t = t;
    s.x1 = y[0];
    s.x2 = y[1];
    s.v1 = y[2];
    s.v2 = y[3];
    s.a_t = 0.0;
    return s;
}

DivergenceEstimate divergence_diagnostic(const ReactionPath& path, const FrameState& initial,
                                         double delta0, double t_end, const FrameOptions& options,
                                         double renorm_dt) {
    if (!(delta0 > 0)) throw Error("domain", "delta0 must be positive");

    auto metric_norm = [&](const std::vector<double>& ref, const std::vector<double>& diff) {
        auto m = metric_local(path, ref[0], ref[1]);
        return std::sqrt(m.g[0] * (diff[0] * diff[0] + diff[2] * diff[2]) +
                         m.g[1] * (diff[1] * diff[1] + diff[3] * diff[3]));
    };

    std::vector<double> ya = {initial.x1, initial.x2, initial.v1, initial.v2};
    std::vector<double> yb = ya;
    {
        auto m = metric_local(path, ya[0], ya[1]);
        yb[1] += delta0 / std::sqrt(m.g[1]); // metric separation = delta0
    }

    DivergenceEstimate est{0.0, false, 0.0, 0};
    double acc = 0.0, t = 0.0;

    auto advance = [&](std::vector<double>& y, double t0, double t1) -> bool {
        FrameState s;
        s.t = t0;
        s.x1 = y[0];
        s.x2 = y[1];
        s.v1 = y[2];
        s.v2 = y[3];
        auto traj = integrate_frame(path, s, t1 - t0, options);
        y = {traj.dense.y_end()[0], traj.dense.y_end()[1], traj.dense.y_end()[2],
             traj.dense.y_end()[3]};
        return !traj.truncated;
    };

    while (t < t_end - 1e-12) {
        double t1 = std::min(t + renorm_dt, t_end);
        bool ok_a = advance(ya, t, t1);
        bool ok_b = advance(yb, t, t1);
        if (!ok_a || !ok_b) {
            est.partial = true;
            break;
        }
        std::vector<double> diff(4);
        for (int i = 0; i < 4; ++i) diff[i] = yb[i] - ya[i];
        double dist = metric_norm(ya, diff);
        acc += std::log(dist / delta0);
        for (int i = 0; i < 4; ++i) yb[i] = ya[i] + diff[i] * (delta0 / dist);
        ++est.n_renorm;
        t = t1;
    }
    est.t_used = t;
    est.lambda = t > 0 ? acc / t : 0.0;
    return est;
}

double internal_time(const ReactionPath& path, double u) {
    if (u < path.u_min() - 1e-9 || u > path.u_max() + 1e-9)
        throw Error("domain", "u outside path range");
    const auto& f = path.integrand_spline_;
    auto fn = [&](double x) { return f(x); };
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    double val;
    if (u >= 0)
        val = GK::integrate(fn, 0.0, u, 12, 1e-13);
    else
        val = -GK::integrate(fn, u, 0.0, 12, 1e-13);
    return val / path.system().E_kin_in;
}

double z_of(const ReactionPath& path, double u, double v) {
    const auto& sys = path.system();
    return path.p(u) * v / std::sqrt(sys.hbar * sys.E_kin_in);
}

QuasiclassicalReport quasiclassical_report(const ReactionPath& path) {
    const auto* surf = path.surface();
    if (surf == nullptr) throw Error("domain", "quasiclassical report needs a surface");
    const auto& sys = path.system();
    QuasiclassicalReport rep;
    rep.worst_ratio = 0.0;
    rep.worst_u = path.u_min();
    for (const auto& s : path.samples()) {
        double T[2], N[2];
        path.frame_at(s.u, T, N, nullptr);
        auto ev = surf->evaluate(s.x, s.y);
        double Uvv = N[0] * ev.hess[0][0] * N[0] + 2.0 * N[0] * ev.hess[0][1] * N[1] +
                     N[1] * ev.hess[1][1] * N[1];
        double omega_loc = Uvv > 0 ? std::sqrt(Uvv / sys.mu0) : 0.0;
        double lambda2 = omega_loc > 0 ? std::sqrt(sys.hbar / (sys.mu0 * omega_loc)) : kInf;
        double r1 = std::abs(s.k1);
        double r2 = std::isinf(std::abs(s.rho2)) ? 0.0 : lambda2 / std::abs(s.rho2);
        rep.u.push_back(s.u);
        rep.ratio1.push_back(r1);
        rep.ratio2.push_back(r2);
        rep.product.push_back(r1 * r2);
        rep.v0.push_back(std::abs(s.rho2));
        rep.lambda2_ok.push_back(lambda2 <= std::abs(s.rho2));
        double worst = std::max(r1, r2);
        if (worst > rep.worst_ratio) {
            rep.worst_ratio = worst;
            rep.worst_u = s.u;
        }
    }
    return rep;
}

} // namespace intime
