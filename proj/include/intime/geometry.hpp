#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "intime/common.hpp"
#include "intime/interp.hpp"
#include "intime/ode.hpp"
#include "intime/pes.hpp"

namespace intime {

struct PathOptions {
    double u_min = -20.0;
    double u_max = 20.0;
    std::size_t n_samples = 1201;
    /// Draw the path at a constant normal offset from the valley floor;
    /// gives the path a finite transverse curvature radius rho2.
    double transverse_offset = 0.0;
    double caustic_eps = 1e-6;
    /// Chart bookkeeping: split the path where |rho2| dips below this.
    double chart_rho2_threshold = 1e-2;
    /// Relative flatness required of p(u) in the asymptotic tails.
    double asym_tol = 1e-8;
    double tail_fraction = 0.05;
};

struct PathSample {
    double u;            // arc-length parameter
    double x, y;         // ambient coordinates
    double s_u;          // arc-length derivative (1 after reparametrization)
    double p;            // momentum P(u, 0) at collision energy
    double p_u, p_v;     // directional derivatives of P along tangent/normal
    double p_uu, p_vv;
    double rho1, rho2;   // curvature radii, rho_i = -p / p_{x^i} (may be inf)
    double lambda1;      // de Broglie length hbar / P0(u, 0) at total energy
    double k1, k2;       // lambda1/rho1 and 1/rho2 (finite everywhere)
    double tau;          // internal time at this sample
};

struct Chart {
    double u_lo, u_hi;
};

/// Sampled reaction path with spline-backed continuous queries. Immutable
/// after construction; all queries are pure.
class ReactionPath {
public:
    static ReactionPath trace(const PotentialSurface& surface, const CollisionSystem& system,
                              const PathOptions& options);

    /// Build a path directly from samples (u, x, y, s_u, p, p_u, p_v, p_uu, p_vv);
    /// the derived fields are filled in. Used for synthetic geometries.
    static ReactionPath from_samples(const CollisionSystem& system,
                                     std::vector<PathSample> samples,
                                     const PathOptions& options = {});

    const std::vector<PathSample>& samples() const { return samples_; }
    const std::vector<Chart>& charts() const { return charts_; }
    double u_min() const { return samples_.front().u; }
    double u_max() const { return samples_.back().u; }
    double p_minus() const { return p_minus_; }
    const CollisionSystem& system() const { return system_; }
    const PotentialSurface* surface() const { return surface_.get(); }
    double caustic_eps() const { return options_.caustic_eps; }
    /// In-channel potential anchor; V - U_in() vanishes in the entrance tail.
    double U_in() const { return U_in_; }

    double p(double u) const { return p_spline_(u); }
    double s_u(double u) const { return su_spline_(u); }
    double k1(double u) const { return k1_spline_(u); }
    double k2(double u) const { return k2_spline_(u); }
    double k1_prime(double u) const { return k1_spline_.derivative(u); }
    double k2_prime(double u) const { return k2_spline_.derivative(u); }
    double x_of(double u) const { return x_spline_(u); }
    double y_of(double u) const { return y_spline_(u); }

    /// Unit tangent/normal and signed curvature of the ambient curve.
    void frame_at(double u, double T[2], double N[2], double* kappa) const;

private:
    void finalize(const PathOptions& options);

    std::vector<PathSample> samples_;
    std::vector<Chart> charts_;
    CollisionSystem system_{};
    std::shared_ptr<const PotentialSurface> surface_;
    PathOptions options_{};
    double p_minus_ = 0.0;
    double U_in_ = 0.0; // in-channel potential anchor subtracted from V
    CubicSpline p_spline_, su_spline_, k1_spline_, k2_spline_, x_spline_, y_spline_;
    CubicSpline integrand_spline_; // p * s_u, for internal time
    friend double internal_time(const ReactionPath&, double);
};

struct MetricPoint {
    double g11, g22;
    double det_g;
    double christoffels[2][2][2]; // [k][i][j], symmetric in i,j
};

/// Metric and connection of the path-induced geometry:
///   g11 = (1 + lambda1/rho1)^2, g22 = (1 + v/rho2)^2, g12 = 0,
///   Gamma^k_ij = 1/2 g^{kl} (dg_lj/dx^i + dg_il/dx^j - dg_ij/dx^l).
/// Throws Error("caustic") when |1 + v/rho2| <= caustic eps.
MetricPoint metric_at(const ReactionPath& path, double u, double v);

enum class FrameMode { Classical, Geodesic };

struct FrameState {
    double t = 0.0;
    double x1 = 0.0, x2 = 0.0; // (u, v)
    double v1 = 0.0, v2 = 0.0; // their t-derivatives
    double a_t = 0.0;
};

struct FrameOptions {
    FrameMode mode = FrameMode::Classical;
    double tol = 1e-10;
    std::size_t max_steps = 4'000'000;
};

struct FrameTrajectory {
    std::vector<FrameState> states; // at accepted steps
    bool truncated = false;
    std::string truncation_reason;
    OdeSolution dense;
    FrameState at(double t) const;
};

/// Local-frame motion x''^k + Gamma^k_ij x'^i x'^j = a(t) x'^k.
/// Classical mode keeps the metric speed equal to P0(u,v)/mu0 (the initial
/// velocity is rescaled accordingly and a(t) = d/dt ln speed); geodesic mode
/// sets a(t) = 0. Caustic encounters truncate the trajectory with a flag.
FrameTrajectory integrate_frame(const ReactionPath& path, const FrameState& initial, double t_end,
                                const FrameOptions& options = {});

struct DivergenceEstimate {
    double lambda;
    bool partial;       // a trajectory truncated before t_end
    double t_used;
    std::size_t n_renorm;
};

/// Benettin-style estimate of the mean logarithmic separation growth rate of
/// two frame trajectories offset by delta0, renormalized every renorm_dt.
/// Separation is measured in the Riemannian norm (the coordinate norm is
/// blind to deviation stored in the metric factor).
DivergenceEstimate divergence_diagnostic(const ReactionPath& path, const FrameState& initial,
                                         double delta0, double t_end,
                                         const FrameOptions& options = {},
                                         double renorm_dt = 0.5);

/// tau(u) = (E_k^i)^{-1} * integral_0^u p(u') s_u(u') du' by adaptive quadrature.
double internal_time(const ReactionPath& path, double u);

/// z = (hbar E_k^i)^{-1/2} p(u) v.
double z_of(const ReactionPath& path, double u, double v);

struct QuasiclassicalReport {
    std::vector<double> u;
    std::vector<double> ratio1;        // lambda1 / |rho1|
    std::vector<double> ratio2;        // lambda2 / |rho2|
    std::vector<double> product;       // lambda1 lambda2 / |rho1 rho2|
    std::vector<double> v0;            // caustic spacing |rho2|
    std::vector<bool> lambda2_ok;      // lambda2 <= v0
    double worst_ratio;
    double worst_u;
};

/// Quasiclassicality diagnostics along the path; lambda2 is the transverse
/// ground-state width sqrt(hbar / (mu0 * omega_loc)) from the local
/// transverse curvature of the surface.
QuasiclassicalReport quasiclassical_report(const ReactionPath& path);

} // namespace intime
