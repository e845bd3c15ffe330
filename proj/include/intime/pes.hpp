#pragma once

#include <array>
#include <map>
#include <string>

#include "intime/common.hpp"
#include "intime/interp.hpp"

namespace intime {

/// Masses and energies of the collinear A + (B,C) system in mass-scaled
/// model units (hbar = 1 by default). E is the total energy, E_kin_in the
/// initial translational energy in the entrance channel.
struct CollisionSystem {
    double mA, mB, mC;
    double E;
    double E_kin_in;
    double mu0;
    double hbar = 1.0;

    static CollisionSystem make(double mA, double mB, double mC, double E, double E_kin_in,
                                double hbar = 1.0);
};

/// mu0 = sqrt(mA*mB*mC / (mA+mB+mC)); throws on non-positive masses.
double reduced_mass(double mA, double mB, double mC);

struct SurfaceEval {
    double V;
    std::array<double, 2> grad;                 // {dV/dx, dV/dy}
    std::array<std::array<double, 2>, 2> hess;  // symmetric
};

/// Analytic model potential V(x,y) with exact derivatives, or a tabulated
/// grid with bicubic-spline derivatives.
///
/// Families:
///  - flat-channel:          V = 1/2 mu0 omega0^2 y^2 (x-independent)
///  - two-channel-harmonic:  V = B(x) + 1/2 mu0 omega(x)^2 y^2 with
///        omega(x) = omega_in + (omega_out - omega_in) * (1 + tanh(x/L)) / 2
///        B(x)     = barrier_height * sech^2(x / barrier_width)
///  - custom-tabulated:      bicubic interpolation of a value grid
class PotentialSurface {
public:
    enum class Family { FlatChannel, TwoChannelHarmonic, CustomTabulated };

    static PotentialSurface flat_channel(double mu0, double omega0);
    static PotentialSurface two_channel(double mu0, double omega_in, double omega_out, double L,
                                        double barrier_height = 0.0, double barrier_width = 1.0);
    static PotentialSurface tabulated(std::vector<double> x_nodes, std::vector<double> y_nodes,
                                      std::vector<std::vector<double>> values);

    SurfaceEval evaluate(double x, double y) const;

    Family family() const { return family_; }
    const std::map<std::string, double>& params() const { return params_; }
    double param(const std::string& name) const;

    /// Transverse harmonic frequency at fixed x (analytic families only).
    double omega_at(double x) const;

private:
    PotentialSurface() = default;

    Family family_ = Family::FlatChannel;
    double mu0_ = 1.0;
    std::map<std::string, double> params_;
    BicubicSpline table_;
};

} // namespace intime
