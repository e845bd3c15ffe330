#include "intime/pes.hpp"

#include <cmath>

namespace intime {

double reduced_mass(double mA, double mB, double mC) {
    if (!(mA > 0) || !(mB > 0) || !(mC > 0))
        throw Error("domain", "masses must be positive");
    return std::sqrt(mA * mB * mC / (mA + mB + mC));
}

CollisionSystem CollisionSystem::make(double mA, double mB, double mC, double E, double E_kin_in,
                                      double hbar) {
    CollisionSystem s{mA, mB, mC, E, E_kin_in, reduced_mass(mA, mB, mC), hbar};
    if (!(E_kin_in > 0) || !(E_kin_in <= E))
        throw Error("domain", "require 0 < E_kin_in <= E");
    if (!(hbar > 0)) throw Error("domain", "hbar must be positive");
    return s;
}

PotentialSurface PotentialSurface::flat_channel(double mu0, double omega0) {
    if (!(omega0 > 0)) throw Error("domain", "omega0 must be positive");
    PotentialSurface s;
    s.family_ = Family::FlatChannel;
    s.mu0_ = mu0;
    s.params_ = {{"omega0", omega0}};
    return s;
}

PotentialSurface PotentialSurface::two_channel(double mu0, double omega_in, double omega_out,
                                               double L, double barrier_height,
                                               double barrier_width) {
    if (!(omega_in > 0) || !(omega_out > 0) || !(L > 0) || !(barrier_width > 0))
        throw Error("domain", "two-channel parameters must be positive");
    PotentialSurface s;
    s.family_ = Family::TwoChannelHarmonic;
    s.mu0_ = mu0;
    s.params_ = {{"omega_in", omega_in},
                 {"omega_out", omega_out},
                 {"L", L},
                 {"barrier_height", barrier_height},
                 {"barrier_width", barrier_width}};
    return s;
}

PotentialSurface PotentialSurface::tabulated(std::vector<double> x_nodes,
                                             std::vector<double> y_nodes,
                                             std::vector<std::vector<double>> values) {
    PotentialSurface s;
    s.family_ = Family::CustomTabulated;
    s.table_ = BicubicSpline(std::move(x_nodes), std::move(y_nodes), std::move(values));
    return s;
}

double PotentialSurface::param(const std::string& name) const {
    auto it = params_.find(name);
    if (it == params_.end()) throw Error("domain", "unknown surface parameter " + name);
    return it->second;
}

double PotentialSurface::omega_at(double x) const {
    switch (family_) {
    case Family::FlatChannel:
        return param("omega0");
    case Family::TwoChannelHarmonic: {
        double win = param("omega_in"), wout = param("omega_out"), L = param("L");
        return win + (wout - win) * 0.5 * (1.0 + std::tanh(x / L));
    }
    default:
        throw Error("domain", "omega_at requires an analytic family");
    }
}

SurfaceEval PotentialSurface::evaluate(double x, double y) const {
    SurfaceEval e{0.0, {0.0, 0.0}, {{{0.0, 0.0}, {0.0, 0.0}}}};
    switch (family_) {
    case Family::FlatChannel: {
        double w = param("omega0");
        double k = mu0_ * w * w;
        e.V = 0.5 * k * y * y;
        e.grad = {0.0, k * y};
        e.hess[1][1] = k;
        return e;
    }
    case Family::TwoChannelHarmonic: {
        double win = param("omega_in"), wout = param("omega_out"), L = param("L");
        double hb = param("barrier_height"), wb = param("barrier_width");
        double dw = wout - win;
        double s = x / L;
        double th = std::tanh(s), sech2 = 1.0 - th * th;
        double w = win + dw * 0.5 * (1.0 + th);
        double wp = dw * 0.5 * sech2 / L;
        double wpp = -dw * sech2 * th / (L * L);
        double sb = x / wb;
        double thb = std::tanh(sb), sech2b = 1.0 - thb * thb;
        double B = hb * sech2b;
        double Bp = -2.0 * hb * sech2b * thb / wb;
        double Bpp = hb * (4.0 * sech2b * thb * thb - 2.0 * sech2b * sech2b) / (wb * wb);
        e.V = B + 0.5 * mu0_ * w * w * y * y;
        e.grad = {Bp + mu0_ * w * wp * y * y, mu0_ * w * w * y};
        e.hess[0][0] = Bpp + mu0_ * (wp * wp + w * wpp) * y * y;
        e.hess[0][1] = e.hess[1][0] = 2.0 * mu0_ * w * wp * y;
        e.hess[1][1] = mu0_ * w * w;
        return e;
    }
    default: {
        auto t = table_.evaluate(x, y);
        e.V = t.f;
        e.grad = {t.fx, t.fy};
        e.hess[0][0] = t.fxx;
        e.hess[0][1] = e.hess[1][0] = t.fxy;
        e.hess[1][1] = t.fyy;
        return e;
    }
    }
}

} // namespace intime
