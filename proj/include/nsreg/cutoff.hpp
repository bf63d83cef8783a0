#pragma once

#include <cmath>
#include <numbers>

#include "cylinder.hpp"

namespace nsreg {

/// Transition profiles: 1 for s <= 0, 0 for s >= 1.
enum class CutoffProfile { quintic, smooth };

struct ProfileValue {
    double v, d1, d2;
};

inline ProfileValue profile_eval(CutoffProfile prof, double s) {
    if (s <= 0.0) return {1.0, 0.0, 0.0};
    if (s >= 1.0) return {0.0, 0.0, 0.0};
    if (prof == CutoffProfile::quintic) {
        double s2 = s * s, s3 = s2 * s;
        return {1.0 - (6.0 * s3 * s2 - 15.0 * s3 * s + 10.0 * s3), -30.0 * s2 * (s - 1.0) * (s - 1.0),
                -60.0 * s * (s - 1.0) * (2.0 * s - 1.0)};
    }
    // 1 / (1 + e^z), z = 1/(1-s) - 1/s; every derivative vanishes at both ends
    double z = 1.0 / (1.0 - s) - 1.0 / s;
    double v, vw;  // psi and psi*(1-psi)
    if (z > 0) {
        double e = std::exp(-z);
        v = e / (1.0 + e);
        vw = e / ((1.0 + e) * (1.0 + e));
    } else {
        double e = std::exp(z);
        v = 1.0 / (1.0 + e);
        vw = e / ((1.0 + e) * (1.0 + e));
    }
    double z1 = 1.0 / ((1.0 - s) * (1.0 - s)) + 1.0 / (s * s);
    double z2 = 2.0 / ((1.0 - s) * (1.0 - s) * (1.0 - s)) - 2.0 / (s * s * s);
    double d1 = -vw * z1;
    double d2 = -(d1 * (1.0 - 2.0 * v) * z1 + vw * z2);
    return {v, d1, d2};
}

/// Radial bump f(d) with value and first two derivatives in d.
struct RadialValue {
    double w, w1, w2;
};

/// Space-time cutoff equal to 1 on Q_{rho/2}(z0) and vanishing outside
/// Q_rho(z0): radial in x (ball) or in x_h (vertical), times a profile in time.
struct Cutoff {
    Vec3 x0{0.0, 0.0, 0.0};
    double t0 = 0.0;
    double rho = 1.0;
    Geometry geometry = Geometry::ball;
    CutoffProfile profile = CutoffProfile::quintic;
    double box_length = 2.0 * std::numbers::pi;

    Vec3 displacement(const Vec3& x) const {
        Grid3 g{16, box_length};
        Vec3 y{g.periodic_delta(x[0] - x0[0]), g.periodic_delta(x[1] - x0[1]), g.periodic_delta(x[2] - x0[2])};
        if (geometry == Geometry::vertical) y[2] = 0.0;
        return y;
    }
    int dims() const { return geometry == Geometry::ball ? 3 : 2; }

    RadialValue radial(double d) const {
        double b = 0.5 * rho;
        auto p = profile_eval(profile, (d - b) / b);
        return {p.v, p.d1 / b, p.d2 / (b * b)};
    }
    double time_factor(double t, double* dt = nullptr) const {
        double span = 0.75 * rho * rho;
        double tau = (t0 - t - 0.25 * rho * rho) / span;
        auto p = profile_eval(profile, tau);
        if (dt) *dt = -p.d1 / span;
        return p.v;
    }

    double space(const Vec3& x) const {
        auto y = displacement(x);
        return radial(std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2])).w;
    }
    Vec3 space_gradient(const Vec3& x) const {
        auto y = displacement(x);
        double d = std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]);
        if (d == 0.0) return {0.0, 0.0, 0.0};
        double w1 = radial(d).w1;
        return {w1 * y[0] / d, w1 * y[1] / d, w1 * y[2] / d};
    }
    double space_laplacian(const Vec3& x) const {
        auto y = displacement(x);
        double d = std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]);
        auto r = radial(d);
        if (d == 0.0) return dims() * r.w2;
        return r.w2 + (dims() - 1) * r.w1 / d;
    }

    double value(const Vec3& x, double t) const { return space(x) * time_factor(t); }
    Vec3 gradient(const Vec3& x, double t) const {
        auto g = space_gradient(x);
        double f = time_factor(t);
        return {g[0] * f, g[1] * f, g[2] * f};
    }
    double laplacian(const Vec3& x, double t) const { return space_laplacian(x) * time_factor(t); }
    double time_derivative(const Vec3& x, double t) const {
        double dt;
        time_factor(t, &dt);
        return space(x) * dt;
    }
};

/// Cutoff for the scales 0 < 4r < rho.
inline Cutoff build_cutoff(double r, double rho, Geometry geom, const Vec3& x0 = {0, 0, 0}, double t0 = 0.0,
                           double box_length = 2.0 * std::numbers::pi,
                           CutoffProfile prof = CutoffProfile::quintic) {
    if (!(r > 0.0) || !(4.0 * r < rho)) throw ValidationError("cutoff needs 0 < 4r < rho");
    if (rho > 0.5 * box_length) throw ValidationError("cutoff radius exceeds half the box");
    return Cutoff{x0, t0, rho, geom, prof, box_length};
}

/// Samples the cutoff at grid nodes for one time.
inline Lattice sample_cutoff(const Cutoff& c, const Grid3& g, double t) {
    Lattice out(g.size());
    for (int k = 0; k < g.n; ++k)
        for (int j = 0; j < g.n; ++j)
            for (int i = 0; i < g.n; ++i)
                out[g.index(i, j, k)] = c.value({g.coordinate(i), g.coordinate(j), g.coordinate(k)}, t);
    return out;
}

enum class HeatKernel { heat3, heat2h };

inline std::string to_string(HeatKernel k) { return k == HeatKernel::heat3 ? "heat3" : "heat2h"; }

/// phi = Gamma * zeta with the backward heat kernel
/// Gamma = (4 pi (r^2 - s))^{-d/2} exp(-|y|^2 / (4 (r^2 - s))), s = t - t0.
struct TestFunction {
    HeatKernel kernel = HeatKernel::heat3;
    double r = 0.25;
    Cutoff cutoff;

    int dims() const { return kernel == HeatKernel::heat3 ? 3 : 2; }
    double gamma(const Vec3& x, double t) const {
        auto y = cutoff.displacement(x);
        double sig = r * r - (t - cutoff.t0);
        double y2 = y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
        return std::pow(4.0 * std::numbers::pi * sig, -0.5 * dims()) * std::exp(-y2 / (4.0 * sig));
    }
    Vec3 gamma_gradient(const Vec3& x, double t) const {
        auto y = cutoff.displacement(x);
        double sig = r * r - (t - cutoff.t0);
        double g = gamma(x, t);
        return {-g * y[0] / (2.0 * sig), -g * y[1] / (2.0 * sig), -g * y[2] / (2.0 * sig)};
    }
    double phi(const Vec3& x, double t) const { return gamma(x, t) * cutoff.value(x, t); }
    Vec3 grad_phi(const Vec3& x, double t) const {
        double g = gamma(x, t), z = cutoff.value(x, t);
        auto dg = gamma_gradient(x, t);
        auto dz = cutoff.gradient(x, t);
        return {dg[0] * z + g * dz[0], dg[1] * z + g * dz[1], dg[2] * z + g * dz[2]};
    }
    /// (d_t + Laplacian) phi, using (d_t + Laplacian) Gamma = 0.
    double heat_phi(const Vec3& x, double t) const {
        double g = gamma(x, t);
        auto dg = gamma_gradient(x, t);
        auto dz = cutoff.gradient(x, t);
        return g * (cutoff.time_derivative(x, t) + cutoff.laplacian(x, t)) +
               2.0 * (dg[0] * dz[0] + dg[1] * dz[1] + dg[2] * dz[2]);
    }
    /// (d_t + Laplacian) Gamma by fourth-order central differences of the closed form.
    double kernel_identity_residual(const Vec3& x, double t, double step = 1e-3) const {
        auto f = [&](const Vec3& p, double s) { return gamma(p, s); };
        auto d2 = [&](int a) {
            Vec3 p1 = x, p2 = x, m1 = x, m2 = x;
            p1[a] += step, p2[a] += 2 * step, m1[a] -= step, m2[a] -= 2 * step;
            return (-f(p2, t) + 16 * f(p1, t) - 30 * f(x, t) + 16 * f(m1, t) - f(m2, t)) / (12 * step * step);
        };
        double ts = step * r * r;
        double dt = (-f(x, t + 2 * ts) + 8 * f(x, t + ts) - 8 * f(x, t - ts) + f(x, t - 2 * ts)) / (12 * ts);
        double lap = d2(0) + d2(1) + (dims() == 3 ? d2(2) : 0.0);
        return dt + lap;
    }
};

inline TestFunction build_test_function(double r, double rho, HeatKernel kernel, const Vec3& x0 = {0, 0, 0},
                                        double t0 = 0.0, double box_length = 2.0 * std::numbers::pi,
                                        CutoffProfile prof = CutoffProfile::quintic) {
    // the energy balance holds for any r > 0; 4r < rho only matters to the lemmas
    if (!(r > 0.0) || !(rho > 0.0)) throw ValidationError("test function needs r > 0 and rho > 0");
    if (rho > 0.5 * box_length) throw ValidationError("cutoff radius exceeds half the box");
    Geometry geom = kernel == HeatKernel::heat3 ? Geometry::ball : Geometry::vertical;
    return TestFunction{kernel, r, Cutoff{x0, t0, rho, geom, prof, box_length}};
}

} // namespace nsreg
