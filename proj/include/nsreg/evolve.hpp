#pragma once

#include <utility>

#include "generate.hpp"
#include "poisson.hpp"

namespace nsreg {

namespace detail {

inline double kinetic_sum(const std::array<Lattice, 3>& u) {
    double e = 0.0;
    for (const auto& c : u)
        for (double v : c) e += v * v;
    return e;
}

/// Projected nonlinear term P(u x w) of a spectral velocity.
inline std::array<Spectrum, 3> nonlinear_term(const Grid3& g, const std::array<Spectrum, 3>& uh, bool dealias) {
    std::array<Lattice, 3> u, w;
    for (int a = 0; a < 3; ++a) u[a] = inverse_fft(g, uh[a]);
    w[0] = inverse_fft(g, [&] {
        auto s = spectral_derivative(g, uh[2], 1), t = spectral_derivative(g, uh[1], 2);
        for (std::size_t i = 0; i < s.size(); ++i) s[i] -= t[i];
        return s;
    }());
    w[1] = inverse_fft(g, [&] {
        auto s = spectral_derivative(g, uh[0], 2), t = spectral_derivative(g, uh[2], 0);
        for (std::size_t i = 0; i < s.size(); ++i) s[i] -= t[i];
        return s;
    }());
    w[2] = inverse_fft(g, [&] {
        auto s = spectral_derivative(g, uh[1], 0), t = spectral_derivative(g, uh[0], 1);
        for (std::size_t i = 0; i < s.size(); ++i) s[i] -= t[i];
        return s;
    }());
    std::array<Spectrum, 3> out;
    Lattice c(g.size());
    for (int a = 0; a < 3; ++a) {
        int b = (a + 1) % 3, d = (a + 2) % 3;
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = u[b][i] * w[d][i] - u[d][i] * w[b][i];
        out[a] = forward_fft(g, c);
        if (dealias) apply_dealias(g, out[a]);
    }
    spectral_leray(g, out);
    return out;
}

} // namespace detail

/// Pseudo-spectral Navier-Stokes integration: RK4 with an integrating factor
/// for the viscous term, rotational form of the nonlinearity. Emits velocity
/// and the matching zero-mean pressure every params.output_every steps.
inline std::pair<SpaceTimeField, SpaceTimeField> ns_evolve(const Snapshot& u0, const FlowParams& params) {
    params.validate();
    if (u0.num_components() != 3) throw ValidationError("initial condition must be a velocity snapshot");
    const Grid3& g = u0.grid;
    g.validate();
    double umax = max_norm(u0);
    if (umax > 0.0 && params.dt > 0.5 * g.spacing() / umax)
        throw NumericalError("stability bound violated: dt " + std::to_string(params.dt) + " > 0.5*spacing/max|u| = " +
                             std::to_string(0.5 * g.spacing() / umax));
    if (!is_divergence_free(u0)) throw ValidationError("initial condition is not divergence free");

    std::array<Spectrum, 3> uh;
    for (int a = 0; a < 3; ++a) {
        uh[a] = forward_fft(g, u0.component(a));
        uh[a][0] = 0.0;
        if (params.dealias) apply_dealias(g, uh[a]);
    }
    const std::size_t hs = half_size(g);
    std::vector<double> e1(hs), e2(hs);
    for_each_mode(g, [&](std::size_t idx, int m1, int m2, int m3) {
        auto k = full_wavevector(g, m1, m2, m3);
        double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        e1[idx] = std::exp(-params.viscosity * k2 * params.dt);
        e2[idx] = std::exp(-params.viscosity * k2 * params.dt * 0.5);
    });

    std::vector<Snapshot> vel, prs;
    auto emit = [&](double t) {
        std::vector<Lattice> c;
        for (int a = 0; a < 3; ++a) c.push_back(inverse_fft(g, uh[a]));
        auto s = make_snapshot(g, t, std::move(c));
        prs.push_back(solve_pressure(s, params.dealias));
        vel.push_back(std::move(s));
    };
    emit(u0.time);

    const double dt = params.dt;
    const long steps = params.steps();
    double energy = 0.0;
    for (int a = 0; a < 3; ++a) energy += detail::kinetic_sum({inverse_fft(g, uh[a]), {}, {}});
    std::array<Spectrum, 3> tmp;
    for (long step = 1; step <= steps; ++step) {
        auto k1 = detail::nonlinear_term(g, uh, params.dealias);
        for (int a = 0; a < 3; ++a) {
            tmp[a].resize(hs);
            for (std::size_t i = 0; i < hs; ++i) tmp[a][i] = e2[i] * (uh[a][i] + 0.5 * dt * k1[a][i]);
        }
        auto k2 = detail::nonlinear_term(g, tmp, params.dealias);
        for (int a = 0; a < 3; ++a)
            for (std::size_t i = 0; i < hs; ++i) tmp[a][i] = e2[i] * uh[a][i] + 0.5 * dt * k2[a][i];
        auto k3 = detail::nonlinear_term(g, tmp, params.dealias);
        for (int a = 0; a < 3; ++a)
            for (std::size_t i = 0; i < hs; ++i) tmp[a][i] = e1[i] * uh[a][i] + dt * e2[i] * k3[a][i];
        auto k4 = detail::nonlinear_term(g, tmp, params.dealias);
        for (int a = 0; a < 3; ++a)
            for (std::size_t i = 0; i < hs; ++i)
                uh[a][i] = e1[i] * uh[a][i] +
                           dt / 6.0 * (e1[i] * k1[a][i] + 2.0 * e2[i] * (k2[a][i] + k3[a][i]) + k4[a][i]);

        double next = 0.0;
        for (int a = 0; a < 3; ++a) {
            Lattice p = inverse_fft(g, uh[a]);
            for (double v : p) {
                if (!std::isfinite(v)) throw NumericalError("non-finite velocity at step " + std::to_string(step));
                next += v * v;
            }
        }
        if (next > energy * (1.0 + 1e-8) + 1e-300)
            throw NumericalError("kinetic energy increased at step " + std::to_string(step));
        energy = next;
        if (step % params.output_every == 0) emit(u0.time + double(step) * dt);
    }
    double dt_out = dt * params.output_every;
    std::string id = "evolved@" + std::to_string(g.n);
    return {SpaceTimeField(FieldKind::velocity, {"u1", "u2", "u3"}, std::move(vel), dt_out, id),
            SpaceTimeField(FieldKind::pressure, {"pi"}, std::move(prs), dt_out, id)};
}

} // namespace nsreg
