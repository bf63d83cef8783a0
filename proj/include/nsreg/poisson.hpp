#pragma once

#include "calculus.hpp"

namespace nsreg {

/// Velocity in physical and spectral form, optionally truncated to the
/// two-thirds band first so every quadratic product is alias free.
struct VelocityState {
    Grid3 grid;
    std::array<Spectrum, 3> spec;
    std::array<Lattice, 3> phys;
    bool dealias = true;
};

inline VelocityState velocity_state(const Grid3& g, std::array<Spectrum, 3> spec, bool dealias) {
    VelocityState v{g, std::move(spec), {}, dealias};
    for (int a = 0; a < 3; ++a) {
        if (dealias) apply_dealias(g, v.spec[a]);
        v.phys[a] = inverse_fft(g, v.spec[a]);
    }
    return v;
}

inline VelocityState velocity_state(const Snapshot& u, bool dealias) {
    if (u.num_components() != 3) throw ValidationError("velocity snapshot needs 3 components");
    return velocity_state(u.grid, {forward_fft(u.grid, u.component(0)), forward_fft(u.grid, u.component(1)),
                                   forward_fft(u.grid, u.component(2))}, dealias);
}

/// Spectrum of a pointwise product, masked when dealiasing.
inline Spectrum product_spectrum(const VelocityState& v, const Lattice& a, const Lattice& b) {
    Lattice p(a.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = a[i] * b[i];
    Spectrum s = forward_fft(v.grid, p);
    if (v.dealias) apply_dealias(v.grid, s);
    return s;
}

/// Spectrum of (-Laplacian)^{-1} d_i d_j (u_i u_j) restricted to the listed index pairs (i <= j).
inline Spectrum pressure_part_spectrum(const VelocityState& v, const std::vector<std::pair<int, int>>& pairs) {
    const Grid3& g = v.grid;
    Spectrum out(half_size(g), Complex(0.0));
    for (auto [i, j] : pairs) {
        Spectrum s = product_spectrum(v, v.phys[i], v.phys[j]);
        double mult = i == j ? 1.0 : 2.0;
        for_each_mode(g, [&](std::size_t idx, int m1, int m2, int m3) {
            auto kd = derivative_wavevector(g, m1, m2, m3);
            auto kf = full_wavevector(g, m1, m2, m3);
            double k2 = kf[0] * kf[0] + kf[1] * kf[1] + kf[2] * kf[2];
            if (k2 == 0.0) return;
            double kk = i == j ? kf[i] * kf[i] : kd[i] * kd[j];
            out[idx] += -mult * kk * s[idx] / k2;
        });
    }
    return out;
}

inline const std::vector<std::pair<int, int>>& all_pairs() {
    static const std::vector<std::pair<int, int>> p{{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}};
    return p;
}

/// Zero-mean pressure of the periodic Poisson problem -Laplacian(pi) = d_i d_j (u_i u_j).
inline Snapshot solve_pressure(const Snapshot& u, bool dealias = true) {
    auto v = velocity_state(u, dealias);
    return make_snapshot(u.grid, u.time, {inverse_fft(u.grid, pressure_part_spectrum(v, all_pairs()))});
}

inline SpaceTimeField solve_pressure(const SpaceTimeField& u, bool dealias = true) {
    if (u.kind() != FieldKind::velocity) throw ValidationError("pressure solve needs a velocity field");
    std::vector<Snapshot> snaps;
    for (const auto& s : u.snapshots()) snaps.push_back(solve_pressure(s, dealias));
    return SpaceTimeField(FieldKind::pressure, {"pi"}, std::move(snaps), u.dt(), u.id());
}

} // namespace nsreg
