#pragma once

#include <cmath>
#include <random>
#include <string>

#include "calculus.hpp"

namespace nsreg {

struct FlowParams {
    double viscosity = 1.0;
    double end_time = 0.1;
    double dt = 1e-3;
    bool dealias = true;
    double amplitude = 1.0;
    /// Emit one snapshot every this many steps.
    int output_every = 1;

    void validate() const {
        if (!(viscosity > 0.0) || !std::isfinite(viscosity)) throw ValidationError("viscosity must be positive");
        if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt must be positive");
        if (!(end_time >= dt * (1.0 - 1e-12))) throw ValidationError("end time must be at least dt");
        if (!std::isfinite(amplitude)) throw ValidationError("amplitude must be finite");
        if (output_every < 1) throw ValidationError("output stride must be >= 1");
    }
    long steps() const { return std::lround(end_time / dt); }
};

enum class FieldFamily {
    zero, constant, shear, taylor_green_2d, abc, axis_heat, rigid_strain, scaled_profile, random_smooth
};

inline std::string to_string(FieldFamily k) {
    switch (k) {
    case FieldFamily::zero: return "zero";
    case FieldFamily::constant: return "constant";
    case FieldFamily::shear: return "shear";
    case FieldFamily::taylor_green_2d: return "taylor_green_2d";
    case FieldFamily::abc: return "abc";
    case FieldFamily::axis_heat: return "axis_heat";
    case FieldFamily::rigid_strain: return "rigid_strain";
    case FieldFamily::scaled_profile: return "scaled_profile";
    case FieldFamily::random_smooth: return "random_smooth";
    }
    return "zero";
}

inline FieldFamily field_family_from_string(const std::string& s) {
    for (auto k : {FieldFamily::zero, FieldFamily::constant, FieldFamily::shear, FieldFamily::taylor_green_2d,
                   FieldFamily::abc, FieldFamily::axis_heat, FieldFamily::rigid_strain,
                   FieldFamily::scaled_profile, FieldFamily::random_smooth})
        if (to_string(k) == s) return k;
    throw ValidationError("unknown field kind '" + s + "'");
}

/// Extra knobs for the synthetic families.
struct GeneratorOptions {
    std::uint64_t seed = 1;
    /// Gaussian width of rigid_strain and scaled_profile.
    double profile_width = 0.6;
    /// Highest |mode| of random_smooth (kept within the dealiased band).
    int max_mode = 3;
};

namespace detail {

inline void remove_mean(Lattice& f) {
    double m = 0.0;
    for (double v : f) m += v;
    m /= double(f.size());
    for (double& v : f) v -= m;
}

template <class Fn>
Lattice sample(const Grid3& g, Fn&& fn) {
    Lattice out(g.size());
    for (int k = 0; k < g.n; ++k)
        for (int j = 0; j < g.n; ++j)
            for (int i = 0; i < g.n; ++i)
                out[g.index(i, j, k)] = fn(g.coordinate(i), g.coordinate(j), g.coordinate(k));
    return out;
}

inline std::vector<Lattice> random_smooth_velocity(const Grid3& g, double amp, const GeneratorOptions& opt) {
    int M = std::min(opt.max_mode, dealias_cutoff(g.n));
    if (M < 1) throw ValidationError("random_smooth needs max_mode >= 1");
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const int n = g.n, nh = n / 2 + 1;
    std::array<Spectrum, 3> s;
    for (auto& c : s) c.assign(half_size(g), Complex(0.0));
    auto at = [&](int m1, int m2, int m3) {
        return (std::size_t(g.wrap(m3)) * n + std::size_t(g.wrap(m2))) * nh + std::size_t(m1);
    };
    double N = double(g.size());
    // deterministic mode order independent of n
    for (int m1 = 0; m1 <= M; ++m1)
        for (int m2 = -M; m2 <= M; ++m2)
            for (int m3 = -M; m3 <= M; ++m3) {
                bool upper = m1 > 0 || m2 > 0 || (m2 == 0 && m3 > 0);
                if (!upper) continue;
                double kk = double(m1 * m1 + m2 * m2 + m3 * m3);
                double env = std::exp(-kk / double(M * M));
                for (int c = 0; c < 3; ++c) {
                    Complex z(normal(rng), normal(rng));
                    z *= env * N * 0.5;
                    s[c][at(m1, m2, m3)] = z;
                    if (m1 == 0) s[c][at(0, -m2, -m3)] = std::conj(z);
                }
            }
    spectral_leray(g, s);
    std::vector<Lattice> out;
    for (auto& c : s) out.push_back(inverse_fft(g, std::move(c)));
    double peak = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        peak = std::max(peak, std::sqrt(out[0][i] * out[0][i] + out[1][i] * out[1][i] + out[2][i] * out[2][i]));
    for (auto& c : out)
        for (double& v : c) v *= peak > 0.0 ? amp / peak : 0.0;
    return out;
}

} // namespace detail

/// Initial (t = 0) velocity lattices for a family.
inline std::vector<Lattice> initial_velocity(FieldFamily kind, const Grid3& g, double amp,
                                             const GeneratorOptions& opt = {}) {
    g.validate();
    if (!std::isfinite(amp)) throw ValidationError("amplitude must be finite");
    const double k = g.k0();
    auto zero = [&] { return Lattice(g.size(), 0.0); };
    std::vector<Lattice> u;
    switch (kind) {
    case FieldFamily::zero:
    case FieldFamily::constant:
        // a constant collapses to zero under the zero-mean convention
        return {zero(), zero(), zero()};
    case FieldFamily::shear:
        u = {detail::sample(g, [&](double, double y, double) { return amp * std::sin(k * y); }), zero(), zero()};
        break;
    case FieldFamily::taylor_green_2d:
        u = {detail::sample(g, [&](double x, double y, double) { return amp * std::sin(k * x) * std::cos(k * y); }),
             detail::sample(g, [&](double x, double y, double) { return -amp * std::cos(k * x) * std::sin(k * y); }),
             zero()};
        break;
    case FieldFamily::abc:
        u = {detail::sample(g, [&](double, double y, double z) { return amp * (std::sin(k * z) + std::cos(k * y)); }),
             detail::sample(g, [&](double x, double, double z) { return amp * (std::sin(k * x) + std::cos(k * z)); }),
             detail::sample(g, [&](double x, double y, double) { return amp * (std::sin(k * y) + std::cos(k * x)); })};
        break;
    case FieldFamily::axis_heat:
        return {zero(), zero(),
                detail::sample(g, [&](double x, double y, double) { return amp * std::sin(k * x) * std::sin(k * y); })};
    case FieldFamily::rigid_strain:
    case FieldFamily::scaled_profile: {
        double c = 0.5 * g.box_length, s2 = opt.profile_width * opt.profile_width;
        if (!(opt.profile_width > 0.0)) throw ValidationError("profile width must be positive");
        auto gauss = [&](double x, double y, double z) {
            return std::exp(-((x - c) * (x - c) + (y - c) * (y - c) + (z - c) * (z - c)) / (2.0 * s2));
        };
        if (kind == FieldFamily::rigid_strain) {
            // windowed solid rotation about the x3 axis through the box centre
            u = {detail::sample(g, [&](double x, double y, double z) { return amp * gauss(x, y, z) * (y - c); }),
                 detail::sample(g, [&](double x, double y, double z) { return -amp * gauss(x, y, z) * (x - c); }),
                 zero()};
        } else {
            // curl of gauss * (1,1,1)
            auto d = [&](double x, double y, double z, int a) {
                double q = a == 0 ? x - c : a == 1 ? y - c : z - c;
                return -q / s2 * gauss(x, y, z);
            };
            u = {detail::sample(g, [&](double x, double y, double z) { return amp * (d(x, y, z, 1) - d(x, y, z, 2)); }),
                 detail::sample(g, [&](double x, double y, double z) { return amp * (d(x, y, z, 2) - d(x, y, z, 0)); }),
                 detail::sample(g, [&](double x, double y, double z) { return amp * (d(x, y, z, 0) - d(x, y, z, 1)); })};
        }
        auto p = leray_project(make_snapshot(g, 0.0, std::move(u)));
        u.clear();
        for (std::size_t c2 = 0; c2 < 3; ++c2) u.push_back(p.component(c2));
        break;
    }
    case FieldFamily::random_smooth:
        u = detail::random_smooth_velocity(g, amp, opt);
        break;
    }
    for (auto& c : u) detail::remove_mean(c);
    return u;
}

/// Decay rate of the closed-form families (velocity ~ exp(-rate * t)); frozen families return 0.
inline double family_decay_rate(FieldFamily kind, const Grid3& g, double nu) {
    double k2 = g.k0() * g.k0();
    switch (kind) {
    case FieldFamily::shear:
    case FieldFamily::abc: return nu * k2;
    case FieldFamily::taylor_green_2d:
    case FieldFamily::axis_heat: return 2.0 * nu * k2;
    default: return 0.0;
    }
}

/// Synthetic velocity fields. The closed-form families (shear, taylor_green_2d,
/// abc, axis_heat) carry their exact viscous decay; rigid_strain,
/// scaled_profile and random_smooth are frozen in time.
inline SpaceTimeField generate_field(FieldFamily kind, const FlowParams& params, const Grid3& grid,
                                     const GeneratorOptions& opt = {}) {
    params.validate();
    grid.validate();
    auto u0 = initial_velocity(kind, grid, params.amplitude, opt);
    double rate = family_decay_rate(kind, grid, params.viscosity);
    long steps = params.steps() / params.output_every;
    double dt_out = params.dt * params.output_every;
    std::vector<Snapshot> snaps;
    auto base = make_snapshot(grid, 0.0, std::move(u0));
    for (long i = 0; i <= steps; ++i) {
        double t = double(i) * dt_out;
        if (rate == 0.0 || i == 0) {
            Snapshot s = base;
            s.time = t;
            snaps.push_back(std::move(s));
            continue;
        }
        double f = std::exp(-rate * t);
        std::vector<Lattice> c;
        for (std::size_t a = 0; a < 3; ++a) {
            Lattice l = base.component(a);
            for (double& v : l) v *= f;
            c.push_back(std::move(l));
        }
        snaps.push_back(make_snapshot(grid, t, std::move(c)));
    }
    return SpaceTimeField(FieldKind::velocity, {"u1", "u2", "u3"}, std::move(snaps), dt_out,
                          to_string(kind) + "@" + std::to_string(grid.n));
}

} // namespace nsreg
