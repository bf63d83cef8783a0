#pragma once

#include "cutoff.hpp"
#include "poisson.hpp"

namespace nsreg {

/// pi = pi1 + pi2 with pi1 from every index pair except (3,3), pi2 from (3,3);
/// pi3 = 2 (-Lap)^{-1} d3 div_h(-u3 u_h) and d3pi4 = 2 (-Lap)^{-1} d3 d3 (u_h . grad_h u3),
/// so that d3 pi2 = d3 pi3 + d3pi4.
struct Sec3Decomposition {
    Snapshot pi, pi1, pi2, pi3, d3pi4;
};

struct Sec3Series {
    SpaceTimeField pi, pi1, pi2, pi3, d3pi4;
};

namespace detail {

inline Spectrum pi3_spectrum(const VelocityState& v) {
    const Grid3& g = v.grid;
    Spectrum out(half_size(g), Complex(0.0));
    for (int a = 0; a < 2; ++a) {
        Spectrum s = product_spectrum(v, v.phys[2], v.phys[a]);
        for_each_mode(g, [&](std::size_t idx, int m1, int m2, int m3) {
            auto kd = derivative_wavevector(g, m1, m2, m3);
            auto kf = full_wavevector(g, m1, m2, m3);
            double k2 = kf[0] * kf[0] + kf[1] * kf[1] + kf[2] * kf[2];
            if (k2 > 0.0) out[idx] += 2.0 * kd[2] * kd[a] * s[idx] / k2;
        });
    }
    return out;
}

/// Lattice of u_h . grad_h u3.
inline Lattice horizontal_advection_of_u3(const VelocityState& v) {
    Lattice d1 = inverse_fft(v.grid, spectral_derivative(v.grid, v.spec[2], 0));
    Lattice d2 = inverse_fft(v.grid, spectral_derivative(v.grid, v.spec[2], 1));
    Lattice g(d1.size());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = v.phys[0][i] * d1[i] + v.phys[1][i] * d2[i];
    return g;
}

inline Spectrum d3pi4_spectrum(const VelocityState& v) {
    const Grid3& grid = v.grid;
    Spectrum s = forward_fft(grid, horizontal_advection_of_u3(v));
    if (v.dealias) apply_dealias(grid, s);
    Spectrum out(s.size());
    for_each_mode(grid, [&](std::size_t idx, int m1, int m2, int m3) {
        auto kf = full_wavevector(grid, m1, m2, m3);
        double k2 = kf[0] * kf[0] + kf[1] * kf[1] + kf[2] * kf[2];
        out[idx] = k2 > 0.0 ? -2.0 * kf[2] * kf[2] * s[idx] / k2 : Complex(0.0);
    });
    return out;
}

inline const std::vector<std::pair<int, int>>& pi1_pairs() {
    static const std::vector<std::pair<int, int>> p{{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}};
    return p;
}

} // namespace detail

inline Sec3Decomposition decompose_sec3(const Snapshot& u, bool dealias = true) {
    auto v = velocity_state(u, dealias);
    const Grid3& g = u.grid;
    auto one = [&](Spectrum s) { return make_snapshot(g, u.time, {inverse_fft(g, std::move(s))}); };
    return {one(pressure_part_spectrum(v, all_pairs())), one(pressure_part_spectrum(v, detail::pi1_pairs())),
            one(pressure_part_spectrum(v, {{2, 2}})), one(detail::pi3_spectrum(v)), one(detail::d3pi4_spectrum(v))};
}

inline Sec3Series decompose_sec3(const SpaceTimeField& u, bool dealias = true) {
    if (u.kind() != FieldKind::velocity) throw ValidationError("decomposition needs a velocity field");
    std::vector<Snapshot> a, b, c, d, e;
    for (const auto& s : u.snapshots()) {
        auto r = decompose_sec3(s, dealias);
        a.push_back(r.pi), b.push_back(r.pi1), c.push_back(r.pi2), d.push_back(r.pi3), e.push_back(r.d3pi4);
    }
    auto mk = [&](std::vector<Snapshot> s, const char* name, FieldKind k) {
        return SpaceTimeField(k, {name}, std::move(s), u.dt(), u.id());
    };
    return {mk(std::move(a), "pi", FieldKind::pressure), mk(std::move(b), "pi1", FieldKind::pressure),
            mk(std::move(c), "pi2", FieldKind::pressure), mk(std::move(d), "pi3", FieldKind::pressure),
            mk(std::move(e), "d3pi4", FieldKind::scalar)};
}

enum class CutoffSource { pi1_terms, full_pi, gradh_pi, d3pi4_terms };
enum class CutoffMode { ball, horizontal };

inline std::string to_string(CutoffSource s) {
    switch (s) {
    case CutoffSource::pi1_terms: return "pi1_terms";
    case CutoffSource::full_pi: return "full_pi";
    case CutoffSource::gradh_pi: return "gradh_pi";
    case CutoffSource::d3pi4_terms: return "d3pi4_terms";
    }
    return "full_pi";
}
inline CutoffSource cutoff_source_from_string(const std::string& s) {
    for (auto v : {CutoffSource::pi1_terms, CutoffSource::full_pi, CutoffSource::gradh_pi, CutoffSource::d3pi4_terms})
        if (to_string(v) == s) return v;
    throw ValidationError("unknown cutoff source '" + s + "'");
}

/// source = tilde_pi1 + tilde_pi2 where tilde_pi1 localises the quadratic
/// term with w = zeta^2 (ball) or chi(x_h) (horizontal). One component per
/// source component (two for gradh_pi).
struct CutoffDecomposition {
    CutoffSource source_kind;
    CutoffMode mode;
    double rho;
    Vec3 center;
    Snapshot source, tilde_pi1, tilde_pi2;
    /// Grid mean removed from the localised term (tends to zero with resolution).
    double solvability_correction = 0.0;
    /// Largest |Laplacian tilde_pi2| on the inner region and the source scale max|pi|.
    double inner_laplacian = 0.0;
    double scale = 0.0;
};

namespace detail {

/// w, grad w and Hessian of the localising weight at a node.
struct WeightJet {
    double w;
    Vec3 grad;
    std::array<std::array<double, 3>, 3> hess;
};

inline WeightJet weight_jet(const Cutoff& c, bool squared, const Vec3& x) {
    auto y = c.displacement(x);
    double d = std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]);
    auto r = c.radial(d);
    double w = r.w, w1 = r.w1, w2 = r.w2;
    if (squared) w2 = 2.0 * (w1 * w1 + w * w2), w1 = 2.0 * w * w1, w = w * w;
    WeightJet j{w, {0, 0, 0}, {}};
    if (d == 0.0 || (w1 == 0.0 && w2 == 0.0)) return j;
    for (int a = 0; a < 3; ++a) {
        j.grad[a] = w1 * y[a] / d;
        for (int b = 0; b < 3; ++b) {
            double yy = y[a] * y[b] / (d * d);
            double delta = (a == b && (a < 2 || c.geometry == Geometry::ball)) ? 1.0 : 0.0;
            j.hess[a][b] = w2 * yy + w1 * (delta - yy) / d;
        }
    }
    return j;
}

struct QuadTerm {
    Lattice s;             // quadratic lattice S
    Spectrum spec;         // its (band-limited) spectrum
    int i, j;              // derivative pair
    double coeff;
};

} // namespace detail

/// Cutoff split of a pressure source. The localised term is assembled node by
/// node from the product rule with spectral derivatives of the quadratic
/// terms and closed-form derivatives of the weight; its grid mean is removed
/// by a multiple of (1 - w), which vanishes on the inner region.
inline CutoffDecomposition decompose_cutoff(CutoffSource source, const Snapshot& u, double rho, CutoffMode mode,
                                            const Vec3& center = {0, 0, 0}, bool dealias = true,
                                            CutoffProfile prof = CutoffProfile::quintic) {
    const Grid3& g = u.grid;
    if (!(rho > 2.0 * g.spacing())) throw ResolutionError("cutoff radius below the resolution floor", rho);
    if (rho > 0.5 * g.box_length) throw ValidationError("cutoff radius exceeds half the box");
    auto v = velocity_state(u, dealias);
    Cutoff cut{center, 0.0, rho, mode == CutoffMode::ball ? Geometry::ball : Geometry::vertical, prof, g.box_length};
    const bool squared = mode == CutoffMode::ball;

    // quadratic terms per output component
    std::vector<std::vector<detail::QuadTerm>> comps;
    auto quad = [&](const Lattice& a, const Lattice& b) {
        Lattice p(a.size());
        for (std::size_t i = 0; i < p.size(); ++i) p[i] = a[i] * b[i];
        Spectrum s = forward_fft(g, p);
        if (dealias) apply_dealias(g, s);
        return std::pair{inverse_fft(g, s), s};
    };
    auto pair_terms = [&](const std::vector<std::pair<int, int>>& pairs, int grad_axis) {
        std::vector<detail::QuadTerm> t;
        for (auto [i, j] : pairs) {
            auto [s, spec] = quad(v.phys[i], v.phys[j]);
            if (grad_axis >= 0) {
                spec = spectral_derivative(g, spec, grad_axis);
                s = inverse_fft(g, spec);
            }
            // -Lap tilde = d_i d_j (S w)
            t.push_back({std::move(s), std::move(spec), i, j, i == j ? 1.0 : 2.0});
        }
        return t;
    };
    switch (source) {
    case CutoffSource::pi1_terms: comps.push_back(pair_terms(detail::pi1_pairs(), -1)); break;
    case CutoffSource::full_pi: comps.push_back(pair_terms(all_pairs(), -1)); break;
    case CutoffSource::gradh_pi:
        comps.push_back(pair_terms(all_pairs(), 0));
        comps.push_back(pair_terms(all_pairs(), 1));
        break;
    case CutoffSource::d3pi4_terms: {
        Spectrum s = forward_fft(g, detail::horizontal_advection_of_u3(v));
        if (dealias) apply_dealias(g, s);
        Lattice l = inverse_fft(g, s);
        std::vector<detail::QuadTerm> t;
        t.push_back({std::move(l), std::move(s), 2, 2, 2.0});
        comps.push_back(std::move(t));
        break;
    }
    }

    // weight jets at every node
    std::vector<detail::WeightJet> jets(g.size());
    for (int k = 0; k < g.n; ++k)
        for (int j = 0; j < g.n; ++j)
            for (int i = 0; i < g.n; ++i)
                jets[g.index(i, j, k)] = detail::weight_jet(cut, squared, {g.coordinate(i), g.coordinate(j), g.coordinate(k)});

    std::vector<Lattice> src, t1, t2;
    double correction = 0.0, inner = 0.0, scale = 0.0;
    for (auto& terms : comps) {
        Spectrum source_spec(half_size(g), Complex(0.0));
        Lattice f1(g.size(), 0.0);
        for (auto& t : terms) {
            // spectral pieces of the product rule
            Spectrum hij = spectral_second_derivative(g, t.spec, t.i, t.j);
            Lattice sij = inverse_fft(g, hij);
            Lattice si = inverse_fft(g, spectral_derivative(g, t.spec, t.i));
            Lattice sj = t.i == t.j ? si : inverse_fft(g, spectral_derivative(g, t.spec, t.j));
            for (std::size_t n = 0; n < g.size(); ++n) {
                const auto& w = jets[n];
                double val = w.w * sij[n] + si[n] * w.grad[t.j] + sj[n] * w.grad[t.i] + t.s[n] * w.hess[t.i][t.j];
                f1[n] += -t.coeff * val;  // Laplacian of tilde_pi1
            }
            for (std::size_t n = 0; n < hij.size(); ++n) source_spec[n] += -t.coeff * hij[n];
        }
        // discrete solvability
        double mean = 0.0, mw = 0.0;
        for (std::size_t n = 0; n < g.size(); ++n) mean += f1[n], mw += 1.0 - jets[n].w;
        double c = mw > 0.0 ? mean / mw : 0.0;
        for (std::size_t n = 0; n < g.size(); ++n) f1[n] -= c * (1.0 - jets[n].w);
        correction = std::max(correction, std::abs(c));

        Spectrum f1s = forward_fft(g, f1);
        Lattice tilde1 = inverse_fft(g, spectral_inverse_laplacian(g, f1s));
        Lattice full = inverse_fft(g, spectral_inverse_laplacian(g, source_spec));
        Lattice tilde2(g.size());
        for (std::size_t n = 0; n < g.size(); ++n) tilde2[n] = full[n] - tilde1[n];
        Lattice lap2 = inverse_fft(g, spectral_laplacian(g, forward_fft(g, tilde2)));
        for (std::size_t n = 0; n < g.size(); ++n) {
            scale = std::max(scale, std::abs(full[n]));
            if (jets[n].w == 1.0 && jets[n].grad[0] == 0.0 && jets[n].grad[1] == 0.0 && jets[n].grad[2] == 0.0)
                inner = std::max(inner, std::abs(lap2[n]));
        }
        src.push_back(std::move(full));
        t1.push_back(std::move(tilde1));
        t2.push_back(std::move(tilde2));
    }
    CutoffDecomposition out{source, mode, rho, center,
                            make_snapshot(g, u.time, std::move(src)), make_snapshot(g, u.time, std::move(t1)),
                            make_snapshot(g, u.time, std::move(t2)), correction, inner, scale};
    return out;
}

/// Averages of a scalar snapshot about x0:
///   P3 f(x_h)  = mean over x3 in [x0_3 - s, x0_3 + s]        (n*n lattice, x1 fastest)
///   Ph f(x3)   = mean over x_h in the square of half side s  (n values)
///   Phr f(x3)  = mean over the disc |x_h - x0_h| < s         (n values)
struct SliceProjections {
    std::vector<double> p3, ph, phr;
};

inline SliceProjections slice_projections(const Snapshot& f, double s, const Vec3& x0 = {0, 0, 0}) {
    if (f.num_components() != 1) throw ValidationError("slice projections need a scalar snapshot");
    const Grid3& g = f.grid;
    const double h = g.spacing();
    if (!(s > 0.0) || s > 0.5 * g.box_length) throw ValidationError("projection scale exceeds half the box length");
    if (s < h) throw ResolutionError("projection scale below one grid cell", s);
    const int n = g.n;
    auto interval = [&](double c) {
        std::vector<double> w(n);
        for (int i = 0; i < n; ++i) w[i] = detail::ramp(std::abs(g.periodic_delta(g.coordinate(i) - c)), s, h);
        return w;
    };
    auto wx = interval(x0[0]), wy = interval(x0[1]), wz = interval(x0[2]);
    double c2 = detail::disc_ramp_radius(s, h);
    std::vector<double> wd(std::size_t(n) * n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            double dx = g.periodic_delta(g.coordinate(i) - x0[0]), dy = g.periodic_delta(g.coordinate(j) - x0[1]);
            wd[std::size_t(j) * n + i] = detail::ramp(std::sqrt(dx * dx + dy * dy), c2, h);
        }
    const auto& l = f.component(0);
    SliceProjections out{std::vector<double>(std::size_t(n) * n, 0.0), std::vector<double>(n, 0.0),
                         std::vector<double>(n, 0.0)};
    double sz = 0.0, sq = 0.0, sd = 0.0;
    for (int k = 0; k < n; ++k) sz += wz[k];
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) sq += wx[i] * wy[j], sd += wd[std::size_t(j) * n + i];
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                double v = l[g.index(i, j, k)];
                out.p3[std::size_t(j) * n + i] += wz[k] * v / sz;
                out.ph[k] += wx[i] * wy[j] * v / sq;
                out.phr[k] += wd[std::size_t(j) * n + i] * v / sd;
            }
    return out;
}

/// || tilde_pi1 ||_{L^s} / || |u_h| |u| w ||_{L^s} over the box for the pi1_terms split.
inline double calderon_zygmund_ratio(const Snapshot& u, const CutoffDecomposition& d, double s) {
    const Grid3& g = u.grid;
    Cutoff cut{d.center, 0.0, d.rho, d.mode == CutoffMode::ball ? Geometry::ball : Geometry::vertical,
               CutoffProfile::quintic, g.box_length};
    double num = 0.0, den = 0.0;
    const auto& t = d.tilde_pi1.component(0);
    for (int k = 0; k < g.n; ++k)
        for (int j = 0; j < g.n; ++j)
            for (int i = 0; i < g.n; ++i) {
                std::size_t n = g.index(i, j, k);
                double w = cut.space({g.coordinate(i), g.coordinate(j), g.coordinate(k)});
                if (d.mode == CutoffMode::ball) w *= w;
                double uh = std::hypot(u.component(0)[n], u.component(1)[n]);
                double uu = std::hypot(uh, u.component(2)[n]);
                num += std::pow(std::abs(t[n]), s);
                den += std::pow(uh * uu * w, s);
            }
    return den > 0.0 ? std::pow(num / den, 1.0 / s) : 0.0;
}

} // namespace nsreg
