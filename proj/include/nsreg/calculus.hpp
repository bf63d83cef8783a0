#pragma once

#include <string>

#include "field.hpp"
#include "spectral.hpp"

namespace nsreg {

enum class DiffOp { grad, grad_h, d3, curl, div, laplacian };

inline DiffOp diff_op_from_string(const std::string& s) {
    if (s == "grad") return DiffOp::grad;
    if (s == "grad_h") return DiffOp::grad_h;
    if (s == "d3") return DiffOp::d3;
    if (s == "curl") return DiffOp::curl;
    if (s == "div") return DiffOp::div;
    if (s == "laplacian") return DiffOp::laplacian;
    throw ValidationError("unknown differential operator '" + s + "'");
}

namespace detail {

inline std::vector<Spectrum> spectra_of(const Snapshot& f) {
    std::vector<Spectrum> out;
    for (std::size_t c = 0; c < f.num_components(); ++c) out.push_back(forward_fft(f.grid, f.component(c)));
    return out;
}

} // namespace detail

/// Spectral differential operators on a snapshot. Gradients are ordered
/// component-major: (d1 f_c, d2 f_c, d3 f_c) for each c.
inline std::vector<Lattice> differential_op_lattices(const Grid3& g, const std::vector<Spectrum>& s, DiffOp op) {
    std::vector<Lattice> out;
    const std::size_t nc = s.size();
    switch (op) {
    case DiffOp::grad:
    case DiffOp::grad_h: {
        int axes = op == DiffOp::grad ? 3 : 2;
        for (std::size_t c = 0; c < nc; ++c)
            for (int a = 0; a < axes; ++a) out.push_back(inverse_fft(g, spectral_derivative(g, s[c], a)));
        break;
    }
    case DiffOp::d3:
        for (std::size_t c = 0; c < nc; ++c) out.push_back(inverse_fft(g, spectral_derivative(g, s[c], 2)));
        break;
    case DiffOp::curl: {
        if (nc != 3) throw ValidationError("curl needs a 3-component field");
        auto d = [&](int c, int a) { return spectral_derivative(g, s[c], a); };
        auto sub = [](Spectrum a, const Spectrum& b) {
            for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
            return a;
        };
        out.push_back(inverse_fft(g, sub(d(2, 1), d(1, 2))));
        out.push_back(inverse_fft(g, sub(d(0, 2), d(2, 0))));
        out.push_back(inverse_fft(g, sub(d(1, 0), d(0, 1))));
        break;
    }
    case DiffOp::div: {
        if (nc != 3) throw ValidationError("div needs a 3-component field");
        Spectrum acc = spectral_derivative(g, s[0], 0);
        for (int a = 1; a < 3; ++a) {
            auto t = spectral_derivative(g, s[a], a);
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += t[i];
        }
        out.push_back(inverse_fft(g, std::move(acc)));
        break;
    }
    case DiffOp::laplacian:
        for (std::size_t c = 0; c < nc; ++c) out.push_back(inverse_fft(g, spectral_laplacian(g, s[c])));
        break;
    }
    return out;
}

inline Snapshot differential_op(const Snapshot& f, DiffOp op) {
    return make_snapshot(f.grid, f.time, differential_op_lattices(f.grid, detail::spectra_of(f), op));
}

inline FieldKind diff_op_kind(DiffOp op, FieldKind in) {
    if (op == DiffOp::curl && in == FieldKind::velocity) return FieldKind::vorticity;
    return FieldKind::scalar;
}

inline std::vector<std::string> diff_op_names(DiffOp op, const std::vector<std::string>& in) {
    std::vector<std::string> out;
    switch (op) {
    case DiffOp::grad:
        for (const auto& c : in)
            for (int a = 1; a <= 3; ++a) out.push_back("d" + std::to_string(a) + "_" + c);
        break;
    case DiffOp::grad_h:
        for (const auto& c : in)
            for (int a = 1; a <= 2; ++a) out.push_back("d" + std::to_string(a) + "_" + c);
        break;
    case DiffOp::d3:
        for (const auto& c : in) out.push_back("d3_" + c);
        break;
    case DiffOp::curl: out = {"w1", "w2", "w3"}; break;
    case DiffOp::div: out = {"div"}; break;
    case DiffOp::laplacian:
        for (const auto& c : in) out.push_back("lap_" + c);
        break;
    }
    return out;
}

/// Applies the operator to every snapshot, using the cached spectra of f.
inline SpaceTimeField differential_op(const SpaceTimeField& f, DiffOp op) {
    std::vector<Snapshot> snaps;
    for (std::size_t i = 0; i < f.size(); ++i) {
        std::vector<Spectrum> s;
        for (std::size_t c = 0; c < f.num_components(); ++c) s.push_back(*f.spectrum(i, c));
        snaps.push_back(make_snapshot(f.grid(), f[i].time, differential_op_lattices(f.grid(), s, op)));
    }
    return SpaceTimeField(diff_op_kind(op, f.kind()), diff_op_names(op, f.names()), std::move(snaps), f.dt(), f.id());
}

inline Snapshot leray_project(const Snapshot& v) {
    if (v.num_components() != 3) throw ValidationError("leray projection needs a 3-component field");
    auto s = detail::spectra_of(v);
    std::array<Spectrum, 3> a{std::move(s[0]), std::move(s[1]), std::move(s[2])};
    spectral_leray(v.grid, a);
    std::vector<Lattice> out;
    for (auto& c : a) out.push_back(inverse_fft(v.grid, std::move(c)));
    return make_snapshot(v.grid, v.time, std::move(out));
}

inline double max_abs(const Lattice& f) {
    double m = 0.0;
    for (double v : f) m = std::max(m, std::abs(v));
    return m;
}

inline double max_norm(const Snapshot& s) {
    double m = 0.0;
    for (std::size_t i = 0; i < s.grid.size(); ++i) {
        double q = 0.0;
        for (std::size_t c = 0; c < s.num_components(); ++c) q += s.component(c)[i] * s.component(c)[i];
        m = std::max(m, std::sqrt(q));
    }
    return m;
}

/// max |div u| <= 1e-9 * max|u| / spacing.
inline bool is_divergence_free(const Snapshot& u, double rel = 1e-9) {
    double d = max_abs(differential_op(u, DiffOp::div).component(0));
    return d <= rel * max_norm(u) / u.grid.spacing() + 1e-300;
}

} // namespace nsreg
