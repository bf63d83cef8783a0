#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "fft.hpp"

namespace nsreg {

/// Highest retained |mode| under the two-thirds rule.
inline int dealias_cutoff(int n) { return (n - 1) / 3; }

inline bool is_nyquist(const Grid3& g, int i1, int m2, int m3, int axis) {
    if (axis == 0) return i1 == g.n / 2;
    if (axis == 1) return m2 == -g.n / 2;
    return m3 == -g.n / 2;
}

/// Wavenumber used for first derivatives: Nyquist modes map to zero.
inline std::array<double, 3> derivative_wavevector(const Grid3& g, int i1, int m2, int m3) {
    double k0 = g.k0();
    return {is_nyquist(g, i1, m2, m3, 0) ? 0.0 : k0 * i1,
            is_nyquist(g, i1, m2, m3, 1) ? 0.0 : k0 * m2,
            is_nyquist(g, i1, m2, m3, 2) ? 0.0 : k0 * m3};
}

inline std::array<double, 3> full_wavevector(const Grid3& g, int i1, int m2, int m3) {
    double k0 = g.k0();
    return {k0 * i1, k0 * m2, k0 * m3};
}

inline void apply_dealias(const Grid3& g, Spectrum& s) {
    int K = dealias_cutoff(g.n);
    for_each_mode(g, [&](std::size_t idx, int m1, int m2, int m3) {
        if (m1 > K || std::abs(m2) > K || std::abs(m3) > K) s[idx] = 0.0;
    });
}

/// d/dx_axis in Fourier space.
inline Spectrum spectral_derivative(const Grid3& g, const Spectrum& s, int axis) {
    Spectrum out(s.size());
    for_each_mode(g, [&](std::size_t idx, int m1, int m2, int m3) {
        auto k = derivative_wavevector(g, m1, m2, m3);
        out[idx] = Complex(0.0, k[axis]) * s[idx];
    });
    return out;
}

/// d^2/(dx_a dx_b); the pure second derivative keeps the Nyquist mode.
inline Spectrum spectral_second_derivative(const Grid3& g, const Spectrum& s, int a, int b) {
    Spectrum out(s.size());
    for_each_mode(g, [&](std::size_t idx, int m1, int m2, int m3) {
        double f;
        if (a == b) {
            auto k = full_wavevector(g, m1, m2, m3);
            f = -k[a] * k[a];
        } else {
            auto k = derivative_wavevector(g, m1, m2, m3);
            f = -k[a] * k[b];
        }
        out[idx] = f * s[idx];
    });
    return out;
}

inline Spectrum spectral_laplacian(const Grid3& g, const Spectrum& s) {
    Spectrum out(s.size());
    for_each_mode(g, [&](std::size_t idx, int m1, int m2, int m3) {
        auto k = full_wavevector(g, m1, m2, m3);
        out[idx] = -(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) * s[idx];
    });
    return out;
}

/// Zero-mean solution of Laplacian(phi) = s (the mean of s is dropped).
inline Spectrum spectral_inverse_laplacian(const Grid3& g, const Spectrum& s) {
    Spectrum out(s.size());
    for_each_mode(g, [&](std::size_t idx, int m1, int m2, int m3) {
        auto k = full_wavevector(g, m1, m2, m3);
        double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        out[idx] = k2 > 0.0 ? -s[idx] / k2 : Complex(0.0);
    });
    return out;
}

/// Removes the gradient part of a vector spectrum in place.
inline void spectral_leray(const Grid3& g, std::array<Spectrum, 3>& v) {
    for_each_mode(g, [&](std::size_t idx, int m1, int m2, int m3) {
        auto k = derivative_wavevector(g, m1, m2, m3);
        double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        if (k2 == 0.0) return;
        Complex kv = k[0] * v[0][idx] + k[1] * v[1][idx] + k[2] * v[2][idx];
        for (int a = 0; a < 3; ++a) v[a][idx] -= k[a] * kv / k2;
    });
}

/// Evaluates the trigonometric interpolant of a real lattice on the tensor
/// product xs x ys x zs (absolute coordinates). Output index a + na*(b + nb*c).
/// Modes below 1e-15 of the largest coefficient are skipped.
inline Lattice interpolate_tensor(const Grid3& g, const Spectrum& s, const std::vector<double>& xs,
                                  const std::vector<double>& ys, const std::vector<double>& zs) {
    const int n = g.n, nh = n / 2 + 1;
    const std::size_t na = xs.size(), nb = ys.size(), nc = zs.size();
    const double k0 = g.k0();
    double peak = 0.0;
    for (const auto& c : s) peak = std::max(peak, std::abs(c));
    Lattice out(na * nb * nc, 0.0);
    if (peak == 0.0) return out;
    const double thr = 1e-15 * peak;
    const double norm = 1.0 / double(g.size());

    auto table = [&](const std::vector<double>& pts, int count, bool half) {
        std::vector<Complex> t(std::size_t(count) * pts.size());
        for (int i = 0; i < count; ++i) {
            int m = half ? i : signed_mode(i, n);
            for (std::size_t a = 0; a < pts.size(); ++a)
                t[std::size_t(i) * pts.size() + a] = std::polar(1.0, k0 * m * pts[a]);
        }
        return t;
    };
    auto e1 = table(xs, nh, true);
    auto e2 = table(ys, n, false);
    auto e3 = table(zs, n, false);

    // stage 1: sum over x1 modes for each active (i3, i2) row
    std::vector<std::vector<Complex>> r1(std::size_t(n) * n);
    std::vector<char> plane_active(n, 0);
    for (int i3 = 0; i3 < n; ++i3)
        for (int i2 = 0; i2 < n; ++i2) {
            const Complex* row = &s[(std::size_t(i3) * n + i2) * nh];
            bool any = false;
            for (int i1 = 0; i1 < nh && !any; ++i1) any = std::abs(row[i1]) > thr;
            if (!any) continue;
            auto& acc = r1[std::size_t(i3) * n + i2];
            acc.assign(na, Complex(0.0));
            for (int i1 = 0; i1 < nh; ++i1) {
                if (std::abs(row[i1]) <= thr) continue;
                double w = (i1 == 0 || i1 == n / 2) ? norm : 2.0 * norm;
                Complex c = w * row[i1];
                const Complex* e = &e1[std::size_t(i1) * na];
                for (std::size_t a = 0; a < na; ++a) acc[a] += c * e[a];
            }
            plane_active[i3] = 1;
        }
    // stage 2 and 3
    std::vector<Complex> r2(na * nb);
    for (int i3 = 0; i3 < n; ++i3) {
        if (!plane_active[i3]) continue;
        std::fill(r2.begin(), r2.end(), Complex(0.0));
        for (int i2 = 0; i2 < n; ++i2) {
            const auto& acc = r1[std::size_t(i3) * n + i2];
            if (acc.empty()) continue;
            for (std::size_t b = 0; b < nb; ++b) {
                Complex e = e2[std::size_t(i2) * nb + b];
                Complex* dst = &r2[b * na];
                for (std::size_t a = 0; a < na; ++a) dst[a] += e * acc[a];
            }
        }
        for (std::size_t c = 0; c < nc; ++c) {
            Complex e = e3[std::size_t(i3) * nc + c];
            double* dst = &out[c * na * nb];
            for (std::size_t q = 0; q < na * nb; ++q) dst[q] += (e * r2[q]).real();
        }
    }
    return out;
}

} // namespace nsreg
