#pragma once

#include <complex>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include <fftw3.h>

#include "grid.hpp"

namespace nsreg {

using Lattice = std::vector<double>;
using Complex = std::complex<double>;
/// Half spectrum of a real lattice: n * n * (n/2+1), index ((i3*n)+i2)*(n/2+1)+i1.
using Spectrum = std::vector<Complex>;

namespace detail {

struct FftPlans {
    fftw_plan forward = nullptr;
    fftw_plan inverse = nullptr;
};

inline std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

inline const FftPlans& plans_for(int n) {
    static std::map<int, FftPlans> cache;
    std::lock_guard<std::mutex> lock(fftw_mutex());
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::size_t real_size = std::size_t(n) * n * n;
    std::size_t half_size = std::size_t(n) * n * (n / 2 + 1);
    double* in = fftw_alloc_real(real_size);
    fftw_complex* out = fftw_alloc_complex(half_size);
    FftPlans p;
    unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    p.forward = fftw_plan_dft_r2c_3d(n, n, n, in, out, flags);
    p.inverse = fftw_plan_dft_c2r_3d(n, n, n, out, in, flags);
    fftw_free(in);
    fftw_free(out);
    if (!p.forward || !p.inverse) throw Error("fftw planning failed");
    return cache.emplace(n, p).first->second;
}

} // namespace detail

inline std::size_t half_size(const Grid3& g) { return std::size_t(g.n) * g.n * (g.n / 2 + 1); }

/// Unnormalised forward transform.
inline Spectrum forward_fft(const Grid3& g, const Lattice& f) {
    if (f.size() != g.size()) throw ValidationError("lattice size does not match grid");
    const auto& p = detail::plans_for(g.n);
    Spectrum out(half_size(g));
    fftw_execute_dft_r2c(p.forward, const_cast<double*>(f.data()),
                         reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

/// Normalised inverse transform. Takes the spectrum by value since c2r overwrites it.
inline Lattice inverse_fft(const Grid3& g, Spectrum s) {
    if (s.size() != half_size(g)) throw ValidationError("spectrum size does not match grid");
    const auto& p = detail::plans_for(g.n);
    Lattice out(g.size());
    fftw_execute_dft_c2r(p.inverse, reinterpret_cast<fftw_complex*>(s.data()), out.data());
    double scale = 1.0 / double(g.size());
    for (auto& v : out) v *= scale;
    return out;
}

/// Signed mode number of an index along a full axis; the Nyquist index maps to -n/2.
inline int signed_mode(int i, int n) { return i < n / 2 ? i : i - n; }

/// Walks the half spectrum calling fn(index, m1, m2, m3).
template <class Fn>
void for_each_mode(const Grid3& g, Fn&& fn) {
    const int n = g.n, nh = n / 2 + 1;
    std::size_t idx = 0;
    for (int i3 = 0; i3 < n; ++i3) {
        int m3 = signed_mode(i3, n);
        for (int i2 = 0; i2 < n; ++i2) {
            int m2 = signed_mode(i2, n);
            for (int i1 = 0; i1 < nh; ++i1, ++idx) fn(idx, i1, m2, m3);
        }
    }
}

} // namespace nsreg
