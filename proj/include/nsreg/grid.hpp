#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>

#include "error.hpp"

namespace nsreg {

using Vec3 = std::array<double, 3>;

/// Uniform periodic lattice of n^3 nodes on [0, L)^3, x1 fastest in memory.
struct Grid3 {
    int n = 64;
    double box_length = 2.0 * std::numbers::pi;

    double spacing() const { return box_length / n; }
    std::size_t size() const { return std::size_t(n) * n * n; }
    std::size_t index(int i, int j, int k) const {
        return std::size_t(i) + std::size_t(n) * (std::size_t(j) + std::size_t(n) * std::size_t(k));
    }
    int wrap(int i) const { return ((i % n) + n) % n; }
    double coordinate(int i) const { return i * spacing(); }
    /// Fundamental wavenumber 2*pi/L.
    double k0() const { return 2.0 * std::numbers::pi / box_length; }

    /// Minimum-image displacement of a coordinate, in [-L/2, L/2).
    double periodic_delta(double d) const {
        d = std::fmod(d, box_length);
        if (d < -0.5 * box_length) d += box_length;
        if (d >= 0.5 * box_length) d -= box_length;
        return d;
    }

    void validate() const {
        if (n < 16 || (n & (n - 1)) != 0)
            throw ValidationError("grid size must be a power of two >= 16, got " + std::to_string(n));
        if (!(box_length > 0.0) || !std::isfinite(box_length))
            throw ValidationError("box length must be positive and finite");
    }

    bool operator==(const Grid3&) const = default;
};

} // namespace nsreg
