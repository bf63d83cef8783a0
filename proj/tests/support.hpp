#pragma once

#include <cmath>
#include <random>

#include "nsreg/nsreg.hpp"

namespace nsreg::testing {

inline Lattice sampled(const Grid3& g, double (*fn)(double, double, double)) {
    Lattice out(g.size());
    for (int k = 0; k < g.n; ++k)
        for (int j = 0; j < g.n; ++j)
            for (int i = 0; i < g.n; ++i) out[g.index(i, j, k)] = fn(g.coordinate(i), g.coordinate(j), g.coordinate(k));
    return out;
}

inline double l2(const Lattice& a) {
    double s = 0.0;
    for (double v : a) s += v * v;
    return std::sqrt(s);
}

inline double l2_diff(const Lattice& a, const Lattice& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

inline double max_diff(const Lattice& a, const Lattice& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline SpaceTimeField family(FieldFamily f, int n = 16, double end = 0.5, double dt = 1.0 / 16.0, double amp = 1.0,
                             std::uint64_t seed = 1) {
    FlowParams p;
    p.end_time = end;
    p.dt = dt;
    p.amplitude = amp;
    GeneratorOptions o;
    o.seed = seed;
    return generate_field(f, p, Grid3{n}, o);
}

inline double rel(double a, double b) {
    double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

} // namespace nsreg::testing
