#pragma once

#include <optional>

#include "field.hpp"

namespace nsreg {

/// Scaling weight w in F^lambda(x,t) = lambda^w F(lambda x, lambda^2 t).
inline double default_scaling_weight(FieldKind k) {
    switch (k) {
    case FieldKind::velocity: return 1.0;
    case FieldKind::pressure:
    case FieldKind::vorticity: return 2.0;
    case FieldKind::scalar: break;
    }
    throw ValidationError("scalar fields need an explicit scaling weight");
}

/// Navier-Stokes rescaling. The lattice is relabelled rather than resampled:
/// same node count, box length L/lambda, times t/lambda^2, values lambda^w.
/// This is exact for every lambda > 0, so no interpolation ever happens.
inline SpaceTimeField rescale_field(const SpaceTimeField& f, double lambda, std::optional<double> weight = {}) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ValidationError("rescale factor must be positive");
    double w = weight ? *weight : default_scaling_weight(f.kind());
    double factor = std::pow(lambda, w);
    double l2 = lambda * lambda;
    Grid3 g{f.grid().n, f.grid().box_length / lambda};
    std::vector<Snapshot> snaps;
    for (const auto& s : f.snapshots()) {
        std::vector<Lattice> comps;
        for (std::size_t c = 0; c < s.num_components(); ++c) {
            Lattice l = s.component(c);
            if (factor != 1.0)
                for (double& v : l) v *= factor;
            comps.push_back(std::move(l));
        }
        snaps.push_back(make_snapshot(g, s.time / l2, std::move(comps)));
    }
    return SpaceTimeField(f.kind(), f.names(), std::move(snaps), f.dt() / l2, f.id());
}

} // namespace nsreg
