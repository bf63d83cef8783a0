#pragma once

#include <cstdio>
#include <ostream>

#include "calculus.hpp"
#include "cylinder.hpp"
#include "parallel.hpp"

namespace nsreg {

enum class QuantityKind { A, E, G, H, Gtilde, Htilde, G1 };

inline std::string to_string(QuantityKind k) {
    switch (k) {
    case QuantityKind::A: return "A";
    case QuantityKind::E: return "E";
    case QuantityKind::G: return "G";
    case QuantityKind::H: return "H";
    case QuantityKind::Gtilde: return "Gtilde";
    case QuantityKind::Htilde: return "Htilde";
    case QuantityKind::G1: return "G1";
    }
    return "G";
}
inline QuantityKind quantity_kind_from_string(const std::string& s) {
    for (auto k : {QuantityKind::A, QuantityKind::E, QuantityKind::G, QuantityKind::H, QuantityKind::Gtilde,
                   QuantityKind::Htilde, QuantityKind::G1})
        if (to_string(k) == s) return k;
    throw ValidationError("unknown quantity kind '" + s + "'");
}

/// Power of r in front of the mixed norm: r^{w - kappa}.
inline double scale_weight(QuantityKind k) {
    switch (k) {
    case QuantityKind::G:
    case QuantityKind::Gtilde: return 1.0;
    case QuantityKind::H:
    case QuantityKind::Htilde: return 2.0;
    case QuantityKind::G1: return 3.0;
    default: return 0.0;
    }
}

/// Raw mixed norm ||f||_{L^q_t L^p_x(Q)}.
inline double mixed_norm(const SpaceTimeField& f, const ExponentPair& pq, const CylinderSpec& cyl,
                         const QuadratureOptions& opt = {}, MeanMode mean = MeanMode::none) {
    return CylinderSample(f, cyl, opt).mixed_norm(pq, mean);
}

/// r^{w - 3/p - 2/q} ||f - mean||, the common shape of G, H, G1 and their tilde forms.
inline double scaled_norm(double weight, const SpaceTimeField& f, const ExponentPair& pq, const CylinderSpec& cyl,
                          MeanMode mean = MeanMode::none, const QuadratureOptions& opt = {}) {
    double n = mixed_norm(f, pq, cyl, opt, mean);
    return n == 0.0 ? 0.0 : std::pow(cyl.r, weight - pq.kappa().value()) * n;
}

/// A = sup_t r^{-1} int_B |u|^2.
inline double quantity_A(const SpaceTimeField& u, const CylinderSpec& cyl, const QuadratureOptions& opt = {}) {
    return CylinderSample(u, cyl, opt).sup_square() / cyl.r;
}

/// E from a precomputed gradient field: r^{-1} int int |grad u|^2.
inline double quantity_E_from_gradient(const SpaceTimeField& grad, const CylinderSpec& cyl,
                                       const QuadratureOptions& opt = {}) {
    return CylinderSample(grad, cyl, opt).integral_square() / cyl.r;
}

/// Restricts f to the snapshots a cylinder (or a family of cylinders up to radius r) reads.
inline SpaceTimeField window_of(const SpaceTimeField& f, double t0, double r) {
    auto w = build_window(f, t0, r);
    auto need = w.needed();
    return f.slice_time(need.front(), need.back());
}

inline double quantity_E(const SpaceTimeField& u, const CylinderSpec& cyl, const QuadratureOptions& opt = {}) {
    if (u.kind() != FieldKind::velocity) throw ValidationError("E requires a velocity field");
    return quantity_E_from_gradient(differential_op(window_of(u, cyl.t0, cyl.r), DiffOp::grad), cyl, opt);
}

inline double quantity(QuantityKind kind, const SpaceTimeField& f, const ExponentPair& pq, const CylinderSpec& cyl,
                       MeanMode mean = MeanMode::none, const QuadratureOptions& opt = {}) {
    switch (kind) {
    case QuantityKind::A:
        if (f.kind() != FieldKind::velocity) throw ValidationError("A requires a velocity field");
        return quantity_A(f, cyl, opt);
    case QuantityKind::E: return quantity_E(f, cyl, opt);
    case QuantityKind::Gtilde:
    case QuantityKind::Htilde:
        if (mean == MeanMode::none) throw ValidationError(to_string(kind) + " needs a mean mode");
        return scaled_norm(scale_weight(kind), f, pq, cyl, mean, opt);
    default:
        return scaled_norm(scale_weight(kind), f, pq, cyl, MeanMode::none, opt);
    }
}

/// f minus its region mean at every time level: one constant per time for
/// ball_mean and disc_mean (ball geometry), one value per x3 slice for the
/// horizontal modes of a vertical cylinder. The cylinder's time is ignored.
inline SpaceTimeField mean_subtract(const SpaceTimeField& f, const CylinderSpec& cyl, MeanMode mode,
                                    const QuadratureOptions& opt = {}) {
    if (f.num_components() != 1) throw ValidationError("mean subtraction needs a scalar field");
    if (mode == MeanMode::none) return f;
    if (mode == MeanMode::horizontal_slice && cyl.geometry != Geometry::vertical)
        throw ValidationError("horizontal_slice mean requires the vertical geometry");
    auto st = build_stencil(f.grid(), cyl.x0, cyl.r, cyl.geometry, opt);
    const Grid3& g = f.grid();
    std::vector<Snapshot> snaps;
    for (std::size_t i = 0; i < f.size(); ++i) {
        auto vals = gather(f, i, st);
        auto m = region_means(vals, st, cyl.geometry, mode)[0];
        Lattice l = f[i].component(0);
        if (m.size() == 1) {
            for (double& v : l) v -= m[0];
        } else {
            // refined stencils place slices on grid planes too
            std::size_t plane = std::size_t(g.n) * g.n;
            for (std::size_t k = 0; k < std::size_t(g.n); ++k)
                for (std::size_t q = 0; q < plane; ++q) l[k * plane + q] -= m[k];
        }
        snaps.push_back(make_snapshot(g, f[i].time, {std::move(l)}));
    }
    return SpaceTimeField(f.kind(), f.names(), std::move(snaps), f.dt(), f.id());
}

struct QuantityEntry {
    QuantityKind kind;
    ExponentPair pq;
    double r;
    Geometry geometry;
    MeanMode mean;
    double value;
};

struct QuantityReport {
    std::string field_id;
    int n = 0;
    Geometry geometry = Geometry::ball;
    bool truncated_x3 = false;
    std::vector<QuantityEntry> entries;
};

/// Geometric ladder r_k = r0 * theta^k, k = 0..count-1.
inline std::vector<double> geometric_ladder(double r0, double theta, int count) {
    if (count < 1) throw ValidationError("empty ladder");
    if (!(r0 > 0.0) || !(theta > 0.0 && theta < 1.0)) throw ValidationError("ladder needs r0 > 0 and 0 < theta < 1");
    std::vector<double> out;
    for (int k = 0; k < count; ++k) out.push_back(r0 * std::pow(theta, k));
    return out;
}

/// One entry per (kind, scale), sorted by scale then by the order of kinds.
inline QuantityReport quantity_sweep(const std::vector<QuantityKind>& kinds, const SpaceTimeField& f,
                                     const ExponentPair& pq, const Vec3& x0, double t0,
                                     const std::vector<double>& scales, Geometry geom,
                                     MeanMode mean = MeanMode::none, const QuadratureOptions& opt = {}) {
    if (scales.empty() || kinds.empty()) throw ValidationError("empty ladder");
    for (double r : scales) check_radius(f.grid(), r, opt);
    std::vector<double> sorted = scales;
    std::sort(sorted.begin(), sorted.end());
    bool need_grad = std::find(kinds.begin(), kinds.end(), QuantityKind::E) != kinds.end();
    SpaceTimeField grad;
    if (need_grad) {
        if (f.kind() != FieldKind::velocity) throw ValidationError("E requires a velocity field");
        grad = differential_op(window_of(f, t0, sorted.back()), DiffOp::grad);
    }
    QuantityReport rep{f.id(), f.grid().n, geom, geom == Geometry::vertical, {}};
    rep.entries.resize(sorted.size() * kinds.size());
    parallel_for(rep.entries.size(), [&](std::size_t idx) {
        double r = sorted[idx / kinds.size()];
        QuantityKind k = kinds[idx % kinds.size()];
        CylinderSpec cyl{x0, t0, r, geom};
        double v = k == QuantityKind::E ? quantity_E_from_gradient(grad, cyl, opt) : quantity(k, f, pq, cyl, mean, opt);
        bool tilde = k == QuantityKind::Gtilde || k == QuantityKind::Htilde;
        rep.entries[idx] = {k, pq, r, geom, tilde ? mean : MeanMode::none, v};
    });
    return rep;
}

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Stable 64-bit FNV-1a of a parameter string, printed in hex.
inline std::string parameter_hash(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

/// CSV with the fixed leading columns kind,p,q,r,geometry,value then provenance.
inline void write_csv(std::ostream& os, const QuantityReport& rep, const std::string& param_hash = "") {
    os << "kind,p,q,r,geometry,value,mean,field_id,n,param_hash\n";
    for (const auto& e : rep.entries)
        os << to_string(e.kind) << ',' << e.pq.p.str() << ',' << e.pq.q.str() << ',' << format_double(e.r) << ','
           << to_string(e.geometry) << ',' << format_double(e.value) << ',' << to_string(e.mean) << ','
           << rep.field_id << ',' << rep.n << ',' << param_hash << '\n';
}

} // namespace nsreg
