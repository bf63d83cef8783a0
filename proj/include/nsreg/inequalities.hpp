#pragma once

#include <limits>
#include <map>
#include <optional>
#include <ostream>

#include <json.hpp>

#include "pressure.hpp"
#include "quantities.hpp"

namespace nsreg {

/// lhs <= C * sum(rhs_terms) with C measured.
struct InequalityCheck {
    std::string name;
    double lhs = 0.0;
    std::vector<std::pair<std::string, double>> rhs_terms;
    double implied_constant = 0.0;
    bool degenerate = false;
    std::map<std::string, std::string> metadata;

    double rhs_total() const {
        double s = 0.0;
        for (const auto& t : rhs_terms) s += t.second;
        return s;
    }
    double term(const std::string& key) const {
        for (const auto& t : rhs_terms)
            if (t.first == key) return t.second;
        throw ValidationError("no rhs term '" + key + "' in " + name);
    }
};

inline InequalityCheck make_check(std::string name, double lhs, std::vector<std::pair<std::string, double>> terms,
                                  std::map<std::string, std::string> meta = {}) {
    InequalityCheck c{std::move(name), lhs, std::move(terms), 0.0, false, std::move(meta)};
    if (!std::isfinite(lhs) || lhs < 0.0) throw NumericalError(c.name + ": lhs is negative or not finite");
    for (const auto& t : c.rhs_terms)
        if (!std::isfinite(t.second) || t.second < 0.0)
            throw NumericalError(c.name + ": rhs term " + t.first + " is negative or not finite");
    double rhs = c.rhs_total();
    if (lhs == 0.0 && rhs == 0.0)
        c.degenerate = true;
    else
        c.implied_constant = rhs == 0.0 ? std::numeric_limits<double>::infinity() : lhs / rhs;
    return c;
}

inline bool is_finite_check(const InequalityCheck& c) { return c.degenerate || std::isfinite(c.implied_constant); }

// ---------------------------------------------------------------- interpolation

enum class InterpolationDomain { whole_box, ball };

/// a = 3(l - 2)/4, exact.
inline Rational interpolation_power(Rational ell) {
    if (ell < Rational(2) || ell > Rational(6)) throw ValidationError("interpolation needs 2 <= l <= 6, got " + ell.str());
    Rational a = Rational(3, 4) * (ell - Rational(2));
    if (!(Rational(4) * a == Rational(3) * (ell - Rational(2)))) throw NumericalError("exponent bookkeeping failed");
    return a;
}

/// int |f|^l <= C (int |grad f|^2)^a (int |f|^2)^{l/2 - a} on the box or a ball.
inline InequalityCheck check_interpolation(const Snapshot& f, Rational ell, InterpolationDomain dom = InterpolationDomain::whole_box,
                                           double r = 0.0, const Vec3& x0 = {0, 0, 0},
                                           const QuadratureOptions& opt = {}) {
    Rational a = interpolation_power(ell);
    const Grid3& g = f.grid;
    double lv = ell.value(), av = a.value();
    Snapshot grad = differential_op(f, DiffOp::grad);
    double s_l = 0.0, s_2 = 0.0, s_g = 0.0;
    auto accumulate = [&](double w, double f2, double g2) {
        s_2 += w * f2;
        s_g += w * g2;
        s_l += w * (ell == Rational(2) ? f2 : std::pow(f2, 0.5 * lv));
    };
    if (dom == InterpolationDomain::whole_box) {
        double cell = std::pow(g.spacing(), 3);
        for (std::size_t i = 0; i < g.size(); ++i) {
            double f2 = 0.0, g2 = 0.0;
            for (std::size_t c = 0; c < f.num_components(); ++c) f2 += f.component(c)[i] * f.component(c)[i];
            for (std::size_t c = 0; c < grad.num_components(); ++c) g2 += grad.component(c)[i] * grad.component(c)[i];
            accumulate(cell, f2, g2);
        }
    } else {
        check_radius(g, r, opt);
        auto st = build_stencil(g, x0, r, Geometry::ball, opt);
        SpaceTimeField ff(FieldKind::scalar, std::vector<std::string>(f.num_components(), "f"), {f}, 1.0, "");
        SpaceTimeField gf(FieldKind::scalar, std::vector<std::string>(grad.num_components(), "g"), {grad}, 1.0, "");
        auto fv = gather(ff, 0, st);
        auto gv = gather(gf, 0, st);
        for (std::size_t p = 0; p < st.size(); ++p) {
            if (st.weight[p] <= 0.0) continue;
            double f2 = 0.0, g2 = 0.0;
            for (const auto& c : fv) f2 += c[p] * c[p];
            for (const auto& c : gv) g2 += c[p] * c[p];
            accumulate(st.weight[p], f2, g2);
        }
    }
    double rhs = std::pow(s_g, av) * std::pow(s_2, 0.5 * lv - av);
    return make_check("interpolation", s_l, {{"grad_pow_a_times_l2_pow", rhs}},
                      {{"l", ell.str()}, {"a", a.str()},
                       {"domain", dom == InterpolationDomain::whole_box ? "whole_box" : "ball"},
                       {"r", format_double(r)}, {"n", std::to_string(g.n)}});
}

/// G(u, 2p', 2q'; r)^2 <= C (E(u, 2r) + A(u, 2r)) on vertical cylinders, for
/// 3/p + 2/q = 2 and p >= 3/2.
inline InequalityCheck check_interpolation_cylinder(const SpaceTimeField& u, const ExponentPair& pq, const Vec3& x0,
                                                    double t0, double r, const QuadratureOptions& opt = {}) {
    if (u.kind() != FieldKind::velocity) throw ValidationError("cylinder interpolation needs a velocity field");
    if (!(pq.kappa() == Rational(2))) throw ValidationError("cylinder interpolation needs 3/p + 2/q = 2, got " + pq.kappa().str());
    if (pq.p.reciprocal() > Rational(2, 3)) throw ValidationError("cylinder interpolation needs p >= 3/2 (2p' <= 6)");
    auto c = pq.conjugate();
    ExponentPair dbl{affine_reciprocal(c.p, 0, Rational(1, 2)), affine_reciprocal(c.q, 0, Rational(1, 2))};
    Rational ell = Rational(1) / dbl.p.reciprocal();
    Rational a = interpolation_power(ell);
    // a q'/p' = 1 and -2a/p' + 2/q' = 0
    if (!(a * c.p.reciprocal() / c.q.reciprocal() == Rational(1)) ||
        !(Rational(2) * c.q.reciprocal() == Rational(2) * a * c.p.reciprocal()))
        throw NumericalError("cylinder interpolation exponent bookkeeping failed");
    CylinderSpec small{x0, t0, r, Geometry::vertical}, big{x0, t0, 2.0 * r, Geometry::vertical};
    auto w = window_of(u, t0, 2.0 * r);
    double g = quantity(QuantityKind::G, w, dbl, small, MeanMode::none, opt);
    auto grad = differential_op(w, DiffOp::grad);
    double e = quantity_E_from_gradient(grad, big, opt);
    double A = quantity_A(w, big, opt);
    return make_check("interpolation_cylinder", g * g, {{"E_2r", e}, {"A_2r", A}},
                      {{"p", pq.p.str()}, {"q", pq.q.str()}, {"r", format_double(r)}, {"field_id", u.id()},
                       {"n", std::to_string(u.grid().n)}});
}

// ---------------------------------------------------------------- local energy

struct LocalEnergyTerms {
    double energy = 0.0;       // int |u|^2 phi at time t
    double dissipation = 0.0;  // 2 int int |grad u|^2 phi
    double heat = 0.0;         // int int |u|^2 (d_t + Lap) phi
    double transport = 0.0;    // int int u.grad phi (|u|^2 + 2 pi)
    double lhs() const { return energy + dissipation; }
    double rhs() const { return heat + transport; }
    double residual() const { return rhs() - lhs(); }
};

/// Terms of the local energy balance at time t, space sums on the grid and
/// the trapezoid rule in time from the first snapshot.
inline LocalEnergyTerms local_energy_terms(const SpaceTimeField& u, const SpaceTimeField& pi, const TestFunction& phi,
                                           double t) {
    if (u.kind() != FieldKind::velocity) throw ValidationError("local energy needs a velocity field");
    if (pi.num_components() != 1 || !(pi.grid() == u.grid()) || pi.size() != u.size())
        throw ValidationError("pressure does not match the velocity field");
    const Grid3& g = u.grid();
    const Cutoff& cut = phi.cutoff;
    if (std::abs(cut.box_length - g.box_length) > 1e-12 * g.box_length)
        throw ValidationError("test function box does not match the field grid");
    long top = u.find_time(t);
    if (top < 0) throw ValidationError("time " + std::to_string(t) + " is not a snapshot time");
    if (t > cut.t0 + 1e-12) throw ValidationError("local energy time lies after the test function's top time");
    double tol = 1e-9 * std::max(u.dt(), 1e-300);
    if (u.start_time() > cut.t0 - cut.rho * cut.rho + tol)
        throw ValidationError("test function does not vanish at the field's first time");

    int reach = int(std::ceil(cut.rho / g.spacing())) + 1;
    bool column = cut.geometry == Geometry::vertical;
    auto base = [&](int a) { return int(std::floor(cut.x0[a] / g.spacing())); };
    int c1 = base(0), c2 = base(1), c3 = base(2);
    double cell = std::pow(g.spacing(), 3);
    std::size_t levels = std::size_t(top) + 1;
    std::vector<double> e(levels), d(levels), h(levels), tr(levels);

    parallel_for(levels, [&](std::size_t i) {
        double s = u[i].time;
        if (cut.time_factor(s) == 0.0) return;
        std::vector<Spectrum> spec;
        for (std::size_t c = 0; c < 3; ++c) spec.push_back(*u.spectrum(i, c));
        auto grad = differential_op_lattices(g, spec, DiffOp::grad);
        const Lattice& p = pi[i].component(0);
        double se = 0, sd = 0, sh = 0, st = 0;
        auto visit = [&](int i1, int i2, int i3) {
            Vec3 x{g.coordinate(i1), g.coordinate(i2), g.coordinate(i3)};
            double z = cut.value(x, s);
            auto dz = cut.gradient(x, s);
            if (z == 0.0 && dz[0] == 0.0 && dz[1] == 0.0 && dz[2] == 0.0) return;
            std::size_t idx = g.index(i1, i2, i3);
            double u2 = 0.0, g2 = 0.0;
            Vec3 uv;
            for (int c = 0; c < 3; ++c) uv[c] = u[i].component(c)[idx], u2 += uv[c] * uv[c];
            for (const auto& l : grad) g2 += l[idx] * l[idx];
            double f = phi.phi(x, s);
            auto df = phi.grad_phi(x, s);
            se += u2 * f;
            sd += g2 * f;
            sh += u2 * phi.heat_phi(x, s);
            st += (uv[0] * df[0] + uv[1] * df[1] + uv[2] * df[2]) * (u2 + 2.0 * p[idx]);
        };
        for (int a = -reach; a <= reach; ++a)
            for (int b = -reach; b <= reach; ++b) {
                int i1 = g.wrap(c1 + a), i2 = g.wrap(c2 + b);
                if (column) {
                    for (int k = 0; k < g.n; ++k) visit(i1, i2, k);
                } else {
                    for (int k = -reach; k <= reach; ++k) visit(i1, i2, g.wrap(c3 + k));
                }
            }
        e[i] = se * cell, d[i] = sd * cell, h[i] = sh * cell, tr[i] = st * cell;
    });
    auto trapezoid = [&](const std::vector<double>& y) {
        double s = 0.0;
        for (std::size_t k = 1; k < levels; ++k) s += 0.5 * (u[k].time - u[k - 1].time) * (y[k] + y[k - 1]);
        return s;
    };
    LocalEnergyTerms out;
    out.energy = e[levels - 1];
    out.dissipation = 2.0 * trapezoid(d);
    out.heat = trapezoid(h);
    out.transport = trapezoid(tr);
    return out;
}

/// RHS - LHS of the local energy inequality at time t; negative means violated.
inline double local_energy_residual(const SpaceTimeField& u, const SpaceTimeField& pi, const TestFunction& phi,
                                    double t) {
    return local_energy_terms(u, pi, phi, t).residual();
}

/// Least-squares slope of log(err) against log(h).
inline double observed_order(const std::vector<double>& h, const std::vector<double>& err) {
    if (h.size() != err.size() || h.size() < 2) throw ValidationError("order fit needs matching ladders of length >= 2");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double n = double(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (!(h[i] > 0.0) || !(err[i] > 0.0)) throw ValidationError("order fit needs positive values");
        double x = std::log(h[i]), y = std::log(err[i]);
        sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ---------------------------------------------------------------- lemma suites

/// Velocity, pressure and every derived field the lemma checks read, restricted
/// to the time window of the largest cylinder.
struct FlowData {
    SpaceTimeField u, pi, grad_u, u_h, grad_uh, gradh_pi, d3_pi;
    std::optional<Sec3Series> sec3;
    Vec3 x0{0, 0, 0};
    double t0 = 0.0;
    QuadratureOptions opt;

    const Sec3Series& decomposition() const {
        if (!sec3) throw ValidationError("missing pressure decomposition");
        return *sec3;
    }
    CylinderSpec cyl(double r, Geometry geom = Geometry::ball) const { return {x0, t0, r, geom}; }
};

inline FlowData flow_data(const SpaceTimeField& u, const SpaceTimeField& pi, const Vec3& x0, double t0, double r_max,
                          const QuadratureOptions& opt = {}, bool with_sec3 = true, bool dealias = true) {
    if (u.kind() != FieldKind::velocity) throw ValidationError("lemma checks need a velocity field");
    if (pi.num_components() != 1 || !(pi.grid() == u.grid())) throw ValidationError("missing pressure data");
    FlowData d;
    d.x0 = x0, d.t0 = t0, d.opt = opt;
    check_radius(u.grid(), r_max, opt);
    auto w = build_window(u, t0, r_max).needed();
    d.u = u.slice_time(w.front(), w.back());
    long a = pi.find_time(d.u.start_time()), b = pi.find_time(d.u.end_time());
    if (a < 0 || b < 0) throw ValidationError("missing pressure data on the velocity's time window");
    d.pi = pi.slice_time(std::size_t(a), std::size_t(b));
    d.grad_u = differential_op(d.u, DiffOp::grad);
    d.u_h = d.u.select({0, 1});
    d.grad_uh = d.grad_u.select({0, 1, 2, 3, 4, 5});
    d.gradh_pi = differential_op(d.pi, DiffOp::grad_h);
    d.d3_pi = differential_op(d.pi, DiffOp::d3);
    if (with_sec3) d.sec3 = decompose_sec3(d.u, dealias);
    return d;
}

namespace detail {

inline std::map<std::string, std::string> lemma_meta(const FlowData& d, const ExponentPair& pq, double r, double rho) {
    return {{"p", pq.p.str()},       {"q", pq.q.str()},
            {"r", format_double(r)}, {"rho", format_double(rho)},
            {"field_id", d.u.id()},  {"n", std::to_string(d.u.grid().n)}};
}

inline double q_of(QuantityKind k, const FlowData& d, const SpaceTimeField& f, const ExponentPair& pq, double r,
                   Geometry geom = Geometry::ball, MeanMode mean = MeanMode::none) {
    return quantity(k, f, pq, d.cyl(r, geom), mean, d.opt);
}

inline double A_of(const FlowData& d, double r, Geometry geom = Geometry::ball) {
    return quantity_A(d.u, d.cyl(r, geom), d.opt);
}
inline double E_of(const FlowData& d, double r, Geometry geom = Geometry::ball) {
    return quantity_E_from_gradient(d.grad_u, d.cyl(r, geom), d.opt);
}

inline void require_order(double r, double rho, double factor) {
    // the boundary case factor * r = rho is admitted
    if (!(r > 0.0) || factor * r > rho * (1.0 + 1e-12))
        throw ValidationError("scale ordering violated: needs 0 < " + format_double(factor) + "r <= rho");
}

inline ExponentPair pair_of(Exponent p, Exponent q) { return {p, q}; }

} // namespace detail

enum class EnergyVariant { case1, grad, cylinder };

inline std::string to_string(EnergyVariant v) {
    switch (v) {
    case EnergyVariant::case1: return "case1";
    case EnergyVariant::grad: return "grad";
    case EnergyVariant::cylinder: return "cylinder";
    }
    return "case1";
}
inline EnergyVariant energy_variant_from_string(const std::string& s) {
    for (auto v : {EnergyVariant::case1, EnergyVariant::grad, EnergyVariant::cylinder})
        if (to_string(v) == s) return v;
    throw ValidationError("unknown energy variant '" + s + "'");
}

/// A(u,r) + E(u,r) against the right-hand side of the matching local energy bound.
inline InequalityCheck check_energy_bound(const FlowData& d, double r, double rho, const ExponentPair& pq,
                                          EnergyVariant variant) {
    using K = QuantityKind;
    detail::require_order(r, rho, 4.0);
    auto meta = detail::lemma_meta(d, pq, r, rho);
    meta["variant"] = to_string(variant);
    auto c = pq.conjugate();
    double s = r / rho, inv = rho / r;
    if (variant == EnergyVariant::cylinder) {
        Geometry V = Geometry::vertical;
        ExponentPair dbl{affine_reciprocal(c.p, 0, Rational(1, 2)), affine_reciprocal(c.q, 0, Rational(1, 2))};
        double lhs = detail::A_of(d, r, V) + detail::E_of(d, r, V);
        double A = detail::A_of(d, rho, V);
        double gh = detail::q_of(K::G, d, d.u_h, pq, rho, V);
        double gu = detail::q_of(K::G, d, d.u, dbl, rho, V);
        double hp = detail::q_of(K::Htilde, d, d.pi, c, rho, V, MeanMode::horizontal_slice);
        return make_check("energy_bound_cylinder", lhs, {{"A_rho", s * A}, {"G_uh_coupling", inv * inv * gh * (gu * gu + hp)}},
                          meta);
    }
    double lhs = detail::A_of(d, r) + detail::E_of(d, r);
    double A = detail::A_of(d, rho), E = detail::E_of(d, rho);
    double ae = A + E;
    if (variant == EnergyVariant::case1) {
        const auto& sec = d.decomposition();
        ExponentPair half{affine_reciprocal(pq.p, Rational(1, 2), 1), affine_reciprocal(pq.q, Rational(1, 2), 1)};
        ExponentPair two{Exponent::of(2), Exponent::of(2)};
        double gh = detail::q_of(K::G, d, d.u_h, pq, rho);
        double g1 = detail::q_of(K::G1, d, d.gradh_pi, c, rho);
        double h1 = detail::q_of(K::Htilde, d, sec.pi1, two, rho, Geometry::ball, MeanMode::ball_mean);
        double h3 = detail::q_of(K::Htilde, d, sec.pi3, two, rho, Geometry::ball, MeanMode::ball_mean);
        double g4 = detail::q_of(K::G1, d, sec.d3pi4, half, rho);
        return make_check("energy_bound_case1", lhs,
                          {{"A_rho", s * s * A},
                           {"G_uh_coupling", inv * inv * gh * (ae + g1)},
                           {"pi1_pi3", inv * inv * std::sqrt(ae) * (h1 + h3)},
                           {"d3pi4", inv * std::sqrt(ae) * g4}},
                          meta);
    }
    if (!(pq.kappa() == Rational(2))) throw ValidationError("grad energy bound needs 3/p + 2/q = 2, got " + pq.kappa().str());
    if (pq.q.is_infinite() || pq.q.reciprocal() == Rational(1)) throw ValidationError("grad energy bound needs 1 < q < inf");
    ExponentPair mid{affine_reciprocal(pq.p, Rational(1, 2), Rational(1, 2)),
                     affine_reciprocal(pq.q, Rational(1, 2), Rational(1, 2))};
    double g1 = detail::q_of(K::G1, d, d.d3_pi, mid, rho);
    double hg = detail::q_of(K::H, d, d.grad_uh, pq, rho);
    double gh = detail::q_of(K::G, d, d.u_h, pq, rho);
    double hp = detail::q_of(K::Htilde, d, d.pi, c, rho, Geometry::ball, MeanMode::ball_mean);
    return make_check("energy_bound_grad", lhs,
                      {{"A_rho", s * s * A},
                       {"d3pi", inv * g1 * std::sqrt(ae)},
                       {"uh_coupling", (inv * hg + inv * inv * gh) * (ae + hp)}},
                      meta);
}

enum class DecayVariant { L33, L37, L44 };

inline std::string to_string(DecayVariant v) {
    switch (v) {
    case DecayVariant::L33: return "L33";
    case DecayVariant::L37: return "L37";
    case DecayVariant::L44: return "L44";
    }
    return "L33";
}
inline DecayVariant decay_variant_from_string(const std::string& s) {
    for (auto v : {DecayVariant::L33, DecayVariant::L37, DecayVariant::L44})
        if (to_string(v) == s) return v;
    throw ValidationError("unknown pressure decay variant '" + s + "'");
}

/// Two-scale pressure decay inequalities, one check per displayed line.
inline std::vector<InequalityCheck> check_pressure_decay(const FlowData& d, double r, double rho, const ExponentPair& pq,
                                                         DecayVariant variant) {
    using K = QuantityKind;
    detail::require_order(r, rho, 8.0);
    auto meta = detail::lemma_meta(d, pq, r, rho);
    meta["variant"] = to_string(variant);
    auto c = pq.conjugate();
    double s = r / rho, inv = rho / r;
    Exponent one = Exponent::of(1), two = Exponent::of(2);
    std::vector<InequalityCheck> out;
    auto kappa = pq.kappa();
    if (variant == DecayVariant::L33) {
        if (!(kappa == Rational(1))) throw ValidationError("L33 needs 3/p + 2/q = 1, got " + kappa.str());
        const auto& sec = d.decomposition();
        double A = detail::A_of(d, rho), E = detail::E_of(d, rho);
        double gh = detail::q_of(K::G, d, d.u_h, pq, rho);
        auto ht = [&](const SpaceTimeField& f, Exponent p, double rr) {
            return detail::q_of(K::Htilde, d, f, {p, two}, rr, Geometry::ball, MeanMode::ball_mean);
        };
        for (auto [name, f] : {std::pair<const char*, const SpaceTimeField*>{"pressure_decay_pi1", &sec.pi1},
                               {"pressure_decay_pi3", &sec.pi3}})
            out.push_back(make_check(name, ht(*f, two, r),
                                     {{"coupling", std::sqrt(inv) * gh * std::sqrt(A + E)}, {"tail", s * s * ht(*f, one, rho)}},
                                     meta));
        // exponent of the tail: 3/p' - 1
        double e3 = (Rational(3) * c.p.reciprocal() - Rational(1)).value();
        out.push_back(make_check("pressure_decay_gradh_pi", detail::q_of(K::G1, d, d.gradh_pi, c, r),
                                 {{"coupling", inv * (A + E)},
                                  {"tail", std::pow(s, e3) * detail::q_of(K::G1, d, d.gradh_pi, {one, c.q}, rho)}},
                                 meta));
        ExponentPair half{affine_reciprocal(pq.p, Rational(1, 2), 1), affine_reciprocal(pq.q, Rational(1, 2), 1)};
        // (p + 6)/(2p) = 1/2 + 3/p
        double e4 = (Rational(1, 2) + Rational(3) * pq.p.reciprocal()).value();
        out.push_back(make_check("pressure_decay_d3pi4", detail::q_of(K::G1, d, sec.d3pi4, half, r),
                                 {{"coupling", inv * gh * std::sqrt(E)},
                                  {"tail", std::pow(s, e4) * detail::q_of(K::G1, d, sec.d3pi4, {one, half.q}, rho)}},
                                 meta));
        return out;
    }
    if (!(kappa == Rational(2))) throw ValidationError(to_string(variant) + " needs 3/p + 2/q = 2, got " + kappa.str());
    ExponentPair dbl{affine_reciprocal(c.p, 0, Rational(1, 2)), affine_reciprocal(c.q, 0, Rational(1, 2))};
    if (variant == DecayVariant::L37) {
        double gu = detail::q_of(K::Gtilde, d, d.u, dbl, rho, Geometry::ball, MeanMode::ball_mean);
        double e1 = (Rational(3) * c.p.reciprocal()).value();
        out.push_back(make_check(
            "pressure_decay_pi", detail::q_of(K::Htilde, d, d.pi, c, r, Geometry::ball, MeanMode::ball_mean),
            {{"coupling", inv * gu * gu},
             {"tail", std::pow(s, e1) * detail::q_of(K::Htilde, d, d.pi, {one, c.q}, rho, Geometry::ball, MeanMode::ball_mean)}},
            meta));
        ExponentPair mid{affine_reciprocal(pq.p, Rational(1, 2), Rational(1, 2)),
                         affine_reciprocal(pq.q, Rational(1, 2), Rational(1, 2))};
        double e2 = (Rational(1) + Rational(3, 2) * pq.p.reciprocal()).value();
        double hg = detail::q_of(K::H, d, d.grad_uh, pq, rho);
        out.push_back(make_check("pressure_decay_d3pi", detail::q_of(K::G1, d, d.d3_pi, mid, r),
                                 {{"coupling", std::sqrt(inv) * gu * hg},
                                  {"tail", std::pow(s, e2) * detail::q_of(K::G1, d, d.d3_pi, {one, mid.q}, rho)}},
                                 meta));
        return out;
    }
    if (pq.p.reciprocal() > Rational(2, 3)) throw ValidationError("L44 needs p >= 3/2");
    Geometry V = Geometry::vertical;
    MeanMode H = MeanMode::horizontal_slice;
    double gu = detail::q_of(K::Gtilde, d, d.u, dbl, rho, V, H);
    double e = (Rational(2) * c.p.reciprocal()).value();
    out.push_back(make_check("pressure_decay_pi_cylinder", detail::q_of(K::Htilde, d, d.pi, c, r, V, H),
                             {{"coupling", inv * gu * gu}, {"tail", std::pow(s, e) * detail::q_of(K::Htilde, d, d.pi, c, rho, V, H)}},
                             meta));
    return out;
}

/// Scale-normalised whole-box energy r0^{-1} (sup_t int |u|^2 + int int |grad u|^2)
/// over (t0 - r0^2, t0).
inline double box_energy(const FlowData& d, double r0) {
    auto w = build_window(d.u, d.t0, r0);
    const Grid3& g = d.u.grid();
    double cell = std::pow(g.spacing(), 3);
    std::vector<double> l2, h1;
    for (auto i : w.needed()) {
        double a = 0.0, b = 0.0;
        for (std::size_t c = 0; c < 3; ++c)
            for (double v : d.u[i].component(c)) a += v * v;
        for (std::size_t c = 0; c < 9; ++c)
            for (double v : d.grad_u[i].component(c)) b += v * v;
        l2.push_back(a * cell), h1.push_back(b * cell);
    }
    return (w.sup(l2) + w.integrate(h1)) / r0;
}

/// Pressure quantities at r0 against the whole-box energy.
inline std::vector<InequalityCheck> check_global_bounds(const FlowData& d, const ExponentPair& pq, double r0) {
    using K = QuantityKind;
    const auto& sec = d.decomposition();
    auto c = pq.conjugate();
    Exponent one = Exponent::of(1), two = Exponent::of(2);
    ExponentPair half{affine_reciprocal(pq.p, Rational(1, 2), 1), affine_reciprocal(pq.q, Rational(1, 2), 1)};
    double en = box_energy(d, r0);
    auto meta = detail::lemma_meta(d, pq, r0, r0);
    meta.erase("rho");
    std::vector<std::pair<const char*, double>> vals{
        {"global_pi1", detail::q_of(K::Htilde, d, sec.pi1, {one, two}, r0, Geometry::ball, MeanMode::ball_mean)},
        {"global_pi3", detail::q_of(K::Htilde, d, sec.pi3, {one, two}, r0, Geometry::ball, MeanMode::ball_mean)},
        {"global_gradh_pi", detail::q_of(K::G1, d, d.gradh_pi, {one, c.q}, r0)},
        {"global_d3pi4", detail::q_of(K::G1, d, sec.d3pi4, {one, half.q}, r0)}};
    std::vector<InequalityCheck> out;
    for (auto& [name, v] : vals) out.push_back(make_check(name, v, {{"box_energy", en}}, meta));
    return out;
}

/// One-scale Poincare form and the two-scale reduction for u_h.
inline std::vector<InequalityCheck> check_poincare_reduction(const FlowData& d, double r, double rho,
                                                             const ExponentPair& pq) {
    using K = QuantityKind;
    if (!(pq.kappa() == Rational(2))) throw ValidationError("Poincare reduction needs 3/p + 2/q = 2, got " + pq.kappa().str());
    if (!(pq.p.reciprocal() > Rational(1, 3) && pq.p.reciprocal() < Rational(2, 3)))
        throw ValidationError("Poincare reduction needs 3/2 < p < 3");
    if (!(r > 0.0 && r < rho)) throw ValidationError("scale ordering violated: needs 0 < r < rho");
    auto meta = detail::lemma_meta(d, pq, r, rho);
    std::vector<InequalityCheck> out;
    out.push_back(make_check("poincare", detail::q_of(K::Gtilde, d, d.u_h, pq, r, Geometry::ball, MeanMode::ball_mean),
                             {{"H_grad_uh", detail::q_of(K::H, d, d.grad_uh, pq, r)}}, meta));
    double e = (Rational(3) * pq.p.reciprocal() - Rational(1)).value();
    out.push_back(make_check("poincare_two_scale", detail::q_of(K::G, d, d.u_h, pq, r),
                             {{"H_grad_uh", (rho / r) * detail::q_of(K::H, d, d.grad_uh, pq, rho)},
                              {"tail", std::pow(r / rho, e) * detail::q_of(K::G, d, d.u_h, pq, rho)}},
                             meta));
    return out;
}

// ---------------------------------------------------------------- output

inline std::string rhs_terms_string(const InequalityCheck& c) {
    std::string s;
    for (const auto& t : c.rhs_terms) s += (s.empty() ? "" : ";") + t.first + "=" + format_double(t.second);
    return s;
}

inline std::string metadata_string(const InequalityCheck& c) {
    std::string s;
    for (const auto& [k, v] : c.metadata) s += (s.empty() ? "" : ";") + k + "=" + v;
    return s;
}

inline void write_checks_csv(std::ostream& os, const std::vector<InequalityCheck>& checks, const std::string& param_hash = "") {
    os << "name,lhs,rhs_terms,rhs_total,implied_constant,degenerate,metadata,param_hash\n";
    for (const auto& c : checks)
        os << c.name << ',' << format_double(c.lhs) << ',' << rhs_terms_string(c) << ',' << format_double(c.rhs_total())
           << ',' << (c.degenerate ? "" : format_double(c.implied_constant)) << ',' << (c.degenerate ? 1 : 0) << ','
           << metadata_string(c) << ',' << param_hash << '\n';
}

inline nlohmann::ordered_json to_json(const InequalityCheck& c) {
    nlohmann::ordered_json j;
    j["name"] = c.name;
    j["lhs"] = c.lhs;
    nlohmann::ordered_json t = nlohmann::ordered_json::object();
    for (const auto& [k, v] : c.rhs_terms) t[k] = v;
    j["rhs_terms"] = t;
    if (c.degenerate || !std::isfinite(c.implied_constant))
        j["implied_constant"] = nullptr;
    else
        j["implied_constant"] = c.implied_constant;
    j["degenerate"] = c.degenerate;
    nlohmann::ordered_json m = nlohmann::ordered_json::object();
    for (const auto& [k, v] : c.metadata) m[k] = v;
    j["metadata"] = m;
    return j;
}

} // namespace nsreg
