#pragma once

#include <optional>
#include <ostream>

#include <json.hpp>

#include "inequalities.hpp"

namespace nsreg {

enum class IterationVariant { case1, thm35, cylinder };

inline std::string to_string(IterationVariant v) {
    switch (v) {
    case IterationVariant::case1: return "case1";
    case IterationVariant::thm35: return "thm35";
    case IterationVariant::cylinder: return "cylinder";
    }
    return "case1";
}
inline IterationVariant iteration_variant_from_string(const std::string& s) {
    for (auto v : {IterationVariant::case1, IterationVariant::thm35, IterationVariant::cylinder})
        if (to_string(v) == s) return v;
    throw ValidationError("unknown iteration variant '" + s + "'");
}

/// Default exponents per variant: (9,3) on the 3/p + 2/q = 1 line, (2,4) on the = 2 line.
inline ExponentPair default_pair(IterationVariant v) {
    if (v == IterationVariant::case1) return {Exponent::of(9), Exponent::of(3)};
    return {Exponent::of(2), Exponent::of(4)};
}

struct IterationParams {
    double theta = 1.0 / 16.0;
    double delta = 1e-2;
    double eps = 1e-3;
    double eps1 = 0.05;
    double r0 = 1.0;
    int count = 4;
    std::vector<double> scales;  // empty: r0 * theta^k, k < count
    IterationVariant variant = IterationVariant::case1;
    std::optional<ExponentPair> pq;
    QuadratureOptions quadrature = QuadratureOptions::spectral();

    void validate() const {
        if (!(theta > 0.0 && theta < 0.125)) throw ValidationError("theta must lie in (0, 1/8)");
        if (!(delta > 0.0) || !(eps > 0.0) || !(eps1 > 0.0)) throw ValidationError("delta, eps and eps1 must be positive");
        if (scales.empty() && (count < 1 || !(r0 > 0.0))) throw ValidationError("ladder needs r0 > 0 and count >= 1");
        for (double r : scales)
            if (!(r > 0.0)) throw ValidationError("ladder scales must be positive");
    }
    /// Ladder in decreasing order.
    std::vector<double> ladder() const {
        std::vector<double> s = scales.empty() ? geometric_ladder(r0, theta, count) : scales;
        std::sort(s.begin(), s.end(), std::greater<>());
        return s;
    }
    ExponentPair exponents() const { return pq ? *pq : default_pair(variant); }
};

// ---------------------------------------------------------------- verdicts

enum class Verdict { satisfied, violated, inconclusive };

inline std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::satisfied: return "satisfied";
    case Verdict::violated: return "violated";
    case Verdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

struct CriterionVerdict {
    std::string criterion;
    ExponentPair pq;
    std::vector<double> scales;  // examined, decreasing
    std::vector<double> values;
    double measured = 0.0;
    double threshold = 0.0;
    Verdict verdict = Verdict::inconclusive;
    double margin = 0.0;
    double resolution_floor = 0.0;
    std::optional<double> norm;  // stated norm on Q_{r0}, when the criterion has one
    std::string field_id;
    int n = 0;
    Geometry geometry = Geometry::ball;
};

namespace detail {

/// Splits the requested ladder into reachable scales and notes whether the floor cut any.
inline std::vector<double> reachable_scales(const Grid3& g, const std::vector<double>& ladder,
                                            const QuadratureOptions& opt, bool& cut) {
    std::vector<double> out;
    cut = false;
    for (double r : ladder) {
        if (r < opt.floor(g))
            cut = true;
        else
            out.push_back(r);
    }
    if (out.empty()) throw ResolutionError("no requested scale is above the resolution floor", opt.floor(g));
    return out;
}

inline CriterionVerdict decide(CriterionVerdict v, bool cut) {
    std::size_t k = std::min<std::size_t>(3, v.values.size());
    v.measured = 0.0;
    for (std::size_t i = v.values.size() - k; i < v.values.size(); ++i) v.measured = std::max(v.measured, v.values[i]);
    v.margin = v.threshold - v.measured;
    bool finite = !v.norm || std::isfinite(*v.norm);
    if (cut)
        v.verdict = Verdict::inconclusive;
    else
        v.verdict = finite && v.measured <= v.threshold ? Verdict::satisfied : Verdict::violated;
    return v;
}

inline void check_time_reach(const SpaceTimeField& f, double t0, double r) {
    if (f.find_time(t0) < 0) throw ValidationError("top time is not a snapshot time");
    if (t0 - r * r < f.start_time() - 1e-9 * f.dt()) throw ValidationError("r0 exceeds the field's time extent");
    if (r > 0.5 * f.grid().box_length) throw ValidationError("r0 exceeds half the box");
}

} // namespace detail

enum class RegularityMode { velocity, vorticity };

/// r^{1-kappa} ||u|| or r^{2-kappa} ||w|| on every ladder scale below 1/2, against eps1.
inline CriterionVerdict eps_regularity(const SpaceTimeField& f, RegularityMode mode, const ExponentPair& pq,
                                       const Vec3& x0, double t0, const IterationParams& params) {
    params.validate();
    Rational k = pq.kappa();
    SpaceTimeField field = f;
    if (mode == RegularityMode::velocity) {
        if (f.kind() != FieldKind::velocity) throw ValidationError("velocity mode needs a velocity field");
        if (k < Rational(1) || k > Rational(2)) throw ValidationError("velocity mode needs 1 <= 3/p + 2/q <= 2, got " + k.str());
    } else {
        if (k < Rational(2) || k > Rational(3)) throw ValidationError("vorticity mode needs 2 <= 3/p + 2/q <= 3, got " + k.str());
        if (pq.p == Exponent::of(1) && pq.q.is_infinite()) throw ValidationError("vorticity mode excludes (p,q) = (1,inf)");
        if (f.kind() == FieldKind::velocity)
            field = differential_op(f, DiffOp::curl);
        else if (f.kind() != FieldKind::vorticity)
            throw ValidationError("vorticity mode needs a velocity or vorticity field");
    }
    std::vector<double> ladder;
    for (double r : params.ladder())
        if (r < 0.5) ladder.push_back(r);
    if (ladder.empty()) throw ValidationError("no ladder scale lies below 1/2");
    bool cut = false;
    auto scales = detail::reachable_scales(f.grid(), ladder, params.quadrature, cut);
    detail::check_time_reach(f, t0, scales.front());
    CriterionVerdict v;
    v.criterion = mode == RegularityMode::velocity ? "eps_regularity_velocity" : "eps_regularity_vorticity";
    v.pq = pq, v.scales = scales, v.threshold = params.eps1, v.resolution_floor = params.quadrature.floor(f.grid());
    v.field_id = f.id(), v.n = f.grid().n;
    auto w = window_of(field, t0, scales.front());
    v.values.resize(scales.size());
    QuantityKind q = mode == RegularityMode::velocity ? QuantityKind::G : QuantityKind::H;
    parallel_for(scales.size(), [&](std::size_t i) {
        v.values[i] = quantity(q, w, pq, {x0, t0, scales[i], Geometry::ball}, MeanMode::none, params.quadrature);
    });
    return detail::decide(std::move(v), cut);
}

enum class Criterion { T11_case1, T11_case2, T11_case3, T12 };

inline std::string to_string(Criterion c) {
    switch (c) {
    case Criterion::T11_case1: return "T11_case1";
    case Criterion::T11_case2: return "T11_case2";
    case Criterion::T11_case3: return "T11_case3";
    case Criterion::T12: return "T12";
    }
    return "T11_case1";
}
inline Criterion criterion_from_string(const std::string& s) {
    for (auto c : {Criterion::T11_case1, Criterion::T11_case2, Criterion::T11_case3, Criterion::T12})
        if (to_string(c) == s) return c;
    throw ValidationError("unknown criterion '" + s + "'");
}

/// Exact check of the exponent relation and range each criterion states.
inline void validate_criterion_exponents(Criterion c, const ExponentPair& pq) {
    Rational k = pq.kappa(), iq = pq.q.reciprocal();
    auto fail = [&](const std::string& why) {
        throw ValidationError(to_string(c) + ": " + why + " (p=" + pq.p.str() + ", q=" + pq.q.str() +
                              ", 3/p+2/q=" + k.str() + ")");
    };
    switch (c) {
    case Criterion::T11_case1:
        if (!(k == Rational(1))) fail("needs 3/p + 2/q = 1");
        if (!(iq > Rational(0) && iq < Rational(1, 2))) fail("needs 2 < q < inf");
        break;
    case Criterion::T11_case2:
        if (!(k == Rational(2))) fail("needs 3/p + 2/q = 2");
        if (!(iq > Rational(0) && iq < Rational(1, 2))) fail("needs 2 < q < inf");
        break;
    case Criterion::T11_case3:
        if (!(k == Rational(2))) fail("needs 3/p + 2/q = 2");
        if (!(iq >= Rational(1, 2) && iq < Rational(1))) fail("needs 1 < q <= 2");
        break;
    case Criterion::T12:
        if (k < Rational(1) || k > Rational(2)) fail("needs 1 <= 3/p + 2/q <= 2");
        if (pq.p.reciprocal() > Rational(2, 3)) fail("needs 3/2 <= p <= inf");
        if (pq.p.is_infinite() && iq == Rational(1)) fail("excludes (p,q) = (inf,1)");
        break;
    }
}

/// Hypothesis check of one criterion: the stated norm on Q_{r0} where the
/// criterion has one, and the scale sweep of its small quantity.
inline CriterionVerdict evaluate_criterion(const SpaceTimeField& u, Criterion c, const ExponentPair& pq, double r0,
                                           const Vec3& x0, double t0, const IterationParams& params) {
    params.validate();
    validate_criterion_exponents(c, pq);
    if (u.kind() != FieldKind::velocity) throw ValidationError("criteria need a velocity field");
    if (!(r0 > 0.0)) throw ValidationError("r0 must be positive");
    detail::check_time_reach(u, t0, r0);
    Geometry geom = c == Criterion::T12 ? Geometry::vertical : Geometry::ball;
    std::vector<double> ladder;
    for (double r : params.ladder())
        if (r <= r0 * (1.0 + 1e-12)) ladder.push_back(r);
    if (ladder.empty()) throw ValidationError("no ladder scale lies at or below r0");
    bool cut = false;
    auto scales = detail::reachable_scales(u.grid(), ladder, params.quadrature, cut);
    check_radius(u.grid(), r0, params.quadrature);

    auto w = window_of(u, t0, r0);
    auto uh = w.select({0, 1});
    bool gradient = c == Criterion::T11_case2;
    SpaceTimeField guh;
    if (c == Criterion::T11_case2 || c == Criterion::T11_case3) guh = differential_op(uh, DiffOp::grad);

    CriterionVerdict v;
    v.criterion = to_string(c), v.pq = pq, v.scales = scales, v.threshold = params.eps1;
    v.resolution_floor = params.quadrature.floor(u.grid()), v.field_id = u.id(), v.n = u.grid().n, v.geometry = geom;
    CylinderSpec top{x0, t0, r0, geom};
    if (c == Criterion::T11_case1) v.norm = mixed_norm(uh, pq, top, params.quadrature);
    if (c == Criterion::T11_case2 || c == Criterion::T11_case3) v.norm = mixed_norm(guh, pq, top, params.quadrature);
    if (c == Criterion::T12) v.norm = quantity(QuantityKind::G, uh, pq, top, MeanMode::none, params.quadrature);
    v.values.resize(scales.size());
    parallel_for(scales.size(), [&](std::size_t i) {
        CylinderSpec cyl{x0, t0, scales[i], geom};
        v.values[i] = gradient ? quantity(QuantityKind::H, guh, pq, cyl, MeanMode::none, params.quadrature)
                               : quantity(QuantityKind::G, uh, pq, cyl, MeanMode::none, params.quadrature);
    });
    return detail::decide(std::move(v), cut);
}

// ---------------------------------------------------------------- decay trace

struct DecayTrace {
    IterationVariant variant = IterationVariant::case1;
    ExponentPair pq;
    double theta = 0.0, delta = 0.0, eps = 0.0;
    std::vector<double> scales;  // decreasing
    std::vector<double> F;
    /// weighted terms per scale; they sum to F
    std::vector<std::vector<std::pair<std::string, double>>> terms;
    /// F(r_{k+1}) <= F(r_k)/2 for consecutive scales
    std::vector<bool> halved, degenerate;
    /// F(r_{k+2}) <= F(r_k)/2 for consecutive triples (cylinder variant)
    std::vector<bool> triple_halved, triple_degenerate;
    std::string field_id;
    int n = 0;
};

/// Weighted terms of F at one scale.
inline std::vector<std::pair<std::string, double>> decay_terms(const FlowData& d, IterationVariant variant,
                                                               const ExponentPair& pq, double r, double delta,
                                                               double eps) {
    using K = QuantityKind;
    auto c = pq.conjugate();
    double we = std::sqrt(eps), wd = std::pow(delta, -1.5);
    std::vector<std::pair<std::string, double>> t;
    if (variant == IterationVariant::cylinder) {
        CylinderSpec cyl = d.cyl(r, Geometry::vertical);
        t.emplace_back("A", quantity_A(d.u, cyl, d.opt));
        t.emplace_back("E", quantity_E_from_gradient(d.grad_u, cyl, d.opt));
        t.emplace_back("eps_Htilde_pi", we * quantity(K::Htilde, d.pi, c, cyl, MeanMode::horizontal_slice, d.opt));
        return t;
    }
    CylinderSpec cyl = d.cyl(r);
    t.emplace_back("A", quantity_A(d.u, cyl, d.opt));
    t.emplace_back("E", quantity_E_from_gradient(d.grad_u, cyl, d.opt));
    if (variant == IterationVariant::case1) {
        const auto& sec = d.decomposition();
        ExponentPair two{Exponent::of(2), Exponent::of(2)};
        ExponentPair half{affine_reciprocal(pq.p, Rational(1, 2), 1), affine_reciprocal(pq.q, Rational(1, 2), 1)};
        double h1 = quantity(K::Htilde, sec.pi1, two, cyl, MeanMode::ball_mean, d.opt);
        double h3 = quantity(K::Htilde, sec.pi3, two, cyl, MeanMode::ball_mean, d.opt);
        double g4 = quantity(K::G1, sec.d3pi4, half, cyl, MeanMode::none, d.opt);
        t.emplace_back("eps_G1_gradh_pi", we * quantity(K::G1, d.gradh_pi, c, cyl, MeanMode::none, d.opt));
        t.emplace_back("delta_Htilde_pi1_sq", wd * h1 * h1);
        t.emplace_back("delta_Htilde_pi3_sq", wd * h3 * h3);
        t.emplace_back("delta_G1_d3pi4_sq", wd * g4 * g4);
        return t;
    }
    ExponentPair mid{affine_reciprocal(pq.p, Rational(1, 2), Rational(1, 2)),
                     affine_reciprocal(pq.q, Rational(1, 2), Rational(1, 2))};
    double g = quantity(K::G1, d.d3_pi, mid, cyl, MeanMode::none, d.opt);
    t.emplace_back("eps_Htilde_pi", we * quantity(K::Htilde, d.pi, c, cyl, MeanMode::ball_mean, d.opt));
    t.emplace_back("delta_G1_d3pi_sq", wd * g * g);
    return t;
}

inline void validate_variant_exponents(IterationVariant v, const ExponentPair& pq) {
    Rational k = pq.kappa();
    if (v == IterationVariant::case1 && !(k == Rational(1)))
        throw ValidationError("case1 trace needs 3/p + 2/q = 1, got " + k.str());
    if (v != IterationVariant::case1 && !(k == Rational(2)))
        throw ValidationError(to_string(v) + " trace needs 3/p + 2/q = 2, got " + k.str());
    if (v == IterationVariant::cylinder && pq.p.reciprocal() > Rational(2, 3))
        throw ValidationError("cylinder trace needs p >= 3/2");
}

inline DecayTrace decay_trace(const SpaceTimeField& u, const SpaceTimeField& pi, const IterationParams& params,
                              const Vec3& x0, double t0, bool dealias = true) {
    params.validate();
    auto pq = params.exponents();
    validate_variant_exponents(params.variant, pq);
    auto scales = params.ladder();
    if (scales.size() < 3) throw ValidationError("decay trace needs at least 3 scales");
    for (double r : scales) check_radius(u.grid(), r, params.quadrature);
    detail::check_time_reach(u, t0, scales.front());
    auto d = flow_data(u, pi, x0, t0, scales.front(), params.quadrature, params.variant == IterationVariant::case1,
                       dealias);
    DecayTrace tr;
    tr.variant = params.variant, tr.pq = pq, tr.theta = params.theta, tr.delta = params.delta, tr.eps = params.eps;
    tr.scales = scales, tr.field_id = u.id(), tr.n = u.grid().n;
    tr.terms.resize(scales.size());
    parallel_for(scales.size(), [&](std::size_t i) {
        tr.terms[i] = decay_terms(d, params.variant, pq, scales[i], params.delta, params.eps);
    });
    for (const auto& t : tr.terms) {
        double f = 0.0;
        for (const auto& [k, v] : t) f += v;
        tr.F.push_back(f);
    }
    auto step = [&](std::size_t a, std::size_t b, std::vector<bool>& ok, std::vector<bool>& deg) {
        bool z = tr.F[a] == 0.0 && tr.F[b] == 0.0;
        deg.push_back(z);
        ok.push_back(z || tr.F[b] <= 0.5 * tr.F[a]);
    };
    for (std::size_t k = 0; k + 1 < scales.size(); ++k) step(k, k + 1, tr.halved, tr.degenerate);
    if (params.variant == IterationVariant::cylinder)
        for (std::size_t k = 0; k + 2 < scales.size(); ++k) step(k, k + 2, tr.triple_halved, tr.triple_degenerate);
    return tr;
}

// ---------------------------------------------------------------- report

inline nlohmann::ordered_json to_json(const CriterionVerdict& v) {
    nlohmann::ordered_json j;
    j["criterion"] = v.criterion;
    j["p"] = v.pq.p.str();
    j["q"] = v.pq.q.str();
    j["geometry"] = to_string(v.geometry);
    j["scales"] = v.scales;
    j["values"] = v.values;
    j["measured"] = v.measured;
    j["threshold"] = v.threshold;
    j["verdict"] = to_string(v.verdict);
    j["margin"] = v.margin;
    j["resolution_floor"] = v.resolution_floor;
    if (v.norm) j["norm"] = *v.norm;
    j["field_id"] = v.field_id;
    j["n"] = v.n;
    return j;
}

inline nlohmann::ordered_json to_json(const DecayTrace& t) {
    nlohmann::ordered_json j;
    j["variant"] = to_string(t.variant);
    j["p"] = t.pq.p.str();
    j["q"] = t.pq.q.str();
    j["theta"] = t.theta;
    j["delta"] = t.delta;
    j["eps"] = t.eps;
    j["field_id"] = t.field_id;
    j["n"] = t.n;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < t.scales.size(); ++k) {
        nlohmann::ordered_json r;
        r["r"] = t.scales[k];
        r["F"] = t.F[k];
        nlohmann::ordered_json terms = nlohmann::ordered_json::object();
        for (const auto& [name, v] : t.terms[k]) terms[name] = v;
        r["terms"] = terms;
        if (k + 1 < t.scales.size()) {
            r["halved_next"] = bool(t.halved[k]);
            r["degenerate_next"] = bool(t.degenerate[k]);
        }
        if (k < t.triple_halved.size()) r["halved_triple"] = bool(t.triple_halved[k]);
        rows.push_back(r);
    }
    j["scales"] = rows;
    return j;
}

/// Deterministic document of everything a run produced.
inline nlohmann::ordered_json report(const std::vector<CriterionVerdict>& verdicts, const std::vector<DecayTrace>& traces,
                                     const std::vector<InequalityCheck>& checks,
                                     const std::map<std::string, std::string>& provenance = {}) {
    nlohmann::ordered_json j;
    j["format"] = "nsreg-report";
    j["version"] = 1;
    nlohmann::ordered_json prov = nlohmann::ordered_json::object();
    for (const auto& [k, v] : provenance) prov[k] = v;
    j["provenance"] = prov;
    j["verdicts"] = nlohmann::ordered_json::array();
    for (const auto& v : verdicts) j["verdicts"].push_back(to_json(v));
    j["traces"] = nlohmann::ordered_json::array();
    for (const auto& t : traces) j["traces"].push_back(to_json(t));
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : checks) j["checks"].push_back(to_json(c));
    return j;
}

/// criterion,p,q,scale,value,threshold,verdict,margin then provenance columns.
inline void write_verdicts_csv(std::ostream& os, const std::vector<CriterionVerdict>& verdicts,
                               const std::string& param_hash = "") {
    os << "criterion,p,q,scale,value,threshold,verdict,margin,field_id,n,param_hash\n";
    for (const auto& v : verdicts)
        for (std::size_t i = 0; i < v.scales.size(); ++i)
            os << v.criterion << ',' << v.pq.p.str() << ',' << v.pq.q.str() << ',' << format_double(v.scales[i]) << ','
               << format_double(v.values[i]) << ',' << format_double(v.threshold) << ',' << to_string(v.verdict) << ','
               << format_double(v.margin) << ',' << v.field_id << ',' << v.n << ',' << param_hash << '\n';
}

/// variant,r,F,A,E,eps_terms,delta_terms,halved then provenance columns; the
/// four term columns add up to F.
inline void write_trace_csv(std::ostream& os, const std::vector<DecayTrace>& traces, const std::string& param_hash = "") {
    os << "variant,r,F,A,E,eps_terms,delta_terms,halved,field_id,n,param_hash\n";
    for (const auto& t : traces)
        for (std::size_t k = 0; k < t.scales.size(); ++k) {
            double a = 0, e = 0, we = 0, wd = 0;
            for (const auto& [name, v] : t.terms[k]) {
                if (name == "A")
                    a += v;
                else if (name == "E")
                    e += v;
                else if (name.rfind("eps_", 0) == 0)
                    we += v;
                else
                    wd += v;
            }
            std::string h = k + 1 < t.scales.size() ? (t.halved[k] ? "1" : "0") : "";
            os << to_string(t.variant) << ',' << format_double(t.scales[k]) << ',' << format_double(t.F[k]) << ','
               << format_double(a) << ',' << format_double(e) << ',' << format_double(we) << ',' << format_double(wd)
               << ',' << h << ',' << t.field_id << ',' << t.n << ',' << param_hash << '\n';
        }
}

} // namespace nsreg
