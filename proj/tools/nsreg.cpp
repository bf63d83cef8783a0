// nsreg: command-line front end over the nsreg headers.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nsreg/nsreg.hpp"

namespace fs = std::filesystem;
using namespace nsreg;

namespace {

/// Raised for outcomes that are computed fine but break an inequality.
struct Violation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    // input
    std::string input, family, pressure_dir;
    int n = 32;
    double box_length = 2.0 * std::numbers::pi;
    double end_time = 1.0, dt = 1.0 / 16.0, viscosity = 1.0, amplitude = 1.0;
    int output_every = 1;
    std::uint64_t seed = 1;
    int max_mode = 3;
    double profile_width = 0.6;
    bool no_dealias = false;

    // exponents and ladder
    std::string p, q;
    double r0 = 1.0, theta = 0.0, delta = 1e-2, eps = 1e-3, eps1 = 0.05;
    int count = 4;
    std::vector<double> scales;
    std::vector<double> x0{0.0, 0.0, 0.0};
    std::optional<double> t0;
    std::string geometry = "ball", mean = "ball_mean", quadrature = "spectral";

    std::string out;
};

Rational parse_rational(const std::string& s) {
    auto e = Exponent::parse(s);
    if (e.is_infinite()) throw ValidationError("expected a finite value, got '" + s + "'");
    return Rational(1) / e.reciprocal();
}

QuadratureOptions quadrature_of(const Options& o) {
    if (o.quadrature == "spectral") return QuadratureOptions::spectral();
    if (o.quadrature == "nodes") return {};
    throw ValidationError("unknown quadrature mode '" + o.quadrature + "' (nodes|spectral)");
}

Vec3 x0_of(const Options& o) {
    if (o.x0.size() != 3) throw ValidationError("--x0 needs three coordinates");
    return {o.x0[0], o.x0[1], o.x0[2]};
}

FlowParams flow_of(const Options& o) {
    FlowParams f;
    f.viscosity = o.viscosity;
    f.end_time = o.end_time;
    f.dt = o.dt;
    f.amplitude = o.amplitude;
    f.output_every = o.output_every;
    f.dealias = !o.no_dealias;
    return f;
}

/// A directory holds a field directly or a velocity/ subdirectory written by evolve.
fs::path field_dir(const fs::path& dir, const std::string& sub) {
    if (fs::exists(dir / sub / "manifest.json")) return dir / sub;
    return dir;
}

SpaceTimeField velocity_of(const Options& o) {
    if (o.input.empty() == o.family.empty())
        throw ValidationError("give exactly one input source: --input DIR or --family NAME");
    if (!o.input.empty()) {
        auto f = load_field(field_dir(o.input, "velocity"));
        if (f.kind() != FieldKind::velocity) throw ValidationError("input is not a velocity field");
        return f;
    }
    GeneratorOptions g;
    g.seed = o.seed;
    g.max_mode = o.max_mode;
    g.profile_width = o.profile_width;
    return generate_field(field_family_from_string(o.family), flow_of(o), Grid3{o.n, o.box_length}, g);
}

SpaceTimeField pressure_of(const Options& o, const SpaceTimeField& u) {
    fs::path dir = o.pressure_dir;
    if (dir.empty() && !o.input.empty() && fs::exists(fs::path(o.input) / "pressure" / "manifest.json"))
        dir = fs::path(o.input) / "pressure";
    if (dir.empty()) return solve_pressure(u, !o.no_dealias);
    auto pi = load_field(dir);
    if (pi.kind() != FieldKind::pressure) throw ValidationError("pressure input is not a pressure field");
    if (!(pi.grid() == u.grid()) || pi.size() != u.size()) throw ValidationError("pressure and velocity do not match");
    return pi;
}

double t0_of(const Options& o, const SpaceTimeField& f) {
    double t = o.t0 ? *o.t0 : f.times().back();
    if (f.find_time(t) < 0) throw ValidationError("--t0 " + format_double(t) + " is not a snapshot time");
    return t;
}

std::optional<ExponentPair> pair_of(const Options& o) {
    if (o.p.empty() && o.q.empty()) return std::nullopt;
    if (o.p.empty() || o.q.empty()) throw ValidationError("give both -p and -q");
    return ExponentPair{Exponent::parse(o.p), Exponent::parse(o.q)};
}

IterationParams iteration_of(const Options& o, double default_theta) {
    IterationParams p;
    p.theta = o.theta > 0.0 ? o.theta : default_theta;
    p.delta = o.delta;
    p.eps = o.eps;
    p.eps1 = o.eps1;
    p.r0 = o.r0;
    p.count = o.count;
    p.scales = o.scales;
    p.quadrature = quadrature_of(o);
    p.pq = pair_of(o);
    return p;
}

fs::path out_dir(const Options& o) {
    if (o.out.empty()) throw ValidationError("--out DIR is required");
    std::error_code ec;
    fs::create_directories(o.out, ec);
    if (ec) throw IoError("cannot create output directory " + o.out + ": " + ec.message());
    return o.out;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw IoError("cannot write " + path.string());
}

/// Hash of every option of the subcommand except the output location.
std::string hash_of(const CLI::App* sub) {
    std::istringstream in(sub->config_to_str(true, false));
    std::string line, kept = sub->get_name() + "\n";
    while (std::getline(in, line))
        if (line.rfind("out=", 0) != 0) kept += line + "\n";
    return parameter_hash(kept);
}

void add_input(CLI::App* s, Options& o) {
    s->add_option("--input", o.input, "field directory (or a directory holding velocity/ and pressure/)");
    s->add_option("--family", o.family, "generator family");
    s->add_option("--pressure", o.pressure_dir, "pressure field directory");
    s->add_option("-n", o.n, "grid points per side");
    s->add_option("--box", o.box_length, "box length");
    s->add_option("--end-time", o.end_time, "final time");
    s->add_option("--dt", o.dt, "time step");
    s->add_option("--nu", o.viscosity, "viscosity");
    s->add_option("--amplitude", o.amplitude, "velocity amplitude");
    s->add_option("--output-every", o.output_every, "snapshot stride");
    s->add_option("--seed", o.seed, "random_smooth seed");
    s->add_option("--max-mode", o.max_mode, "random_smooth largest wavenumber");
    s->add_option("--profile-width", o.profile_width, "scaled_profile width");
    s->add_flag("--no-dealias", o.no_dealias, "skip 2/3 truncation");
}

void add_scales(CLI::App* s, Options& o) {
    s->add_option("-p", o.p, "space exponent (integer, a/b, decimal or inf)");
    s->add_option("-q", o.q, "time exponent");
    s->add_option("--r0", o.r0, "largest scale");
    s->add_option("--theta", o.theta, "ladder ratio");
    s->add_option("--count", o.count, "ladder length");
    s->add_option("--scales", o.scales, "explicit scales (overrides the ladder)");
    s->add_option("--x0", o.x0, "centre")->expected(3);
    s->add_option("--t0", o.t0, "top time (default: last snapshot)");
    s->add_option("--geometry", o.geometry, "ball|vertical");
    s->add_option("--mean", o.mean, "none|ball_mean|disc_mean|horizontal_slice");
    s->add_option("--quadrature", o.quadrature, "nodes|spectral");
}

// ------------------------------------------------------------------ commands

int cmd_generate(const Options& o, double lambda) {
    auto u = velocity_of(o);
    if (lambda != 1.0) u = rescale_field(u, lambda);
    auto dir = out_dir(o);
    persist_field(u, dir);
    return 0;
}

int cmd_evolve(const Options& o) {
    auto init = velocity_of(o);
    auto snap = make_snapshot(init.grid(), 0.0, {init[0].component(0), init[0].component(1), init[0].component(2)});
    auto [u, pi] = ns_evolve(snap, flow_of(o));
    auto dir = out_dir(o);
    persist_field(u, dir / "velocity");
    persist_field(pi, dir / "pressure");
    return 0;
}

int cmd_quantities(const Options& o, const std::vector<std::string>& kinds, const std::string& target,
                   const std::string& hash) {
    auto u = velocity_of(o);
    SpaceTimeField f;
    if (target == "velocity")
        f = u;
    else if (target == "pressure")
        f = pressure_of(o, u);
    else if (target == "vorticity")
        f = differential_op(u, DiffOp::curl);
    else if (target == "horizontal")
        f = u.select({0, 1});
    else
        throw ValidationError("unknown target '" + target + "' (velocity|pressure|vorticity|horizontal)");
    std::vector<QuantityKind> ks;
    for (const auto& k : kinds) ks.push_back(quantity_kind_from_string(k));
    if (ks.empty()) {
        if (target == "velocity") ks = {QuantityKind::A, QuantityKind::E};
        for (auto k : {QuantityKind::G, QuantityKind::H, QuantityKind::Gtilde, QuantityKind::Htilde, QuantityKind::G1})
            ks.push_back(k);
    }
    auto pq = pair_of(o).value_or(ExponentPair{Exponent::of(3), Exponent::of(3)});
    double theta = o.theta > 0.0 ? o.theta : 0.5;
    auto scales = o.scales.empty() ? geometric_ladder(o.r0, theta, o.count) : o.scales;
    auto rep = quantity_sweep(ks, f, pq, x0_of(o), t0_of(o, f), scales, geometry_from_string(o.geometry),
                              mean_mode_from_string(o.mean), quadrature_of(o));
    for (const auto& e : rep.entries)
        if (!std::isfinite(e.value)) throw NumericalError("non-finite " + to_string(e.kind) + " at r=" + format_double(e.r));
    std::ostringstream os;
    write_csv(os, rep, hash);
    write_text(out_dir(o) / "quantities.csv", os.str());
    return 0;
}

int cmd_pressure(const Options& o, const std::string& source, double rho, const std::string& mode) {
    auto u = velocity_of(o);
    auto dir = out_dir(o);
    bool dealias = !o.no_dealias;
    persist_field(solve_pressure(u, dealias), dir / "pressure");
    auto s = decompose_sec3(u, dealias);
    persist_field(s.pi1, dir / "pi1");
    persist_field(s.pi2, dir / "pi2");
    persist_field(s.pi3, dir / "pi3");
    persist_field(s.d3pi4, dir / "d3pi4");
    if (!source.empty()) {
        double t = t0_of(o, u);
        auto c = decompose_cutoff(cutoff_source_from_string(source), u[std::size_t(u.find_time(t))], rho,
                                  mode == "horizontal" ? CutoffMode::horizontal : CutoffMode::ball, x0_of(o), dealias);
        if (mode != "ball" && mode != "horizontal") throw ValidationError("unknown cutoff mode '" + mode + "'");
        nlohmann::ordered_json j;
        j["source"] = source;
        j["mode"] = mode;
        j["rho"] = rho;
        j["time"] = t;
        j["inner_laplacian"] = c.inner_laplacian;
        j["scale"] = c.scale;
        j["relative_remainder"] = c.scale > 0.0 ? c.inner_laplacian / c.scale : 0.0;
        j["solvability_correction"] = c.solvability_correction;
        j["field_id"] = u.id();
        j["n"] = u.grid().n;
        write_text(dir / "cutoff.json", j.dump(2) + "\n");
    }
    return 0;
}

/// Lemma names and their numeric aliases.
std::string canonical_lemma(const std::string& s) {
    static const std::map<std::string, std::string> alias{
        {"3.1", "interpolation"},    {"4.2", "cylinder_interpolation"}, {"2.1", "local_energy"},
        {"3.2", "energy_case1"},     {"3.6", "energy_grad"},            {"4.1", "energy_cylinder"},
        {"3.3", "decay_L33"},        {"3.7", "decay_L37"},              {"4.4", "decay_L44"},
        {"3.4", "global"},           {"4.3", "harmonic"},               {"poincare", "poincare"}};
    if (auto it = alias.find(s); it != alias.end()) return it->second;
    for (const auto& [k, v] : alias)
        if (v == s) return v;
    throw ValidationError("unknown lemma '" + s + "'");
}

std::vector<HarmonicSample> harmonic_family(const std::string& spec) {
    std::vector<HarmonicSample> out;
    auto add_samples = [&] {
        out.push_back(point_source_sample({3.0, 0.5, -0.25}));
        out.push_back(point_source_sample({0.2, -0.1, 2.5}));
        out.push_back(poisson_kernel_sample({0.0, 0.0, 1.0}));
        out.push_back(poisson_kernel_sample({0.6, 0.0, 0.8}));
        out.push_back(exponential_sample(1.0, 0.5));
        out.push_back(exponential_sample(0.3, 1.2));
    };
    if (spec.rfind("degree<=", 0) == 0) {
        int d = std::stoi(spec.substr(8));
        if (d < 0 || d > 12) throw ValidationError("harmonic degree must lie in [0, 12]");
        return harmonic_library(d);
    }
    if (spec == "samples") {
        add_samples();
        return out;
    }
    if (spec == "all") {
        out = harmonic_library(6);
        add_samples();
        return out;
    }
    throw ValidationError("unknown harmonic family '" + spec + "' (degree<=K|samples|all)");
}

struct VerifyArgs {
    std::string lemma;
    double r = 1.0 / 16.0, rho = 0.5;
    int resolution = 16;
    std::string ell = "6", domain = "box", kernel = "heat3";
    double tolerance = 0.05;
};

int cmd_verify(const Options& o, const VerifyArgs& v, const std::string& hash) {
    std::string lemma = canonical_lemma(v.lemma);
    std::vector<InequalityCheck> checks;
    std::optional<LocalEnergyTerms> energy;
    std::string field_id;
    int n = 0;
    if (lemma == "harmonic") {
        if (o.family.empty() || !o.input.empty()) throw ValidationError("the harmonic lemma takes --family only");
        for (const auto& s : harmonic_family(o.family)) {
            auto [a, b] = check_harmonic_lemma(s, v.resolution);
            checks.push_back(a);
            checks.push_back(b);
        }
        field_id = o.family;
    } else {
        auto u = velocity_of(o);
        field_id = u.id();
        n = u.grid().n;
        auto opt = quadrature_of(o);
        auto x0 = x0_of(o);
        double t0 = t0_of(o, u);
        auto pq_in = pair_of(o);
        if (lemma == "interpolation") {
            auto dom = v.domain == "ball" ? InterpolationDomain::ball : InterpolationDomain::whole_box;
            if (v.domain != "ball" && v.domain != "box") throw ValidationError("unknown domain '" + v.domain + "'");
            checks.push_back(check_interpolation(u[std::size_t(u.find_time(t0))], parse_rational(v.ell), dom, v.r, x0, opt));
        } else if (lemma == "cylinder_interpolation") {
            checks.push_back(check_interpolation_cylinder(u, pq_in.value_or(ExponentPair{Exponent::of(2), Exponent::of(4)}),
                                                          x0, t0, v.r, opt));
        } else if (lemma == "local_energy") {
            auto pi = pressure_of(o, u);
            auto kernel = v.kernel == "heat2h" ? HeatKernel::heat2h : HeatKernel::heat3;
            if (v.kernel != "heat3" && v.kernel != "heat2h") throw ValidationError("unknown kernel '" + v.kernel + "'");
            auto phi = build_test_function(v.r, v.rho, kernel, x0, t0, u.grid().box_length);
            energy = local_energy_terms(u, pi, phi, t0);
        } else {
            auto pi = pressure_of(o, u);
            double r_max = std::max(v.rho, lemma == "global" ? o.r0 : 0.0);
            auto d = flow_data(u, pi, x0, t0, r_max, opt, true, !o.no_dealias);
            auto pick = [&](ExponentPair dflt) { return pq_in.value_or(dflt); };
            ExponentPair p93{Exponent::of(9), Exponent::of(3)}, p24{Exponent::of(2), Exponent::of(4)};
            if (lemma == "energy_case1")
                checks.push_back(check_energy_bound(d, v.r, v.rho, pick(p93), EnergyVariant::case1));
            else if (lemma == "energy_grad")
                checks.push_back(check_energy_bound(d, v.r, v.rho, pick(p24), EnergyVariant::grad));
            else if (lemma == "energy_cylinder")
                checks.push_back(check_energy_bound(d, v.r, v.rho, pick(p24), EnergyVariant::cylinder));
            else if (lemma == "decay_L33")
                checks = check_pressure_decay(d, v.r, v.rho, pick(p93), DecayVariant::L33);
            else if (lemma == "decay_L37")
                checks = check_pressure_decay(d, v.r, v.rho, pick(p24), DecayVariant::L37);
            else if (lemma == "decay_L44")
                checks = check_pressure_decay(d, v.r, v.rho, pick(p24), DecayVariant::L44);
            else if (lemma == "global")
                checks = check_global_bounds(d, pick(p93), o.r0);
            else if (lemma == "poincare")
                checks = check_poincare_reduction(d, v.r, v.rho, pick(p24));
        }
    }

    auto dir = out_dir(o);
    if (energy) {
        std::ostringstream os;
        os << "energy,dissipation,heat,transport,residual,relative,field_id,n,param_hash\n";
        double rel = energy->dissipation > 0.0 ? energy->residual() / energy->dissipation : 0.0;
        os << format_double(energy->energy) << ',' << format_double(energy->dissipation) << ','
           << format_double(energy->heat) << ',' << format_double(energy->transport) << ','
           << format_double(energy->residual()) << ',' << format_double(rel) << ',' << field_id << ',' << n << ','
           << hash << '\n';
        write_text(dir / "local_energy.csv", os.str());
        if (!std::isfinite(energy->residual())) throw NumericalError("non-finite local energy residual");
        if (energy->residual() < -v.tolerance * energy->dissipation)
            throw Violation("local energy residual " + format_double(energy->residual()) + " below -" +
                            format_double(v.tolerance) + " x dissipation");
        return 0;
    }
    std::ostringstream os;
    write_checks_csv(os, checks, hash);
    write_text(dir / "checks.csv", os.str());
    write_text(dir / "checks.json",
               report({}, {}, checks, {{"field_id", field_id}, {"lemma", lemma}, {"param_hash", hash}}).dump(2) + "\n");
    for (const auto& c : checks)
        if (!is_finite_check(c)) throw Violation("check " + c.name + " has a non-finite implied constant");
    return 0;
}

struct CriteriaArgs {
    std::string theorem, regularity;
    int which = 1;
};

int cmd_criteria(const Options& o, const CriteriaArgs& a, const std::string& hash) {
    if (a.theorem.empty() == a.regularity.empty())
        throw ValidationError("give exactly one of --theorem and --eps-mode");
    auto params = iteration_of(o, 1.0 / 16.0);
    std::optional<Criterion> crit;
    if (!a.theorem.empty()) {
        if (a.theorem == "1.1") {
            if (a.which < 1 || a.which > 3) throw ValidationError("--case must be 1, 2 or 3");
            crit = std::array{Criterion::T11_case1, Criterion::T11_case2, Criterion::T11_case3}[std::size_t(a.which - 1)];
        } else if (a.theorem == "1.2") {
            crit = Criterion::T12;
        } else {
            crit = criterion_from_string(a.theorem);
        }
        ExponentPair dflt = *crit == Criterion::T11_case1   ? ExponentPair{Exponent::of(9), Exponent::of(3)}
                            : *crit == Criterion::T11_case3 ? ExponentPair{Exponent::of(3), Exponent::of(2)}
                                                            : ExponentPair{Exponent::of(2), Exponent::of(4)};
        // exponents are checked before any field work
        validate_criterion_exponents(*crit, params.pq.value_or(dflt));
        if (!params.pq) params.pq = dflt;
    }
    auto u = velocity_of(o);
    double t0 = t0_of(o, u);
    CriterionVerdict v;
    if (crit) {
        v = evaluate_criterion(u, *crit, *params.pq, o.r0, x0_of(o), t0, params);
    } else {
        auto mode = a.regularity == "velocity" ? RegularityMode::velocity : RegularityMode::vorticity;
        if (a.regularity != "velocity" && a.regularity != "vorticity")
            throw ValidationError("unknown --eps-mode '" + a.regularity + "' (velocity|vorticity)");
        ExponentPair dflt = mode == RegularityMode::velocity ? ExponentPair{Exponent::of(3), Exponent::infinity()}
                                                             : ExponentPair{Exponent::of(3, 2), Exponent::infinity()};
        v = eps_regularity(u, mode, params.pq.value_or(dflt), x0_of(o), t0, params);
    }
    auto dir = out_dir(o);
    std::ostringstream os;
    write_verdicts_csv(os, {v}, hash);
    write_text(dir / "verdicts.csv", os.str());
    write_text(dir / "report.json",
               report({v}, {}, {}, {{"field_id", u.id()}, {"n", std::to_string(u.grid().n)}, {"param_hash", hash}})
                       .dump(2) +
                   "\n");
    for (double x : v.values)
        if (!std::isfinite(x)) throw NumericalError("non-finite criterion value");
    return 0;
}

int cmd_trace(const Options& o, const std::string& variant, const std::string& hash) {
    auto params = iteration_of(o, 1.0 / 16.0);
    params.variant = iteration_variant_from_string(variant);
    validate_variant_exponents(params.variant, params.exponents());
    auto u = velocity_of(o);
    auto pi = pressure_of(o, u);
    auto t = decay_trace(u, pi, params, x0_of(o), t0_of(o, u), !o.no_dealias);
    auto dir = out_dir(o);
    std::ostringstream os;
    write_trace_csv(os, {t}, hash);
    write_text(dir / "trace.csv", os.str());
    write_text(dir / "report.json",
               report({}, {t}, {}, {{"field_id", u.id()}, {"n", std::to_string(u.grid().n)}, {"param_hash", hash}})
                       .dump(2) +
                   "\n");
    for (double f : t.F)
        if (!std::isfinite(f)) throw NumericalError("non-finite decay functional");
    return 0;
}

int cmd_report(const Options& o, const std::vector<std::string>& inputs) {
    if (inputs.empty()) throw ValidationError("report needs at least one --from document");
    nlohmann::ordered_json j;
    j["format"] = "nsreg-report";
    j["version"] = 1;
    j["sources"] = nlohmann::ordered_json::array();
    for (const char* key : {"verdicts", "traces", "checks"}) j[key] = nlohmann::ordered_json::array();
    for (const auto& path : inputs) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot read " + path);
        nlohmann::ordered_json d;
        try {
            in >> d;
        } catch (const std::exception& e) {
            throw ValidationError("malformed report " + path + ": " + e.what());
        }
        if (d.value("format", "") != "nsreg-report") throw ValidationError(path + " is not an nsreg report");
        nlohmann::ordered_json src;
        src["path"] = fs::path(path).filename().string();
        src["provenance"] = d.value("provenance", nlohmann::ordered_json::object());
        j["sources"].push_back(src);
        for (const char* key : {"verdicts", "traces", "checks"})
            if (d.contains(key))
                for (const auto& x : d[key]) j[key].push_back(x);
    }
    write_text(out_dir(o) / "report.json", j.dump(2) + "\n");
    return 0;
}

std::string quoted(const std::string& s) {
    std::string r = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') r += '\\';
        r += c == '\n' ? ' ' : c;
    }
    return r + "\"";
}

int fail(const char* kind, const std::string& msg, int code) {
    std::cerr << "error kind=" << kind << " message=" << quoted(msg) << "\n";
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Scale-invariant regularity diagnostics for periodic incompressible flows"};
    app.require_subcommand(1);
    Options o;
    double lambda = 1.0;
    std::vector<std::string> kinds;
    std::string target = "velocity", cutoff_source, cutoff_mode = "ball", variant = "case1";
    double cutoff_rho = 1.0;
    VerifyArgs va;
    CriteriaArgs ca;
    std::vector<std::string> report_inputs;

    auto* gen = app.add_subcommand("generate", "write a synthetic field");
    add_input(gen, o);
    gen->add_option("--lambda", lambda, "rescale u -> lambda u(lambda x, lambda^2 t)");
    gen->add_option("--out", o.out, "output directory")->required();

    auto* evo = app.add_subcommand("evolve", "integrate from the first snapshot");
    add_input(evo, o);
    evo->add_option("--out", o.out, "output directory")->required();

    auto* qty = app.add_subcommand("quantities", "scale-invariant quantities over a ladder");
    add_input(qty, o);
    add_scales(qty, o);
    qty->add_option("--kinds", kinds, "A E G H Gtilde Htilde G1");
    qty->add_option("--target", target, "velocity|pressure|vorticity|horizontal");
    qty->add_option("--out", o.out, "output directory")->required();

    auto* prs = app.add_subcommand("pressure", "pressure and its decompositions");
    add_input(prs, o);
    add_scales(prs, o);
    prs->add_option("--cutoff-source", cutoff_source, "pi1_terms|full_pi|gradh_pi|d3pi4_terms");
    prs->add_option("--rho", cutoff_rho, "cutoff radius");
    prs->add_option("--cutoff-mode", cutoff_mode, "ball|horizontal");
    prs->add_option("--out", o.out, "output directory")->required();

    auto* ver = app.add_subcommand("verify", "inequality suites by lemma name");
    add_input(ver, o);
    add_scales(ver, o);
    ver->add_option("--lemma", va.lemma, "lemma name or number")->required();
    ver->add_option("-r", va.r, "inner scale");
    ver->add_option("--rho", va.rho, "outer scale");
    ver->add_option("--resolution", va.resolution, "harmonic sampling resolution");
    ver->add_option("--ell", va.ell, "interpolation exponent in [2, 6]");
    ver->add_option("--domain", va.domain, "box|ball");
    ver->add_option("--kernel", va.kernel, "heat3|heat2h");
    ver->add_option("--tolerance", va.tolerance, "allowed negative local energy residual / dissipation");
    ver->add_option("--out", o.out, "output directory")->required();

    auto* cri = app.add_subcommand("criteria", "regularity criteria verdicts");
    add_input(cri, o);
    add_scales(cri, o);
    cri->add_option("--theorem", ca.theorem, "1.1 or 1.2");
    cri->add_option("--case", ca.which, "case of 1.1");
    cri->add_option("--eps-mode", ca.regularity, "velocity|vorticity smallness test");
    cri->add_option("--eps1", o.eps1, "smallness threshold");
    cri->add_option("--out", o.out, "output directory")->required();

    auto* trc = app.add_subcommand("trace", "decay iteration trace");
    add_input(trc, o);
    add_scales(trc, o);
    trc->add_option("--variant", variant, "case1|thm35|cylinder");
    trc->add_option("--delta", o.delta, "weight of the delta terms");
    trc->add_option("--eps", o.eps, "weight of the eps terms");
    trc->add_option("--out", o.out, "output directory")->required();

    auto* rep = app.add_subcommand("report", "merge report documents");
    rep->add_option("--from", report_inputs, "report.json files")->required();
    rep->add_option("--out", o.out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("usage", e.what(), 1);
    }

    try {
        if (*gen) return cmd_generate(o, lambda);
        if (*evo) return cmd_evolve(o);
        if (*qty) return cmd_quantities(o, kinds, target, hash_of(qty));
        if (*prs) return cmd_pressure(o, cutoff_source, cutoff_rho, cutoff_mode);
        if (*ver) return cmd_verify(o, va, hash_of(ver));
        if (*cri) return cmd_criteria(o, ca, hash_of(cri));
        if (*trc) return cmd_trace(o, variant, hash_of(trc));
        if (*rep) return cmd_report(o, report_inputs);
    } catch (const ResolutionError& e) {
        return fail("resolution", e.what(), 1);
    } catch (const ValidationError& e) {
        return fail("validation", e.what(), 1);
    } catch (const IoError& e) {
        return fail("io", e.what(), 1);
    } catch (const NumericalError& e) {
        return fail("numerical", e.what(), 2);
    } catch (const Violation& e) {
        return fail("violation", e.what(), 2);
    } catch (const std::exception& e) {
        return fail("internal", e.what(), 2);
    }
    return fail("usage", "unknown subcommand", 1);
}
