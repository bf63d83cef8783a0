#include <gtest/gtest.h>

#include <sstream>

#include "support.hpp"

using namespace nsreg;
using namespace nsreg::testing;

namespace {

ExponentPair pair_for(Criterion c) {
    switch (c) {
    case Criterion::T11_case1: return {Exponent::of(9), Exponent::of(3)};
    case Criterion::T11_case3: return {Exponent::of(3), Exponent::of(2)};
    default: return {Exponent::of(2), Exponent::of(4)};
    }
}

const std::vector<Criterion> all_criteria{Criterion::T11_case1, Criterion::T11_case2, Criterion::T11_case3,
                                          Criterion::T12};

} // namespace

TEST(Exponents, RelationsAreEnforced) {
    try {
        validate_criterion_exponents(Criterion::T11_case1, {Exponent::of(3), Exponent::of(3)});
        FAIL() << "expected a validation error";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("3/p + 2/q = 1"), std::string::npos);
    }
    EXPECT_NO_THROW(validate_criterion_exponents(Criterion::T11_case1, {Exponent::of(9), Exponent::of(3)}));
    EXPECT_THROW(validate_criterion_exponents(Criterion::T11_case1, {Exponent::of(3), Exponent::infinity()}),
                 ValidationError);
    EXPECT_THROW(validate_criterion_exponents(Criterion::T11_case2, {Exponent::of(3), Exponent::of(2)}), ValidationError);
    EXPECT_NO_THROW(validate_criterion_exponents(Criterion::T11_case3, {Exponent::of(3), Exponent::of(2)}));
    EXPECT_THROW(validate_criterion_exponents(Criterion::T11_case3, {Exponent::of(2), Exponent::of(4)}), ValidationError);
    EXPECT_THROW(validate_criterion_exponents(Criterion::T12, {Exponent::infinity(), Exponent::of(1)}), ValidationError);
    EXPECT_THROW(validate_criterion_exponents(Criterion::T12, {Exponent::of(1), Exponent::infinity()}), ValidationError);
    EXPECT_NO_THROW(validate_criterion_exponents(Criterion::T12, {Exponent::of(3), Exponent::infinity()}));
}

TEST(Exponents, NamesRoundTrip) {
    for (auto c : all_criteria) EXPECT_EQ(criterion_from_string(to_string(c)), c);
    for (auto v : {IterationVariant::case1, IterationVariant::thm35, IterationVariant::cylinder})
        EXPECT_EQ(iteration_variant_from_string(to_string(v)), v);
    EXPECT_THROW(criterion_from_string("T99"), ValidationError);
}

TEST(Params, Validation) {
    IterationParams p;
    EXPECT_NO_THROW(p.validate());
    p.theta = 0.2;
    EXPECT_THROW(p.validate(), ValidationError);
    p = {};
    p.eps1 = 0.0;
    EXPECT_THROW(p.validate(), ValidationError);
    p = {};
    p.scales = {0.01, 1.0, 0.1};
    EXPECT_EQ(p.ladder(), (std::vector<double>{1.0, 0.1, 0.01}));
}

TEST(Decide, UsesFinestScales) {
    CriterionVerdict v;
    v.values = {1.0, 0.1, 0.01, 0.001};
    v.threshold = 0.05;
    auto a = detail::decide(v, false);
    EXPECT_EQ(a.verdict, Verdict::violated);
    EXPECT_DOUBLE_EQ(a.measured, 0.1);
    v.values = {1.0, 0.04, 0.01, 0.001};
    EXPECT_EQ(detail::decide(v, false).verdict, Verdict::satisfied);
    EXPECT_EQ(detail::decide(v, true).verdict, Verdict::inconclusive);
    v.norm = std::numeric_limits<double>::infinity();
    EXPECT_EQ(detail::decide(v, false).verdict, Verdict::violated);
}

class TrivialFlows : public ::testing::TestWithParam<FieldFamily> {};

TEST_P(TrivialFlows, SatisfiedWithZeroValue) {
    auto u = family(GetParam(), 16, 1.0);
    auto v = rescale_field(u, 2.0);
    IterationParams p, q;
    q.r0 = 0.5;
    for (auto c : all_criteria) {
        auto a = evaluate_criterion(u, c, pair_for(c), 1.0, {1, 2, 3}, 1.0, p);
        EXPECT_EQ(a.verdict, Verdict::satisfied) << to_string(c);
        EXPECT_EQ(a.measured, 0.0);
        auto b = evaluate_criterion(v, c, pair_for(c), 0.5, {0.5, 1, 1.5}, 0.25, q);
        EXPECT_EQ(b.verdict, a.verdict);
        EXPECT_EQ(b.values, a.values);
    }
}

INSTANTIATE_TEST_SUITE_P(Fields, TrivialFlows, ::testing::Values(FieldFamily::zero, FieldFamily::axis_heat),
                         [](const auto& info) { return to_string(info.param); });

TEST(Criteria, RescaleInvarianceOnSmoothFlow) {
    auto u = family(FieldFamily::random_smooth, 16, 1.0, 1.0 / 16.0, 0.1);
    auto v = rescale_field(u, 2.0);
    IterationParams p, q;
    q.r0 = 0.5;
    for (auto c : all_criteria) {
        auto a = evaluate_criterion(u, c, pair_for(c), 1.0, {1, 2, 3}, 1.0, p);
        auto b = evaluate_criterion(v, c, pair_for(c), 0.5, {0.5, 1, 1.5}, 0.25, q);
        ASSERT_EQ(a.values.size(), b.values.size());
        for (std::size_t i = 0; i < a.values.size(); ++i) EXPECT_LT(rel(a.values[i], b.values[i]), 1e-10);
        EXPECT_EQ(a.verdict, b.verdict);
        EXPECT_GT(a.values.front(), 0.0);
    }
}

TEST(Criteria, ResolutionFloorMakesVerdictInconclusive) {
    auto u = family(FieldFamily::taylor_green_2d, 16, 1.0);
    IterationParams p;
    p.quadrature = QuadratureOptions{};
    p.theta = 1.0 / 16.0;
    // the nodes floor is 8 cells = pi, so no scale of the ladder is reachable
    EXPECT_THROW(evaluate_criterion(u, Criterion::T11_case1, pair_for(Criterion::T11_case1), 0.5, {0, 0, 0}, 1.0, p),
                 ResolutionError);
    IterationParams s;
    s.scales = {1.0, 0.01, 1e-6};
    auto v = evaluate_criterion(u, Criterion::T11_case1, pair_for(Criterion::T11_case1), 1.0, {0, 0, 0}, 1.0, s);
    EXPECT_EQ(v.verdict, Verdict::inconclusive);
    EXPECT_EQ(v.scales.size(), 2u);
}

TEST(EpsRegularity, ZeroFlowAndExponentRanges) {
    auto u = family(FieldFamily::zero, 16, 1.0);
    IterationParams p;
    auto a = eps_regularity(u, RegularityMode::velocity, {Exponent::of(3), Exponent::infinity()}, {0, 0, 0}, 1.0, p);
    EXPECT_EQ(a.verdict, Verdict::satisfied);
    auto b = eps_regularity(u, RegularityMode::vorticity, {Exponent::of(3, 2), Exponent::infinity()}, {0, 0, 0}, 1.0, p);
    EXPECT_EQ(b.verdict, Verdict::satisfied);
    EXPECT_THROW(eps_regularity(u, RegularityMode::velocity, {Exponent::of(1), Exponent::of(1)}, {0, 0, 0}, 1.0, p),
                 ValidationError);
    EXPECT_THROW(eps_regularity(u, RegularityMode::vorticity, {Exponent::of(1), Exponent::infinity()}, {0, 0, 0}, 1.0, p),
                 ValidationError);
}

TEST(DecayTrace, ZeroFlowIsVacuous) {
    auto u = family(FieldFamily::zero, 16, 1.0);
    auto pi = solve_pressure(u);
    IterationParams p;
    for (auto v : {IterationVariant::case1, IterationVariant::thm35, IterationVariant::cylinder}) {
        p.variant = v;
        auto t = decay_trace(u, pi, p, {1, 2, 3}, 1.0);
        for (double f : t.F) EXPECT_EQ(f, 0.0);
        for (bool d : t.degenerate) EXPECT_TRUE(d);
        for (bool h : t.halved) EXPECT_TRUE(h);
    }
}

TEST(DecayTrace, SmoothFlowHalvesAndTermsSum) {
    FlowParams fp;
    fp.end_time = 1.0;
    fp.dt = 1.0 / 16.0;
    fp.amplitude = 0.1;
    Grid3 g{16};
    auto [u, pi] = ns_evolve(make_snapshot(g, 0.0, initial_velocity(FieldFamily::taylor_green_2d, g, 0.1)), fp);
    IterationParams p;
    p.variant = IterationVariant::thm35;
    auto t = decay_trace(u, pi, p, {1, 2, 3}, 1.0);
    ASSERT_EQ(t.F.size(), 4u);
    for (std::size_t k = 0; k < t.F.size(); ++k) {
        double s = 0.0;
        for (const auto& [name, v] : t.terms[k]) s += v;
        EXPECT_DOUBLE_EQ(s, t.F[k]);
    }
    for (bool h : t.halved) EXPECT_TRUE(h);
    p.count = 2;
    EXPECT_THROW(decay_trace(u, pi, p, {1, 2, 3}, 1.0), ValidationError);
}

TEST(Report, DocumentShape) {
    auto u = family(FieldFamily::zero, 16, 1.0);
    IterationParams p;
    auto v = evaluate_criterion(u, Criterion::T12, pair_for(Criterion::T12), 1.0, {0, 0, 0}, 1.0, p);
    auto j = report({v}, {}, {}, {{"k", "v"}});
    EXPECT_EQ(j["format"], "nsreg-report");
    EXPECT_EQ(j["verdicts"].size(), 1u);
    EXPECT_EQ(j["verdicts"][0]["verdict"], "satisfied");
    std::ostringstream os;
    write_verdicts_csv(os, {v}, "abc");
    std::string text = os.str();
    EXPECT_EQ(text.substr(0, text.find('\n')), "criterion,p,q,scale,value,threshold,verdict,margin,field_id,n,param_hash");
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1 + std::ptrdiff_t(v.scales.size()));
}
