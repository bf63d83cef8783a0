#include <gtest/gtest.h>

#include <sstream>

#include "support.hpp"

using namespace nsreg;
using namespace nsreg::testing;

namespace {

const ExponentPair p93{Exponent::of(9), Exponent::of(3)};
const ExponentPair p24{Exponent::of(2), Exponent::of(4)};

FlowData data_of(const SpaceTimeField& u, double lambda = 1.0) {
    Vec3 x0{1.0 / lambda, 2.0 / lambda, 3.0 / lambda};
    return flow_data(u, solve_pressure(u), x0, u.end_time(), 0.5 / lambda, QuadratureOptions::spectral());
}

Lattice gaussian_bump(const Grid3& g, double width) {
    Lattice out(g.size());
    double c = 0.5 * g.box_length;
    for (int k = 0; k < g.n; ++k)
        for (int j = 0; j < g.n; ++j)
            for (int i = 0; i < g.n; ++i) {
                double x = g.coordinate(i) - c, y = g.coordinate(j) - c, z = g.coordinate(k) - c;
                out[g.index(i, j, k)] = std::exp(-(x * x + y * y + z * z) / (2 * width * width));
            }
    return out;
}

} // namespace

TEST(Check, ConstantAndDegenerateFlag) {
    auto c = make_check("c", 2.0, {{"a", 1.0}, {"b", 3.0}});
    EXPECT_DOUBLE_EQ(c.implied_constant, 0.5);
    EXPECT_DOUBLE_EQ(c.term("b"), 3.0);
    EXPECT_FALSE(c.degenerate);
    auto d = make_check("d", 0.0, {{"a", 0.0}});
    EXPECT_TRUE(d.degenerate);
    EXPECT_TRUE(is_finite_check(d));
    auto e = make_check("e", 1.0, {{"a", 0.0}});
    EXPECT_FALSE(is_finite_check(e));
    EXPECT_THROW(make_check("f", -1.0, {{"a", 1.0}}), NumericalError);
    EXPECT_THROW(make_check("g", 1.0, {{"a", std::nan("")}}), NumericalError);
    EXPECT_THROW(c.term("zz"), ValidationError);
}

TEST(Interpolation, PowerIsExact) {
    EXPECT_EQ(interpolation_power(Rational(2)), Rational(0));
    EXPECT_EQ(interpolation_power(Rational(6)), Rational(3));
    EXPECT_EQ(interpolation_power(Rational(10, 3)), Rational(1));
    EXPECT_THROW(interpolation_power(Rational(7)), ValidationError);
    EXPECT_THROW(interpolation_power(Rational(3, 2)), ValidationError);
}

TEST(Interpolation, SquareCaseIsAnIdentity) {
    auto u = family(FieldFamily::random_smooth, 16, 0.0625, 0.0625)[0];
    auto c = check_interpolation(u, Rational(2));
    EXPECT_NEAR(c.implied_constant, 1.0, 1e-12);
    auto b = check_interpolation(u, Rational(2), InterpolationDomain::ball, 1.0, {1, 2, 3}, QuadratureOptions::spectral());
    EXPECT_NEAR(b.implied_constant, 1.0, 1e-12);
}

TEST(Interpolation, ZeroFieldIsDegenerate) {
    auto u = family(FieldFamily::zero, 16, 0.0625, 0.0625)[0];
    EXPECT_TRUE(check_interpolation(u, Rational(6)).degenerate);
}

TEST(Interpolation, ConstantIgnoresAmplitude) {
    // both sides are homogeneous of degree l in f
    Grid3 g{32};
    auto f = make_snapshot(g, 0.0, {gaussian_bump(g, 0.5)});
    auto l = gaussian_bump(g, 0.5);
    for (double& v : l) v *= 7.0;
    auto f7 = make_snapshot(g, 0.0, {l});
    for (auto ell : {Rational(3), Rational(4), Rational(6)}) {
        auto a = check_interpolation(f, ell), b = check_interpolation(f7, ell);
        EXPECT_LT(rel(a.implied_constant, b.implied_constant), 1e-12);
        EXPECT_TRUE(std::isfinite(a.implied_constant));
    }
}

TEST(Interpolation, CylinderExponentRange) {
    auto u = family(FieldFamily::taylor_green_2d, 16, 0.5);
    EXPECT_THROW(check_interpolation_cylinder(u, p93, {1, 2, 3}, 0.5, 0.25), ValidationError);
    // the 3/p + 2/q = 2 line forces p >= 3/2, with equality at q = inf
    ExponentPair edge{Exponent::of(3, 2), Exponent::infinity()};
    EXPECT_NO_THROW(check_interpolation_cylinder(u, edge, {1, 2, 3}, 0.5, 0.25, QuadratureOptions::spectral()));
    auto c = check_interpolation_cylinder(u, p24, {1, 2, 3}, 0.5, 0.25, QuadratureOptions::spectral());
    EXPECT_TRUE(is_finite_check(c));
    EXPECT_GT(c.lhs, 0.0);
}

TEST(LocalEnergy, ZeroFlowBalances) {
    auto u = family(FieldFamily::zero, 16, 1.0);
    auto pi = solve_pressure(u);
    auto phi = build_test_function(0.25, 1.0, HeatKernel::heat3, {1, 2, 3}, 1.0, u.grid().box_length);
    EXPECT_EQ(local_energy_residual(u, pi, phi, 1.0), 0.0);
}

TEST(LocalEnergy, RejectsMismatchedTestFunction) {
    auto u = family(FieldFamily::taylor_green_2d, 16, 1.0);
    auto pi = solve_pressure(u);
    auto wrong_box = build_test_function(0.25, 1.0, HeatKernel::heat3, {1, 2, 3}, 1.0, 3.0);
    EXPECT_THROW(local_energy_terms(u, pi, wrong_box, 1.0), ValidationError);
    auto late = build_test_function(0.25, 1.0, HeatKernel::heat3, {1, 2, 3}, 0.5, u.grid().box_length);
    EXPECT_THROW(local_energy_terms(u, pi, late, 1.0), ValidationError);
}

TEST(LocalEnergy, ExactHeatFlowIsNearBalance) {
    auto u = family(FieldFamily::axis_heat, 32, 1.0, 1.0 / 32.0);
    auto pi = solve_pressure(u);
    auto phi = build_test_function(0.25, 1.0, HeatKernel::heat3, {1, 2, 3}, 1.0, u.grid().box_length);
    auto t = local_energy_terms(u, pi, phi, 1.0);
    EXPECT_GT(t.dissipation, 0.0);
    EXPECT_LT(std::abs(t.residual()), 0.05 * t.dissipation);
}

TEST(Order, RecoversSlope) {
    std::vector<double> h{0.1, 0.05, 0.025}, e;
    for (double x : h) e.push_back(3.0 * x * x);
    EXPECT_NEAR(observed_order(h, e), 2.0, 1e-12);
    EXPECT_THROW(observed_order({0.1}, {1.0}), ValidationError);
}

TEST(EnergyBound, ZeroFlowIsDegenerate) {
    auto d = data_of(family(FieldFamily::zero, 16, 0.5));
    for (auto v : {EnergyVariant::case1, EnergyVariant::cylinder})
        EXPECT_TRUE(check_energy_bound(d, 0.125, 0.5, v == EnergyVariant::case1 ? p93 : p24, v).degenerate);
    EXPECT_TRUE(check_energy_bound(d, 0.125, 0.5, p24, EnergyVariant::grad).degenerate);
    for (const auto& c : check_global_bounds(d, p93, 0.5)) EXPECT_TRUE(c.degenerate) << c.name;
}

TEST(EnergyBound, ScaleOrdering) {
    auto d = data_of(family(FieldFamily::taylor_green_2d, 16, 0.5));
    EXPECT_THROW(check_energy_bound(d, 0.2, 0.5, p93, EnergyVariant::case1), ValidationError);
    EXPECT_THROW(check_pressure_decay(d, 0.1, 0.5, p93, DecayVariant::L33), ValidationError);
    EXPECT_THROW(check_energy_bound(d, 0.125, 0.5, p93, EnergyVariant::grad), ValidationError);
}

TEST(PressureDecay, PlanarFlowVerticalEntries) {
    auto d = data_of(family(FieldFamily::taylor_green_2d, 16, 0.5));
    auto checks = check_pressure_decay(d, 1.0 / 16, 0.5, p93, DecayVariant::L33);
    ASSERT_EQ(checks.size(), 4u);
    for (const auto& c : checks) {
        EXPECT_TRUE(is_finite_check(c)) << c.name;
        if (c.name == "pressure_decay_pi3" || c.name == "pressure_decay_d3pi4") {
            EXPECT_EQ(c.lhs, 0.0);
            EXPECT_EQ(c.implied_constant, 0.0);
        }
    }
    auto g = check_global_bounds(d, p93, 0.5);
    ASSERT_EQ(g.size(), 4u);
    EXPECT_EQ(g[1].lhs, 0.0);
    EXPECT_EQ(g[3].lhs, 0.0);
}

TEST(Poincare, ExponentRange) {
    auto d = data_of(family(FieldFamily::taylor_green_2d, 16, 0.5));
    EXPECT_THROW(check_poincare_reduction(d, 0.125, 0.5, p93), ValidationError);
    auto c = check_poincare_reduction(d, 0.125, 0.5, p24);
    ASSERT_EQ(c.size(), 2u);
    for (const auto& x : c) EXPECT_TRUE(is_finite_check(x));
}

TEST(LemmaSuite, DyadicRescaleInvariance) {
    auto u = family(FieldFamily::random_smooth, 16, 0.5);
    auto v = rescale_field(u, 2.0);
    auto a = data_of(u), b = data_of(v, 2.0);
    auto cmp = [](const InequalityCheck& x, const InequalityCheck& y) {
        EXPECT_EQ(x.name, y.name);
        EXPECT_LT(rel(x.implied_constant, y.implied_constant), 1e-8) << x.name;
    };
    cmp(check_energy_bound(a, 0.125, 0.5, p93, EnergyVariant::case1),
        check_energy_bound(b, 0.0625, 0.25, p93, EnergyVariant::case1));
    cmp(check_energy_bound(a, 0.125, 0.5, p24, EnergyVariant::cylinder),
        check_energy_bound(b, 0.0625, 0.25, p24, EnergyVariant::cylinder));
    auto da = check_pressure_decay(a, 1.0 / 16, 0.5, p24, DecayVariant::L44);
    auto db = check_pressure_decay(b, 1.0 / 32, 0.25, p24, DecayVariant::L44);
    cmp(da[0], db[0]);
    auto ga = check_global_bounds(a, p93, 0.5), gb = check_global_bounds(b, p93, 0.25);
    for (std::size_t i = 0; i < ga.size(); ++i) cmp(ga[i], gb[i]);
}

TEST(Output, CsvAndJson) {
    std::vector<InequalityCheck> cs{make_check("x", 1.0, {{"a", 2.0}}, {{"r", "0.5"}})};
    std::ostringstream os;
    write_checks_csv(os, cs, "h");
    EXPECT_EQ(os.str(), "name,lhs,rhs_terms,rhs_total,implied_constant,degenerate,metadata,param_hash\n"
                        "x,1,a=2,2,0.5,0,r=0.5,h\n");
    auto j = to_json(cs[0]);
    EXPECT_EQ(j["name"], "x");
}
