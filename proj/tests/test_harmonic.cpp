#include <gtest/gtest.h>

#include <numbers>

#include "support.hpp"

using namespace nsreg;
using namespace nsreg::testing;

TEST(GaussLegendre, ExactForLowDegree) {
    auto [x, w] = gauss_legendre(5);
    double s8 = 0.0, s9 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s8 += w[i] * std::pow(x[i], 8), s9 += w[i] * std::pow(x[i], 9);
    EXPECT_NEAR(s8, 2.0 / 9.0, 1e-15);
    EXPECT_NEAR(s9, 0.0, 1e-15);
    auto [y, v] = gauss_legendre(4, 0.0, 2.0);
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += v[i] * y[i] * y[i];
    EXPECT_NEAR(s, 8.0 / 3.0, 1e-14);
}

TEST(Polynomial, CalculusAndMeans) {
    auto p = Polynomial3::monomial(2, 0, 0) - Polynomial3::monomial(0, 2, 0);
    EXPECT_EQ(p.laplacian().degree(), -1);
    auto q = Polynomial3::monomial(1, 0, 2);
    // mean of x3^2 over [-1, 1] is 1/3
    EXPECT_NEAR(q.vertical_mean()({2.0, 0.0, 0.5}), 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(q.horizontal_mean()({0.0, 0.0, 0.5}), 0.0, 1e-15);
    EXPECT_NEAR(q.derivative(2)({1.0, 0.0, 0.5}), 1.0, 1e-15);
}

TEST(Polynomial, ProjectionIsHarmonic) {
    for (int d = 0; d <= 8; ++d)
        for (int i = 0; i <= d; ++i) {
            auto h = harmonic_projection(Polynomial3::monomial(i, d - i, 0));
            auto lap = h.laplacian();
            for (Vec3 x : {Vec3{0.3, -0.7, 0.2}, Vec3{1.0, 0.5, -1.0}, Vec3{-0.4, 0.9, 0.8}})
                EXPECT_NEAR(lap(x), 0.0, 1e-12) << "degree " << d << " i " << i;
        }
    EXPECT_THROW(harmonic_projection(Polynomial3::monomial(2, 0, 0) + Polynomial3::monomial(1, 0, 0)), ValidationError);
}

TEST(Library, SizeAndHarmonicity) {
    auto lib = harmonic_library(6);
    EXPECT_EQ(lib.size(), 84u);
    for (const auto& s : lib) EXPECT_LT(harmonicity_defect(s), 1e-12) << s.name;
}

TEST(Library, EveryConstantFinite) {
    for (const auto& s : harmonic_library(4)) {
        auto [a, b] = check_harmonic_lemma(s, 8);
        EXPECT_TRUE(is_finite_check(a)) << s.name;
        EXPECT_TRUE(is_finite_check(b)) << s.name;
    }
}

TEST(Lemma, VerticalCoordinate) {
    // sup |d3 x3| = 1 and int_{B1} |x3| = pi / 2
    auto [a, b] = check_harmonic_lemma(polynomial_sample("x3", Polynomial3::monomial(0, 0, 1)), 16);
    EXPECT_NEAR(a.lhs, 1.0, 1e-12);
    EXPECT_NEAR(a.rhs_total(), std::numbers::pi / 2.0, 1e-9);
    EXPECT_NEAR(a.implied_constant, 2.0 / std::numbers::pi, 1e-9);
    EXPECT_TRUE(b.degenerate);
}

TEST(Lemma, TripleProduct) {
    // P3(x1 x2 x3) = 0, sup_{B_1/2} |x1 x2| = 1/8 and int_{B1} |x1 x2 x3| = 1/6
    auto [a, b] = check_harmonic_lemma(polynomial_sample("xyz", Polynomial3::monomial(1, 1, 1)), 16);
    EXPECT_NEAR(a.lhs, 0.125, 1e-12);
    EXPECT_NEAR(a.rhs_total(), 1.0 / 6.0, 1e-6);
    EXPECT_NEAR(a.implied_constant, 0.75, 1e-5);
    EXPECT_TRUE(std::isfinite(b.implied_constant));
}

TEST(Lemma, ConstantIsDegenerate) {
    auto [a, b] = check_harmonic_lemma(polynomial_sample("one", Polynomial3::constant(1.0)), 8);
    EXPECT_TRUE(a.degenerate);
    EXPECT_TRUE(b.degenerate);
}

TEST(Lemma, RejectsNonHarmonic) {
    EXPECT_THROW(check_harmonic_lemma(polynomial_sample("x1^2", Polynomial3::monomial(2, 0, 0)), 8), ValidationError);
}

TEST(Lemma, InvariantUnderAddedConstantsAndScaling) {
    auto base = harmonic_projection(Polynomial3::monomial(2, 1, 0));
    auto [a0, b0] = check_harmonic_lemma(polynomial_sample("h", base), 8);
    auto shifted = 3.0 * base + Polynomial3::constant(5.0);
    auto [a1, b1] = check_harmonic_lemma(polynomial_sample("3h+5", shifted), 8);
    EXPECT_LT(rel(a0.implied_constant, a1.implied_constant), 1e-12);
    EXPECT_LT(rel(b0.implied_constant, b1.implied_constant), 1e-12);
}

TEST(Samples, NonPolynomialFamilies) {
    std::vector<HarmonicSample> s{point_source_sample({3.0, 0.5, -0.25}), poisson_kernel_sample({0.0, 0.0, 1.0}),
                                  exponential_sample(1.0, 0.5)};
    for (const auto& f : s) {
        EXPECT_LT(harmonicity_defect(f), 1e-6) << f.name;
        auto [a, b] = check_harmonic_lemma(f, 8);
        EXPECT_TRUE(std::isfinite(a.implied_constant)) << f.name;
        EXPECT_TRUE(std::isfinite(b.implied_constant)) << f.name;
        EXPECT_GT(a.lhs, 0.0);
    }
    EXPECT_THROW(point_source_sample({0.5, 0.0, 0.0}), ValidationError);
}
