#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "layerfem/error.hpp"
#include "layerfem/quadrature.hpp"

using namespace layerfem;

TEST(Quadrature, GaussIsExactForPolynomials)
{
    for (int n : {1, 2, 3, 5, 8, 16, 32, 64}) {
        const auto& rule = gauss_legendre(n);
        ASSERT_EQ(rule.size(), static_cast<std::size_t>(n));
        for (int degree = 0; degree <= 2 * n - 1; ++degree) {
            double sum = 0.0;
            for (std::size_t i = 0; i < rule.size(); ++i) {
                sum += rule.weights[i] * std::pow(rule.points[i], degree);
            }
            EXPECT_NEAR(sum, 1.0 / (degree + 1), 1e-14) << "n=" << n << " degree=" << degree;
        }
    }
}

TEST(Quadrature, GaussPointsLieInsideAndAreSorted)
{
    const auto& rule = gauss_legendre(7);
    for (std::size_t i = 0; i < rule.size(); ++i) {
        EXPECT_GT(rule.points[i], 0.0);
        EXPECT_LT(rule.points[i], 1.0);
        EXPECT_GT(rule.weights[i], 0.0);
        if (i > 0) {
            EXPECT_LT(rule.points[i - 1], rule.points[i]);
        }
    }
    EXPECT_THROW((void)gauss_legendre(0), Error);
    EXPECT_THROW((void)gauss_legendre(65), Error);
}

TEST(Quadrature, AdaptiveSmooth)
{
    AdaptiveOptions o;
    o.rel_tol = 1e-12;
    const auto r = integrate_adaptive([](double x) { return std::sin(3 * x); }, 0.0, 1.0, o);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value, (1 - std::cos(3.0)) / 3.0, 1e-13);
}

TEST(Quadrature, AdaptiveLayerWithHint)
{
    for (double eps : {1e-3, 1e-6, 1e-9}) {
        AdaptiveOptions o;
        o.rel_tol = 1e-10;
        o.layers = {eps, true, false};
        const auto r = integrate_adaptive([eps](double x) { return std::exp(-x / eps) / eps; }, 0.0, 1.0, o);
        EXPECT_TRUE(r.converged);
        EXPECT_NEAR(r.value, 1.0 - std::exp(-1.0 / eps), 1e-9) << eps;
    }
}

TEST(Quadrature, AdaptiveVectorMatchesScalar)
{
    AdaptiveOptions o;
    o.rel_tol = 1e-11;
    o.layers = {1e-4, true, true};
    const auto f = [](double x) { return std::exp(-x / 1e-4) + std::exp(-(1 - x) / 1e-4); };
    const auto g = [](double x) { return x * x; };
    const auto v = integrate_adaptive(
        [&](double x, std::span<double> out) {
            out[0] = f(x);
            out[1] = g(x);
        },
        2, 0.0, 1.0, o);
    EXPECT_TRUE(v.converged);
    EXPECT_NEAR(v.values[0], 2e-4 * (1 - std::exp(-1e4)), 1e-14);
    EXPECT_NEAR(v.values[1], 1.0 / 3.0, 1e-14);
}

TEST(Quadrature, BreakpointsAreSortedAndClustered)
{
    const auto cuts = layer_breakpoints(0.0, 1.0, {1e-3, true, false});
    ASSERT_GE(cuts.size(), 3u);
    EXPECT_EQ(cuts.front(), 0.0);
    EXPECT_EQ(cuts.back(), 1.0);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        EXPECT_LT(cuts[i], cuts[i + 1]);
    }
    EXPECT_LT(cuts[1], 1e-3);
    const auto none = layer_breakpoints(0.2, 0.4, {});
    EXPECT_EQ(none, (std::vector<double>{0.2, 0.4}));
}

TEST(Quadrature, EmptyIntervalIsZero)
{
    const auto r = integrate_adaptive([](double) { return 1.0; }, 0.5, 0.5);
    EXPECT_EQ(r.value, 0.0);
    EXPECT_TRUE(r.converged);
}
