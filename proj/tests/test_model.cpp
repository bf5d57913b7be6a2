#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "layerfem/error.hpp"
#include "layerfem/model.hpp"

using namespace layerfem;

TEST(Model, CatalogIdsRoundTrip)
{
    for (auto id : all_problem_ids()) {
        EXPECT_EQ(parse_problem_id(to_string(id)), id);
    }
    EXPECT_EQ(all_problem_ids().size(), 9u);
    EXPECT_FALSE(parse_problem_id("NOPE"));
}

TEST(Model, CD2HasOneWeakLeftLayer)
{
    const auto p = make_problem(ProblemId::cd2, 1e-6);
    ASSERT_EQ(p.exact.layers.size(), 1u);
    EXPECT_EQ(p.exact.layers[0].amplitude_exponent, 1.0);
    EXPECT_EQ(p.exact.layers[0].side, Side::left);
}

TEST(Model, RD2HasLayersAtBothEnds)
{
    const auto p = make_problem(ProblemId::rd2, 1e-4);
    ASSERT_EQ(p.exact.layers.size(), 2u);
    EXPECT_EQ(p.exact.layers[0].amplitude_exponent, 1.0);
    EXPECT_EQ(p.exact.layers[1].amplitude_exponent, 1.0);
    EXPECT_TRUE(p.exact.has_layer(Side::left));
    EXPECT_TRUE(p.exact.has_layer(Side::right));
}

TEST(Model, EpsOutOfRangeIsRejected)
{
    EXPECT_THROW((void)make_problem(ProblemId::cd2, 0.5), Error);
    EXPECT_THROW((void)make_problem(ProblemId::cd2, 0.0), Error);
    EXPECT_NO_THROW((void)make_problem(ProblemId::cd2, max_eps));
}

TEST(Model, ExactDerivativeAtLayerEnd)
{
    const auto p = make_problem(ProblemId::cd2, 0.01);
    EXPECT_NEAR(exact_eval(p, 0.0, 1), -1.0, 1e-15);
}

TEST(Model, HingedSecondDerivativeAtZero)
{
    const auto p = make_problem(ProblemId::cd4_hinged, 0.01);
    const double expected = -std::pow(std::numbers::pi / 2.0, 2) + 1.0;
    EXPECT_NEAR(exact_eval(p, 0.0, 2), expected, 1e-12);
    EXPECT_NEAR(exact_eval(p, 0.0, 2), -1.4674, 1e-4);
}

TEST(Model, NoLayersGivesSmoothPart)
{
    ProblemOverrides o;
    o.layers = std::vector<LayerTerm>{};
    const auto p = make_problem(ProblemId::rd4_clamped, 1e-3, o);
    for (double x : {0.0, 0.3, 1.0}) {
        EXPECT_DOUBLE_EQ(exact_eval(p, x, 0), std::cos(std::numbers::pi * x / 2.0));
    }
}

TEST(Model, RhsOfSingleLayer)
{
    ProblemOverrides o;
    o.smooth = SmoothPart::zero();
    const auto p = make_problem(ProblemId::cd2, 0.01, o);
    EXPECT_NEAR(manufacture_rhs(p, 0.0), 1.02, 1e-12);
}

TEST(Model, RhsOfConstantReaction)
{
    ProblemOverrides o;
    o.smooth = SmoothPart::polynomial(Polynomial{1.0});
    o.layers = std::vector<LayerTerm>{};
    const auto p = make_problem(ProblemId::rd2, 1e-3, o);
    for (double x : {0.0, 0.25, 0.9}) {
        EXPECT_DOUBLE_EQ(manufacture_rhs(p, x), 2.0);
    }
}

namespace {

// Five-point central difference of the next lower derivative.
double fd_derivative(const Problem& p, double x, int j, double h)
{
    const auto f = [&](double y) { return exact_eval(p, y, j - 1); };
    return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12.0 * h);
}

}  // namespace

TEST(Model, DerivativesMatchFiniteDifferences)
{
    std::mt19937_64 rng(11);
    for (auto id : all_problem_ids()) {
        const double eps = 1e-2;
        const auto p = make_problem(id, eps);
        std::uniform_real_distribution<double> pos(10 * eps, 1 - 10 * eps);
        for (int i = 0; i < 100; ++i) {
            const double x = pos(rng);
            for (int j = 1; j <= 4; ++j) {
                const double exact = exact_eval(p, x, j);
                const double fd = fd_derivative(p, x, j, 1e-4);
                EXPECT_NEAR(fd, exact, 1e-5 * std::max(1.0, std::abs(exact))) << to_string(id) << " j=" << j;
            }
        }
    }
}

TEST(Model, RhsMatchesFiniteDifferenceOperator)
{
    // Layers removed, polynomial smooth part: the strong operators rebuilt from nested differences.
    ProblemOverrides o;
    o.layers = std::vector<LayerTerm>{};
    o.smooth = SmoothPart::polynomial(Polynomial{0.5, -1.0, 2.0, 0.25, -0.75, 0.1});
    const double h = 1e-3;
    const auto d = [h](auto&& f, double x) { return (f(x + h) - f(x - h)) / (2.0 * h); };
    for (auto id : {ProblemId::cd2, ProblemId::rd2, ProblemId::cd4_clamped, ProblemId::rd4_hinged, ProblemId::mix4}) {
        const auto p = make_problem(id, 0.05, o);
        const auto u = [&](double x) { return exact_eval(p, x, 0); };
        const auto u1 = [&](double x) { return d(u, x); };
        const auto u2 = [&](double x) { return d(u1, x); };
        const auto u3 = [&](double x) { return d(u2, x); };
        const auto u4 = [&](double x) { return d(u3, x); };
        const auto& c = p.coeffs;
        for (double x : {0.2, 0.5, 0.8}) {
            double f = 0.0;
            switch (id) {
            case ProblemId::cd2:
                f = -p.eps * u2(x) - c.b(x) * u1(x) + c.c(x) * u(x);
                break;
            case ProblemId::rd2:
                f = -p.eps * p.eps * u2(x) + c.c(x) * u(x);
                break;
            case ProblemId::cd4_clamped:
                f = p.eps * u4(x) + c.b(x) * u3(x) - c.p(x) * u2(x) + c.q(x) * u1(x) + c.r(x) * u(x);
                break;
            case ProblemId::rd4_hinged:
                f = p.eps * p.eps * u4(x) - c.p(x) * u2(x) + c.q(x) * u1(x) + c.r(x) * u(x);
                break;
            default:
                f = p.eps * p.eps * u4(x) - c.b(x) * u2(x) + c.d(x) * u(x);
                break;
            }
            const double exact = manufacture_rhs(p, x);
            EXPECT_NEAR(f, exact, 1e-5 * std::max(1.0, std::abs(exact))) << to_string(id) << " x=" << x;
        }
    }
}

TEST(Model, RhsIsLinearInTheSolution)
{
    for (auto id : all_problem_ids()) {
        const double eps = 1e-3;
        const auto full = make_problem(id, eps);
        ProblemOverrides smooth_only;
        smooth_only.layers = std::vector<LayerTerm>{};
        ProblemOverrides layers_only;
        layers_only.smooth = SmoothPart::zero();
        const auto s = make_problem(id, eps, smooth_only);
        const auto e = make_problem(id, eps, layers_only);
        for (double x : {0.0, 1e-4, 0.01, 0.5, 0.999, 1.0}) {
            const double sum = manufacture_rhs(s, x) + manufacture_rhs(e, x);
            EXPECT_NEAR(manufacture_rhs(full, x), sum, 1e-12 * std::max(1.0, std::abs(sum))) << to_string(id);
        }
    }
}

TEST(Model, ReducedRhsCancelsExactly)
{
    // eps^2 E'''' - E'' vanishes for RD4 layers with p = 1, so f is smooth up to r E.
    ProblemOverrides o;
    o.smooth = SmoothPart::zero();
    const auto p = make_problem(ProblemId::rd4_clamped, 1e-8, o);
    for (double x : {0.0, 1e-9, 1e-8}) {
        EXPECT_NEAR(manufacture_rhs(p, x), exact_eval(p, x, 0), 1e-20);
    }
}

TEST(Model, DefaultsAreValid)
{
    for (auto id : all_problem_ids()) {
        EXPECT_TRUE(validate(make_problem(id, 1e-3)).empty()) << to_string(id);
    }
}

TEST(Model, WeakConvectionIsReported)
{
    auto p = make_problem(ProblemId::cd2, 1e-3);
    p.coeffs.b = Polynomial::constant(0.5);
    const auto v = validate(p);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0], "b>1 fails at x=0");
}

TEST(Model, MixedReactionConditionIsReported)
{
    auto p = make_problem(ProblemId::mix4, 1e-3);
    p.coeffs.b = Polynomial{0.0, 0.0, 1.0};
    p.coeffs.d = Polynomial::constant(0.2);
    const auto v = validate(p);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_NE(v[0].find("d-b''/2>delta"), std::string::npos);
}

TEST(Model, ValidationFailureThrowsFromFactory)
{
    ProblemOverrides o;
    o.c = Polynomial::constant(0.5);
    EXPECT_THROW((void)make_problem(ProblemId::rd2, 1e-3, o), Error);
}
