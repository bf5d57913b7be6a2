#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "layerfem/error.hpp"
#include "layerfem/interp.hpp"
#include "layerfem/norms.hpp"

using namespace layerfem;

namespace {

std::shared_ptr<const Space> lagrange(const Mesh& mesh, int k)
{
    return std::make_shared<const Space>(build_space(mesh, SpaceFamily::lagrange, k, BoundaryConditions::natural()));
}

double cosine(double x, int j)
{
    const double w = std::numbers::pi / 2.0;
    switch (j % 4) {
    case 0: return std::pow(w, j) * std::cos(w * x);
    case 1: return -std::pow(w, j) * std::sin(w * x);
    case 2: return -std::pow(w, j) * std::cos(w * x);
    default: return std::pow(w, j) * std::sin(w * x);
    }
}

}  // namespace

TEST(Interp, NodalReproducesQuadratic)
{
    const auto s = lagrange(uniform_mesh(5), 2);
    const auto pi = nodal_interp([](double x, int j) { return j == 0 ? x * x : (j == 1 ? 2 * x : 2.0); }, s);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double x = u(rng);
        EXPECT_NEAR(pi.eval(x), x * x, 1e-13);
    }
}

TEST(Interp, NodalLinearOfCubic)
{
    const auto s = lagrange(uniform_mesh(1), 1);
    const auto pi = nodal_interp([](double x, int) { return x * x * x; }, s);
    EXPECT_DOUBLE_EQ(pi.eval(0.5), 0.5);
}

TEST(Interp, NodalHermiteMatchesSlopes)
{
    auto s = std::make_shared<const Space>(
        build_space(uniform_mesh(4), SpaceFamily::hermite, 3, BoundaryConditions::natural()));
    const auto pi = nodal_interp(cosine, s);
    for (double x : {0.0, 0.25, 0.5, 1.0}) {
        EXPECT_NEAR(pi.eval(x), cosine(x, 0), 1e-15);
        EXPECT_NEAR(pi.eval(x, 1), cosine(x, 1), 1e-14);
    }
}

TEST(Interp, NodalLayerErrorBound)
{
    const double eps = 1e-2;
    const auto layer = [eps](double x, int j) { return LayerTerm{1.0, Side::left}.eval(x, j, eps); };
    const auto mesh = uniform_mesh(16);
    const auto pi = nodal_interp(layer, lagrange(mesh, 1));
    NormOptions o;
    o.rel_tol = 1e-10;
    o.layers = {eps, true, false};
    const double err = seminorm_error(layer, pi, 0, o).value;
    const double semi = std::sqrt(eps / 2.0 * (1.0 - std::exp(-2.0 / eps)));
    EXPECT_NEAR(seminorm(layer, mesh, 1, o).value, semi, 1e-10);
    EXPECT_LE(err, 1.0 / 16 * semi);
}

TEST(Interp, MomentLiteralWeights)
{
    InterpOptions o;
    o.weights = MomentWeights::literal;
    const auto pi = moment_interp([](double x, int) { return x * x * x; }, lagrange(uniform_mesh(1), 2), o);
    for (double x : {0.0, 0.3, 0.5, 1.0}) {
        EXPECT_NEAR(pi.eval(x), -0.6 * x + 1.6 * x * x, 1e-13);
    }
}

TEST(Interp, MomentLoweredWeights)
{
    // Matches the mean of x^3 instead: pi(0)=0, pi(1)=1, int pi = 1/4.
    const auto pi = moment_interp([](double x, int) { return x * x * x; }, lagrange(uniform_mesh(1), 2));
    for (double x : {0.0, 0.3, 0.5, 1.0}) {
        EXPECT_NEAR(pi.eval(x), -0.5 * x + 1.5 * x * x, 1e-13);
    }
}

TEST(Interp, OperatorsAreProjections)
{
    std::mt19937_64 rng(17);
    std::normal_distribution<double> n01;
    const auto mesh = two_region_mesh(1e-4, 0.25, 0.5, 1.0, RefinedSides::both);
    for (int k = 1; k <= 3; ++k) {
        const auto s = lagrange(mesh, k);
        std::vector<double> c(s->dof_count());
        for (auto& v : c) {
            v = n01(rng);
        }
        const DiscreteFunction f(s, c);
        for (auto kind : {InterpolantKind::nodal, InterpolantKind::moment, InterpolantKind::l2_projection}) {
            const auto pi = interpolate(kind, as_evaluator(f), s);
            for (std::size_t i = 0; i < c.size(); ++i) {
                EXPECT_NEAR(pi.coefficients()[i], c[i], 1e-12) << to_string(kind) << " k=" << k;
            }
        }
    }
}

TEST(Interp, L2ProjectionReproducesConstantsAndLinears)
{
    const auto s = lagrange(uniform_mesh(7), 1);
    const auto one = l2_project([](double, int) { return 3.0; }, s);
    const auto lin = l2_project([](double x, int j) { return j == 0 ? x : 1.0; }, s);
    for (double x : {0.0, 0.4, 1.0}) {
        EXPECT_NEAR(one.eval(x), 3.0, 1e-13);
        EXPECT_NEAR(lin.eval(x), x, 1e-13);
    }
}

TEST(Interp, L2ProjectionIsH1Stable)
{
    NormOptions o;
    o.rel_tol = 1e-10;
    for (int n = 8; n <= 256; n *= 2) {
        const auto mesh = uniform_mesh(static_cast<std::size_t>(n));
        const auto pi = l2_project(cosine, lagrange(mesh, 1));
        const double ratio = seminorm(as_evaluator(pi), mesh, 1, o).value / seminorm(cosine, mesh, 1, o).value;
        EXPECT_LE(ratio, 2.0) << n;
    }
}

TEST(Interp, MomentInterpolantIsLinfStable)
{
    std::mt19937_64 rng(23);
    std::normal_distribution<double> n01;
    std::uniform_int_distribution<int> elements(3, 20);
    std::uniform_int_distribution<int> degree(1, 3);
    const auto target = lagrange(uniform_mesh(8), 2);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto fs = lagrange(uniform_mesh(static_cast<std::size_t>(elements(rng))), degree(rng));
        std::vector<double> c(fs->dof_count());
        for (auto& v : c) {
            v = n01(rng);
        }
        const DiscreteFunction f(fs, c);
        const auto pi = moment_interp(as_evaluator(f), target);
        double f_max = 0.0;
        double pi_max = 0.0;
        for (int i = 0; i <= 2000; ++i) {
            const double x = i / 2000.0;
            f_max = std::max(f_max, std::abs(f.eval(x)));
            pi_max = std::max(pi_max, std::abs(pi.eval(x)));
        }
        worst = std::max(worst, pi_max / f_max);
    }
    EXPECT_LE(worst, 4.0);
}

TEST(Interp, ApproximationOrders)
{
    NormOptions o;
    o.rel_tol = 1e-12;
    for (int k = 2; k <= 3; ++k) {
        double prev0 = 0.0;
        double prev1 = 0.0;
        for (int n : {8, 16, 32}) {
            const auto pi = moment_interp(cosine, lagrange(uniform_mesh(static_cast<std::size_t>(n)), k));
            const double e0 = seminorm_error(cosine, pi, 0, o).value;
            const double e1 = seminorm_error(cosine, pi, 1, o).value;
            if (prev0 > 0.0) {
                EXPECT_NEAR(std::log2(prev0 / e0), k + 1, 0.2) << "k=" << k << " n=" << n;
                EXPECT_NEAR(std::log2(prev1 / e1), k, 0.2) << "k=" << k << " n=" << n;
            }
            prev0 = e0;
            prev1 = e1;
        }
    }
}

TEST(Interp, NodalP1GradientOrthogonality)
{
    // ((u - u^I)', chi') = 0: on each element (u - u^I)' integrates to zero against a constant.
    const double eps = 1e-3;
    const auto layer = [eps](double x, int j) { return LayerTerm{1.0, Side::left}.eval(x, j, eps); };
    const auto mesh = two_region_mesh(eps, 1.0 / 8, 0.5, 1.0, RefinedSides::left);
    const auto pi = nodal_interp(layer, lagrange(mesh, 1));
    AdaptiveOptions o;
    o.rel_tol = 1e-13;
    o.layers = {eps, true, false};
    for (std::size_t e = 0; e < mesh.element_count(); ++e) {
        const auto r = integrate_adaptive([&](double x) { return layer(x, 1) - pi.eval(x, 1); }, mesh.left(e),
                                          mesh.right(e), o);
        EXPECT_NEAR(r.value, 0.0, 1e-12) << e;
    }
}

TEST(Interp, MomentNeedsQuadraticElements)
{
    const auto s = lagrange(uniform_mesh(4), 1);
    EXPECT_THROW((void)moment_interp(cosine, s), Error);
    EXPECT_NO_THROW((void)interpolate(InterpolantKind::moment, cosine, s));
}

TEST(Interp, KindNamesRoundTrip)
{
    for (auto kind : {InterpolantKind::nodal, InterpolantKind::moment, InterpolantKind::l2_projection}) {
        EXPECT_EQ(parse_interpolant(to_string(kind)), kind);
    }
    EXPECT_FALSE(parse_interpolant("spline"));
}
