#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "layerfem/error.hpp"
#include "layerfem/norms.hpp"

using namespace layerfem;

namespace {

DiscreteFunction zero_function(const Mesh& mesh)
{
    auto s = std::make_shared<const Space>(build_space(mesh, SpaceFamily::lagrange, 1, BoundaryConditions::natural()));
    return DiscreteFunction(s, std::vector<double>(s->dof_count(), 0.0));
}

}  // namespace

TEST(Norms, LayerSeminorm)
{
    const double eps = 0.01;
    const auto layer = [eps](double x, int j) { return LayerTerm{1.0, Side::left}.eval(x, j, eps); };
    NormOptions o;
    o.rel_tol = 1e-10;
    o.layers = {eps, true, false};
    const auto r = seminorm_error(layer, zero_function(uniform_mesh(4)), 1, o);
    EXPECT_FALSE(r.capped);
    EXPECT_NEAR(r.value, std::sqrt(eps / 2 * (1 - std::exp(-2 / eps))), 1e-10);
    EXPECT_NEAR(r.value, 0.0707107, 1e-7);
}

TEST(Norms, LinearL2Norm)
{
    NormOptions o;
    o.rel_tol = 1e-12;
    const auto r = seminorm_error([](double x, int j) { return j == 0 ? x : 1.0; }, zero_function(uniform_mesh(3)),
                                  0, o);
    EXPECT_NEAR(r.value, 0.5773503, 1e-7);
}

TEST(Norms, ErrorOfExactMemberIsZero)
{
    const auto mesh = uniform_mesh(4);
    auto s = std::make_shared<const Space>(build_space(mesh, SpaceFamily::lagrange, 2, BoundaryConditions::natural()));
    std::vector<double> c(s->dof_count());
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double x = s->dof_position(i);
        c[i] = x * x;
    }
    const DiscreteFunction f(s, c);
    for (int j = 0; j <= 2; ++j) {
        EXPECT_LT(seminorm_error([](double x, int d) { return d == 0 ? x * x : (d == 1 ? 2 * x : 2.0); }, f, j).value,
                  1e-12);
    }
}

TEST(Norms, WeightedPresets)
{
    SeminormValues v;
    v.u[0] = 0.5;
    v.u[1] = 2.0;
    EXPECT_NEAR(weighted_norm(v, *norm_preset("CD2_ENERGY"), 1e-4), 0.52, 1e-15);
    EXPECT_NEAR(weighted_norm(v, *norm_preset("RD2_ENERGY"), 1e-4), 0.5002, 1e-15);

    SeminormValues m;
    m.u[1] = 3.0;
    m.w_l2 = 4.0;
    EXPECT_DOUBLE_EQ(weighted_norm(m, *norm_preset("MIXED"), 1e-8), 5.0);
}

TEST(Norms, MissingOrderThrows)
{
    SeminormValues v;
    v.u[1] = 1.0;
    EXPECT_THROW((void)weighted_norm(v, *norm_preset("CD4_ENERGY"), 1e-4), Error);
    EXPECT_THROW((void)weighted_norm(v, *norm_preset("MIXED"), 1e-4), Error);
}

TEST(Norms, PresetNames)
{
    EXPECT_EQ(norm_preset_names().size(), 6u);
    for (auto name : norm_preset_names()) {
        const auto spec = norm_preset(name);
        ASSERT_TRUE(spec);
        EXPECT_EQ(spec->name, name);
    }
    EXPECT_FALSE(norm_preset("H2"));
}

TEST(Norms, SequentialAndParallelAgreeBitwise)
{
    const double eps = 1e-6;
    const auto layer = [eps](double x, int j) { return LayerTerm{0.5, Side::right}.eval(x, j, eps); };
    const auto mesh = shishkin_mesh(eps, 1.0 / 64, 2.0, RefinedSides::right);
    NormOptions o;
    o.layers = {eps, false, true};
    o.execution = Execution::sequential;
    const double a = seminorm(layer, mesh, 1, o).value;
    o.execution = Execution::parallel;
    const double b = seminorm(layer, mesh, 1, o).value;
    EXPECT_EQ(a, b);
}
