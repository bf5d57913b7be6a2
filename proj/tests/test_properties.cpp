#include <gtest/gtest.h>

#include "property_suites.hpp"

using namespace layerfem::testing;

namespace {

void expect_passes(const PropertyResult& r)
{
    EXPECT_TRUE(r.passed) << r.name << ": measured " << r.measured << " against " << r.bound << " " << r.detail;
}

}  // namespace

TEST(Properties, MomentInterpolantOrthogonality) { expect_passes(moment_orthogonality()); }

TEST(Properties, NodalP1Orthogonality) { expect_passes(p1_nodal_orthogonality()); }

TEST(Properties, PolynomialReproduction) { expect_passes(polynomial_reproduction()); }

TEST(Properties, QuadratureOracle) { expect_passes(quadrature_oracle()); }

TEST(Properties, LayerScalingSlopes) { expect_passes(layer_scaling_slopes()); }

TEST(Properties, MixedCoercivity) { expect_passes(mixed_coercivity()); }
