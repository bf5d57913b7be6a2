#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace layerfem {

/// Gauss-Legendre points and weights on [0, 1].
struct QuadratureRule {
    std::vector<double> points;
    std::vector<double> weights;

    [[nodiscard]] std::size_t size() const noexcept { return points.size(); }
};

/// n-point rule, exact for polynomials of degree <= 2n - 1. Supports 1 <= n <= 64.
[[nodiscard]] const QuadratureRule& gauss_legendre(int n);

/// Where the integrands carry e^{-x/width} (left) and e^{-(1-x)/width} (right) factors.
struct LayerHint {
    double width = 0.0;
    bool left = false;
    bool right = false;
};

/// Panel-doubling Gauss quadrature.
///
/// The interval is first cut at geometric distances width * 2^j (j >= -3, up
/// to 64 widths) from every hinted layer side; each piece is then split into
/// 1, 2, 4, ... equal panels until two successive estimates agree to
/// `rel_tol` relative (or `abs_tol` absolute).
struct AdaptiveOptions {
    double rel_tol = 1e-3;
    double abs_tol = 1e-28;
    int base_points = 8;
    int max_panels = 1 << 14;
    LayerHint layers;
};

struct AdaptiveResult {
    double value = 0.0;
    bool converged = false;
    int panels = 0;
};

struct AdaptiveVectorResult {
    std::vector<double> values;
    bool converged = false;
    int panels = 0;
};

using ScalarIntegrand = std::function<double(double)>;
/// Writes the integrand components at x into `out`.
using VectorIntegrand = std::function<void(double, std::span<double>)>;

[[nodiscard]] AdaptiveResult integrate_adaptive(const ScalarIntegrand& f, double a, double b,
                                                const AdaptiveOptions& options = {});

[[nodiscard]] AdaptiveVectorResult integrate_adaptive(const VectorIntegrand& f, std::size_t components, double a,
                                                      double b, const AdaptiveOptions& options = {});

/// Sorted cut points of [a, b] (endpoints included) used to seed the panel doubling.
[[nodiscard]] std::vector<double> layer_breakpoints(double a, double b, const LayerHint& hint);

}  // namespace layerfem
