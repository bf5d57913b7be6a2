#include "layerfem/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "layerfem/error.hpp"

namespace layerfem {

namespace {

constexpr int max_rule = 64;

QuadratureRule build_rule(int n)
{
    // Newton iteration on P_n with the three-term recurrence, mapped to [0, 1].
    QuadratureRule rule;
    rule.points.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) {
                break;
            }
        }
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        rule.points[lo] = 0.5 * (1.0 - z);
        rule.points[hi] = 0.5 * (1.0 + z);
        rule.weights[lo] = 0.5 * w;
        rule.weights[hi] = 0.5 * w;
    }
    if (n % 2 == 1) {
        rule.points[static_cast<std::size_t>(n / 2)] = 0.5;
    }
    return rule;
}

const std::array<QuadratureRule, max_rule + 1>& rule_table()
{
    static const auto table = [] {
        std::array<QuadratureRule, max_rule + 1> t;
        for (int n = 1; n <= max_rule; ++n) {
            t[static_cast<std::size_t>(n)] = build_rule(n);
        }
        return t;
    }();
    return table;
}

template <class Accumulate>
void sweep_panels(const std::vector<double>& cuts, int split, const QuadratureRule& rule, Accumulate&& acc)
{
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        const double width = (cuts[s + 1] - cuts[s]) / split;
        for (int p = 0; p < split; ++p) {
            const double a = cuts[s] + p * width;
            for (std::size_t q = 0; q < rule.size(); ++q) {
                acc(a + width * rule.points[q], width * rule.weights[q]);
            }
        }
    }
}

// Rounding floor for the convergence test: x carries an absolute error of about
// eps_mach * max(|a|, |b|), which is large relative to short intervals near x = 1.
double rounding_floor(double a, double b, double magnitude)
{
    constexpr double eps = std::numeric_limits<double>::epsilon();
    return 64.0 * eps * (1.0 + std::max(std::abs(a), std::abs(b)) / (b - a)) * magnitude;
}

}  // namespace

const QuadratureRule& gauss_legendre(int n)
{
    if (n < 1 || n > max_rule) {
        throw Error("quadrature: unsupported Gauss-Legendre order " + std::to_string(n));
    }
    return rule_table()[static_cast<std::size_t>(n)];
}

std::vector<double> layer_breakpoints(double a, double b, const LayerHint& hint)
{
    std::vector<double> cuts{a, b};
    if (hint.width > 0.0) {
        const auto add = [&](double x) {
            if (x > a && x < b) {
                cuts.push_back(x);
            }
        };
        for (double d = hint.width / 8.0; d <= 64.0 * hint.width; d *= 2.0) {
            if (hint.left) {
                add(d);
            }
            if (hint.right) {
                add(1.0 - d);
            }
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    return cuts;
}

AdaptiveResult integrate_adaptive(const ScalarIntegrand& f, double a, double b, const AdaptiveOptions& options)
{
    if (!(b > a)) {
        return {0.0, true, 0};
    }
    const auto cuts = layer_breakpoints(a, b, options.layers);
    const auto& rule = gauss_legendre(options.base_points);
    const int pieces = static_cast<int>(cuts.size()) - 1;

    double magnitude = 0.0;
    const auto estimate = [&](int split) {
        double sum = 0.0;
        magnitude = 0.0;
        sweep_panels(cuts, split, rule, [&](double x, double w) {
            const double v = w * f(x);
            sum += v;
            magnitude += std::abs(v);
        });
        return sum;
    };

    int split = 1;
    double previous = estimate(split);
    while (true) {
        if (2 * split * pieces > options.max_panels) {
            return {previous, false, split * pieces};
        }
        split *= 2;
        const double current = estimate(split);
        if (std::abs(current - previous) <=
            options.rel_tol * std::abs(current) + options.abs_tol + rounding_floor(a, b, magnitude)) {
            return {current, true, split * pieces};
        }
        previous = current;
    }
}

AdaptiveVectorResult integrate_adaptive(const VectorIntegrand& f, std::size_t components, double a, double b,
                                        const AdaptiveOptions& options)
{
    if (!(b > a)) {
        return {std::vector<double>(components, 0.0), true, 0};
    }
    const auto cuts = layer_breakpoints(a, b, options.layers);
    const auto& rule = gauss_legendre(options.base_points);
    const int pieces = static_cast<int>(cuts.size()) - 1;
    std::vector<double> scratch(components);
    std::vector<double> magnitude(components);

    const auto estimate = [&](int split) {
        std::vector<double> sum(components, 0.0);
        std::fill(magnitude.begin(), magnitude.end(), 0.0);
        sweep_panels(cuts, split, rule, [&](double x, double w) {
            f(x, scratch);
            for (std::size_t i = 0; i < components; ++i) {
                sum[i] += w * scratch[i];
                magnitude[i] += std::abs(w * scratch[i]);
            }
        });
        return sum;
    };

    int split = 1;
    auto previous = estimate(split);
    while (true) {
        if (2 * split * pieces > options.max_panels) {
            return {std::move(previous), false, split * pieces};
        }
        split *= 2;
        auto current = estimate(split);
        double diff = 0.0;
        double scale = 0.0;
        double noise = 0.0;
        for (std::size_t i = 0; i < components; ++i) {
            diff = std::max(diff, std::abs(current[i] - previous[i]));
            scale = std::max(scale, std::abs(current[i]));
            noise = std::max(noise, magnitude[i]);
        }
        if (diff <= options.rel_tol * scale + options.abs_tol + rounding_floor(a, b, noise)) {
            return {std::move(current), true, split * pieces};
        }
        previous = std::move(current);
    }
}

}  // namespace layerfem
