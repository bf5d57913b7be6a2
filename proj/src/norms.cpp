#include "layerfem/norms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "layerfem/error.hpp"

namespace layerfem {

namespace {

constexpr std::array<std::string_view, 6> preset_names{"CD2_ENERGY", "RD2_ENERGY", "BALANCED",
                                                       "CD4_ENERGY", "RD4_ENERGY", "MIXED"};

// Sums per-element integrals of `integrand(e, x)` in element order. `floor(e)` is the
// squared-density level below which an element's integrand is rounding noise.
template <class Integrand, class Floor>
SeminormResult integrate_squared(const Mesh& mesh, const NormOptions& options, Integrand&& integrand, Floor&& floor)
{
    AdaptiveOptions adaptive;
    adaptive.rel_tol = options.rel_tol;
    adaptive.max_panels = options.max_panels;
    adaptive.layers = options.layers;

    const std::size_t elements = mesh.element_count();
    std::vector<double> parts(elements, 0.0);
    std::vector<char> capped(elements, 0);
    for_each_index(options.execution, elements, [&](std::size_t e) {
        AdaptiveOptions local = adaptive;
        local.abs_tol = std::max(options.abs_tol, floor(e)) * mesh.length(e);
        const auto r = integrate_adaptive(
            [&](double x) {
                const double v = integrand(e, x);
                return v * v;
            },
            mesh.left(e), mesh.right(e), local);
        parts[e] = r.value;
        capped[e] = r.converged ? 0 : 1;
    });

    SeminormResult result;
    double sum = 0.0;
    for (std::size_t e = 0; e < elements; ++e) {
        sum += parts[e];
        result.capped = result.capped || capped[e] != 0;
    }
    result.value = std::sqrt(std::max(sum, 0.0));
    return result;
}

}  // namespace

std::span<const std::string_view> norm_preset_names() { return preset_names; }

std::optional<NormSpec> norm_preset(std::string_view name)
{
    if (name == "CD2_ENERGY") {
        return NormSpec{"CD2_ENERGY", {{1, 0.5}, {0, 0.0}}, false};
    }
    if (name == "RD2_ENERGY") {
        return NormSpec{"RD2_ENERGY", {{1, 1.0}, {0, 0.0}}, false};
    }
    if (name == "BALANCED") {
        return NormSpec{"BALANCED", {{1, 0.5}, {0, 0.0}}, false};
    }
    if (name == "CD4_ENERGY") {
        return NormSpec{"CD4_ENERGY", {{2, 0.5}, {1, 0.0}}, false};
    }
    if (name == "RD4_ENERGY") {
        return NormSpec{"RD4_ENERGY", {{2, 1.0}, {1, 0.0}}, false};
    }
    if (name == "MIXED") {
        return NormSpec{"MIXED", {{1, 0.0}}, true};
    }
    return std::nullopt;
}

SeminormResult seminorm_error(const Evaluator& exact, const DiscreteFunction& df, int j, const NormOptions& options)
{
    const auto& space = df.space();
    const auto& mesh = space.mesh();
    const auto noise = [&](std::size_t e) {
        // Evaluating the j-th derivative of df loses about eps_mach * |coefficients| / length^j.
        double scale = 0.0;
        for (std::size_t i = 0; i < space.local_dof_count(); ++i) {
            const double c = df.coefficients()[space.global_dof(e, i)];
            const bool slope = space.family() == SpaceFamily::hermite && i % 2 == 1;
            scale = std::max(scale, std::abs(slope ? c * mesh.length(e) : c));
        }
        const double level = 100.0 * std::numeric_limits<double>::epsilon() * scale / std::pow(mesh.length(e), j);
        return level * level;
    };
    return integrate_squared(
        mesh, options,
        [&](std::size_t e, double x) {
            const double t = (x - mesh.left(e)) / mesh.length(e);
            return exact(x, j) - df.eval_local(e, t, j);
        },
        noise);
}

SeminormResult seminorm(const Evaluator& f, const Mesh& mesh, int j, const NormOptions& options)
{
    return integrate_squared(
        mesh, options, [&](std::size_t, double x) { return f(x, j); }, [](std::size_t) { return 0.0; });
}

double weighted_norm(const SeminormValues& values, const NormSpec& spec, double eps)
{
    const auto required = [&](int order) {
        const auto& v = values.u.at(static_cast<std::size_t>(order));
        if (!v) {
            throw Error("weighted_norm: " + spec.name + " needs the order-" + std::to_string(order) + " seminorm");
        }
        return *v;
    };

    if (spec.two_field) {
        if (!values.w_l2) {
            throw Error("weighted_norm: " + spec.name + " needs ||w||_0");
        }
        const double u1 = required(1);
        return std::sqrt(u1 * u1 + *values.w_l2 * *values.w_l2);
    }
    double total = 0.0;
    for (const auto& term : spec.terms) {
        total += std::pow(eps, term.eps_exponent) * required(term.order);
    }
    return total;
}

}  // namespace layerfem
