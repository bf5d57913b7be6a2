#include "layerfem/interp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "layerfem/banded.hpp"
#include "layerfem/error.hpp"

namespace layerfem {

namespace {

constexpr std::size_t max_local = 4;

// Gaussian elimination with partial pivoting for the tiny per-element systems.
template <std::size_t N>
void solve_small(std::array<std::array<double, N>, N>& a, std::array<double, N>& b, std::size_t n)
{
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(a[i][k]) > std::abs(a[p][k])) {
                p = i;
            }
        }
        if (std::abs(a[p][k]) < 1e-14) {
            throw Error("moment_interp: singular local system");
        }
        std::swap(a[k], a[p]);
        std::swap(b[k], b[p]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double l = a[i][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j) {
                a[i][j] -= l * a[k][j];
            }
            b[i] -= l * b[k];
        }
    }
    for (std::size_t k = n; k-- > 0;) {
        double sum = b[k];
        for (std::size_t j = k + 1; j < n; ++j) {
            sum -= a[k][j] * b[j];
        }
        b[k] = sum / a[k][k];
    }
}

AdaptiveOptions adaptive_options(const InterpOptions& options)
{
    AdaptiveOptions adaptive;
    adaptive.rel_tol = options.tolerance;
    adaptive.abs_tol = 1e-300;
    adaptive.layers = options.layers;
    return adaptive;
}

}  // namespace

std::string_view to_string(InterpolantKind kind)
{
    switch (kind) {
    case InterpolantKind::nodal: return "nodal";
    case InterpolantKind::moment: return "moment";
    case InterpolantKind::l2_projection: return "l2";
    }
    return "?";
}

std::optional<InterpolantKind> parse_interpolant(std::string_view text)
{
    for (auto k : {InterpolantKind::nodal, InterpolantKind::moment, InterpolantKind::l2_projection}) {
        if (to_string(k) == text) {
            return k;
        }
    }
    return std::nullopt;
}

Evaluator as_evaluator(const DiscreteFunction& df)
{
    return [df](double x, int j) { return df.eval(x, j); };
}

DiscreteFunction nodal_interp(const Evaluator& f, std::shared_ptr<const Space> space)
{
    std::vector<double> coeffs(space->dof_count());
    if (space->family() == SpaceFamily::hermite) {
        const auto& nodes = space->mesh().nodes();
        for (std::size_t n = 0; n < nodes.size(); ++n) {
            coeffs[2 * n] = f(nodes[n], 0);
            coeffs[2 * n + 1] = f(nodes[n], 1);
        }
    } else {
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            coeffs[i] = f(space->dof_position(i), 0);
        }
    }
    return DiscreteFunction(std::move(space), std::move(coeffs));
}

DiscreteFunction moment_interp(const Evaluator& f, std::shared_ptr<const Space> space, const InterpOptions& options)
{
    if (space->family() != SpaceFamily::lagrange || space->degree() < 2) {
        throw Error("moment_interp: needs a Lagrange space with k >= 2");
    }
    const auto& mesh = space->mesh();
    const auto k = static_cast<std::size_t>(space->degree());
    const std::size_t interior = k - 1;
    const int first_power = options.weights == MomentWeights::lowered ? 0 : 1;
    const auto adaptive = adaptive_options(options);
    const auto& exact_rule = gauss_legendre(static_cast<int>(k) + 1);

    std::vector<double> local(mesh.element_count() * (k + 1));
    for_each_index(options.execution, mesh.element_count(), [&](std::size_t e) {
        const double xl = mesh.left(e);
        const double length = mesh.length(e);
        std::span<double> c(local.data() + e * (k + 1), k + 1);
        c[0] = f(xl, 0);
        c[k] = f(mesh.right(e), 0);

        // M[r][i] = int_0^1 t^{l_r} N_i(t) dt, exact with k + 1 Gauss points.
        std::array<std::array<double, max_local>, max_local> m{};
        std::array<double, max_local> basis{};
        std::array<double, max_local> vertex_part{};
        for (std::size_t q = 0; q < exact_rule.size(); ++q) {
            const double t = exact_rule.points[q];
            space->local_basis(e, t, 0, std::span<double>(basis.data(), k + 1));
            for (std::size_t r = 0; r < interior; ++r) {
                const double weight = exact_rule.weights[q] * std::pow(t, first_power + static_cast<int>(r));
                for (std::size_t i = 1; i < k; ++i) {
                    m[r][i - 1] += weight * basis[i];
                }
                vertex_part[r] += weight * (basis[0] * c[0] + basis[k] * c[k]);
            }
        }

        const auto moments = integrate_adaptive(
            [&](double x, std::span<double> out) {
                const double t = (x - xl) / length;
                const double fx = f(x, 0);
                for (std::size_t r = 0; r < interior; ++r) {
                    out[r] = std::pow(t, first_power + static_cast<int>(r)) * fx / length;
                }
            },
            interior, xl, mesh.right(e), adaptive);

        std::array<double, max_local> rhs{};
        for (std::size_t r = 0; r < interior; ++r) {
            rhs[r] = moments.values[r] - vertex_part[r];
        }
        solve_small(m, rhs, interior);
        for (std::size_t i = 1; i < k; ++i) {
            c[i] = rhs[i - 1];
        }
    });

    std::vector<double> coeffs(space->dof_count());
    for (std::size_t e = 0; e < mesh.element_count(); ++e) {
        for (std::size_t i = 0; i <= k; ++i) {
            coeffs[space->global_dof(e, i)] = local[e * (k + 1) + i];
        }
    }
    return DiscreteFunction(std::move(space), std::move(coeffs));
}

DiscreteFunction l2_project(const Evaluator& f, std::shared_ptr<const Space> space, const InterpOptions& options)
{
    const auto& mesh = space->mesh();
    const std::size_t n = space->local_dof_count();
    const bool hermite = space->family() == SpaceFamily::hermite;
    const auto& rule = gauss_legendre(hermite ? 6 : space->degree() + 2);
    const auto adaptive = adaptive_options(options);

    std::vector<double> mass(mesh.element_count() * n * n, 0.0);
    std::vector<double> load(mesh.element_count() * n, 0.0);
    for_each_index(options.execution, mesh.element_count(), [&](std::size_t e) {
        const double xl = mesh.left(e);
        const double length = mesh.length(e);
        std::array<double, max_local> v{};
        for (std::size_t q = 0; q < rule.size(); ++q) {
            space->local_basis(e, rule.points[q], 0, std::span<double>(v.data(), n));
            const double w = rule.weights[q] * length;
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    mass[(e * n + i) * n + j] += w * v[i] * v[j];
                }
            }
        }
        const auto integral = integrate_adaptive(
            [&](double x, std::span<double> out) {
                std::array<double, max_local> basis{};
                space->local_basis(e, (x - xl) / length, 0, std::span<double>(basis.data(), n));
                const double fx = f(x, 0);
                for (std::size_t i = 0; i < n; ++i) {
                    out[i] = fx * basis[i];
                }
            },
            n, xl, mesh.right(e), adaptive);
        std::copy(integral.values.begin(), integral.values.end(), load.begin() + static_cast<std::ptrdiff_t>(e * n));
    });

    const std::size_t band = hermite ? 3 : static_cast<std::size_t>(space->degree());
    BandedMatrix matrix(space->dof_count(), band, band);
    std::vector<double> rhs(space->dof_count(), 0.0);
    for (std::size_t e = 0; e < mesh.element_count(); ++e) {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t row = space->global_dof(e, i);
            rhs[row] += load[e * n + i];
            for (std::size_t j = 0; j < n; ++j) {
                matrix.add(row, space->global_dof(e, j), mass[(e * n + i) * n + j]);
            }
        }
    }
    auto solution = solve_banded(matrix, rhs);
    return DiscreteFunction(std::move(space), std::move(solution.x));
}

DiscreteFunction interpolate(InterpolantKind kind, const Evaluator& f, std::shared_ptr<const Space> space,
                             const InterpOptions& options)
{
    switch (kind) {
    case InterpolantKind::nodal:
        return nodal_interp(f, std::move(space));
    case InterpolantKind::moment:
        if (space->family() == SpaceFamily::lagrange && space->degree() == 1) {
            return nodal_interp(f, std::move(space));
        }
        return moment_interp(f, std::move(space), options);
    case InterpolantKind::l2_projection:
        return l2_project(f, std::move(space), options);
    }
    throw Error("interpolate: unknown interpolant");
}

}  // namespace layerfem
