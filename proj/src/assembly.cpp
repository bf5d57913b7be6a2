#include "layerfem/assembly.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "layerfem/error.hpp"

namespace layerfem {

namespace {

constexpr std::size_t max_local = 8;

struct ElementBuffers {
    std::size_t local = 0;
    std::vector<double> matrices;
    std::vector<double> loads;
    std::vector<char> capped;
};

// Runs `kernel(e, K, F)` for every element into private slots; the caller
// scatters them in element order so both execution policies agree bitwise.
template <class Kernel>
ElementBuffers compute_elements(std::size_t elements, std::size_t local, Execution execution, Kernel&& kernel)
{
    ElementBuffers buffers;
    buffers.local = local;
    buffers.matrices.assign(elements * local * local, 0.0);
    buffers.loads.assign(elements * local, 0.0);
    buffers.capped.assign(elements, 0);
    for_each_index(execution, elements, [&](std::size_t e) {
        std::span<double> k(buffers.matrices.data() + e * local * local, local * local);
        std::span<double> f(buffers.loads.data() + e * local, local);
        buffers.capped[e] = kernel(e, k, f) ? 1 : 0;
    });
    return buffers;
}

template <class DofMap>
void scatter(const ElementBuffers& buffers, LinearSystem& system, DofMap&& dof)
{
    const std::size_t n = buffers.local;
    for (std::size_t e = 0; e < buffers.capped.size(); ++e) {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t row = dof(e, i);
            system.rhs[row] += buffers.loads[e * n + i];
            for (std::size_t j = 0; j < n; ++j) {
                system.matrix.add(row, dof(e, j), buffers.matrices[(e * n + i) * n + j]);
            }
        }
        system.load_quadrature_capped = system.load_quadrature_capped || buffers.capped[e] != 0;
    }
}

// (f, N_i) over one element with the layer-aware adaptive rule.
bool element_load(const Problem& problem, const Space& space, std::size_t e, double tolerance, std::span<double> out)
{
    const auto& mesh = space.mesh();
    const double xl = mesh.left(e);
    const double length = mesh.length(e);
    const std::size_t n = space.local_dof_count();

    AdaptiveOptions options;
    options.rel_tol = tolerance;
    options.abs_tol = 1e-300;
    options.layers = layer_hint(problem);

    std::array<double, max_local> basis{};
    const auto result = integrate_adaptive(
        [&](double x, std::span<double> values) {
            space.local_basis(e, (x - xl) / length, 0, std::span<double>(basis.data(), n));
            const double f = manufacture_rhs(problem, x);
            for (std::size_t i = 0; i < n; ++i) {
                values[i] = f * basis[i];
            }
        },
        n, xl, mesh.right(e), options);
    std::copy(result.values.begin(), result.values.end(), out.begin());
    return !result.converged;
}

int matrix_points(const AssemblyOptions& options, int fallback)
{
    return options.matrix_quadrature_points > 0 ? options.matrix_quadrature_points : fallback;
}

BoundaryData exact_boundary_data(const Problem& problem)
{
    const auto& u = problem.exact;
    return {{u.eval(0.0, 0), u.eval(0.0, 1)}, {u.eval(1.0, 0), u.eval(1.0, 1)}};
}

bool same_mesh(const Mesh& a, const Mesh& b) { return a.nodes() == b.nodes(); }

}  // namespace

LayerHint layer_hint(const Problem& problem)
{
    return {problem.eps, problem.exact.has_layer(Side::left), problem.exact.has_layer(Side::right)};
}

Space primal_space(const Problem& problem, const Mesh& mesh, int degree)
{
    switch (problem.order) {
    case ProblemOrder::second:
        return build_space(mesh, SpaceFamily::lagrange, degree, problem.bc, exact_boundary_data(problem));
    case ProblemOrder::fourth:
        return build_space(mesh, SpaceFamily::hermite, 3, problem.bc, exact_boundary_data(problem));
    case ProblemOrder::fourth_mixed:
        break;
    }
    throw Error("primal_space: mixed problems use mixed_spaces");
}

MixedSpaces mixed_spaces(const Problem& problem, const Mesh& mesh, int degree)
{
    if (problem.order != ProblemOrder::fourth_mixed) {
        throw Error("mixed_spaces: problem " + std::string(to_string(problem.id)) + " is not mixed");
    }
    const auto& u = problem.exact;
    const BoundaryConditions u_bc{BoundaryKind::dirichlet, BoundaryKind::dirichlet};
    const BoundaryData u_data{{u.eval(0.0, 0), 0.0}, {u.eval(1.0, 0), 0.0}};

    BoundaryConditions w_bc = BoundaryConditions::natural();
    BoundaryData w_data;
    if (problem.bc.left == BoundaryKind::hinged) {
        w_bc.left = BoundaryKind::dirichlet;
        w_data.left.value = problem.eps * u.eval(0.0, 2);
    }
    if (problem.bc.right == BoundaryKind::hinged) {
        w_bc.right = BoundaryKind::dirichlet;
        w_data.right.value = problem.eps * u.eval(1.0, 2);
    }
    return {std::make_shared<const Space>(build_space(mesh, SpaceFamily::lagrange, degree, u_bc, u_data)),
            std::make_shared<const Space>(build_space(mesh, SpaceFamily::lagrange, degree, w_bc, w_data))};
}

void apply_constraints(LinearSystem& system)
{
    auto& a = system.matrix;
    for (const auto& c : system.constraints) {
        const std::size_t first_row = c.dof > a.upper() ? c.dof - a.upper() : 0;
        const std::size_t last_row = std::min(a.size(), c.dof + a.lower() + 1);
        for (std::size_t i = first_row; i < last_row; ++i) {
            if (i != c.dof) {
                system.rhs[i] -= a(i, c.dof) * c.value;
                a.set(i, c.dof, 0.0);
            }
        }
        for (std::size_t j = a.first_col(c.dof); j < a.last_col(c.dof); ++j) {
            a.set(c.dof, j, 0.0);
        }
        a.set(c.dof, c.dof, 1.0);
        system.rhs[c.dof] = c.value;
    }
}

LinearSystem assemble_order2(const Problem& problem, const Space& space, const AssemblyOptions& options)
{
    if (problem.order != ProblemOrder::second || space.family() != SpaceFamily::lagrange) {
        throw Error("assemble_order2: needs a second-order problem and a Lagrange space");
    }
    const auto& mesh = space.mesh();
    const auto k = static_cast<std::size_t>(space.degree());
    const std::size_t n = k + 1;
    const auto& rule = gauss_legendre(matrix_points(options, space.degree() + 2));
    const double diffusion = problem.diffusion();
    const bool convection = problem.has_convection();
    const auto& coeffs = problem.coeffs;

    const auto buffers = compute_elements(
        mesh.element_count(), n, options.execution, [&](std::size_t e, std::span<double> ke, std::span<double> fe) {
            const double xl = mesh.left(e);
            const double length = mesh.length(e);
            std::array<double, max_local> v{};
            std::array<double, max_local> dv{};
            for (std::size_t q = 0; q < rule.size(); ++q) {
                const double t = rule.points[q];
                const double x = xl + t * length;
                const double w = rule.weights[q] * length;
                space.local_basis(e, t, 0, std::span<double>(v.data(), n));
                space.local_basis(e, t, 1, std::span<double>(dv.data(), n));
                const double b = convection ? coeffs.b(x) : 0.0;
                const double c = coeffs.c(x);
                for (std::size_t i = 0; i < n; ++i) {
                    for (std::size_t j = 0; j < n; ++j) {
                        ke[i * n + j] += w * (diffusion * dv[j] * dv[i] - b * dv[j] * v[i] + c * v[j] * v[i]);
                    }
                }
            }
            return element_load(problem, space, e, options.load_tolerance, fe);
        });

    LinearSystem system;
    system.matrix = BandedMatrix(space.dof_count(), k, k);
    system.rhs.assign(space.dof_count(), 0.0);
    system.u_dofs = space.dof_count();
    scatter(buffers, system, [&](std::size_t e, std::size_t i) { return space.global_dof(e, i); });

    // -eps^m u'' v integrated by parts leaves eps^m [u' v] on the right-hand side.
    const auto& u = problem.exact;
    if (problem.bc.left == BoundaryKind::neumann) {
        system.rhs[space.vertex_dof(0)] -= diffusion * u.eval(0.0, 1);
    }
    if (problem.bc.right == BoundaryKind::neumann) {
        system.rhs[space.vertex_dof(mesh.node_count() - 1)] += diffusion * u.eval(1.0, 1);
    }

    system.constraints = space.constraints();
    apply_constraints(system);
    return system;
}

LinearSystem assemble_order4(const Problem& problem, const Space& space, const AssemblyOptions& options)
{
    if (problem.order != ProblemOrder::fourth || space.family() != SpaceFamily::hermite) {
        throw Error("assemble_order4: needs a fourth-order problem and a Hermite space");
    }
    for (auto kind : {problem.bc.left, problem.bc.right}) {
        if (kind == BoundaryKind::neumann) {
            throw Error("assemble_order4: free ends are not supported");
        }
    }
    const auto& mesh = space.mesh();
    constexpr std::size_t n = 4;
    const auto& rule = gauss_legendre(matrix_points(options, 6));
    const double diffusion = problem.diffusion();
    const bool convection = problem.has_convection();
    const auto& coeffs = problem.coeffs;

    // The unknown is u_h - g with g the affine interpolant of the end values. On tiny
    // elements the entries grow like h^-3, and O(1) nodal values would turn their rounding
    // into spurious forces; the offset from g stays small inside the layers.
    const auto& u = problem.exact;
    const double g0 = u.eval(0.0, 0);
    const double g1 = u.eval(1.0, 0) - g0;

    const auto buffers = compute_elements(
        mesh.element_count(), n, options.execution, [&](std::size_t e, std::span<double> ke, std::span<double> fe) {
            const double xl = mesh.left(e);
            const double length = mesh.length(e);
            std::array<double, n> v{};
            std::array<double, n> dv{};
            std::array<double, n> ddv{};
            std::array<double, n> lifted{};
            for (std::size_t q = 0; q < rule.size(); ++q) {
                const double t = rule.points[q];
                const double x = xl + t * length;
                const double w = rule.weights[q] * length;
                space.local_basis(e, t, 0, v);
                space.local_basis(e, t, 1, dv);
                space.local_basis(e, t, 2, ddv);
                const double b = convection ? coeffs.b(x) : 0.0;
                const double db = convection ? coeffs.b(x, 1) : 0.0;
                const double p = coeffs.p(x);
                const double qc = coeffs.q(x);
                const double r = coeffs.r(x);
                for (std::size_t i = 0; i < n; ++i) {
                    for (std::size_t j = 0; j < n; ++j) {
                        ke[i * n + j] += w * (diffusion * ddv[j] * ddv[i] - b * ddv[j] * dv[i] - db * ddv[j] * v[i] +
                                              p * dv[j] * dv[i] + qc * dv[j] * v[i] + r * v[j] * v[i]);
                    }
                    // a(g, N_i); g'' = 0 removes the leading terms.
                    lifted[i] += w * (p * g1 * dv[i] + qc * g1 * v[i] + r * (g0 + g1 * x) * v[i]);
                }
            }
            const bool capped = element_load(problem, space, e, options.load_tolerance, fe);
            for (std::size_t i = 0; i < n; ++i) {
                fe[i] -= lifted[i];
            }
            return capped;
        });

    LinearSystem system;
    system.matrix = BandedMatrix(space.dof_count(), 3, 3);
    system.rhs.assign(space.dof_count(), 0.0);
    system.u_dofs = space.dof_count();
    scatter(buffers, system, [&](std::size_t e, std::size_t i) { return space.global_dof(e, i); });

    // Hinged ends: eps^m [u'' v'] is natural and enters through the slope test functions.
    const std::size_t last = mesh.node_count() - 1;
    if (problem.bc.left != BoundaryKind::clamped) {
        system.rhs[space.vertex_dof(0) + 1] -= diffusion * u.eval(0.0, 2);
    }
    if (problem.bc.right != BoundaryKind::clamped) {
        system.rhs[space.vertex_dof(last) + 1] += diffusion * u.eval(1.0, 2);
    }

    system.offset = {g0, g1};
    system.constraints = space.constraints();
    for (auto& c : system.constraints) {
        const bool slope = c.dof % 2 == 1;
        c.value -= slope ? g1 : system.offset.eval(space.dof_position(c.dof));
    }
    apply_constraints(system);
    return system;
}

LinearSystem assemble_mixed(const Problem& problem, const Space& u_space, const Space& w_space,
                            const AssemblyOptions& options)
{
    if (problem.order != ProblemOrder::fourth_mixed) {
        throw Error("assemble_mixed: needs a mixed problem");
    }
    if (u_space.family() != SpaceFamily::lagrange || w_space.family() != SpaceFamily::lagrange) {
        throw Error("assemble_mixed: both fields need Lagrange spaces");
    }
    if (u_space.degree() != w_space.degree()) {
        throw Error("assemble_mixed: u and w spaces have different degrees");
    }
    if (!same_mesh(u_space.mesh(), w_space.mesh())) {
        throw Error("assemble_mixed: u and w spaces live on different meshes");
    }

    const auto& mesh = u_space.mesh();
    const auto k = static_cast<std::size_t>(u_space.degree());
    const std::size_t m = k + 1;
    const std::size_t n = 2 * m;
    const auto& rule = gauss_legendre(matrix_points(options, u_space.degree() + 2));
    const double eps = problem.eps;
    const auto& coeffs = problem.coeffs;

    const auto buffers = compute_elements(
        mesh.element_count(), n, options.execution, [&](std::size_t e, std::span<double> ke, std::span<double> fe) {
            const double xl = mesh.left(e);
            const double length = mesh.length(e);
            std::array<double, max_local> v{};
            std::array<double, max_local> dv{};
            for (std::size_t q = 0; q < rule.size(); ++q) {
                const double t = rule.points[q];
                const double x = xl + t * length;
                const double w = rule.weights[q] * length;
                u_space.local_basis(e, t, 0, std::span<double>(v.data(), m));
                u_space.local_basis(e, t, 1, std::span<double>(dv.data(), m));
                const double b = coeffs.b(x);
                const double d = coeffs.d(x);
                for (std::size_t i = 0; i < m; ++i) {
                    for (std::size_t j = 0; j < m; ++j) {
                        const double stiff = w * dv[j] * dv[i];
                        const double mass = w * v[j] * v[i];
                        // psi_i rows
                        ke[(2 * i) * n + 2 * j] += b * stiff + d * mass;
                        ke[(2 * i) * n + 2 * j + 1] += -eps * stiff;
                        // phi_i rows
                        ke[(2 * i + 1) * n + 2 * j] += eps * stiff;
                        ke[(2 * i + 1) * n + 2 * j + 1] += mass;
                    }
                }
            }
            std::array<double, max_local> load{};
            const bool capped =
                element_load(problem, u_space, e, options.load_tolerance, std::span<double>(load.data(), m));
            for (std::size_t i = 0; i < m; ++i) {
                fe[2 * i] = load[i];
            }
            return capped;
        });

    const std::size_t dofs = u_space.dof_count();
    LinearSystem system;
    system.matrix = BandedMatrix(2 * dofs, 2 * k + 1, 2 * k + 1);
    system.rhs.assign(2 * dofs, 0.0);
    system.u_dofs = dofs;
    system.w_dofs = w_space.dof_count();
    scatter(buffers, system, [&](std::size_t e, std::size_t i) { return 2 * u_space.global_dof(e, i / 2) + i % 2; });

    // (w, phi) = eps (u'', phi) = eps [u' phi] - eps (u', phi') for phi in H^1.
    const auto& u = problem.exact;
    const std::size_t last = w_space.vertex_dof(mesh.node_count() - 1);
    system.rhs[2 * w_space.vertex_dof(0) + 1] -= eps * u.eval(0.0, 1);
    system.rhs[2 * last + 1] += eps * u.eval(1.0, 1);

    for (const auto& c : u_space.constraints()) {
        system.constraints.push_back({2 * c.dof, c.value});
    }
    for (const auto& c : w_space.constraints()) {
        system.constraints.push_back({2 * c.dof + 1, c.value});
    }
    apply_constraints(system);
    return system;
}

SolveResult solve(const LinearSystem& system)
{
    auto result = solve_banded(system.matrix, system.rhs);
    return {std::move(result.x), result.relative_residual};
}

std::pair<std::vector<double>, std::vector<double>> split_mixed(const LinearSystem& system,
                                                                const std::vector<double>& x)
{
    if (!system.mixed() || x.size() != 2 * system.u_dofs) {
        throw Error("split_mixed: not an interleaved mixed solution");
    }
    std::vector<double> u(system.u_dofs);
    std::vector<double> w(system.w_dofs);
    for (std::size_t i = 0; i < system.u_dofs; ++i) {
        u[i] = x[2 * i];
        w[i] = x[2 * i + 1];
    }
    return {std::move(u), std::move(w)};
}

}  // namespace layerfem
