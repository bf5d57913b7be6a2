#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "layerfem/banded.hpp"
#include "layerfem/execution.hpp"
#include "layerfem/model.hpp"
#include "layerfem/quadrature.hpp"
#include "layerfem/spaces.hpp"

namespace layerfem {

struct LinearSystem {
    BandedMatrix matrix;
    std::vector<double> rhs;
    std::vector<Constraint> constraints;  ///< In system numbering; their rows are identity rows.
    std::size_t u_dofs = 0;
    std::size_t w_dofs = 0;  ///< Nonzero only for the mixed system (interleaved u, w per DOF).
    bool load_quadrature_capped = false;
    /// The solution is this offset plus the basis expansion with the system's unknowns.
    AffineOffset offset;

    [[nodiscard]] std::size_t size() const noexcept { return rhs.size(); }
    [[nodiscard]] bool mixed() const noexcept { return w_dofs > 0; }
};

struct AssemblyOptions {
    int matrix_quadrature_points = 0;  ///< 0 selects k + 2 (Lagrange) or 6 (Hermite).
    double load_tolerance = 1e-12;
    Execution execution = Execution::parallel;
};

/// Layer hint derived from the problem's manufactured layer terms.
[[nodiscard]] LayerHint layer_hint(const Problem& problem);

/// Lagrange space carrying the problem's boundary conditions and exact boundary data.
[[nodiscard]] Space primal_space(const Problem& problem, const Mesh& mesh, int degree);

struct MixedSpaces {
    std::shared_ptr<const Space> u;
    std::shared_ptr<const Space> w;
};

/// u in H^1_0 with exact end values; w = eps u'' natural (clamped) or fixed to eps u'' (hinged).
[[nodiscard]] MixedSpaces mixed_spaces(const Problem& problem, const Mesh& mesh, int degree);

/// eps^m (u', v') - (b u', v) + (c u, v) = (f, v) + natural boundary data.
[[nodiscard]] LinearSystem assemble_order2(const Problem& problem, const Space& space,
                                           const AssemblyOptions& options = {});

/// eps^m (u'', v'') - (b u'', v') - (b' u'', v) + (p u', v') + (q u', v) + (r u, v) = (f, v) + natural data.
[[nodiscard]] LinearSystem assemble_order4(const Problem& problem, const Space& space,
                                           const AssemblyOptions& options = {});

/// eps (u', phi') + (w, phi) = boundary data, (b u', psi') + (d u, psi) - eps (w', psi') = (f, psi).
/// Unknowns and test functions are interleaved: index 2i is u_i / psi_i, 2i + 1 is w_i / phi_i.
[[nodiscard]] LinearSystem assemble_mixed(const Problem& problem, const Space& u_space, const Space& w_space,
                                          const AssemblyOptions& options = {});

/// Identity rows for constrained DOFs, with the known values moved to the right-hand side.
void apply_constraints(LinearSystem& system);

struct SolveResult {
    std::vector<double> coefficients;  ///< Relative to LinearSystem::offset.
    double relative_residual = 0.0;
};

/// Banded LU with partial pivoting. Throws SingularMatrixError.
[[nodiscard]] SolveResult solve(const LinearSystem& system);

/// Splits an interleaved mixed solution into (u, w) coefficient vectors.
[[nodiscard]] std::pair<std::vector<double>, std::vector<double>> split_mixed(const LinearSystem& system,
                                                                               const std::vector<double>& x);

}  // namespace layerfem
