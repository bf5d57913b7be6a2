#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "layerfem/mesh.hpp"
#include "layerfem/model.hpp"

namespace layerfem {

/// C0 Lagrange P_k (k = 1..3, equispaced element nodes) or C1 cubic Hermite.
enum class SpaceFamily { lagrange, hermite };

[[nodiscard]] std::string_view to_string(SpaceFamily family);

struct EndpointData {
    double value = 0.0;
    double slope = 0.0;
};

/// Prescribed data for the essential boundary conditions.
struct BoundaryData {
    EndpointData left;
    EndpointData right;
};

struct Constraint {
    std::size_t dof;
    double value;
};

/// Finite-element space over a mesh.
///
/// DOF ordering: Lagrange DOFs run element by element from left to right with
/// each shared vertex owned by the element on its left (element e owns global
/// indices e*k .. e*k + k). Hermite DOFs are node-major (value, slope) pairs.
class Space {
public:
    Space(Mesh mesh, SpaceFamily family, int degree, BoundaryConditions bc, BoundaryData data);

    [[nodiscard]] const Mesh& mesh() const noexcept { return mesh_; }
    [[nodiscard]] SpaceFamily family() const noexcept { return family_; }
    [[nodiscard]] int degree() const noexcept { return degree_; }
    [[nodiscard]] std::size_t dof_count() const noexcept { return dof_count_; }
    [[nodiscard]] std::size_t local_dof_count() const noexcept { return family_ == SpaceFamily::hermite ? 4 : degree_ + 1; }
    [[nodiscard]] const std::vector<Constraint>& constraints() const noexcept { return constraints_; }
    [[nodiscard]] bool is_constrained(std::size_t dof) const;

    [[nodiscard]] std::size_t global_dof(std::size_t element, std::size_t local) const;

    /// Derivatives of order j of all local shape functions at reference
    /// coordinate t in [0, 1], taken with respect to the physical x.
    void local_basis(std::size_t element, double t, int j, std::span<double> out) const;
    [[nodiscard]] std::vector<double> local_basis(std::size_t element, double t, int j) const;

    /// Physical position of a Lagrange DOF, or of the node carrying a Hermite DOF.
    [[nodiscard]] double dof_position(std::size_t dof) const;
    /// DOF that carries the value at the given mesh node.
    [[nodiscard]] std::size_t vertex_dof(std::size_t node) const;

private:
    Mesh mesh_;
    SpaceFamily family_;
    int degree_;
    std::size_t dof_count_;
    std::vector<Constraint> constraints_;
    std::vector<std::vector<double>> lagrange_;  // monomial coefficients in t per local basis function
};

/// Builds a space, filling essential constraints from the boundary data:
/// Dirichlet and hinged fix values, clamped fixes value and slope, Neumann is natural.
[[nodiscard]] Space build_space(const Mesh& mesh, SpaceFamily family, int degree, BoundaryConditions bc,
                                BoundaryData data = {});

/// a + b x, carried outside the coefficient vector.
struct AffineOffset {
    double a = 0.0;
    double b = 0.0;

    [[nodiscard]] double eval(double x, int j = 0) const noexcept { return j == 0 ? a + b * x : (j == 1 ? b : 0.0); }
    [[nodiscard]] bool zero() const noexcept { return a == 0.0 && b == 0.0; }
};

/// offset + sum of coefficients times basis functions of a shared space.
class DiscreteFunction {
public:
    DiscreteFunction(std::shared_ptr<const Space> space, std::vector<double> coefficients, AffineOffset offset = {});

    [[nodiscard]] const Space& space() const noexcept { return *space_; }
    [[nodiscard]] const std::shared_ptr<const Space>& space_ptr() const noexcept { return space_; }
    /// Coefficients relative to the offset.
    [[nodiscard]] const std::vector<double>& coefficients() const noexcept { return coeffs_; }
    [[nodiscard]] const AffineOffset& offset() const noexcept { return offset_; }

    /// j-th derivative at x; right limits at interior nodes, left limit at x = 1.
    [[nodiscard]] double eval(double x, int j = 0) const;
    /// j-th derivative inside a known element at reference coordinate t.
    [[nodiscard]] double eval_local(std::size_t element, double t, int j = 0) const;

private:
    std::shared_ptr<const Space> space_;
    std::vector<double> coeffs_;
    AffineOffset offset_;
};

}  // namespace layerfem
