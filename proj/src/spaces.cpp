#include "layerfem/spaces.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "layerfem/error.hpp"
#include "layerfem/format.hpp"

namespace layerfem {

namespace {

std::vector<std::vector<double>> lagrange_coefficients(int k)
{
    std::vector<std::vector<double>> basis;
    for (int i = 0; i <= k; ++i) {
        const double ti = static_cast<double>(i) / k;
        std::vector<double> poly{1.0};
        for (int m = 0; m <= k; ++m) {
            if (m == i) {
                continue;
            }
            const double tm = static_cast<double>(m) / k;
            const double scale = 1.0 / (ti - tm);
            std::vector<double> next(poly.size() + 1, 0.0);
            for (std::size_t n = 0; n < poly.size(); ++n) {
                next[n + 1] += poly[n] * scale;
                next[n] -= poly[n] * tm * scale;
            }
            poly = std::move(next);
        }
        basis.push_back(std::move(poly));
    }
    return basis;
}

double monomial_derivative(std::span<const double> coeffs, double t, int j)
{
    double acc = 0.0;
    for (std::size_t n = coeffs.size(); n-- > static_cast<std::size_t>(j);) {
        double term = coeffs[n];
        for (int m = 0; m < j; ++m) {
            term *= static_cast<double>(n) - m;
        }
        acc = acc * t + term;
    }
    return acc;
}

// Reference cubic Hermite functions: value at 0, slope at 0, value at 1, slope at 1.
constexpr std::array<std::array<double, 4>, 4> hermite_coeffs{{
    {1.0, 0.0, -3.0, 2.0},
    {0.0, 1.0, -2.0, 1.0},
    {0.0, 0.0, 3.0, -2.0},
    {0.0, 0.0, -1.0, 1.0},
}};

}  // namespace

std::string_view to_string(SpaceFamily family)
{
    return family == SpaceFamily::hermite ? "hermite" : "lagrange";
}

Space::Space(Mesh mesh, SpaceFamily family, int degree, BoundaryConditions bc, BoundaryData data)
    : mesh_(std::move(mesh)), family_(family), degree_(degree), dof_count_(0)
{
    if (family_ == SpaceFamily::lagrange) {
        if (degree_ < 1 || degree_ > 3) {
            throw Error("space: unsupported Lagrange degree " + std::to_string(degree_));
        }
        dof_count_ = static_cast<std::size_t>(degree_) * mesh_.element_count() + 1;
        lagrange_ = lagrange_coefficients(degree_);
    } else {
        if (degree_ != 3) {
            throw Error("space: Hermite elements are cubic, got degree " + std::to_string(degree_));
        }
        dof_count_ = 2 * mesh_.node_count();
    }

    const auto constrain = [&](BoundaryKind kind, std::size_t node, const EndpointData& d) {
        switch (kind) {
        case BoundaryKind::neumann:
            return;
        case BoundaryKind::dirichlet:
        case BoundaryKind::hinged:
            constraints_.push_back({vertex_dof(node), d.value});
            return;
        case BoundaryKind::clamped:
            if (family_ != SpaceFamily::hermite) {
                throw Error("space: clamped conditions need slope DOFs (Hermite family)");
            }
            constraints_.push_back({vertex_dof(node), d.value});
            constraints_.push_back({vertex_dof(node) + 1, d.slope});
            return;
        }
    };
    constrain(bc.left, 0, data.left);
    constrain(bc.right, mesh_.node_count() - 1, data.right);
}

bool Space::is_constrained(std::size_t dof) const
{
    return std::any_of(constraints_.begin(), constraints_.end(), [&](const Constraint& c) { return c.dof == dof; });
}

std::size_t Space::global_dof(std::size_t element, std::size_t local) const
{
    if (family_ == SpaceFamily::hermite) {
        return 2 * element + local;
    }
    return element * static_cast<std::size_t>(degree_) + local;
}

std::size_t Space::vertex_dof(std::size_t node) const
{
    return family_ == SpaceFamily::hermite ? 2 * node : node * static_cast<std::size_t>(degree_);
}

double Space::dof_position(std::size_t dof) const
{
    if (family_ == SpaceFamily::hermite) {
        return mesh_.nodes()[dof / 2];
    }
    const auto k = static_cast<std::size_t>(degree_);
    const std::size_t element = std::min(dof / k, mesh_.element_count() - 1);
    const std::size_t local = dof - element * k;
    if (local == k) {
        return mesh_.right(element);
    }
    return mesh_.left(element) + mesh_.length(element) * static_cast<double>(local) / static_cast<double>(k);
}

void Space::local_basis(std::size_t element, double t, int j, std::span<double> out) const
{
    const double length = mesh_.length(element);
    const double scale = std::pow(length, -j);
    if (family_ == SpaceFamily::hermite) {
        for (std::size_t i = 0; i < 4; ++i) {
            double v = monomial_derivative(hermite_coeffs[i], t, j) * scale;
            if (i % 2 == 1) {
                v *= length;
            }
            out[i] = v;
        }
        return;
    }
    for (std::size_t i = 0; i < lagrange_.size(); ++i) {
        out[i] = monomial_derivative(lagrange_[i], t, j) * scale;
    }
}

std::vector<double> Space::local_basis(std::size_t element, double t, int j) const
{
    std::vector<double> out(local_dof_count());
    local_basis(element, t, j, out);
    return out;
}

Space build_space(const Mesh& mesh, SpaceFamily family, int degree, BoundaryConditions bc, BoundaryData data)
{
    return Space(mesh, family, degree, bc, data);
}

DiscreteFunction::DiscreteFunction(std::shared_ptr<const Space> space, std::vector<double> coefficients,
                                   AffineOffset offset)
    : space_(std::move(space)), coeffs_(std::move(coefficients)), offset_(offset)
{
    if (!space_ || coeffs_.size() != space_->dof_count()) {
        throw Error("discrete function: coefficient count does not match the space");
    }
}

double DiscreteFunction::eval_local(std::size_t element, double t, int j) const
{
    std::array<double, 4> basis{};
    const std::size_t n = space_->local_dof_count();
    space_->local_basis(element, t, j, std::span<double>(basis.data(), n));
    double value = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        value += coeffs_[space_->global_dof(element, i)] * basis[i];
    }
    if (!offset_.zero() && j <= 1) {
        const auto& mesh = space_->mesh();
        value += offset_.eval(mesh.left(element) + t * mesh.length(element), j);
    }
    return value;
}

double DiscreteFunction::eval(double x, int j) const
{
    if (!(x >= 0.0 && x <= 1.0)) {
        throw Error("discrete function: x=" + shortest(x) + " outside [0, 1]");
    }
    const auto& mesh = space_->mesh();
    const std::size_t e = mesh.find_element(x);
    const double t = (x - mesh.left(e)) / mesh.length(e);
    return eval_local(e, t, j);
}

}  // namespace layerfem
