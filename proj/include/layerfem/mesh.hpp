#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace layerfem {

enum class MeshFamily { uniform, two_region, shishkin, graded };

[[nodiscard]] std::string_view to_string(MeshFamily family);
[[nodiscard]] std::optional<MeshFamily> parse_mesh_family(std::string_view text);

enum class RefinedSides { left, right, both };

[[nodiscard]] std::string_view to_string(RefinedSides sides);
[[nodiscard]] std::optional<RefinedSides> parse_sides(std::string_view text);

struct MeshMeta {
    MeshFamily family = MeshFamily::uniform;
    double tau_left = 0.0;   ///< Transition point of the left fine region (0 if none).
    double tau_right = 0.0;  ///< Width of the right fine region (0 if none).
    double H = 0.0;          ///< Nominal coarse step.
    double h = 0.0;          ///< Fine step actually used.
    double alpha = 1.0;
};

/// Strictly increasing nodes on [0, 1] with exact endpoints.
class Mesh {
public:
    /// Throws layerfem::Error if the node sequence violates the mesh invariants.
    Mesh(std::vector<double> nodes, MeshMeta meta);

    [[nodiscard]] const std::vector<double>& nodes() const noexcept { return nodes_; }
    [[nodiscard]] std::size_t node_count() const noexcept { return nodes_.size(); }
    [[nodiscard]] std::size_t element_count() const noexcept { return nodes_.size() - 1; }
    [[nodiscard]] double left(std::size_t element) const { return nodes_[element]; }
    [[nodiscard]] double right(std::size_t element) const { return nodes_[element + 1]; }
    [[nodiscard]] double length(std::size_t element) const { return nodes_[element + 1] - nodes_[element]; }
    [[nodiscard]] const MeshMeta& meta() const noexcept { return meta_; }

    /// Element containing x; interior nodes belong to the element on their right, x = 1 to the last.
    [[nodiscard]] std::size_t find_element(double x) const;

private:
    std::vector<double> nodes_;
    MeshMeta meta_;
};

[[nodiscard]] Mesh uniform_mesh(std::size_t elements);

/// Fine equidistant region of width eps^tau_exponent per refined side, coarse step <= H elsewhere.
[[nodiscard]] Mesh two_region_mesh(double eps, double H, double tau_exponent, double alpha, RefinedSides sides);

/// Two-region layout with tau = min(tau0 eps ln(1/H), 1/4) and ceil(1/H) fine intervals.
[[nodiscard]] Mesh shishkin_mesh(double eps, double H, double tau0, RefinedSides sides);

/// Left fine region as in two_region_mesh followed by the geometric tail x_{i+1} = (1 + H) x_i.
[[nodiscard]] Mesh graded_tail_mesh(double eps, double H, double tau_exponent, double alpha);

/// Number of elements of an equidistant mesh with step at most H.
[[nodiscard]] std::size_t elements_for_step(double length, double H);

/// `# meta:` comment lines followed by an `index,x` table.
[[nodiscard]] std::string mesh_to_csv(const Mesh& mesh);

}  // namespace layerfem
