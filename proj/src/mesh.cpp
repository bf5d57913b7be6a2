#include "layerfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "layerfem/error.hpp"
#include "layerfem/format.hpp"
#include "layerfem/model.hpp"

namespace layerfem {

namespace {

constexpr double min_element_length = 1e-15;
constexpr double max_transition = 0.25;

void check_eps(double eps)
{
    if (!(eps > 0.0 && eps <= max_eps)) {
        throw Error("mesh: eps=" + shortest(eps) + " out of range (0, " + shortest(max_eps) + "]");
    }
}

void check_coarse_step(double H)
{
    if (!(H > 0.0 && H <= 0.25)) {
        throw Error("mesh: H=" + shortest(H) + " out of range (0, 1/4]");
    }
}

// Equidistant points strictly after `from` up to and including `to` (bit-exact).
void append_equidistant(std::vector<double>& nodes, double from, double to, std::size_t intervals)
{
    const double width = to - from;
    for (std::size_t i = 1; i < intervals; ++i) {
        nodes.push_back(from + width * static_cast<double>(i) / static_cast<double>(intervals));
    }
    nodes.push_back(to);
}

Mesh layered_mesh(MeshFamily family, double tau, std::size_t fine_intervals, double H, double alpha,
                  RefinedSides sides)
{
    const bool left = sides != RefinedSides::right;
    const bool right = sides != RefinedSides::left;

    MeshMeta meta;
    meta.family = family;
    meta.tau_left = left ? tau : 0.0;
    meta.tau_right = right ? tau : 0.0;
    meta.H = H;
    meta.h = tau / static_cast<double>(fine_intervals);
    meta.alpha = alpha;

    const double coarse_begin = left ? tau : 0.0;
    const double coarse_end = right ? 1.0 - tau : 1.0;

    std::vector<double> nodes{0.0};
    if (left) {
        append_equidistant(nodes, 0.0, tau, fine_intervals);
    }
    append_equidistant(nodes, coarse_begin, coarse_end, elements_for_step(coarse_end - coarse_begin, H));
    if (right) {
        append_equidistant(nodes, coarse_end, 1.0, fine_intervals);
    }
    return Mesh(std::move(nodes), meta);
}

}  // namespace

std::string_view to_string(MeshFamily family)
{
    switch (family) {
    case MeshFamily::uniform: return "uniform";
    case MeshFamily::two_region: return "two-region";
    case MeshFamily::shishkin: return "shishkin";
    case MeshFamily::graded: return "graded";
    }
    return "?";
}

std::optional<MeshFamily> parse_mesh_family(std::string_view text)
{
    for (auto f : {MeshFamily::uniform, MeshFamily::two_region, MeshFamily::shishkin, MeshFamily::graded}) {
        if (to_string(f) == text) {
            return f;
        }
    }
    return std::nullopt;
}

std::string_view to_string(RefinedSides sides)
{
    switch (sides) {
    case RefinedSides::left: return "left";
    case RefinedSides::right: return "right";
    case RefinedSides::both: return "both";
    }
    return "?";
}

std::optional<RefinedSides> parse_sides(std::string_view text)
{
    for (auto s : {RefinedSides::left, RefinedSides::right, RefinedSides::both}) {
        if (to_string(s) == text) {
            return s;
        }
    }
    return std::nullopt;
}

Mesh::Mesh(std::vector<double> nodes, MeshMeta meta) : nodes_(std::move(nodes)), meta_(meta)
{
    if (nodes_.size() < 2) {
        throw Error("mesh: at least two nodes required");
    }
    if (nodes_.front() != 0.0 || nodes_.back() != 1.0) {
        throw Error("mesh: endpoints must be exactly 0 and 1");
    }
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
        if (!(nodes_[i + 1] - nodes_[i] > min_element_length)) {
            throw Error("mesh: degenerate element " + std::to_string(i) + " at x=" + shortest(nodes_[i]));
        }
    }
}

std::size_t Mesh::find_element(double x) const
{
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
    const auto index = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - nodes_.begin() - 1, 0));
    return std::min(index, element_count() - 1);
}

std::size_t elements_for_step(double length, double H)
{
    const double ratio = length / H;
    const auto n = static_cast<std::size_t>(std::ceil(ratio * (1.0 - 1e-12)));
    return std::max<std::size_t>(n, 1);
}

Mesh uniform_mesh(std::size_t elements)
{
    if (elements == 0) {
        throw Error("mesh: uniform mesh needs at least one element");
    }
    std::vector<double> nodes{0.0};
    append_equidistant(nodes, 0.0, 1.0, elements);

    MeshMeta meta;
    meta.family = MeshFamily::uniform;
    meta.H = 1.0 / static_cast<double>(elements);
    meta.h = meta.H;
    return Mesh(std::move(nodes), meta);
}

Mesh two_region_mesh(double eps, double H, double tau_exponent, double alpha, RefinedSides sides)
{
    check_eps(eps);
    check_coarse_step(H);
    if (!(alpha > 0.0)) {
        throw Error("mesh: alpha must be positive");
    }
    const double tau = std::pow(eps, tau_exponent);
    if (!(tau <= max_transition)) {
        throw Error("mesh: tau=" + shortest(tau) + " exceeds 1/4; use a uniform mesh for this eps");
    }
    // The fine region keeps ceil(1/(alpha H)) intervals so that it ends exactly at tau.
    const std::size_t fine = elements_for_step(1.0, alpha * H);
    return layered_mesh(MeshFamily::two_region, tau, fine, H, alpha, sides);
}

Mesh shishkin_mesh(double eps, double H, double tau0, RefinedSides sides)
{
    check_eps(eps);
    if (!(H > 0.0 && H < 1.0)) {
        throw Error("mesh: Shishkin mesh needs 0 < H < 1, got H=" + shortest(H));
    }
    if (!(tau0 > 0.0)) {
        throw Error("mesh: tau0 must be positive");
    }
    const double tau = std::min(tau0 * eps * std::log(1.0 / H), max_transition);
    return layered_mesh(MeshFamily::shishkin, tau, elements_for_step(1.0, H), H, 1.0, sides);
}

Mesh graded_tail_mesh(double eps, double H, double tau_exponent, double alpha)
{
    const Mesh fine = two_region_mesh(eps, H, tau_exponent, alpha, RefinedSides::left);
    const double tau = fine.meta().tau_left;

    std::vector<double> nodes;
    for (double x : fine.nodes()) {
        nodes.push_back(x);
        if (x == tau) {
            break;
        }
    }
    double x = tau;
    while (true) {
        x *= 1.0 + H;
        if (x >= 1.0) {
            break;
        }
        nodes.push_back(x);
    }
    const double previous = nodes.back() - nodes[nodes.size() - 2];
    if (1.0 - nodes.back() < 1e-3 * H * previous) {
        nodes.back() = 1.0;
    } else {
        nodes.push_back(1.0);
    }

    MeshMeta meta = fine.meta();
    meta.family = MeshFamily::graded;
    return Mesh(std::move(nodes), meta);
}

std::string mesh_to_csv(const Mesh& mesh)
{
    const auto& m = mesh.meta();
    std::ostringstream out;
    out << "# meta: family=" << to_string(m.family) << ",tau=" << shortest(m.tau_left) << ",h=" << shortest(m.h)
        << ",H=" << shortest(m.H) << '\n';
    out << "# meta: tau_right=" << shortest(m.tau_right) << ",alpha=" << shortest(m.alpha)
        << ",elements=" << mesh.element_count() << '\n';
    out << "index,x\n";
    for (std::size_t i = 0; i < mesh.node_count(); ++i) {
        out << i << ',' << shortest(mesh.nodes()[i]) << '\n';
    }
    return out.str();
}

}  // namespace layerfem
