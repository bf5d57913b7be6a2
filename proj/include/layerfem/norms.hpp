#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "layerfem/execution.hpp"
#include "layerfem/interp.hpp"
#include "layerfem/mesh.hpp"
#include "layerfem/quadrature.hpp"
#include "layerfem/spaces.hpp"

namespace layerfem {

/// eps^{eps_exponent} |v|_{order}
struct NormTerm {
    int order = 0;
    double eps_exponent = 0.0;
};

/// Weighted sum of seminorms, or the two-field root-sum-square (|u|_1^2 + ||w||_0^2)^{1/2}.
struct NormSpec {
    std::string name;
    std::vector<NormTerm> terms;
    bool two_field = false;
};

/// CD2_ENERGY, RD2_ENERGY, BALANCED, CD4_ENERGY, RD4_ENERGY or MIXED.
[[nodiscard]] std::optional<NormSpec> norm_preset(std::string_view name);
[[nodiscard]] std::span<const std::string_view> norm_preset_names();

struct NormOptions {
    double rel_tol = 1e-3;
    double abs_tol = 1e-28;  ///< Floor on the squared error density, scaled by element length.
    int max_panels = 1 << 14;
    LayerHint layers;
    Execution execution = Execution::parallel;
};

struct SeminormResult {
    double value = 0.0;
    bool capped = false;  ///< Some element hit the panel cap.
};

/// (int_0^1 ((exact - df)^{(j)})^2 dx)^{1/2}, integrated element by element.
[[nodiscard]] SeminormResult seminorm_error(const Evaluator& exact, const DiscreteFunction& df, int j,
                                            const NormOptions& options = {});

/// |f|_j over [0, 1], integrated over the elements of `mesh`.
[[nodiscard]] SeminormResult seminorm(const Evaluator& f, const Mesh& mesh, int j, const NormOptions& options = {});

/// Per-order seminorm values; for two-field norms `w_l2` holds ||w||_0.
struct SeminormValues {
    std::array<std::optional<double>, 3> u;
    std::optional<double> w_l2;
};

/// Throws layerfem::Error when an order the norm needs is missing.
[[nodiscard]] double weighted_norm(const SeminormValues& values, const NormSpec& spec, double eps);

}  // namespace layerfem
