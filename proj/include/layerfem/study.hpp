#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "layerfem/error.hpp"
#include "layerfem/execution.hpp"
#include "layerfem/interp.hpp"
#include "layerfem/mesh.hpp"
#include "layerfem/model.hpp"

namespace layerfem {

/// Which function an interpolation-only case approximates.
enum class InterpTarget { full, layer };

struct CaseConfig {
    ProblemId problem = ProblemId::cd2;
    double eps = 1e-4;
    double H = 0.125;
    int k = 1;  ///< Lagrange degree; fourth-order primal problems always use cubic Hermite.
    MeshFamily mesh = MeshFamily::uniform;
    std::optional<double> tau_exponent;  ///< Defaults to the catalog pairing.
    double alpha = 1.0;
    double tau0 = 2.0;
    std::optional<RefinedSides> sides;  ///< Defaults to the sides carrying layers.
    std::optional<std::string> norm;    ///< Defaults to the problem's energy norm.
    std::optional<InterpolantKind> interpolant;  ///< Set for interpolation-only cases.
    InterpTarget target = InterpTarget::full;
    MomentWeights moment_weights = MomentWeights::lowered;
    double norm_tolerance = 1e-3;
    ProblemOverrides overrides;
    Execution execution = Execution::parallel;
};

struct SmallnessReport {
    double condition_value = 0.0;  ///< eps * exp(-tau / eps), tau = eps^tau_exponent.
    double threshold = 0.0;        ///< H^(k+1).
    bool layer_branch = false;     ///< condition_value <= threshold.
    bool direct_branch = false;    ///< eps <= threshold.
    [[nodiscard]] bool satisfied() const noexcept { return layer_branch || direct_branch; }
};

[[nodiscard]] SmallnessReport smallness_check(double eps, double H, int k, double tau_exponent);

struct CaseResult {
    CaseConfig config;
    int k = 0;  ///< Degree actually used (3 for Hermite).
    std::size_t dofs = 0;
    /// Rendered err_j0..err_j2. For the two-field norm: ||e_w||_0, |e_u|_1 and nothing.
    std::array<std::optional<double>, 3> errors;
    std::array<std::optional<double>, 3> u_seminorms;
    std::optional<double> w_l2;
    double total = 0.0;
    double residual = 0.0;
    std::vector<std::string> flags;
    std::optional<SmallnessReport> smallness;
    bool failed = false;
    std::string failure;
    /// Discrete solution of solve cases (w_h only for mixed problems).
    std::shared_ptr<const DiscreteFunction> u_h;
    std::shared_ptr<const DiscreteFunction> w_h;

    [[nodiscard]] bool has_flag(std::string_view flag) const;
    /// Quadrature-capped or failed cases do not enter uniformity ratios.
    [[nodiscard]] bool excluded() const;
};

/// Failure of one pipeline stage; `stage()` names it.
class CaseError : public Error {
public:
    CaseError(std::string stage, const std::string& message);
    [[nodiscard]] const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

/// Catalog pairing of the fine-region exponent; nullopt where a uniform mesh is recommended.
[[nodiscard]] std::optional<double> default_tau_exponent(ProblemId id, int k);
/// Human-readable pairing, e.g. "(k-1)/k".
[[nodiscard]] std::string_view tau_pairing(ProblemId id);
[[nodiscard]] std::string_view default_norm(ProblemId id);
[[nodiscard]] RefinedSides default_sides(const Problem& problem);

/// Mesh for a case (applies the defaults above).
[[nodiscard]] Mesh build_case_mesh(const CaseConfig& config, const Problem& problem);

/// problem -> mesh -> space -> assemble -> solve -> norms, or interpolate -> norms. Throws CaseError.
[[nodiscard]] CaseResult run_case(const CaseConfig& config);

/// log(e1 / e2) / log(H1 / H2); nullopt for non-positive errors or equal steps.
[[nodiscard]] std::optional<double> eoc(double e1, double H1, double e2, double H2);

/// max / min of the values; nullopt if fewer than two.
[[nodiscard]] std::optional<double> uniformity_ratio(std::span<const double> errors);

struct SweepTable {
    std::vector<double> eps_list;
    std::vector<double> H_list;
    std::vector<CaseResult> results;  ///< eps-major grid order.

    [[nodiscard]] const CaseResult& at(std::size_t eps_index, std::size_t H_index) const;
    /// Rate between H_list[H_index - 1] and H_list[H_index] at fixed eps.
    [[nodiscard]] std::optional<double> eoc(std::size_t eps_index, std::size_t H_index) const;
    /// max / min of err_total over eps at fixed H, excluding flagged cases.
    [[nodiscard]] std::optional<double> uniformity(std::size_t H_index) const;
    [[nodiscard]] bool any_failed() const;
};

/// Runs every (eps, H) pair of the grid. Cases run concurrently unless `execution` is sequential;
/// failures are recorded in the rows rather than thrown.
[[nodiscard]] SweepTable run_sweep(const CaseConfig& base, std::vector<double> eps_list, std::vector<double> H_list,
                                   Execution execution = Execution::parallel);

enum class TableFormat { csv, md };

[[nodiscard]] std::optional<TableFormat> parse_table_format(std::string_view text);

/// problem,eps,H,k,mesh,dofs,err_total,err_j0,err_j1,err_j2,eoc,uniformity,flags
[[nodiscard]] std::string render(const SweepTable& table, TableFormat format);

}  // namespace layerfem
