#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string_view>

#include "layerfem/execution.hpp"
#include "layerfem/quadrature.hpp"
#include "layerfem/spaces.hpp"

namespace layerfem {

/// f(x, j): value of the j-th derivative.
using Evaluator = std::function<double(double, int)>;

enum class InterpolantKind { nodal, moment, l2_projection };

[[nodiscard]] std::string_view to_string(InterpolantKind kind);
[[nodiscard]] std::optional<InterpolantKind> parse_interpolant(std::string_view text);

/// Weights of the per-element moment conditions of moment_interp, t = (x - x_{i-1}) / length.
///
/// `lowered` matches t^l for l = 0..k-2, which is what makes ((f - pi f)', chi') vanish for
/// every chi in P_k. `literal` matches t^l for l = 1..k-1.
enum class MomentWeights { lowered, literal };

struct InterpOptions {
    LayerHint layers;
    double tolerance = 1e-12;
    MomentWeights weights = MomentWeights::lowered;
    Execution execution = Execution::parallel;
};

/// Lagrange: matches f at every nodal point. Hermite: matches f and f' at mesh nodes.
[[nodiscard]] DiscreteFunction nodal_interp(const Evaluator& f, std::shared_ptr<const Space> space);

/// Endpoint values plus k - 1 weighted moments per element (Lagrange, k >= 2).
[[nodiscard]] DiscreteFunction moment_interp(const Evaluator& f, std::shared_ptr<const Space> space,
                                             const InterpOptions& options = {});

/// (pi f, chi) = (f, chi) for all chi of the unconstrained space.
[[nodiscard]] DiscreteFunction l2_project(const Evaluator& f, std::shared_ptr<const Space> space,
                                          const InterpOptions& options = {});

/// Dispatch; `moment` with k = 1 falls back to nodal interpolation.
[[nodiscard]] DiscreteFunction interpolate(InterpolantKind kind, const Evaluator& f,
                                           std::shared_ptr<const Space> space, const InterpOptions& options = {});

/// Evaluator view of a discrete function.
[[nodiscard]] Evaluator as_evaluator(const DiscreteFunction& df);

}  // namespace layerfem
