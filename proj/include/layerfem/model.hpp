#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "layerfem/polynomial.hpp"

namespace layerfem {

/// Largest perturbation parameter accepted by make_problem.
inline constexpr double max_eps = 0.1;

enum class ProblemId {
    cd2,
    rd2,
    cd4_hinged,
    cd4_xweak,
    cd4_clamped,
    rd4_hinged,
    rd4_clamped,
    mix4,
    mix4_hinged,
};

[[nodiscard]] std::string_view to_string(ProblemId id);
[[nodiscard]] std::optional<ProblemId> parse_problem_id(std::string_view text);
[[nodiscard]] std::span<const ProblemId> all_problem_ids();

enum class ProblemOrder { second, fourth, fourth_mixed };

enum class Side { left, right };

/// eps^a e^{-x/eps} (left) or eps^a e^{-(1-x)/eps} (right).
struct LayerTerm {
    double amplitude_exponent = 1.0;
    Side side = Side::left;

    [[nodiscard]] double eval(double x, int derivative, double eps) const;
};

/// Smooth, eps-independent part S of the manufactured solution.
class SmoothPart {
public:
    /// amplitude * cos(frequency * x); the catalog default is cos(pi x / 2).
    static SmoothPart cosine(double amplitude = 1.0, double frequency = 1.5707963267948966);
    static SmoothPart polynomial(Polynomial p);
    static SmoothPart zero() { return polynomial(Polynomial{}); }

    [[nodiscard]] double operator()(double x, int derivative = 0) const;

private:
    enum class Kind { cosine, polynomial };

    Kind kind_ = Kind::cosine;
    double amplitude_ = 1.0;
    double frequency_ = 1.5707963267948966;
    Polynomial poly_;
};

/// u = S + sum of layer terms, with analytic derivatives of any order.
struct ExactSolution {
    double eps = 0.0;
    SmoothPart smooth;
    std::vector<LayerTerm> layers;

    [[nodiscard]] double eval(double x, int derivative = 0) const;
    [[nodiscard]] double smooth_eval(double x, int derivative = 0) const { return smooth(x, derivative); }
    [[nodiscard]] double layer_eval(double x, int derivative = 0) const;
    [[nodiscard]] bool has_layer(Side side) const;
};

enum class BoundaryKind { dirichlet, neumann, hinged, clamped };

[[nodiscard]] std::string_view to_string(BoundaryKind kind);

struct BoundaryConditions {
    BoundaryKind left = BoundaryKind::neumann;
    BoundaryKind right = BoundaryKind::neumann;

    static BoundaryConditions natural() { return {}; }
};

/// Coefficients of all catalog operators. L2 u = -(p u')' + q u' + r u.
struct Coefficients {
    Polynomial b = Polynomial::constant(2.0);
    Polynomial c = Polynomial::constant(2.0);
    Polynomial d = Polynomial::constant(2.0);
    Polynomial p = Polynomial::constant(1.0);
    Polynomial q = Polynomial::constant(0.0);
    Polynomial r = Polynomial::constant(1.0);
};

struct Problem {
    ProblemId id = ProblemId::cd2;
    ProblemOrder order = ProblemOrder::second;
    double eps = 0.0;
    Coefficients coeffs;
    BoundaryConditions bc;
    ExactSolution exact;
    double delta = 0.25;
    bool variable_coefficients = false;

    /// Power m of the leading term eps^m u^(2 or 4).
    [[nodiscard]] int diffusion_power() const;
    [[nodiscard]] bool has_convection() const;
    /// eps^m, the weight of the leading-order term.
    [[nodiscard]] double diffusion() const;
};

struct ProblemOverrides {
    std::optional<Polynomial> b, c, d, p, q, r;
    std::optional<SmoothPart> smooth;
    std::optional<std::vector<LayerTerm>> layers;
    std::optional<double> delta;
};

/// Instantiates a catalog entry and validates it; throws layerfem::Error.
[[nodiscard]] Problem make_problem(ProblemId id, double eps, const ProblemOverrides& overrides = {});
[[nodiscard]] Problem make_problem(std::string_view id, double eps, const ProblemOverrides& overrides = {});

[[nodiscard]] double exact_eval(const Problem& problem, double x, int derivative);

/// Strong operator of the catalog entry applied to the exact solution.
[[nodiscard]] double manufacture_rhs(const Problem& problem, double x);

/// Violated structural assumptions, one message per condition; empty when valid.
[[nodiscard]] std::vector<std::string> validate(const Problem& problem);

}  // namespace layerfem
