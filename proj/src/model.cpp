#include "layerfem/model.hpp"

#include <array>
#include <cmath>
#include <utility>

#include "layerfem/error.hpp"
#include "layerfem/format.hpp"

namespace layerfem {

namespace {

struct CatalogEntry {
    ProblemId id;
    std::string_view name;
    ProblemOrder order;
    BoundaryConditions bc;
    double layer_exponent;
    bool left_layer;
    bool right_layer;
};

constexpr auto D = BoundaryKind::dirichlet;
constexpr auto N = BoundaryKind::neumann;
constexpr auto Hg = BoundaryKind::hinged;
constexpr auto Cl = BoundaryKind::clamped;

constexpr std::array<CatalogEntry, 9> catalog{{
    {ProblemId::cd2, "CD2", ProblemOrder::second, {N, D}, 1.0, true, false},
    {ProblemId::rd2, "RD2", ProblemOrder::second, {N, N}, 1.0, true, true},
    {ProblemId::cd4_hinged, "CD4-HINGED", ProblemOrder::fourth, {Hg, Cl}, 2.0, true, false},
    {ProblemId::cd4_xweak, "CD4-XWEAK", ProblemOrder::fourth, {Hg, Cl}, 3.0, true, false},
    {ProblemId::cd4_clamped, "CD4-CLAMPED", ProblemOrder::fourth, {Cl, Cl}, 1.0, true, false},
    {ProblemId::rd4_hinged, "RD4-HINGED", ProblemOrder::fourth, {Hg, Hg}, 2.0, true, true},
    {ProblemId::rd4_clamped, "RD4-CLAMPED", ProblemOrder::fourth, {Cl, Cl}, 1.0, true, true},
    {ProblemId::mix4, "MIX4", ProblemOrder::fourth_mixed, {Cl, Cl}, 1.0, true, true},
    {ProblemId::mix4_hinged, "MIX4-HINGED", ProblemOrder::fourth_mixed, {Hg, Hg}, 2.0, true, true},
}};

constexpr std::array<ProblemId, 9> catalog_ids{
    ProblemId::cd2,         ProblemId::rd2,        ProblemId::cd4_hinged,
    ProblemId::cd4_xweak,   ProblemId::cd4_clamped, ProblemId::rd4_hinged,
    ProblemId::rd4_clamped, ProblemId::mix4,       ProblemId::mix4_hinged,
};

const CatalogEntry& entry(ProblemId id)
{
    for (const auto& e : catalog) {
        if (e.id == id) {
            return e;
        }
    }
    throw Error("unknown problem id");
}

bool is_cd4(ProblemId id)
{
    return id == ProblemId::cd4_hinged || id == ProblemId::cd4_xweak || id == ProblemId::cd4_clamped;
}

bool is_rd4(ProblemId id) { return id == ProblemId::rd4_hinged || id == ProblemId::rd4_clamped; }

bool is_mixed(ProblemId id) { return id == ProblemId::mix4 || id == ProblemId::mix4_hinged; }

}  // namespace

std::string_view to_string(ProblemId id) { return entry(id).name; }

std::optional<ProblemId> parse_problem_id(std::string_view text)
{
    for (const auto& e : catalog) {
        if (e.name == text) {
            return e.id;
        }
    }
    return std::nullopt;
}

std::span<const ProblemId> all_problem_ids() { return catalog_ids; }

std::string_view to_string(BoundaryKind kind)
{
    switch (kind) {
    case BoundaryKind::dirichlet: return "dirichlet";
    case BoundaryKind::neumann: return "neumann";
    case BoundaryKind::hinged: return "hinged";
    case BoundaryKind::clamped: return "clamped";
    }
    return "?";
}

double LayerTerm::eval(double x, int derivative, double eps) const
{
    const double dist = side == Side::left ? x : 1.0 - x;
    const double magnitude = std::exp((amplitude_exponent - derivative) * std::log(eps) - dist / eps);
    const bool negate = side == Side::left && (derivative % 2 == 1);
    return negate ? -magnitude : magnitude;
}

SmoothPart SmoothPart::cosine(double amplitude, double frequency)
{
    SmoothPart s;
    s.kind_ = Kind::cosine;
    s.amplitude_ = amplitude;
    s.frequency_ = frequency;
    return s;
}

SmoothPart SmoothPart::polynomial(Polynomial p)
{
    SmoothPart s;
    s.kind_ = Kind::polynomial;
    s.poly_ = std::move(p);
    return s;
}

double SmoothPart::operator()(double x, int derivative) const
{
    if (kind_ == Kind::polynomial) {
        return poly_(x, derivative);
    }
    const double scale = amplitude_ * std::pow(frequency_, derivative);
    const double arg = frequency_ * x;
    switch (derivative % 4) {
    case 0: return scale * std::cos(arg);
    case 1: return -scale * std::sin(arg);
    case 2: return -scale * std::cos(arg);
    default: return scale * std::sin(arg);
    }
}

double ExactSolution::layer_eval(double x, int derivative) const
{
    double sum = 0.0;
    for (const auto& layer : layers) {
        sum += layer.eval(x, derivative, eps);
    }
    return sum;
}

double ExactSolution::eval(double x, int derivative) const
{
    return smooth(x, derivative) + layer_eval(x, derivative);
}

bool ExactSolution::has_layer(Side side) const
{
    for (const auto& layer : layers) {
        if (layer.side == side) {
            return true;
        }
    }
    return false;
}

int Problem::diffusion_power() const
{
    if (id == ProblemId::cd2 || is_cd4(id)) {
        return 1;
    }
    return 2;
}

bool Problem::has_convection() const { return id == ProblemId::cd2 || is_cd4(id); }

double Problem::diffusion() const { return diffusion_power() == 1 ? eps : eps * eps; }

Problem make_problem(ProblemId id, double eps, const ProblemOverrides& overrides)
{
    const auto& e = entry(id);
    if (!(eps > 0.0 && eps <= max_eps)) {
        throw Error("eps=" + shortest(eps) + " out of range (0, " + shortest(max_eps) + "]");
    }

    Problem problem;
    problem.id = id;
    problem.order = e.order;
    problem.eps = eps;
    problem.bc = e.bc;
    problem.exact.eps = eps;
    problem.exact.smooth = SmoothPart::cosine();
    if (e.left_layer) {
        problem.exact.layers.push_back({e.layer_exponent, Side::left});
    }
    if (e.right_layer) {
        problem.exact.layers.push_back({e.layer_exponent, Side::right});
    }

    auto& c = problem.coeffs;
    const auto apply = [&](const std::optional<Polynomial>& src, Polynomial& dst) {
        if (src) {
            dst = *src;
            problem.variable_coefficients = problem.variable_coefficients || !src->is_constant();
        }
    };
    apply(overrides.b, c.b);
    apply(overrides.c, c.c);
    apply(overrides.d, c.d);
    apply(overrides.p, c.p);
    apply(overrides.q, c.q);
    apply(overrides.r, c.r);
    if (overrides.smooth) {
        problem.exact.smooth = *overrides.smooth;
    }
    if (overrides.layers) {
        problem.exact.layers = *overrides.layers;
    }
    if (overrides.delta) {
        problem.delta = *overrides.delta;
    }

    const auto violations = validate(problem);
    if (!violations.empty()) {
        std::string message = "problem " + std::string(e.name) + " invalid:";
        for (const auto& v : violations) {
            message += " " + v + ";";
        }
        message.pop_back();
        throw Error(message);
    }
    return problem;
}

Problem make_problem(std::string_view id, double eps, const ProblemOverrides& overrides)
{
    const auto parsed = parse_problem_id(id);
    if (!parsed) {
        throw Error("unknown problem id '" + std::string(id) + "'");
    }
    return make_problem(*parsed, eps, overrides);
}

double exact_eval(const Problem& problem, double x, int derivative)
{
    return problem.exact.eval(x, derivative);
}

namespace {

// coef * eps^eps_power * u^(derivative), one term of a strong operator.
struct OperatorTerm {
    double coef;
    int eps_power;
    int derivative;
};

std::vector<OperatorTerm> operator_terms(const Problem& problem, double x)
{
    const auto& c = problem.coeffs;
    const int m = problem.diffusion_power();
    switch (problem.order) {
    case ProblemOrder::second: {
        std::vector<OperatorTerm> terms{{-1.0, m, 2}, {c.c(x), 0, 0}};
        if (problem.has_convection()) {
            terms.push_back({-c.b(x), 0, 1});
        }
        return terms;
    }
    case ProblemOrder::fourth: {
        std::vector<OperatorTerm> terms{{1.0, m, 4}, {c.q(x) - c.p(x, 1), 0, 1}, {-c.p(x), 0, 2}, {c.r(x), 0, 0}};
        if (problem.has_convection()) {
            terms.push_back({c.b(x), 0, 3});
        }
        return terms;
    }
    case ProblemOrder::fourth_mixed:
        // Divergence form -(b u')', matching the (b u', psi') term of the weak form.
        return {{1.0, 2, 4}, {-c.b(x, 1), 0, 1}, {-c.b(x), 0, 2}, {c.d(x), 0, 0}};
    }
    return {};
}

}  // namespace

double manufacture_rhs(const Problem& problem, double x)
{
    const auto& u = problem.exact;
    const double eps = problem.eps;
    const auto terms = operator_terms(problem, x);

    double f = 0.0;
    for (const auto& t : terms) {
        f += t.coef * std::pow(eps, t.eps_power) * u.smooth_eval(x, t.derivative);
    }
    // Per layer, sum the eps powers before scaling by exp(-dist/eps) so equal leading
    // terms (eps^2 E'''' against -p E'' when p = 1) cancel exactly.
    for (const auto& layer : u.layers) {
        const double dist = layer.side == Side::left ? x : 1.0 - x;
        double bracket = 0.0;
        for (const auto& t : terms) {
            const bool negate = layer.side == Side::left && t.derivative % 2 == 1;
            const double scale = std::pow(eps, layer.amplitude_exponent - t.derivative + t.eps_power);
            bracket += (negate ? -t.coef : t.coef) * scale;
        }
        f += bracket * std::exp(-dist / eps);
    }
    return f;
}

std::vector<std::string> validate(const Problem& problem)
{
    std::vector<std::string> violations;
    constexpr int samples = 1001;

    const auto check = [&](std::string_view label, auto&& holds) {
        for (int i = 0; i < samples; ++i) {
            const double x = static_cast<double>(i) / (samples - 1);
            if (!holds(x)) {
                violations.push_back(std::string(label) + " fails at x=" + shortest(x));
                return;
            }
        }
    };

    const auto& c = problem.coeffs;
    const auto id = problem.id;
    if (id == ProblemId::cd2 || is_cd4(id)) {
        check("b>1", [&](double x) { return c.b(x) > 1.0; });
    }
    if (id == ProblemId::rd2) {
        check("c>1", [&](double x) { return c.c(x) > 1.0; });
    }
    if (is_cd4(id) || is_rd4(id)) {
        check("p>0", [&](double x) { return c.p(x) > 0.0; });
    }
    if (is_mixed(id)) {
        check("d-b''/2>delta", [&](double x) { return c.d(x) - 0.5 * c.b(x, 2) > problem.delta; });
    }
    return violations;
}

}  // namespace layerfem
