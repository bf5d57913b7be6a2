#include "layerfem/study.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "layerfem/assembly.hpp"
#include "layerfem/format.hpp"
#include "layerfem/norms.hpp"
#include "layerfem/spaces.hpp"

namespace layerfem {

namespace {

constexpr std::array<std::string_view, 13> columns{"problem", "eps",    "H",      "k",      "mesh",
                                                   "dofs",    "err_total", "err_j0", "err_j1", "err_j2",
                                                   "eoc",     "uniformity", "flags"};

template <class Fn>
auto stage(const char* name, Fn&& fn)
{
    try {
        return fn();
    } catch (const CaseError&) {
        throw;
    } catch (const std::exception& e) {
        throw CaseError(name, e.what());
    }
}

// Fourth-order primal solves always use cubic Hermite elements.
int case_degree(const CaseConfig& config)
{
    switch (config.problem) {
    case ProblemId::cd4_hinged:
    case ProblemId::cd4_xweak:
    case ProblemId::cd4_clamped:
    case ProblemId::rd4_hinged:
    case ProblemId::rd4_clamped:
        return config.interpolant ? config.k : 3;
    default:
        return config.k;
    }
}

void add_flag(CaseResult& result, std::string flag)
{
    if (!result.has_flag(flag)) {
        result.flags.push_back(std::move(flag));
    }
}

// Seminorm orders a case measures: always 0 and 1, plus whatever the norm needs.
std::vector<int> wanted_orders(const NormSpec& spec, bool hermite)
{
    std::vector<int> orders{0, 1};
    if (hermite) {
        orders.push_back(2);
    }
    for (const auto& term : spec.terms) {
        if (std::find(orders.begin(), orders.end(), term.order) == orders.end()) {
            orders.push_back(term.order);
        }
    }
    std::sort(orders.begin(), orders.end());
    return orders;
}

void measure(CaseResult& result, const Evaluator& exact, const DiscreteFunction& df, const std::vector<int>& orders,
             const NormOptions& options)
{
    for (int j : orders) {
        const auto r = seminorm_error(exact, df, j, options);
        result.u_seminorms[static_cast<std::size_t>(j)] = r.value;
        if (r.capped) {
            add_flag(result, "quad-cap");
        }
    }
}

void finish_norm(CaseResult& result, const NormSpec& spec, double eps)
{
    SeminormValues values{result.u_seminorms, result.w_l2};
    result.total = weighted_norm(values, spec, eps);
    if (spec.two_field) {
        result.errors = {result.w_l2, result.u_seminorms[1], std::nullopt};
    } else {
        result.errors = result.u_seminorms;
    }
}

std::string join_flags(const std::vector<std::string>& flags)
{
    std::string out;
    for (const auto& f : flags) {
        if (!out.empty()) {
            out += ';';
        }
        out += f;
    }
    return out;
}

std::string optional_number(const std::optional<double>& value)
{
    return value ? shortest(*value) : std::string();
}

}  // namespace

CaseError::CaseError(std::string stage, const std::string& message)
    : Error(stage + ": " + message), stage_(std::move(stage))
{
}

bool CaseResult::has_flag(std::string_view flag) const
{
    return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

bool CaseResult::excluded() const
{
    return failed || has_flag("quad-cap") || has_flag("load-quad-cap");
}

SmallnessReport smallness_check(double eps, double H, int k, double tau_exponent)
{
    SmallnessReport report;
    const double tau = std::pow(eps, tau_exponent);
    report.condition_value = eps * std::exp(-tau / eps);
    report.threshold = std::pow(H, k + 1);
    report.layer_branch = report.condition_value <= report.threshold;
    report.direct_branch = eps <= report.threshold;
    return report;
}

std::optional<double> default_tau_exponent(ProblemId id, int k)
{
    std::optional<double> tau;
    switch (id) {
    case ProblemId::cd2:
    case ProblemId::rd2: tau = (k - 1.0) / k; break;
    case ProblemId::cd4_hinged:
    case ProblemId::rd4_hinged: tau = 0.5; break;
    case ProblemId::cd4_xweak: break;
    case ProblemId::cd4_clamped: tau = 1.0; break;
    case ProblemId::rd4_clamped: tau = 0.75; break;
    case ProblemId::mix4: tau = 1.0 - 1.0 / (2.0 * k); break;
    case ProblemId::mix4_hinged: tau = 1.0 - 3.0 / (2.0 * k); break;
    }
    if (tau && *tau <= 0.0) {
        return std::nullopt;
    }
    return tau;
}

std::string_view tau_pairing(ProblemId id)
{
    switch (id) {
    case ProblemId::cd2:
    case ProblemId::rd2: return "(k-1)/k";
    case ProblemId::cd4_hinged:
    case ProblemId::rd4_hinged: return "1/2";
    case ProblemId::cd4_xweak: return "uniform mesh";
    case ProblemId::cd4_clamped: return "1 (prefer shishkin with tau0=2)";
    case ProblemId::rd4_clamped: return "3/4";
    case ProblemId::mix4: return "1-1/(2k)";
    case ProblemId::mix4_hinged: return "1-3/(2k) (k=1: uniform mesh)";
    }
    return "?";
}

std::string_view default_norm(ProblemId id)
{
    switch (id) {
    case ProblemId::cd2: return "CD2_ENERGY";
    case ProblemId::rd2: return "RD2_ENERGY";
    case ProblemId::cd4_hinged:
    case ProblemId::cd4_xweak:
    case ProblemId::cd4_clamped: return "CD4_ENERGY";
    case ProblemId::rd4_hinged:
    case ProblemId::rd4_clamped: return "RD4_ENERGY";
    case ProblemId::mix4:
    case ProblemId::mix4_hinged: return "MIXED";
    }
    return "?";
}

RefinedSides default_sides(const Problem& problem)
{
    const bool left = problem.exact.has_layer(Side::left);
    const bool right = problem.exact.has_layer(Side::right);
    if (left && right) {
        return RefinedSides::both;
    }
    return right ? RefinedSides::right : RefinedSides::left;
}

Mesh build_case_mesh(const CaseConfig& config, const Problem& problem)
{
    const RefinedSides sides = config.sides.value_or(default_sides(problem));
    const int k = problem.order == ProblemOrder::fourth ? 3 : config.k;
    const auto tau_exponent = [&] {
        if (config.tau_exponent) {
            return *config.tau_exponent;
        }
        const auto tau = default_tau_exponent(config.problem, k);
        if (!tau) {
            throw Error("no default tau exponent for " + std::string(to_string(config.problem)) +
                        " with k=" + std::to_string(k) + "; pass tau-exp or use a uniform mesh");
        }
        return *tau;
    };

    switch (config.mesh) {
    case MeshFamily::uniform: return uniform_mesh(elements_for_step(1.0, config.H));
    case MeshFamily::two_region: return two_region_mesh(config.eps, config.H, tau_exponent(), config.alpha, sides);
    case MeshFamily::shishkin: return shishkin_mesh(config.eps, config.H, config.tau0, sides);
    case MeshFamily::graded:
        if (sides != RefinedSides::left) {
            throw Error("graded mesh refines the left side only");
        }
        return graded_tail_mesh(config.eps, config.H, tau_exponent(), config.alpha);
    }
    throw Error("unknown mesh family");
}

CaseResult run_case(const CaseConfig& config)
{
    CaseResult result;
    result.config = config;

    const auto spec = stage("config", [&] {
        const std::string name = config.norm.value_or(std::string(default_norm(config.problem)));
        auto found = norm_preset(name);
        if (!found) {
            throw Error("unknown norm '" + name + "'");
        }
        return *found;
    });
    const Problem problem = stage("problem", [&] { return make_problem(config.problem, config.eps, config.overrides); });
    const bool mixed = problem.order == ProblemOrder::fourth_mixed;
    const bool hermite = problem.order == ProblemOrder::fourth && !config.interpolant;
    result.k = case_degree(config);
    if (spec.two_field && (!mixed || config.interpolant)) {
        throw CaseError("config", spec.name + " needs a mixed problem solve");
    }

    if (problem.variable_coefficients) {
        add_flag(result, "variable-coefficients");
    }
    if (config.tau_exponent && (config.mesh == MeshFamily::two_region || config.mesh == MeshFamily::graded)) {
        const auto expected = default_tau_exponent(config.problem, result.k);
        if (!expected || std::abs(*expected - *config.tau_exponent) > 1e-12) {
            add_flag(result, "tau-override");
        }
    }

    const Mesh mesh = stage("mesh", [&] { return build_case_mesh(config, problem); });
    if (config.mesh == MeshFamily::two_region || config.mesh == MeshFamily::graded) {
        const double tau_exponent = config.tau_exponent.value_or(default_tau_exponent(config.problem, result.k).value_or(0.0));
        result.smallness = smallness_check(config.eps, config.H, hermite ? 2 : result.k, tau_exponent);
        if (!result.smallness->satisfied()) {
            add_flag(result, "smallness");
        }
    }

    NormOptions norm_options;
    norm_options.rel_tol = config.norm_tolerance;
    norm_options.layers = layer_hint(problem);
    norm_options.execution = config.execution;
    const auto orders = wanted_orders(spec, hermite);

    if (config.interpolant) {
        const Evaluator target = config.target == InterpTarget::layer
                                     ? Evaluator([&problem](double x, int j) { return problem.exact.layer_eval(x, j); })
                                     : Evaluator([&problem](double x, int j) { return problem.exact.eval(x, j); });
        const auto space = stage("space", [&] {
            return std::make_shared<const Space>(
                build_space(mesh, SpaceFamily::lagrange, config.k, BoundaryConditions::natural()));
        });
        result.dofs = space->dof_count();
        InterpOptions interp_options;
        interp_options.layers = norm_options.layers;
        interp_options.weights = config.moment_weights;
        interp_options.execution = config.execution;
        const auto df = stage("interp", [&] { return interpolate(*config.interpolant, target, space, interp_options); });
        stage("norms", [&] {
            measure(result, target, df, orders, norm_options);
            finish_norm(result, spec, config.eps);
            return 0;
        });
        return result;
    }

    AssemblyOptions assembly;
    assembly.execution = config.execution;
    const Evaluator exact = [&problem](double x, int j) { return problem.exact.eval(x, j); };

    if (mixed) {
        const auto spaces = stage("space", [&] { return mixed_spaces(problem, mesh, config.k); });
        const auto system = stage("assemble", [&] { return assemble_mixed(problem, *spaces.u, *spaces.w, assembly); });
        result.dofs = system.size();
        if (system.load_quadrature_capped) {
            add_flag(result, "load-quad-cap");
        }
        const auto solution = stage("solve", [&] { return solve(system); });
        result.residual = solution.relative_residual;
        stage("norms", [&] {
            auto [u, w] = split_mixed(system, solution.coefficients);
            result.u_h = std::make_shared<const DiscreteFunction>(spaces.u, std::move(u));
            result.w_h = std::make_shared<const DiscreteFunction>(spaces.w, std::move(w));
            const auto& w_h = *result.w_h;
            measure(result, exact, *result.u_h, orders, norm_options);
            const double eps = problem.eps;
            const Evaluator w_exact = [&problem, eps](double x, int j) { return eps * problem.exact.eval(x, j + 2); };
            const auto r = seminorm_error(w_exact, w_h, 0, norm_options);
            result.w_l2 = r.value;
            if (r.capped) {
                add_flag(result, "quad-cap");
            }
            finish_norm(result, spec, config.eps);
            return 0;
        });
        return result;
    }

    const auto space =
        stage("space", [&] { return std::make_shared<const Space>(primal_space(problem, mesh, result.k)); });
    const auto system = stage("assemble", [&] {
        return problem.order == ProblemOrder::second ? assemble_order2(problem, *space, assembly)
                                                     : assemble_order4(problem, *space, assembly);
    });
    result.dofs = system.size();
    if (system.load_quadrature_capped) {
        add_flag(result, "load-quad-cap");
    }
    const auto solution = stage("solve", [&] { return solve(system); });
    result.residual = solution.relative_residual;
    stage("norms", [&] {
        result.u_h = std::make_shared<const DiscreteFunction>(space, solution.coefficients, system.offset);
        measure(result, exact, *result.u_h, orders, norm_options);
        finish_norm(result, spec, config.eps);
        return 0;
    });
    return result;
}

std::optional<double> eoc(double e1, double H1, double e2, double H2)
{
    if (!(e1 > 0.0) || !(e2 > 0.0) || !(H1 > 0.0) || !(H2 > 0.0) || H1 == H2 || !std::isfinite(e1) ||
        !std::isfinite(e2)) {
        return std::nullopt;
    }
    return std::log(e1 / e2) / std::log(H1 / H2);
}

std::optional<double> uniformity_ratio(std::span<const double> errors)
{
    if (errors.size() < 2) {
        return std::nullopt;
    }
    const auto [lo, hi] = std::minmax_element(errors.begin(), errors.end());
    if (!(*lo > 0.0)) {
        return std::nullopt;
    }
    return *hi / *lo;
}

const CaseResult& SweepTable::at(std::size_t eps_index, std::size_t H_index) const
{
    return results.at(eps_index * H_list.size() + H_index);
}

std::optional<double> SweepTable::eoc(std::size_t eps_index, std::size_t H_index) const
{
    if (H_index == 0 || H_index >= H_list.size()) {
        return std::nullopt;
    }
    const auto& coarse = at(eps_index, H_index - 1);
    const auto& fine = at(eps_index, H_index);
    if (coarse.failed || fine.failed) {
        return std::nullopt;
    }
    return layerfem::eoc(coarse.total, H_list[H_index - 1], fine.total, H_list[H_index]);
}

std::optional<double> SweepTable::uniformity(std::size_t H_index) const
{
    std::vector<double> values;
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        const auto& r = at(i, H_index);
        if (!r.excluded()) {
            values.push_back(r.total);
        }
    }
    return uniformity_ratio(values);
}

bool SweepTable::any_failed() const
{
    return std::any_of(results.begin(), results.end(), [](const CaseResult& r) { return r.failed; });
}

SweepTable run_sweep(const CaseConfig& base, std::vector<double> eps_list, std::vector<double> H_list,
                     Execution execution)
{
    SweepTable table;
    table.eps_list = std::move(eps_list);
    table.H_list = std::move(H_list);
    const std::size_t count = table.eps_list.size() * table.H_list.size();
    table.results.resize(count);
    const Execution inner =
        execution == Execution::parallel && count == 1 ? Execution::parallel : Execution::sequential;

    for_each_index(execution, count, [&](std::size_t i) {
        CaseConfig config = base;
        config.eps = table.eps_list[i / table.H_list.size()];
        config.H = table.H_list[i % table.H_list.size()];
        config.execution = inner;
        try {
            table.results[i] = run_case(config);
        } catch (const std::exception& e) {
            CaseResult failed;
            failed.config = config;
            failed.k = case_degree(config);
            failed.failed = true;
            failed.failure = e.what();
            const auto* case_error = dynamic_cast<const CaseError*>(&e);
            failed.flags.push_back("failed:" + (case_error ? case_error->stage() : std::string("unknown")));
            table.results[i] = std::move(failed);
        }
    });
    return table;
}

std::optional<TableFormat> parse_table_format(std::string_view text)
{
    if (text == "csv") {
        return TableFormat::csv;
    }
    if (text == "md") {
        return TableFormat::md;
    }
    return std::nullopt;
}

std::string render(const SweepTable& table, TableFormat format)
{
    std::vector<std::vector<std::string>> rows;
    rows.emplace_back(columns.begin(), columns.end());
    for (std::size_t i = 0; i < table.eps_list.size(); ++i) {
        for (std::size_t j = 0; j < table.H_list.size(); ++j) {
            const auto& r = table.at(i, j);
            std::vector<std::string> row{std::string(to_string(r.config.problem)),
                                         shortest(r.config.eps),
                                         shortest(r.config.H),
                                         std::to_string(r.k),
                                         std::string(to_string(r.config.mesh)),
                                         r.failed ? std::string() : std::to_string(r.dofs),
                                         r.failed ? std::string() : shortest(r.total),
                                         optional_number(r.errors[0]),
                                         optional_number(r.errors[1]),
                                         optional_number(r.errors[2]),
                                         optional_number(table.eoc(i, j)),
                                         optional_number(table.uniformity(j)),
                                         join_flags(r.flags)};
            rows.push_back(std::move(row));
        }
    }

    std::ostringstream out;
    if (format == TableFormat::csv) {
        for (const auto& row : rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                out << (c ? "," : "") << row[c];
            }
            out << '\n';
        }
        return out.str();
    }

    std::vector<std::size_t> width(columns.size(), 3);
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            width[c] = std::max(width[c], row[c].size());
        }
    }
    const auto emit = [&](const std::vector<std::string>& row) {
        out << '|';
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << ' ' << row[c] << std::string(width[c] - row[c].size(), ' ') << " |";
        }
        out << '\n';
    };
    emit(rows.front());
    out << '|';
    for (std::size_t c = 0; c < columns.size(); ++c) {
        out << std::string(width[c] + 2, '-') << '|';
    }
    out << '\n';
    for (std::size_t r = 1; r < rows.size(); ++r) {
        emit(rows[r]);
    }
    return out.str();
}

}  // namespace layerfem
