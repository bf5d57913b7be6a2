#include "layerfem/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "layerfem/format.hpp"
#include "layerfem/mesh.hpp"
#include "layerfem/model.hpp"
#include "layerfem/norms.hpp"
#include "layerfem/study.hpp"

namespace layerfem {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CaseFlags {
    std::string problem;
    int k = 1;
    std::string mesh_family = "uniform";
    std::optional<double> tau_exp;
    double alpha = 1.0;
    double tau0 = 2.0;
    std::string sides;
    std::string norm;
    bool seq = false;
    std::string out;
    std::string format = "csv";
};

struct Flags {
    CaseFlags c;
    // mesh
    std::string family;
    double eps = 1e-4;
    double H = 0.125;
    int mesh_k = 2;
    // solve
    int samples = 201;
    // sweep / interp
    std::string eps_list;
    std::string H_list;
    std::string interp;
    std::string target = "full";
    std::string moment_weights = "lowered";
};

void add_case_options(CLI::App& sub, CaseFlags& c)
{
    sub.add_option("--problem", c.problem, "Catalog id")->required();
    sub.add_option("--k", c.k, "Lagrange degree (fourth-order primal problems use cubic Hermite)");
    sub.add_option("--mesh-family", c.mesh_family, "uniform|two-region|shishkin|graded");
    sub.add_option("--tau-exp", c.tau_exp, "Fine-region exponent, tau = eps^tau-exp");
    sub.add_option("--alpha", c.alpha, "Fine step scale, h = alpha H tau");
    sub.add_option("--tau0", c.tau0, "Shishkin constant");
    sub.add_option("--sides", c.sides, "left|right|both (default: sides with layers)");
    sub.add_option("--norm", c.norm, "Norm preset");
    sub.add_flag("--seq", c.seq, "Sequential deterministic execution");
    sub.add_option("--out", c.out, "Output file");
    sub.add_option("--format", c.format, "csv|md");
}

std::vector<double> parse_list(const std::string& text, const std::string& flag)
{
    std::vector<double> values;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = std::min(text.find(',', start), text.size());
        const std::string item = text.substr(start, end - start);
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
        if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size()) {
            throw UsageError(flag + ": cannot parse '" + item + "' as a number");
        }
        values.push_back(value);
        start = end + 1;
    }
    if (values.empty()) {
        throw UsageError(flag + ": empty list");
    }
    return values;
}

CaseConfig case_config(const CaseFlags& c)
{
    CaseConfig config;
    const auto id = parse_problem_id(c.problem);
    if (!id) {
        throw UsageError("--problem: unknown problem id '" + c.problem + "'");
    }
    config.problem = *id;
    if (c.k < 1 || c.k > 3) {
        throw UsageError("--k: degree " + std::to_string(c.k) + " outside 1..3");
    }
    config.k = c.k;
    const auto family = parse_mesh_family(c.mesh_family);
    if (!family) {
        throw UsageError("--mesh-family: unknown family '" + c.mesh_family + "'");
    }
    config.mesh = *family;
    config.tau_exponent = c.tau_exp;
    config.alpha = c.alpha;
    config.tau0 = c.tau0;
    if (!c.sides.empty()) {
        const auto sides = parse_sides(c.sides);
        if (!sides) {
            throw UsageError("--sides: unknown side '" + c.sides + "'");
        }
        config.sides = *sides;
    }
    if (!c.norm.empty()) {
        if (!norm_preset(c.norm)) {
            throw UsageError("--norm: unknown preset '" + c.norm + "'");
        }
        config.norm = c.norm;
    }
    config.execution = c.seq ? Execution::sequential : Execution::parallel;
    return config;
}

TableFormat table_format(const CaseFlags& c)
{
    const auto format = parse_table_format(c.format);
    if (!format) {
        throw UsageError("--format: unknown format '" + c.format + "'");
    }
    return *format;
}

void emit(const std::string& text, const std::string& path, std::ostream& out)
{
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(path);
    if (!file) {
        throw UsageError("--out: cannot open '" + path + "'");
    }
    file << text;
}

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

// Turns `key=value` lines into `--key=value` tokens, checking keys against the subcommand.
std::vector<std::string> config_tokens(const std::string& path, const CLI::App& sub)
{
    std::ifstream file(path);
    if (!file) {
        throw UsageError("--config: cannot open '" + path + "'");
    }
    std::vector<std::string> tokens;
    std::string line;
    int number = 0;
    while (std::getline(file, line)) {
        ++number;
        const std::string text = trim(line);
        if (text.empty() || text.front() == '#') {
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw UsageError("--config: line " + std::to_string(number) + " is not key=value");
        }
        const std::string key = trim(std::string_view(text).substr(0, eq));
        const std::string value = trim(std::string_view(text).substr(eq + 1));
        if (key == "config" || sub.get_option_no_throw("--" + key) == nullptr) {
            throw UsageError("--config: unknown key '" + key + "'");
        }
        tokens.push_back("--" + key + "=" + value);
    }
    return tokens;
}

int cmd_mesh(const Flags& f, std::ostream& out)
{
    const auto family = parse_mesh_family(f.family);
    if (!family) {
        throw UsageError("--family: unknown family '" + f.family + "'");
    }
    RefinedSides sides = RefinedSides::left;
    if (!f.c.sides.empty()) {
        const auto parsed = parse_sides(f.c.sides);
        if (!parsed) {
            throw UsageError("--sides: unknown side '" + f.c.sides + "'");
        }
        sides = *parsed;
    }
    const auto tau_exp = [&] {
        if (f.c.tau_exp) {
            return *f.c.tau_exp;
        }
        if (f.mesh_k < 2) {
            throw UsageError("--tau-exp: required when k < 2");
        }
        return (f.mesh_k - 1.0) / f.mesh_k;
    };

    std::optional<Mesh> mesh;
    switch (*family) {
    case MeshFamily::uniform: mesh = uniform_mesh(elements_for_step(1.0, f.H)); break;
    case MeshFamily::two_region: mesh = two_region_mesh(f.eps, f.H, tau_exp(), f.c.alpha, sides); break;
    case MeshFamily::shishkin: mesh = shishkin_mesh(f.eps, f.H, f.c.tau0, sides); break;
    case MeshFamily::graded: mesh = graded_tail_mesh(f.eps, f.H, tau_exp(), f.c.alpha); break;
    }
    emit(mesh_to_csv(*mesh), f.c.out, out);
    return 0;
}

int cmd_solve(const Flags& f, std::ostream& out, std::ostream& err)
{
    CaseConfig config = case_config(f.c);
    const auto format = table_format(f.c);
    if (f.samples < 2) {
        throw UsageError("--samples: need at least 2");
    }
    config.eps = f.eps;
    config.H = f.H;
    SweepTable table = run_sweep(config, {f.eps}, {f.H}, config.execution);
    out << render(table, format);
    const auto& result = table.results.front();
    if (result.failed) {
        err << "error: " << result.failure << '\n';
        return 2;
    }
    if (!f.c.out.empty()) {
        std::ostringstream samples;
        samples << (result.w_h ? "x,u,u',w\n" : "x,u,u'\n");
        for (int i = 0; i < f.samples; ++i) {
            const double x = static_cast<double>(i) / (f.samples - 1);
            samples << shortest(x) << ',' << shortest(result.u_h->eval(x, 0)) << ','
                    << shortest(result.u_h->eval(x, 1));
            if (result.w_h) {
                samples << ',' << shortest(result.w_h->eval(x, 0));
            }
            samples << '\n';
        }
        emit(samples.str(), f.c.out, out);
    }
    return 0;
}

int cmd_sweep(const Flags& f, std::ostream& out, bool interpolation)
{
    CaseConfig config = case_config(f.c);
    const auto format = table_format(f.c);
    const auto eps_list = parse_list(f.eps_list, "--eps-list");
    const auto H_list = parse_list(f.H_list, "--H-list");
    if (interpolation) {
        config.interpolant = parse_interpolant(f.interp);
        if (!config.interpolant) {
            throw UsageError("--interp: unknown interpolant '" + f.interp + "'");
        }
        if (f.target == "full" || f.target == "layer") {
            config.target = f.target == "full" ? InterpTarget::full : InterpTarget::layer;
        } else {
            throw UsageError("--target: unknown target '" + f.target + "'");
        }
        if (f.moment_weights == "lowered" || f.moment_weights == "literal") {
            config.moment_weights = f.moment_weights == "lowered" ? MomentWeights::lowered : MomentWeights::literal;
        } else {
            throw UsageError("--moment-weights: unknown weights '" + f.moment_weights + "'");
        }
    }
    const auto table = run_sweep(config, eps_list, H_list, config.execution);
    emit(render(table, format), f.c.out, out);
    return table.any_failed() ? 2 : 0;
}

std::string order_name(ProblemOrder order)
{
    switch (order) {
    case ProblemOrder::second: return "2";
    case ProblemOrder::fourth: return "4";
    case ProblemOrder::fourth_mixed: return "4-mixed";
    }
    return "?";
}

int cmd_presets(std::ostream& out)
{
    out << "id,order,layers,bc,tau_exponent,norm\n";
    for (ProblemId id : all_problem_ids()) {
        const Problem p = make_problem(id, 0.01);
        std::string layers;
        for (const auto& layer : p.exact.layers) {
            layers += (layers.empty() ? "" : ";") + std::string("a=") + shortest(layer.amplitude_exponent) + ' ' +
                      (layer.side == Side::left ? "left" : "right");
        }
        out << to_string(id) << ',' << order_name(p.order) << ',' << layers << ',' << to_string(p.bc.left) << '/'
            << to_string(p.bc.right) << ',' << tau_pairing(id) << ',' << default_norm(id) << '\n';
    }
    out << "\nnorm,definition\n";
    for (auto name : norm_preset_names()) {
        const auto spec = *norm_preset(name);
        std::string definition;
        if (spec.two_field) {
            definition = "(|u|_1^2+||w||_0^2)^(1/2)";
        } else {
            for (const auto& term : spec.terms) {
                if (!definition.empty()) {
                    definition += '+';
                }
                if (term.eps_exponent != 0.0) {
                    definition += "eps^" + shortest(term.eps_exponent);
                }
                definition += "|v|_" + std::to_string(term.order);
            }
        }
        out << name << ',' << definition << '\n';
    }
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app("Finite elements for singularly perturbed problems with weak layers", "layerfem");
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    Flags f;
    std::string config_path;

    auto* mesh = app.add_subcommand("mesh", "Write mesh nodes as CSV");
    mesh->add_option("--family", f.family, "uniform|two-region|shishkin|graded")->required();
    mesh->add_option("--eps", f.eps, "Perturbation parameter");
    mesh->add_option("--H", f.H, "Coarse step");
    mesh->add_option("--k", f.mesh_k, "Degree used for the default tau exponent (k-1)/k");
    mesh->add_option("--tau-exp", f.c.tau_exp, "Fine-region exponent");
    mesh->add_option("--alpha", f.c.alpha, "Fine step scale");
    mesh->add_option("--tau0", f.c.tau0, "Shishkin constant");
    mesh->add_option("--sides", f.c.sides, "left|right|both");
    mesh->add_option("--out", f.c.out, "Output file");

    auto* solve = app.add_subcommand("solve", "Solve one case and report its errors");
    add_case_options(*solve, f.c);
    solve->add_option("--eps", f.eps, "Perturbation parameter")->required();
    solve->add_option("--H", f.H, "Coarse step")->required();
    solve->add_option("--samples", f.samples, "Sample count for --out");

    auto* interp = app.add_subcommand("interp", "Interpolation-error sweep without a solve");
    add_case_options(*interp, f.c);
    interp->add_option("--eps-list", f.eps_list, "Comma-separated eps values")->required();
    interp->add_option("--H-list", f.H_list, "Comma-separated coarse steps")->required();
    interp->add_option("--interp", f.interp, "nodal|moment|l2")->required();
    interp->add_option("--target", f.target, "full|layer");
    interp->add_option("--moment-weights", f.moment_weights, "lowered|literal");

    auto* sweep = app.add_subcommand("sweep", "Convergence sweep over an (eps, H) grid");
    add_case_options(*sweep, f.c);
    sweep->add_option("--eps-list", f.eps_list, "Comma-separated eps values")->required();
    sweep->add_option("--H-list", f.H_list, "Comma-separated coarse steps")->required();

    auto* presets = app.add_subcommand("presets", "List the problem catalog and norm presets");

    for (auto* sub : {mesh, solve, interp, sweep, presets}) {
        sub->add_option("--config", config_path, "key=value file; flags override it");
    }

    try {
        // Config tokens go in front so that explicit flags win (TakeLast).
        std::vector<std::string> tokens;
        std::vector<std::string> rest;
        std::optional<std::string> path;
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (args[i] == "--config" && i + 1 < args.size()) {
                path = args[++i];
            } else if (args[i].rfind("--config=", 0) == 0) {
                path = args[i].substr(9);
            } else {
                rest.push_back(args[i]);
            }
        }
        if (path) {
            const auto name = std::find_if(rest.begin(), rest.end(), [](const std::string& a) { return a.rfind('-', 0) != 0; });
            const CLI::App* sub = name == rest.end() ? nullptr : app.get_subcommand_no_throw(*name);
            if (sub == nullptr) {
                throw UsageError("--config: needs a subcommand");
            }
            tokens.push_back(*name);
            for (auto& token : config_tokens(*path, *sub)) {
                tokens.push_back(std::move(token));
            }
            rest.erase(name);
        }
        tokens.insert(tokens.end(), rest.begin(), rest.end());
        std::reverse(tokens.begin(), tokens.end());
        app.parse(tokens);

        if (mesh->parsed()) {
            return cmd_mesh(f, out);
        }
        if (solve->parsed()) {
            return cmd_solve(f, out, err);
        }
        if (interp->parsed()) {
            return cmd_sweep(f, out, true);
        }
        if (sweep->parsed()) {
            return cmd_sweep(f, out, false);
        }
        return cmd_presets(out);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return 0;
        }
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace layerfem
