#include <tcsp/error.hpp>
#include <tcsp/polymorphisms.hpp>
#include <tcsp/sampling.hpp>
#include <tcsp/solvers.hpp>
#include <tcsp/text_io.hpp>
#include <tcsp/theory_spec.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start)
{
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct SolveOptions {
    std::string theory;
    std::string instance;
    std::string name;
    std::string method = "hom";
    bool json = false;
};

int run_solve(const SolveOptions& opt)
{
    auto start = Clock::now();
    const tcsp::TheorySpec spec = tcsp::parse_theory_spec(tcsp::read_text_file(opt.theory));
    const tcsp::SampleFamily& family = opt.name.empty() ? spec.last() : spec.get(opt.name);
    const tcsp::Instance inst = tcsp::parse_instance(tcsp::read_text_file(opt.instance), family.signature());
    const double parse_ms = ms_since(start);

    if (opt.method == "ac")
        std::cerr << "warning: --method ac is complete only if every sample maps homomorphically into a model "
                     "whose image has totally symmetric polymorphisms of all arities\n";
    else if (opt.method == "nu")
        std::cerr << "warning: --method nu is complete only if every sample has a ternary near-unanimity "
                     "polymorphism\n";

    const std::size_t n = tcsp::sampling_index(inst);
    start = Clock::now();
    const auto samples = family.generate(n);
    const double generate_ms = ms_since(start);

    start = Clock::now();
    tcsp::SolveResult result;
    if (opt.method == "hom")
        result = tcsp::solve_via_sampling(family, inst);
    else if (opt.method == "ac")
        result = tcsp::solve_ac_over_sampling(family, inst);
    else
        result = tcsp::solve_nu_over_sampling(family, inst);
    const double solve_ms = ms_since(start);

    const char* verdict = result.satisfiable ? "satisfiable" : "unsatisfiable";
    if (opt.json) {
        nlohmann::ordered_json report;
        report["verdict"] = verdict;
        report["sample_index"] = nullptr;
        report["witness"] = nullptr;
        if (result.witness) {
            const tcsp::Structure& sample = (*samples)[result.witness->sample_index];
            report["sample_index"] = result.witness->sample_index;
            nlohmann::ordered_json witness = nlohmann::ordered_json::object();
            for (tcsp::VarId v = 0; v < inst.variable_count(); ++v)
                witness[inst.variable_name(v)] = sample.label(result.witness->assignment[v]);
            report["witness"] = witness;
        }
        report["timings"] = {{"parse_ms", parse_ms}, {"generate_ms", generate_ms}, {"solve_ms", solve_ms}};
        std::cout << report.dump() << "\n";
    } else {
        std::cout << "verdict: " << verdict << "\n";
        std::cout << "method: " << opt.method << "\n";
        std::cout << "sampling_index: " << n << "\n";
        if (result.witness) {
            const tcsp::Structure& sample = (*samples)[result.witness->sample_index];
            std::cout << "sample_index: " << result.witness->sample_index << "\n";
            for (tcsp::VarId v = 0; v < inst.variable_count(); ++v)
                std::cout << "witness." << inst.variable_name(v) << ": "
                          << sample.label(result.witness->assignment[v]) << "\n";
        }
        std::cout << "timing.parse_ms: " << parse_ms << "\n";
        std::cout << "timing.generate_ms: " << generate_ms << "\n";
        std::cout << "timing.solve_ms: " << solve_ms << "\n";
    }
    return result.satisfiable ? 0 : 1;
}

int run_sample(const std::string& theory, const std::string& name, std::size_t n, const std::string& out)
{
    const tcsp::TheorySpec spec = tcsp::parse_theory_spec(tcsp::read_text_file(theory));
    const tcsp::SampleFamily& family = name.empty() ? spec.last() : spec.get(name);
    const std::string text = tcsp::format_structures(*family.generate(n));
    if (out.empty()) {
        std::cout << text;
    } else {
        std::ofstream file(out, std::ios::binary);
        if (!file)
            throw tcsp::Error("cannot write '" + out + "'");
        file << text;
    }
    return 0;
}

tcsp::OperationTable load_operation(const std::string& op, std::size_t domain_size)
{
    const std::string prefix = "builtin:";
    if (op.rfind(prefix, 0) != 0)
        return tcsp::parse_operation(tcsp::read_text_file(op));
    const std::string kind = op.substr(prefix.size());
    if (kind == "majority")
        return tcsp::majority_eq_operation(domain_size);
    if (kind.rfind("min", 0) == 0 && kind.size() > 3 &&
        kind.find_first_not_of("0123456789", 3) == std::string::npos) {
        const std::size_t k = std::stoull(kind.substr(3));
        if (k == 0)
            throw tcsp::Error("builtin:min needs arity >= 1");
        return tcsp::min_operation(domain_size, k);
    }
    throw tcsp::Error("unknown builtin operation '" + kind + "' (expected majority or minK)");
}

int run_checkpoly(const std::string& structure, const std::string& op, bool json)
{
    const tcsp::Structure s = tcsp::parse_structure(tcsp::read_text_file(structure));
    const tcsp::OperationTable f = load_operation(op, s.domain_size());
    const bool poly = tcsp::check_polymorphism(f, s);
    const bool ts = tcsp::is_totally_symmetric(f);
    std::string nu = "n/a";
    if (f.arity >= 3)
        nu = tcsp::is_near_unanimity(f) ? "true" : "false";
    if (json) {
        nlohmann::ordered_json report;
        report["polymorphism"] = poly;
        report["totally_symmetric"] = ts;
        report["near_unanimity"] = f.arity >= 3 ? nlohmann::ordered_json(nu == "true") : nlohmann::ordered_json();
        std::cout << report.dump() << "\n";
    } else {
        std::cout << "polymorphism: " << (poly ? "true" : "false") << "\n";
        std::cout << "totally_symmetric: " << (ts ? "true" : "false") << "\n";
        std::cout << "near_unanimity: " << nu << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Sampling-based solver for constraint satisfaction problems of theories"};
    app.require_subcommand(1);

    SolveOptions solve;
    auto* solve_cmd = app.add_subcommand("solve", "Decide an instance over a theory's sampling");
    solve_cmd->add_option("--theory", solve.theory, "Theory specification file")->required();
    solve_cmd->add_option("--instance", solve.instance, "Instance file")->required();
    solve_cmd->add_option("--name", solve.name, "Theory to use (default: the last one defined)");
    solve_cmd->add_option("--method", solve.method, "hom (exact), ac or nu")
        ->check(CLI::IsMember({"hom", "ac", "nu"}));
    solve_cmd->add_flag("--json", solve.json, "Print the report as one JSON object");

    std::string sample_theory, sample_name, sample_out;
    std::size_t sample_n = 1;
    auto* sample_cmd = app.add_subcommand("sample", "Print the samples generated at index n");
    sample_cmd->add_option("--theory", sample_theory, "Theory specification file")->required();
    sample_cmd->add_option("--name", sample_name, "Theory to use (default: the last one defined)");
    sample_cmd->add_option("-n", sample_n, "Sampling index")->required();
    sample_cmd->add_option("--out", sample_out, "Output file (default: stdout)");

    std::string poly_structure, poly_op;
    bool poly_json = false;
    auto* poly_cmd = app.add_subcommand("checkpoly", "Check an operation against a structure");
    poly_cmd->add_option("--structure", poly_structure, "Structure file")->required();
    poly_cmd->add_option("--op", poly_op, "Operation file, builtin:majority or builtin:minK")->required();
    poly_cmd->add_flag("--json", poly_json, "Print the report as one JSON object");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*solve_cmd)
            return run_solve(solve);
        if (*sample_cmd)
            return run_sample(sample_theory, sample_name, sample_n, sample_out);
        return run_checkpoly(poly_structure, poly_op, poly_json);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
