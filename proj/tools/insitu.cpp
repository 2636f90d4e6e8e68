// Command-line front end. Exit status: 0 success, 1 a requested verification
// failed, 2 usage error, 10 + ErrorKind for library errors (see README).

#include "insitu/insitu.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

namespace
{

using namespace insitu;

constexpr int kVerifyFailed = 1;
constexpr int kUsage = 2;
constexpr int kErrorBase = 10;
// Linear programs over larger spaces are checked by their matrix product only.
constexpr Index kDenseCheckLimit = Index{1} << 20;

std::ifstream open_input(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::ParseError, "cannot open '" + path + "'");
    return in;
}

// Writes to path, or to stdout when path is empty or "-".
void emit(const std::string &path, const std::string &text)
{
    if (path.empty() || path == "-")
    {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw Error(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
    out << text;
}

unsigned worker_count()
{
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char *env = std::getenv("INSITU_THREADS"))
    {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1)
            n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    }
    return n;
}

std::string join(const Signature &sig)
{
    std::string out;
    for (std::size_t k = 0; k < sig.size(); ++k)
        out += (k ? "," : "") + std::to_string(sig[k]);
    return out;
}

template <class T> std::string join_numbers(const std::vector<T> &v)
{
    std::string out;
    for (std::size_t k = 0; k < v.size(); ++k)
        out += (k ? "," : "") + std::to_string(v[k]);
    return out;
}

TreeChoices parse_choices(const std::string &bits)
{
    TreeChoices choices;
    for (char c : bits)
    {
        if (c != '0' && c != '1')
            throw Error(ErrorKind::BadChoice, "tree choices must be a string of 0 and 1");
        choices.push_back(c == '1');
    }
    return choices;
}

// The permutation of components that e performs, if it is one.
std::optional<std::vector<std::size_t>> component_permutation(const Mapping &e)
{
    std::vector<std::size_t> perm(e.alphabet().n());
    for (std::size_t i = 0; i < perm.size(); ++i)
        perm[i] = i + 1;
    do
        if (permutation_mapping(e.alphabet(), perm) == e)
            return perm;
    while (std::next_permutation(perm.begin(), perm.end()));
    return std::nullopt;
}

// Exhaustive check of a dense program against a mapping; prints a report.
bool report_dense(const Program &p, const Mapping &e, std::ostream &out)
{
    out << "length=" << p.length() << '\n';
    out << "signature=" << join(p.signature()) << '\n';
    if (!(p.alphabet() == e.alphabet()))
        throw Error(ErrorKind::DimensionMismatch, "program and mapping use different alphabets");
    const auto mismatch = first_mismatch(p, e);
    out << "execution=" << (mismatch ? "mismatch" : "ok") << '\n';
    if (mismatch)
        out << "counterexample=" << *mismatch << " expected=" << e(*mismatch) << " got=" << p.apply(*mismatch)
            << '\n';
    const RoutingReport r = verify(routing_of(p), e);
    out << "performs=" << (r.performs ? "true" : "false") << '\n';
    out << "vertex_disjoint=" << (r.vertex_disjoint ? "true" : "false") << '\n';
    out << "multicast_inverse=" << (r.multicast_inverse ? "true" : "false") << '\n';
    out << "merge_profile=" << join_numbers(r.merge_profile) << '\n';
    const bool ok = !mismatch && r.performs && r.multicast_inverse;
    out << "result=" << (ok ? "PASS" : "FAIL") << '\n';
    return ok;
}

bool report_linear(const LinearProgram &p, const MatrixMod &m, std::ostream &out)
{
    if (p.ring().modulus() != m.ring().modulus() || p.n() != m.n())
        throw Error(ErrorKind::DimensionMismatch, "linear program and matrix differ in modulus or size");
    const bool product_ok = p.matrix() == m;
    const Alphabet a(m.ring().modulus(), m.n());
    if (a.size() <= kDenseCheckLimit)
    {
        out << "product=" << (product_ok ? "ok" : "mismatch") << '\n';
        return report_dense(to_in_situ(p), mapping_of(m), out) && product_ok;
    }
    out << "length=" << p.length() << '\n';
    out << "signature=" << join(p.signature()) << '\n';
    out << "product=" << (product_ok ? "ok" : "mismatch") << '\n';
    out << "result=" << (product_ok ? "PASS" : "FAIL") << '\n';
    return product_ok;
}

void write_dot(const std::string &path, const Program &p, bool bits)
{
    if (path.empty())
        return;
    const Routing r = routing_of(p);
    DotOptions options;
    options.bit_strings = bits;
    emit(path, export_dot(r.network, &r, options));
}

struct Options
{
    std::string input;
    std::string second;
    std::string output;
    std::string method = "general4-sorted";
    std::string dot;
    bool dot_bits = false;
    bool verify = false;
    std::string choices;
    std::string kind = "mapping";
    std::string against;
    std::uint64_t seed = 1;
    std::uint64_t s = 2;
    std::size_t n = 2;
    std::size_t max_len = 12;
    std::size_t budget = std::size_t{1} << 22;
    std::uint64_t sample = 0;
    std::size_t group = 2;
};

int run_compile(const Options &o)
{
    const auto method = parse_compiler(o.method);
    if (!method)
        throw Error(ErrorKind::InvalidArgument, "unknown method '" + o.method + "'");
    auto in = open_input(o.input);
    if (*method == CompilerKind::Linear)
    {
        const MatrixMod m = read_matrix(in);
        const LinearProgram p = decompose(m);
        emit(o.output, to_text(p, write_linear_program));
        if (!o.dot.empty())
            write_dot(o.dot, to_in_situ(p), o.dot_bits);
        if (o.verify)
            return report_linear(p, m, std::cerr) ? 0 : kVerifyFailed;
        return 0;
    }
    const Mapping e = read_mapping(in);
    const Program p = *method == CompilerKind::General4Flex && !o.choices.empty()
                          ? compile_4n_flexible(e, parse_choices(o.choices))
                          : compile_with(*method, e);
    emit(o.output, to_text(p, write_program));
    write_dot(o.dot, p, o.dot_bits);
    if (o.verify)
        return report_dense(p, e, std::cerr) ? 0 : kVerifyFailed;
    return 0;
}

int run_verify(const Options &o)
{
    auto program_in = open_input(o.input);
    const AnyProgram any = read_any_program(program_in);
    auto target_in = open_input(o.second);
    const bool linear = std::holds_alternative<LinearProgram>(any);
    const std::string against = o.against.empty() ? (linear ? "matrix" : "mapping") : o.against;
    bool ok = false;
    if (against == "matrix")
    {
        const MatrixMod m = read_matrix(target_in);
        if (linear)
            ok = report_linear(std::get<LinearProgram>(any), m, std::cout);
        else
            ok = report_dense(std::get<Program>(any), mapping_of(m), std::cout);
    }
    else
    {
        const Mapping e = read_mapping(target_in);
        const Program p = linear ? to_in_situ(std::get<LinearProgram>(any)) : std::get<Program>(any);
        ok = report_dense(p, e, std::cout);
    }
    if (!o.dot.empty())
        write_dot(o.dot, linear ? to_in_situ(std::get<LinearProgram>(any)) : std::get<Program>(any), o.dot_bits);
    return ok ? 0 : kVerifyFailed;
}

int run_oracle(const Options &o)
{
    auto in = open_input(o.input);
    const Mapping e = read_mapping(in);
    SearchOptions options;
    options.max_len = o.max_len;
    options.max_states = o.budget;
    const SearchResult r = min_length_bfs(e, options);
    std::ostringstream out;
    out << "min_length=" << r.length << '\n';
    out << "states=" << r.states << '\n';
    if (const auto perm = component_permutation(e))
        out << "permutation_bound=" << permutation_length_bound(*perm) << '\n';
    write_program(out, r.witness);
    emit(o.output, out.str());
    return 0;
}

int run_invert(const Options &o)
{
    auto in = open_input(o.input);
    const AnyProgram any = read_any_program(in);
    if (const auto *linear = std::get_if<LinearProgram>(&any))
        emit(o.output, to_text(invert_linear_program(*linear), write_linear_program));
    else
        emit(o.output, to_text(reverse_boolean_bijection(std::get<Program>(any)), write_program));
    return 0;
}

int run_regroup(const Options &o)
{
    auto in = open_input(o.input);
    const Program p = read_program(in);
    emit(o.output, to_text(regroup(p, o.group), write_program));
    return 0;
}

int run_random(const Options &o)
{
    Rng rng(o.seed);
    if (o.kind == "mapping")
        emit(o.output, to_text(random_mapping(Alphabet(o.s, o.n), rng), write_mapping));
    else if (o.kind == "bijection")
        emit(o.output, to_text(random_bijection(Alphabet(o.s, o.n), rng), write_mapping));
    else if (o.kind == "matrix")
        emit(o.output, to_text(random_matrix(ModRing(o.s), o.n, rng), write_matrix));
    else if (o.kind == "invertible")
        emit(o.output, to_text(random_invertible_matrix(ModRing(o.s), o.n, rng), write_matrix));
    else
        throw Error(ErrorKind::InvalidArgument, "unknown kind '" + o.kind + "'");
    return 0;
}

int run_suite(const Options &o)
{
    const auto method = parse_compiler(o.method);
    if (!method)
        throw Error(ErrorKind::InvalidArgument, "unknown method '" + o.method + "'");
    SuiteOptions options;
    options.sample = o.sample;
    options.seed = o.seed;
    options.threads = worker_count();
    const SuiteReport r = exhaustive_suite(Alphabet(o.s, o.n), *method, options);
    emit(o.output, r.to_text());
    return r.ok() ? 0 : kVerifyFailed;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Compile, verify and search in-situ programs"};
    app.require_subcommand(1);
    Options o;
    const std::string methods = "benes, general5, general4-sorted, general4-flex, linear";

    auto *compile = app.add_subcommand("compile", "Compile a mapping or matrix file into a program");
    compile->add_option("input", o.input, "Mapping file (matrix file for --method linear)")->required();
    compile->add_option("--method", o.method, "One of: " + methods)->capture_default_str();
    compile->add_option("-o,--output", o.output, "Program file (default stdout)");
    compile->add_flag("--verify", o.verify, "Check the program exhaustively; report on stderr");
    compile->add_option("--dot", o.dot, "Write the routed network as Graphviz DOT");
    compile->add_flag("--dot-bits", o.dot_bits, "Label DOT vertices by components x_n..x_1");
    compile->add_option("--tree-choices", o.choices, "general4-flex: 0/1 per block-tree node, heap order");

    auto *verify_cmd = app.add_subcommand("verify", "Check a program against a mapping or matrix");
    verify_cmd->add_option("program", o.input, "Program or linear program file")->required();
    verify_cmd->add_option("target", o.second, "Mapping or matrix file")->required();
    verify_cmd->add_option("--against", o.against, "mapping or matrix (default: matrix for linear programs)")
        ->check(CLI::IsMember({"mapping", "matrix"}));
    verify_cmd->add_option("--dot", o.dot, "Write the routed network as Graphviz DOT");
    verify_cmd->add_flag("--dot-bits", o.dot_bits, "Label DOT vertices by components x_n..x_1");

    auto *oracle = app.add_subcommand("oracle", "Shortest program length by breadth-first search");
    oracle->add_option("input", o.input, "Mapping file")->required();
    oracle->add_option("--max-len", o.max_len, "Deepest level searched")->capture_default_str();
    oracle->add_option("--budget", o.budget, "Maximum number of states stored")->capture_default_str();
    oracle->add_option("-o,--output", o.output, "Report file (default stdout)");

    auto *invert = app.add_subcommand("invert", "Invert a linear program or a boolean bijective program");
    invert->add_option("input", o.input, "Program file")->required();
    invert->add_option("-o,--output", o.output, "Program file (default stdout)");

    auto *regroup_cmd = app.add_subcommand("regroup", "View a program over S^(mn) as one over (S^m)^n");
    regroup_cmd->add_option("input", o.input, "Program file")->required();
    regroup_cmd->add_option("--group", o.group, "Components per register m")->capture_default_str();
    regroup_cmd->add_option("-o,--output", o.output, "Program file (default stdout)");

    auto *random = app.add_subcommand("random", "Generate a seeded random input file");
    random->add_option("kind", o.kind, "mapping, bijection, matrix or invertible")
        ->check(CLI::IsMember({"mapping", "bijection", "matrix", "invertible"}))
        ->capture_default_str();
    random->add_option("--s", o.s, "Alphabet size or modulus")->capture_default_str();
    random->add_option("--n", o.n, "Arity or matrix dimension")->capture_default_str();
    random->add_option("--seed", o.seed, "mt19937_64 seed")->capture_default_str();
    random->add_option("-o,--output", o.output, "Output file (default stdout)");

    auto *suite = app.add_subcommand("suite", "Run a compiler over every input or a seeded sample");
    suite->add_option("--method", o.method, "One of: " + methods)->capture_default_str();
    suite->add_option("--s", o.s, "Alphabet size or modulus")->capture_default_str();
    suite->add_option("--n", o.n, "Arity or matrix dimension")->capture_default_str();
    suite->add_option("--sample", o.sample, "Random inputs to draw; 0 enumerates all")->capture_default_str();
    suite->add_option("--seed", o.seed, "Base seed for sampled inputs")->capture_default_str();
    suite->add_option("-o,--output", o.output, "Report file (default stdout)");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return kUsage;
    }

    try
    {
        if (*compile)
            return run_compile(o);
        if (*verify_cmd)
            return run_verify(o);
        if (*oracle)
            return run_oracle(o);
        if (*invert)
            return run_invert(o);
        if (*regroup_cmd)
            return run_regroup(o);
        if (*random)
            return run_random(o);
        if (*suite)
            return run_suite(o);
    }
    catch (const Error &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kErrorBase + static_cast<int>(e.kind());
    }
    return kUsage;
}
