#ifndef INSITU_ORACLE_HPP
#define INSITU_ORACLE_HPP

// Brute-force ground truth: shortest programs by breadth-first search over
// composed mappings, and exhaustive or sampled compiler suites.

#include "insitu/benes.hpp"
#include "insitu/blockseq.hpp"
#include "insitu/core.hpp"
#include "insitu/factor.hpp"
#include "insitu/linmod.hpp"
#include "insitu/minsim.hpp"
#include "insitu/random.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <vector>

namespace insitu
{

struct SearchOptions
{
    std::size_t max_len = 12;
    std::size_t max_states = std::size_t{1} << 22;
    // Restricts the assignments tried at each step; all of them by default.
    std::optional<std::vector<Assignment>> universe;
};

struct SearchResult
{
    std::size_t length = 0;
    Program witness;
    std::size_t states = 0;
};

namespace detail
{

struct ImagesHash
{
    std::size_t operator()(const std::vector<Index> &v) const noexcept
    {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (Index x : v)
        {
            h ^= x;
            h *= 0x100000001b3ull;
        }
        return static_cast<std::size_t>(h);
    }
};

} // namespace detail

// Minimal number of assignments computing e, starting from the identity and
// composing one assignment per level. In the full universe an assignment only
// matters on the current image set, so each state has n * s^(#images)
// successors. Successors are generated in a fixed order, so the witness is
// deterministic.
inline SearchResult min_length_bfs(const Mapping &e, const SearchOptions &options = {})
{
    const Alphabet &a = e.alphabet();
    a.require_dense();
    if (options.universe)
        for (const auto &asg : *options.universe)
            if (asg.table().size() != a.size() || asg.target() > a.n())
                throw Error(ErrorKind::DimensionMismatch, "universe assignment does not match the alphabet");

    struct Node
    {
        std::vector<Index> images;
        std::size_t parent;
        std::size_t target;
        std::vector<Digit> table;
    };
    std::vector<Node> nodes;
    std::unordered_map<std::vector<Index>, std::size_t, detail::ImagesHash> seen;

    auto witness_of = [&](std::size_t id) {
        std::vector<Assignment> steps;
        for (; id != 0; id = nodes[id].parent)
            steps.emplace_back(a, nodes[id].target, nodes[id].table);
        std::reverse(steps.begin(), steps.end());
        return Program(a, std::move(steps));
    };

    nodes.push_back({Mapping::identity(a).images(), 0, 0, {}});
    seen.emplace(nodes[0].images, 0);
    if (nodes[0].images == e.images())
        return {0, Program(a), 1};

    std::size_t level_begin = 0;
    for (std::size_t depth = 1; depth <= options.max_len; ++depth)
    {
        const std::size_t level_end = nodes.size();
        for (std::size_t id = level_begin; id < level_end; ++id)
        {
            const std::vector<Index> current = nodes[id].images;
            auto offer = [&](std::size_t target, std::vector<Digit> table) -> std::optional<SearchResult> {
                std::vector<Index> next(a.size());
                for (Index x = 0; x < a.size(); ++x)
                    next[x] = a.with_digit(current[x], target, table[current[x]]);
                if (seen.contains(next))
                    return std::nullopt;
                if (nodes.size() >= options.max_states)
                    throw Error(ErrorKind::BudgetExceeded,
                                "search exceeded " + std::to_string(options.max_states) + " states");
                const bool found = next == e.images();
                seen.emplace(next, nodes.size());
                nodes.push_back({std::move(next), id, target, std::move(table)});
                if (found)
                    return SearchResult{depth, witness_of(nodes.size() - 1), nodes.size()};
                return std::nullopt;
            };

            if (options.universe)
            {
                for (const auto &asg : *options.universe)
                    if (auto r = offer(asg.target(), asg.table()))
                        return std::move(*r);
                continue;
            }

            std::vector<Index> support(current);
            std::sort(support.begin(), support.end());
            support.erase(std::unique(support.begin(), support.end()), support.end());
            for (std::size_t target = 1; target <= a.n(); ++target)
            {
                // Odometer over the values on the support, in lexicographic
                // order; entries off the support keep their component.
                std::vector<Digit> values(support.size(), 0);
                while (true)
                {
                    std::vector<Digit> table(a.size());
                    for (Index x = 0; x < a.size(); ++x)
                        table[x] = a.digit(x, target);
                    for (std::size_t k = 0; k < support.size(); ++k)
                        table[support[k]] = values[k];
                    if (auto r = offer(target, std::move(table)))
                        return std::move(*r);
                    std::size_t k = support.size();
                    while (k > 0 && values[k - 1] + 1 == a.s())
                        values[--k] = 0;
                    if (k == 0)
                        break;
                    ++values[k - 1];
                }
            }
        }
        level_begin = level_end;
        if (level_begin == nodes.size())
            break;
    }
    throw Error(ErrorKind::NotFound, "no program of length at most " + std::to_string(options.max_len));
}

enum class CompilerKind
{
    Benes,
    General5,
    General4Sorted,
    General4Flex,
    Linear,
};

inline constexpr std::string_view compiler_name(CompilerKind c) noexcept
{
    switch (c)
    {
    case CompilerKind::Benes: return "benes";
    case CompilerKind::General5: return "general5";
    case CompilerKind::General4Sorted: return "general4-sorted";
    case CompilerKind::General4Flex: return "general4-flex";
    case CompilerKind::Linear: return "linear";
    }
    return "unknown";
}

inline std::optional<CompilerKind> parse_compiler(std::string_view name)
{
    for (auto c : {CompilerKind::Benes, CompilerKind::General5, CompilerKind::General4Sorted,
                   CompilerKind::General4Flex, CompilerKind::Linear})
        if (compiler_name(c) == name)
            return c;
    return std::nullopt;
}

// Signature every compiler emits before identity steps are considered: a walk
// 1..n..1..n... with the given number of legs, turning points shared.
inline Signature zigzag_signature(std::size_t n, std::size_t legs)
{
    Signature sig{1};
    for (std::size_t leg = 0; leg < legs; ++leg)
    {
        if (leg % 2 == 0)
            for (std::size_t i = 2; i <= n; ++i)
                sig.push_back(i);
        else
            for (std::size_t i = n - 1; i >= 1; --i)
                sig.push_back(i);
    }
    return sig;
}

inline Signature expected_signature(CompilerKind c, std::size_t n)
{
    switch (c)
    {
    case CompilerKind::Benes:
    case CompilerKind::Linear: return zigzag_signature(n, 2);
    case CompilerKind::General5: return zigzag_signature(n, 5);
    case CompilerKind::General4Sorted:
    case CompilerKind::General4Flex: return zigzag_signature(n, 4);
    }
    return {};
}

inline std::size_t length_bound(CompilerKind c, std::size_t n)
{
    switch (c)
    {
    case CompilerKind::Benes:
    case CompilerKind::Linear: return 2 * n - 1;
    case CompilerKind::General5: return 5 * n - 4;
    case CompilerKind::General4Sorted:
    case CompilerKind::General4Flex: return 4 * n - 3;
    }
    return 0;
}

inline Program compile_with(CompilerKind c, const Mapping &e)
{
    switch (c)
    {
    case CompilerKind::Benes: return route_bijection(e);
    case CompilerKind::General5: return compile_5n(e);
    case CompilerKind::General4Sorted: return compile_4n_sorted(e);
    case CompilerKind::General4Flex: return compile_4n_flexible(e);
    case CompilerKind::Linear: break;
    }
    throw Error(ErrorKind::InvalidArgument, "the linear compiler takes a matrix, not a mapping");
}

struct SuiteOptions
{
    // 0 enumerates every input; otherwise this many seeded random inputs.
    std::uint64_t sample = 0;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    // Linear cases whose state space exceeds this are path-checked on
    // sampled vectors instead of dense tables.
    Index dense_limit = Index{1} << 12;
    std::size_t sampled_vectors = 256;
};

struct SuiteReport
{
    CompilerKind compiler = CompilerKind::Benes;
    Index s = 0;
    std::size_t n = 0;
    bool exhaustive = false;
    std::uint64_t seed = 0;
    std::uint64_t cases = 0;
    std::uint64_t failures = 0;
    std::size_t bound = 0;
    std::size_t max_length = 0;
    std::map<std::size_t, std::uint64_t> length_histogram;
    // First few failures, "case <k>: <reason>".
    std::vector<std::string> failure_samples;

    bool ok() const { return failures == 0; }

    // key=value lines; histogram as length:count pairs joined by commas.
    std::string to_text() const
    {
        std::ostringstream out;
        out << "compiler=" << compiler_name(compiler) << '\n';
        out << "s=" << s << '\n';
        out << "n=" << n << '\n';
        out << "mode=" << (exhaustive ? "exhaustive" : "sample") << '\n';
        out << "seed=" << seed << '\n';
        out << "cases=" << cases << '\n';
        out << "failures=" << failures << '\n';
        out << "bound=" << bound << '\n';
        out << "max_length=" << max_length << '\n';
        out << "length_histogram=";
        bool first = true;
        for (const auto &[len, count] : length_histogram)
        {
            out << (first ? "" : ",") << len << ':' << count;
            first = false;
        }
        out << '\n';
        for (const auto &f : failure_samples)
            out << "failure=" << f << '\n';
        out << "result=" << (ok() ? "PASS" : "FAIL") << '\n';
        return out.str();
    }
};

namespace detail
{

inline constexpr std::size_t kFailureSamples = 10;
inline constexpr std::uint64_t kExhaustiveLimit = std::uint64_t{1} << 24;

// Number of inputs an exhaustive run would visit, saturating at the limit.
inline std::uint64_t exhaustive_count(CompilerKind c, const Alphabet &a)
{
    std::uint64_t count = 1;
    auto times = [&](std::uint64_t f) {
        count = count > kExhaustiveLimit / f ? kExhaustiveLimit + 1 : count * f;
    };
    if (c == CompilerKind::Linear)
    {
        for (std::size_t k = 0; k < a.n() * a.n(); ++k)
            times(a.s());
    }
    else if (c == CompilerKind::Benes)
    {
        for (Index k = 2; k <= a.size() && count <= kExhaustiveLimit; ++k)
            times(k);
    }
    else
    {
        for (Index k = 0; k < a.size() && count <= kExhaustiveLimit; ++k)
            times(a.size());
    }
    return count;
}

// k-th mapping in lexicographic order of image lists (input 0 most significant).
inline Mapping nth_mapping(const Alphabet &a, std::uint64_t k)
{
    std::vector<Index> images(a.size());
    for (Index x = a.size(); x-- > 0;)
    {
        images[x] = k % a.size();
        k /= a.size();
    }
    return Mapping(a, std::move(images));
}

// k-th permutation in lexicographic order (factorial number system).
inline Mapping nth_bijection(const Alphabet &a, std::uint64_t k)
{
    std::vector<Index> pool(a.size());
    for (Index x = 0; x < a.size(); ++x)
        pool[x] = x;
    std::vector<std::uint64_t> digits(a.size());
    for (Index radix = 1; radix <= a.size(); ++radix)
    {
        digits[a.size() - radix] = k % radix;
        k /= radix;
    }
    std::vector<Index> images;
    images.reserve(a.size());
    for (Index x = 0; x < a.size(); ++x)
    {
        images.push_back(pool[digits[x]]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(digits[x]));
    }
    return Mapping(a, std::move(images));
}

inline MatrixMod nth_matrix(const ModRing &ring, std::size_t n, std::uint64_t k)
{
    Residues entries(n * n);
    for (std::size_t i = n * n; i-- > 0;)
    {
        entries[i] = k % ring.modulus();
        k /= ring.modulus();
    }
    return MatrixMod(ring, n, std::move(entries));
}

struct CaseResult
{
    std::size_t length = 0;
    std::string failure;
};

inline CaseResult check_mapping_case(CompilerKind c, const Mapping &e)
{
    CaseResult r;
    try
    {
        const Program p = compile_with(c, e);
        r.length = p.length();
        const std::size_t n = e.alphabet().n();
        if (p.length() > length_bound(c, n))
            return r.failure = "length " + std::to_string(p.length()) + " exceeds bound", r;
        if (p.signature() != expected_signature(c, n))
            return r.failure = "unexpected signature", r;
        if (const auto x = first_mismatch(p, e))
            return r.failure = "execution differs at input " + std::to_string(*x), r;
        const RoutingReport v = verify(routing_of(p), e);
        if (!v.performs)
            return r.failure = "routing does not perform the mapping", r;
        if (!v.multicast_inverse)
            return r.failure = "backward reading does not multicast the inverse", r;
        if (e.is_bijective() && !v.vertex_disjoint)
            return r.failure = "bijection routed with shared vertices", r;
    }
    catch (const Error &err)
    {
        r.failure = err.what();
    }
    return r;
}

inline CaseResult check_linear_case(const MatrixMod &m, std::uint64_t case_seed, const SuiteOptions &options)
{
    CaseResult r;
    try
    {
        const LinearProgram p = decompose(m);
        r.length = p.length();
        const std::size_t n = m.n();
        if (p.length() > length_bound(CompilerKind::Linear, n))
            return r.failure = "length " + std::to_string(p.length()) + " exceeds bound", r;
        if (p.signature() != expected_signature(CompilerKind::Linear, n))
            return r.failure = "unexpected signature", r;
        if (!(p.matrix() == m))
            return r.failure = "factor product differs from the matrix", r;

        const Alphabet a(m.ring().modulus(), n);
        if (a.size() <= options.dense_limit)
        {
            const Program dense = to_in_situ(p);
            const Mapping e = mapping_of(m);
            if (const auto x = first_mismatch(dense, e))
                return r.failure = "execution differs at input " + std::to_string(*x), r;
            if (!verify(routing_of(dense), e).performs)
                return r.failure = "routing does not perform the matrix", r;
        }
        else
        {
            Rng rng(case_seed);
            std::vector<Index> inputs(options.sampled_vectors);
            for (auto &x : inputs)
                x = rng.below(a.size());
            auto as_residues = [&](Index x) {
                const Vector v = a.vector_of(x);
                return Residues(v.begin(), v.end());
            };
            auto choose = [&](std::size_t t, Index x) { return p.factors()[t].evaluate(as_residues(x)); };
            auto expected = [&](Index x) {
                const Residues y = m.apply(as_residues(x));
                return a.index_of(Vector(y.begin(), y.end()));
            };
            if (!performs_on(Min(a, p.signature()), choose, expected, inputs))
                return r.failure = "sampled path check failed", r;
        }
    }
    catch (const Error &err)
    {
        r.failure = err.what();
    }
    return r;
}

} // namespace detail

// Case k of a sampled run is drawn from Rng(case_seed(seed, k)), so results
// do not depend on the thread count.
inline SuiteReport exhaustive_suite(const Alphabet &alphabet, CompilerKind compiler, const SuiteOptions &options = {})
{
    SuiteReport report;
    report.compiler = compiler;
    report.s = alphabet.s();
    report.n = alphabet.n();
    report.seed = options.seed;
    report.bound = length_bound(compiler, alphabet.n());
    report.exhaustive = options.sample == 0;
    if (report.exhaustive)
    {
        report.cases = detail::exhaustive_count(compiler, alphabet);
        if (report.cases > detail::kExhaustiveLimit)
            throw Error(ErrorKind::BudgetExceeded, "too many inputs for an exhaustive run; use a sample");
    }
    else
    {
        report.cases = options.sample;
    }
    const ModRing ring(alphabet.s());

    auto run_case = [&](std::uint64_t k) {
        const std::uint64_t seed = case_seed(options.seed, k);
        if (compiler == CompilerKind::Linear)
        {
            const MatrixMod m =
                report.exhaustive ? detail::nth_matrix(ring, alphabet.n(), k) : [&] {
                    Rng rng(seed);
                    return random_matrix(ring, alphabet.n(), rng);
                }();
            return detail::check_linear_case(m, seed ^ 0x5bd1e995ull, options);
        }
        Mapping e = [&] {
            if (report.exhaustive)
                return compiler == CompilerKind::Benes ? detail::nth_bijection(alphabet, k)
                                                       : detail::nth_mapping(alphabet, k);
            Rng rng(seed);
            return compiler == CompilerKind::Benes ? random_bijection(alphabet, rng) : random_mapping(alphabet, rng);
        }();
        return detail::check_mapping_case(compiler, e);
    };

    std::vector<detail::CaseResult> results(report.cases);
    const unsigned workers =
        static_cast<unsigned>(std::clamp<std::uint64_t>(options.threads, 1, std::max<std::uint64_t>(report.cases, 1)));
    if (workers == 1)
    {
        for (std::uint64_t k = 0; k < report.cases; ++k)
            results[k] = run_case(k);
    }
    else
    {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::uint64_t k = w; k < report.cases; k += workers)
                    results[k] = run_case(k);
            });
        for (auto &t : pool)
            t.join();
    }

    for (std::uint64_t k = 0; k < report.cases; ++k)
    {
        const auto &r = results[k];
        ++report.length_histogram[r.length];
        report.max_length = std::max(report.max_length, r.length);
        if (!r.failure.empty())
        {
            ++report.failures;
            if (report.failure_samples.size() < detail::kFailureSamples)
                report.failure_samples.push_back("case " + std::to_string(k) + ": " + r.failure);
        }
    }
    return report;
}

} // namespace insitu

#endif
