#ifndef INSITU_MINSIM_HPP
#define INSITU_MINSIM_HPP

// Multistage interconnection networks. A signature i_1..i_m induces the MIN
// A_(i_1) | ... | A_(i_m) over m+1 copies of S^n, where A_i joins each
// vector to the s vectors differing from it only in component i. A program
// with that signature routes the MIN by choosing, at every stage and vertex,
// the new value of component i_t.

#include "insitu/core.hpp"

#include <cstddef>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace insitu
{

class Min
{
  public:
    Min(Alphabet alphabet, Signature signature) : alphabet_(std::move(alphabet)), signature_(std::move(signature))
    {
        for (std::size_t c : signature_)
            if (c < 1 || c > alphabet_.n())
                throw Error(ErrorKind::BadSignature, "signature entry " + std::to_string(c) + " is not in [1, n]");
    }

    const Alphabet &alphabet() const noexcept { return alphabet_; }
    const Signature &signature() const noexcept { return signature_; }
    std::size_t stage_count() const noexcept { return signature_.size() + 1; }

    // Vertices of stage t+1 adjacent to vertex x of stage t.
    std::vector<Index> successors(std::size_t t, Index x) const
    {
        const std::size_t c = signature_.at(t);
        std::vector<Index> out;
        out.reserve(alphabet_.s());
        for (Index v = 0; v < alphabet_.s(); ++v)
            out.push_back(alphabet_.with_digit(x, c, static_cast<Digit>(v)));
        return out;
    }

    friend bool operator==(const Min &a, const Min &b) { return a.alphabet_ == b.alphabet_ && a.signature_ == b.signature_; }

  private:
    Alphabet alphabet_;
    Signature signature_;
};

inline Min min_of(const Signature &signature, const Alphabet &alphabet) { return Min(alphabet, signature); }

// B = A_n | ... | A_1
inline Min butterfly(const Alphabet &alphabet)
{
    Signature sig;
    for (std::size_t i = alphabet.n(); i >= 1; --i)
        sig.push_back(i);
    return Min(alphabet, sig);
}

// B^-1 = A_1 | ... | A_n
inline Min reversed_butterfly(const Alphabet &alphabet)
{
    Signature sig;
    for (std::size_t i = 1; i <= alphabet.n(); ++i)
        sig.push_back(i);
    return Min(alphabet, sig);
}

// B^-1 | B with the two middle A_n merged.
inline Min benes(const Alphabet &alphabet) { return Min(alphabet, benes_signature(alphabet.n())); }

// Identifies the last stage of a with the first stage of b.
inline Min concatenate(const Min &a, const Min &b)
{
    if (!(a.alphabet() == b.alphabet()))
        throw Error(ErrorKind::DimensionMismatch, "cannot concatenate networks over different alphabets");
    Signature sig = a.signature();
    sig.insert(sig.end(), b.signature().begin(), b.signature().end());
    return Min(a.alphabet(), sig);
}

// chosen[t][x] is the new value of component signature[t] for vertex x of
// stage t.
struct Routing
{
    Min network;
    std::vector<std::vector<Digit>> chosen;

    Index next(std::size_t t, Index x) const
    {
        return network.alphabet().with_digit(x, network.signature()[t], chosen[t][x]);
    }
};

inline Routing routing_of(const Program &p)
{
    Routing r{Min(p.alphabet(), p.signature()), {}};
    r.chosen.reserve(p.length());
    for (const auto &a : p.assignments())
        r.chosen.push_back(a.table());
    return r;
}

struct RoutingReport
{
    // Every input's path ends at E(X).
    bool performs = false;
    // No two paths share a vertex at any stage.
    bool vertex_disjoint = false;
    // Reading chosen edges backwards from each output Y reaches exactly the
    // inputs E^-1(Y) at stage 0.
    bool multicast_inverse = false;
    // Distinct vertices on paths at stages 0..m.
    std::vector<Index> occupied;
    // Paths that coalesced into another path at stages 1..m.
    std::vector<Index> merge_profile;
};

inline RoutingReport verify(const Routing &r, const Mapping &e)
{
    const Alphabet &a = r.network.alphabet();
    if (!(a == e.alphabet()))
        throw Error(ErrorKind::DimensionMismatch, "routing and mapping use different alphabets");
    const std::size_t m = r.network.signature().size();
    if (r.chosen.size() != m)
        throw Error(ErrorKind::DimensionMismatch, "routing has the wrong number of stages");
    for (const auto &stage : r.chosen)
        if (stage.size() != a.size())
            throw Error(ErrorKind::DimensionMismatch, "routing stage does not cover every vertex");

    RoutingReport report;
    std::vector<Index> position(a.size());
    for (Index x = 0; x < a.size(); ++x)
        position[x] = x;
    std::vector<char> mark(a.size());
    auto count_occupied = [&] {
        std::fill(mark.begin(), mark.end(), 0);
        Index distinct = 0;
        for (Index v : position)
            if (!mark[v])
            {
                mark[v] = 1;
                ++distinct;
            }
        return distinct;
    };
    report.occupied.push_back(count_occupied());
    for (std::size_t t = 0; t < m; ++t)
    {
        for (auto &v : position)
            v = r.next(t, v);
        report.occupied.push_back(count_occupied());
        report.merge_profile.push_back(report.occupied[t] - report.occupied[t + 1]);
    }

    report.performs = true;
    for (Index x = 0; x < a.size(); ++x)
        if (position[x] != e(x))
            report.performs = false;
    report.vertex_disjoint = true;
    for (Index k : report.occupied)
        if (k != a.size())
            report.vertex_disjoint = false;

    // Backward reading: label every vertex with the output its chosen edges
    // lead to, from the last stage down to the first.
    std::vector<Index> label(a.size());
    for (Index y = 0; y < a.size(); ++y)
        label[y] = y;
    for (std::size_t t = m; t-- > 0;)
    {
        std::vector<Index> previous(a.size());
        for (Index x = 0; x < a.size(); ++x)
            previous[x] = label[r.next(t, x)];
        label = std::move(previous);
    }
    report.multicast_inverse = true;
    for (Index x = 0; x < a.size(); ++x)
        if (label[x] != e(x))
            report.multicast_inverse = false;
    return report;
}

// Path check for networks too large for dense routing tables. choose(t, x)
// is the new value of component signature[t] at vertex x of stage t; every
// listed input must reach expected(x).
template <class Choose, class Expected>
bool performs_on(const Min &network, Choose &&choose, Expected &&expected, std::span<const Index> inputs)
{
    const Alphabet &a = network.alphabet();
    for (Index x : inputs)
    {
        Index v = x;
        for (std::size_t t = 0; t < network.signature().size(); ++t)
            v = a.with_digit(v, network.signature()[t], static_cast<Digit>(choose(t, v)));
        if (v != static_cast<Index>(expected(x)))
            return false;
    }
    return true;
}

struct DotOptions
{
    // Label vertices by their components x_n..x_1 instead of their index.
    bool bit_strings = false;
    // Also draw the edges the routing does not use.
    bool all_edges = true;
};

// Layered Graphviz digraph: one rank per stage, vertex ids "t<stage>_<index>".
// Chosen edges are bold, the others dotted grey. routing may be null.
inline std::string export_dot(const Min &network, const Routing *routing, const DotOptions &options = {})
{
    const Alphabet &a = network.alphabet();
    a.require_dense();
    auto label = [&](Index x) {
        if (!options.bit_strings)
            return std::to_string(x);
        std::string out;
        for (std::size_t i = a.n(); i >= 1; --i)
        {
            out += std::to_string(a.digit(x, i));
            if (a.s() > 10 && i > 1)
                out += ',';
        }
        return out;
    };
    auto id = [](std::size_t t, Index x) { return "t" + std::to_string(t) + "_" + std::to_string(x); };

    std::ostringstream out;
    out << "digraph min {\n";
    out << "  rankdir=LR;\n";
    out << "  node [shape=box, fontsize=10];\n";
    for (std::size_t t = 0; t < network.stage_count(); ++t)
    {
        out << "  subgraph stage_" << t << " {\n";
        out << "    rank=same;\n";
        for (Index x = 0; x < a.size(); ++x)
            out << "    " << id(t, x) << " [label=\"" << label(x) << "\"];\n";
        out << "  }\n";
    }
    for (std::size_t t = 0; t + 1 < network.stage_count(); ++t)
        for (Index x = 0; x < a.size(); ++x)
        {
            const Index picked = routing ? routing->next(t, x) : a.size();
            for (Index v : network.successors(t, x))
            {
                if (v == picked)
                    out << "  " << id(t, x) << " -> " << id(t + 1, v) << " [style=bold];\n";
                else if (options.all_edges)
                    out << "  " << id(t, x) << " -> " << id(t + 1, v) << " [style=dotted, color=gray];\n";
            }
        }
    out << "}\n";
    return out.str();
}

} // namespace insitu

#endif
