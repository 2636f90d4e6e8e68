#ifndef INSITU_BENES_HPP
#define INSITU_BENES_HPP

// Bijections S^n -> S^n as in-situ programs of length 2n-1 with signature
// 1, 2, ..., n, ..., 2, 1, i.e. routings of the s-ary Benes network.
//
// The first assignment rewrites x_1 with a colour taken from a proper
// s-edge-colouring of the bipartite multigraph joining input suffixes
// (x_2..x_n) to output suffixes. Each colour class is a perfect matching,
// hence a bijection of S^(n-1) that is routed recursively on components
// 2..n while x_1 holds the colour. The last assignment writes the final x_1.

#include "insitu/core.hpp"

#include <cstddef>
#include <limits>
#include <vector>

namespace insitu
{

struct SuffixEdge
{
    Index left;
    Index right;
    Index input;
};

struct SuffixGraph
{
    Index degree = 0;
    Index left_count = 0;
    Index right_count = 0;
    std::vector<SuffixEdge> edges;
};

// One edge per input X: from suffix(X) to suffix(E(X)). Edge ids equal input
// indices.
inline SuffixGraph suffix_graph(const Mapping &e)
{
    const Alphabet &a = e.alphabet();
    SuffixGraph g;
    g.degree = a.s();
    g.left_count = a.size() / a.s();
    g.right_count = g.left_count;
    g.edges.reserve(a.size());
    for (Index x = 0; x < a.size(); ++x)
        g.edges.push_back({x / a.s(), e(x) / a.s(), x});
    return g;
}

namespace detail
{

inline constexpr Index kNone = std::numeric_limits<Index>::max();

inline std::vector<std::vector<Index>> left_adjacency(const SuffixGraph &g, const std::vector<Digit> &colors,
                                                      Digit uncolored)
{
    std::vector<std::vector<Index>> adj(g.left_count);
    for (Index id = 0; id < g.edges.size(); ++id)
        if (colors[id] == uncolored)
            adj[g.edges[id].left].push_back(id);
    return adj;
}

// 2-regular case: the multigraph splits into even cycles, coloured alternately.
inline std::vector<Digit> color_by_cycles(const SuffixGraph &g)
{
    constexpr Digit unset = std::numeric_limits<Digit>::max();
    std::vector<std::vector<Index>> left(g.left_count), right(g.right_count);
    for (Index id = 0; id < g.edges.size(); ++id)
    {
        left[g.edges[id].left].push_back(id);
        right[g.edges[id].right].push_back(id);
    }
    auto other = [](const std::vector<Index> &pair, Index id) { return pair[0] == id ? pair[1] : pair[0]; };

    std::vector<Digit> color(g.edges.size(), unset);
    for (Index start = 0; start < g.edges.size(); ++start)
    {
        if (color[start] != unset)
            continue;
        Index cur = start;
        while (true)
        {
            color[cur] = 0;
            const Index across = other(right[g.edges[cur].right], cur);
            if (color[across] != unset)
                break;
            color[across] = 1;
            cur = other(left[g.edges[across].left], across);
            if (color[cur] != unset)
                break;
        }
    }
    return color;
}

// Perfect matching of a regular bipartite multigraph restricted to the edges
// listed in adj (Kuhn's augmenting paths, iterative). Returns matched edge ids.
inline std::vector<Index> perfect_matching(const SuffixGraph &g, const std::vector<std::vector<Index>> &adj)
{
    struct Frame
    {
        Index vertex;
        std::size_t next;
        Index via;
    };
    std::vector<Index> matched_edge(g.right_count, kNone);
    std::vector<Index> visited(g.right_count, kNone);
    std::vector<Frame> stack;

    for (Index u = 0; u < g.left_count; ++u)
    {
        stack.clear();
        stack.push_back({u, 0, kNone});
        bool augmented = false;
        while (!stack.empty() && !augmented)
        {
            Frame &top = stack.back();
            if (top.next == adj[top.vertex].size())
            {
                stack.pop_back();
                continue;
            }
            const Index id = adj[top.vertex][top.next++];
            const Index r = g.edges[id].right;
            if (visited[r] == u)
                continue;
            visited[r] = u;
            top.via = id;
            if (matched_edge[r] == kNone)
            {
                for (const Frame &f : stack)
                    matched_edge[g.edges[f.via].right] = f.via;
                augmented = true;
            }
            else
            {
                stack.push_back({g.edges[matched_edge[r]].left, 0, kNone});
            }
        }
        if (!augmented)
            throw Error(ErrorKind::NotRegular, "no perfect matching; graph is not regular");
    }
    return matched_edge;
}

inline std::vector<Digit> color_by_matchings(const SuffixGraph &g)
{
    constexpr Digit unset = std::numeric_limits<Digit>::max();
    std::vector<Digit> color(g.edges.size(), unset);
    for (Index c = 0; c < g.degree; ++c)
    {
        const auto adj = left_adjacency(g, color, unset);
        for (Index id : perfect_matching(g, adj))
            color[id] = static_cast<Digit>(c);
    }
    return color;
}

} // namespace detail

// Proper edge colouring with colours [0, degree); each colour class is a
// perfect matching. Deterministic: vertices and parallel edges are visited in
// increasing id order.
inline std::vector<Digit> edge_color(const SuffixGraph &g)
{
    if (g.left_count != g.right_count || g.edges.size() != g.left_count * g.degree)
        throw Error(ErrorKind::NotRegular, "edge count does not match a regular bipartite graph");
    std::vector<Index> left_deg(g.left_count, 0), right_deg(g.right_count, 0);
    for (const auto &edge : g.edges)
    {
        if (edge.left >= g.left_count || edge.right >= g.right_count)
            throw Error(ErrorKind::IndexOutOfRange, "edge endpoint out of range");
        ++left_deg[edge.left];
        ++right_deg[edge.right];
    }
    for (Index v = 0; v < g.left_count; ++v)
        if (left_deg[v] != g.degree || right_deg[v] != g.degree)
            throw Error(ErrorKind::NotRegular, "vertex " + std::to_string(v) + " does not have degree " +
                                                   std::to_string(g.degree));
    if (g.degree == 1)
        return std::vector<Digit>(g.edges.size(), 0);
    if (g.degree == 2)
        return detail::color_by_cycles(g);
    return detail::color_by_matchings(g);
}

namespace detail
{

inline Program route(const Mapping &e)
{
    const Alphabet &a = e.alphabet();
    const Index s = a.s();
    if (a.n() == 1)
    {
        Program p(a);
        p.push_back(Assignment::from_function(a, 1, [&](Index x) { return e(x); }));
        return p;
    }

    const SuffixGraph g = suffix_graph(e);
    const std::vector<Digit> colors = edge_color(g);

    const Alphabet sub(s, a.n() - 1);
    std::vector<std::vector<Index>> residual(s, std::vector<Index>(sub.size()));
    for (Index x = 0; x < a.size(); ++x)
        residual[colors[x]][x / s] = e(x) / s;
    std::vector<Program> inner;
    inner.reserve(s);
    for (Index c = 0; c < s; ++c)
        inner.push_back(route(Mapping(sub, std::move(residual[c]))));

    Program p(a);
    p.push_back(Assignment(a, 1, colors));
    const std::size_t middle = inner.front().length();
    for (std::size_t k = 0; k < middle; ++k)
    {
        const std::size_t target = inner.front()[k].target() + 1;
        p.push_back(Assignment::from_function(
            a, target, [&](Index x) { return inner[a.digit(x, 1)][k].value(x / s); }));
    }
    std::vector<Digit> last(a.size());
    for (Index x = 0; x < a.size(); ++x)
        last[colors[x] + s * (e(x) / s)] = static_cast<Digit>(e(x) % s);
    p.push_back(Assignment(a, 1, std::move(last)));
    return p;
}

} // namespace detail

// Exactly 2n-1 assignments (some may be identities) with signature
// 1..n..1 whose execution equals e.
inline Program route_bijection(const Mapping &e)
{
    e.alphabet().require_dense();
    if (!e.is_bijective())
        throw Error(ErrorKind::NotBijective, "Benes routing needs a bijective mapping");
    return detail::route(e);
}

// Reflects a program through the component reversal x_i <-> x_(n+1-i).
// Routing the reflected mapping and reflecting back turns signature 1..n..1
// into n..1..n.
inline Program reflect_components(const Program &p)
{
    const Alphabet &a = p.alphabet();
    const std::size_t n = a.n();
    auto reverse_index = [&](Index x) {
        Index y = 0;
        for (std::size_t i = 1; i <= n; ++i)
            y += static_cast<Index>(a.digit(x, i)) * a.weight(n + 1 - i);
        return y;
    };
    Program out(a);
    for (const auto &asg : p.assignments())
        out.push_back(Assignment::from_function(a, n + 1 - asg.target(),
                                                [&](Index x) { return asg.value(reverse_index(x)); }));
    return out;
}

inline Mapping reflect_components(const Mapping &e)
{
    const Alphabet &a = e.alphabet();
    auto reverse_index = [&](Index x) {
        Index y = 0;
        for (std::size_t i = 1; i <= a.n(); ++i)
            y += static_cast<Index>(a.digit(x, i)) * a.weight(a.n() + 1 - i);
        return y;
    };
    std::vector<Index> images(a.size());
    for (Index x = 0; x < a.size(); ++x)
        images[x] = reverse_index(e(reverse_index(x)));
    return Mapping(a, std::move(images));
}

// Signature n..1..n.
inline Program route_bijection_reflected(const Mapping &e)
{
    return reflect_components(route_bijection(reflect_components(e)));
}

} // namespace insitu

#endif
