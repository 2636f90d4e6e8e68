#ifndef INSITU_FACTOR_HPP
#define INSITU_FACTOR_HPP

// Compilers for arbitrary mappings built on a factorisation E = F o I o G,
// where G groups each pre-image class into a block of consecutive vectors,
// I collapses each block onto one vector, and F sends those vectors to the
// final images.

#include "insitu/benes.hpp"
#include "insitu/core.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace insitu
{

// Ordered parts (P_0, ..., P_k); empty parts are allowed, the non-empty ones
// partition the index space.
struct PartitionSequence
{
    std::vector<std::vector<Index>> parts;

    std::vector<Index> sizes() const
    {
        std::vector<Index> out;
        out.reserve(parts.size());
        for (const auto &p : parts)
            out.push_back(p.size());
        return out;
    }

    bool is_partition_of(const Alphabet &alphabet) const
    {
        std::vector<bool> seen(alphabet.size(), false);
        Index total = 0;
        for (const auto &p : parts)
            for (Index x : p)
            {
                if (!alphabet.contains(x) || seen[x])
                    return false;
                seen[x] = true;
                ++total;
            }
        return total == alphabet.size();
    }
};

// I_P: X_0, X_1, ... go to |P_0| copies of X_0, then |P_1| copies of X_1, ...
inline Mapping i_of_sizes(const Alphabet &alphabet, std::span<const Index> sizes)
{
    alphabet.require_dense();
    if (sizes.size() > alphabet.size())
        throw Error(ErrorKind::SizesDoNotSum, "more parts than vectors");
    std::vector<Index> images;
    images.reserve(alphabet.size());
    for (Index l = 0; l < sizes.size(); ++l)
    {
        if (sizes[l] > alphabet.size() - images.size())
            throw Error(ErrorKind::SizesDoNotSum, "part sizes exceed s^n");
        images.insert(images.end(), sizes[l], l);
    }
    if (images.size() != alphabet.size())
        throw Error(ErrorKind::SizesDoNotSum, "part sizes sum to " + std::to_string(images.size()) +
                                                  ", expected " + std::to_string(alphabet.size()));
    return Mapping(alphabet, std::move(images));
}

inline Mapping i_of_partition(const Alphabet &alphabet, const PartitionSequence &p)
{
    const auto sizes = p.sizes();
    return i_of_sizes(alphabet, sizes);
}

// Consecutive inputs never land more than one index apart.
inline bool is_distance_compatible(const Mapping &i)
{
    for (Index a = 0; a + 1 < i.size(); ++a)
    {
        const Index u = i(a), v = i(a + 1);
        if ((u > v ? u - v : v - u) > 1)
            return false;
    }
    return true;
}

namespace detail
{

// The unique program with signature 1..n that can compute target: step i
// sends (y_1..y_(i-1), x_i..x_n) to y_i. Unconstrained entries keep their
// component. Returns nullopt when two inputs demand different values at the
// same state.
inline std::optional<Program> sweep_program(const Mapping &target)
{
    const Alphabet &a = target.alphabet();
    const std::size_t n = a.n();
    std::vector<std::vector<Digit>> tables(n, std::vector<Digit>(a.size()));
    std::vector<std::vector<bool>> fixed(n, std::vector<bool>(a.size(), false));
    for (std::size_t i = 1; i <= n; ++i)
        for (Index x = 0; x < a.size(); ++x)
            tables[i - 1][x] = a.digit(x, i);

    for (Index x = 0; x < a.size(); ++x)
    {
        const Index y = target(x);
        Index state = x;
        for (std::size_t i = 1; i <= n; ++i)
        {
            const Digit v = a.digit(y, i);
            if (fixed[i - 1][state] && tables[i - 1][state] != v)
                return std::nullopt;
            fixed[i - 1][state] = true;
            tables[i - 1][state] = v;
            state = a.with_digit(state, i, v);
        }
    }
    Program p(a);
    for (std::size_t i = 1; i <= n; ++i)
        p.push_back(Assignment(a, i, std::move(tables[i - 1])));
    return p;
}

inline Program concatenate(std::initializer_list<const Program *> parts)
{
    Program out((*parts.begin())->alphabet());
    for (const Program *p : parts)
        out.append(*p);
    return out;
}

} // namespace detail

// Signature 1..n; step i maps (y_1..y_(i-1), x_i..x_n) to y_i where y = I(x).
inline Program forward_program(const Mapping &i)
{
    i.alphabet().require_dense();
    if (!is_distance_compatible(i))
        throw Error(ErrorKind::NotDistanceCompatible, "forward butterfly program needs a distance-compatible mapping");
    auto p = detail::sweep_program(i);
    if (!p)
        throw Error(ErrorKind::NotDistanceCompatible, "forward program is not well defined");
    return std::move(*p);
}

// Signature n..1; correct on the inputs X_lo..X_hi, on which i must be
// strictly increasing. Built by completing the inverse restriction to a
// distance-compatible mapping J, then running J's forward program backwards
// along the traces of the images i(X_lo..X_hi).
inline Program backward_restricted_program(const Mapping &i, Index lo, Index hi)
{
    const Alphabet &a = i.alphabet();
    a.require_dense();
    if (lo > hi || hi >= a.size())
        throw Error(ErrorKind::IndexOutOfRange, "restriction range is not inside the index space");
    for (Index j = lo; j < hi; ++j)
        if (i(j) >= i(j + 1))
            throw Error(ErrorKind::NotOrderPreserving,
                        "mapping is not strictly increasing at input " + std::to_string(j));

    // J(y) = largest j with i(j) <= y, and lo below i(lo).
    std::vector<Index> inverse(a.size());
    Index j = lo;
    for (Index y = 0; y < a.size(); ++y)
    {
        while (j < hi && i(j + 1) <= y)
            ++j;
        inverse[y] = j;
    }
    const Program forward = forward_program(Mapping(a, std::move(inverse)));

    const std::size_t n = a.n();
    std::vector<std::vector<Digit>> tables(n, std::vector<Digit>(a.size()));
    std::vector<std::vector<bool>> fixed(n, std::vector<bool>(a.size(), false));
    for (std::size_t c = 1; c <= n; ++c)
        for (Index x = 0; x < a.size(); ++x)
            tables[c - 1][x] = a.digit(x, c);
    for (Index k = lo; k <= hi; ++k)
    {
        const auto states = forward.trace(i(k));
        for (std::size_t c = 1; c <= n; ++c)
        {
            const Index at = states[c];
            const Digit v = a.digit(states[c - 1], c);
            if (fixed[c - 1][at] && tables[c - 1][at] != v)
                throw Error(ErrorKind::NotOrderPreserving, "reversed butterfly program is not well defined");
            fixed[c - 1][at] = true;
            tables[c - 1][at] = v;
        }
    }
    Program p(a);
    for (std::size_t c = n; c >= 1; --c)
        p.push_back(Assignment(a, c, std::move(tables[c - 1])));
    return p;
}

// slot l holds either the image whose pre-image class goes there, or nothing.
using ClassOrder = std::vector<std::optional<Index>>;

// Classes of the actual images in increasing image order, no empty slots.
inline ClassOrder sorted_image_order(const Mapping &e)
{
    ClassOrder order;
    for (Index y : e.image_set())
        order.emplace_back(y);
    return order;
}

struct PFactorisation
{
    Mapping f;
    Mapping i;
    Mapping g;
    PartitionSequence partition;
    ClassOrder order;
};

// E = F o I_P o G for the partition sequence whose slot l is the pre-image
// class of order[l]. G keeps each class in increasing input order; F sends
// unused vectors to unused images, both taken in increasing order.
inline PFactorisation p_factorise(const Mapping &e, const ClassOrder &order)
{
    const Alphabet &a = e.alphabet();
    a.require_dense();
    if (order.size() > a.size())
        throw Error(ErrorKind::InvalidOrdering, "more slots than vectors");

    std::vector<std::vector<Index>> classes(a.size());
    for (Index x = 0; x < a.size(); ++x)
        classes[e(x)].push_back(x);
    std::vector<bool> placed(a.size(), false);
    PartitionSequence partition;
    for (const auto &slot : order)
    {
        if (!slot)
        {
            partition.parts.emplace_back();
            continue;
        }
        const Index y = *slot;
        if (!a.contains(y) || classes[y].empty())
            throw Error(ErrorKind::InvalidOrdering, "slot names " + std::to_string(y) + ", which is not an image");
        if (placed[y])
            throw Error(ErrorKind::InvalidOrdering, "image " + std::to_string(y) + " occupies two slots");
        placed[y] = true;
        partition.parts.push_back(classes[y]);
    }
    for (Index y = 0; y < a.size(); ++y)
        if (!classes[y].empty() && !placed[y])
            throw Error(ErrorKind::InvalidOrdering, "image " + std::to_string(y) + " has no slot");

    Mapping i = i_of_partition(a, partition);

    std::vector<Index> g(a.size());
    Index offset = 0;
    for (const auto &part : partition.parts)
        for (Index x : part)
            g[x] = offset++;

    constexpr Index unset = detail::kNone;
    std::vector<Index> f(a.size(), unset);
    std::vector<bool> used(a.size(), false);
    for (Index l = 0; l < order.size(); ++l)
        if (order[l])
        {
            f[l] = *order[l];
            used[*order[l]] = true;
        }
    Index next_image = 0;
    for (Index x = 0; x < a.size(); ++x)
    {
        if (f[x] != unset)
            continue;
        while (used[next_image])
            ++next_image;
        f[x] = next_image;
        used[next_image] = true;
    }

    return {Mapping(a, std::move(f)), std::move(i), Mapping(a, std::move(g)), std::move(partition), order};
}

// Length at most 5n-4, signature 1..n..1..n..1..n. Every slot of order must
// be non-empty.
inline Program compile_5n(const Mapping &e, const ClassOrder &order)
{
    for (const auto &slot : order)
        if (!slot)
            throw Error(ErrorKind::InvalidOrdering, "the 5n-4 method needs an ordering without empty slots");
    const PFactorisation pf = p_factorise(e, order);
    const Program g = route_bijection(pf.g);
    const Program i = forward_program(pf.i);
    const Program f = route_bijection_reflected(pf.f);
    return merge_adjacent(detail::concatenate({&g, &i, &f}));
}

inline Program compile_5n(const Mapping &e) { return compile_5n(e, sorted_image_order(e)); }

// Length at most 4n-3, signature 1..n..1..n..1. Classes are ordered by
// increasing image so that F is increasing on the vectors reached by I o G.
inline Program compile_4n_sorted(const Mapping &e)
{
    const ClassOrder order = sorted_image_order(e);
    const PFactorisation pf = p_factorise(e, order);
    const Index last = order.size() - 1;
    const Program g = route_bijection(pf.g);
    const Program i = forward_program(pf.i);
    const Program f = backward_restricted_program(pf.f, 0, last);
    return merge_adjacent(detail::concatenate({&g, &i, &f}));
}

} // namespace insitu

#endif
