#ifndef INSITU_BLOCKSEQ_HPP
#define INSITU_BLOCKSEQ_HPP

// The flexible 4n-3 method over {0,1}. Pre-image classes are laid out along
// a block-sequence of their sizes, which makes I_P suffix-compatible; I_P can
// then be fused with the first butterfly leg of F into n assignments.

#include "insitu/benes.hpp"
#include "insitu/core.hpp"
#include "insitu/factor.hpp"

#include <bit>
#include <cstddef>
#include <deque>
#include <map>
#include <span>
#include <vector>

namespace insitu
{

namespace detail
{

inline std::size_t log2_length(std::size_t length)
{
    if (length == 0 || !std::has_single_bit(length))
        throw Error(ErrorKind::BadLength, "length " + std::to_string(length) + " is not a power of two");
    return static_cast<std::size_t>(std::countr_zero(length));
}

} // namespace detail

// Every aligned block of size 2^i sums to a multiple of 2^i.
inline bool is_block_sequence(std::span<const Index> values)
{
    const std::size_t levels = detail::log2_length(values.size());
    for (std::size_t i = 1; i <= levels; ++i)
    {
        const std::size_t block = std::size_t{1} << i;
        for (std::size_t start = 0; start < values.size(); start += block)
        {
            Index sum = 0;
            for (std::size_t l = start; l < start + block; ++l)
                sum += values[l];
            if (sum % block != 0)
                return false;
        }
    }
    return true;
}

// Node (level i, position j) of the pairing tree is the aligned block
// [j*2^i, (j+1)*2^i); its value is the block sum divided by 2^i.
struct BlockSequence
{
    std::vector<Index> values;

    std::size_t levels() const { return detail::log2_length(values.size()); }

    Index node_value(std::size_t level, std::size_t position) const
    {
        const std::size_t block = std::size_t{1} << level;
        Index sum = 0;
        for (std::size_t l = position * block; l < (position + 1) * block; ++l)
            sum += values.at(l);
        return sum >> level;
    }

    friend bool operator==(const BlockSequence &, const BlockSequence &) = default;
};

struct BlockReordering
{
    BlockSequence sequence;
    // sequence.values[l] == input[permutation[l]]
    std::vector<std::size_t> permutation;
};

// Reorders 2^n non-negative integers summing to 2^n into a block-sequence by
// pairing blocks of equal parity level by level. The leftmost unpaired block
// is joined with the next unpaired block of the same parity; the merged block
// takes the position of its left part.
inline BlockReordering make_block_sequence(std::span<const Index> values)
{
    const std::size_t levels = detail::log2_length(values.size());
    Index total = 0;
    for (Index v : values)
        total += v;
    if (total != values.size())
        throw Error(ErrorKind::BadSum, "values sum to " + std::to_string(total) + ", expected " +
                                           std::to_string(values.size()));

    struct Block
    {
        Index value;
        std::vector<std::size_t> leaves;
    };
    std::vector<Block> blocks;
    blocks.reserve(values.size());
    for (std::size_t l = 0; l < values.size(); ++l)
        blocks.push_back({values[l], {l}});

    for (std::size_t level = 0; level < levels; ++level)
    {
        std::deque<std::size_t> unpaired[2];
        for (std::size_t b = 0; b < blocks.size(); ++b)
            unpaired[blocks[b].value % 2].push_back(b);
        std::vector<bool> taken(blocks.size(), false);
        std::vector<Block> next;
        next.reserve(blocks.size() / 2);
        for (std::size_t b = 0; b < blocks.size(); ++b)
        {
            if (taken[b])
                continue;
            auto &queue = unpaired[blocks[b].value % 2];
            queue.pop_front();
            const std::size_t partner = queue.front();
            queue.pop_front();
            taken[b] = taken[partner] = true;
            Block merged{(blocks[b].value + blocks[partner].value) / 2, std::move(blocks[b].leaves)};
            merged.leaves.insert(merged.leaves.end(), blocks[partner].leaves.begin(), blocks[partner].leaves.end());
            next.push_back(std::move(merged));
        }
        blocks = std::move(next);
    }

    BlockReordering out;
    out.permutation = std::move(blocks.front().leaves);
    for (std::size_t l : out.permutation)
        out.sequence.values.push_back(values[l]);
    return out;
}

// One flag per internal node of the complete binary tree over 2^n leaves, in
// heap order (root first, children of node k at 2k+1 and 2k+2). A set flag
// exchanges the two subtrees of that node.
using TreeChoices = std::vector<bool>;

// Position l of the permuted sequence receives leaf result[l] of the
// original. An empty choice vector leaves the order unchanged.
inline std::vector<std::size_t> block_tree_order(std::size_t levels, const TreeChoices &choices)
{
    const std::size_t leaves = std::size_t{1} << levels;
    if (!choices.empty() && choices.size() != leaves - 1)
        throw Error(ErrorKind::BadChoice, "expected " + std::to_string(leaves - 1) + " node choices, got " +
                                              std::to_string(choices.size()));
    std::vector<std::size_t> order;
    order.reserve(leaves);
    auto visit = [&](auto &&self, std::size_t node, std::size_t start, std::size_t size) -> void {
        if (size == 1)
        {
            order.push_back(start);
            return;
        }
        const std::size_t half = size / 2;
        const bool swap = !choices.empty() && choices[node];
        self(self, 2 * node + 1 + (swap ? 1 : 0), start + (swap ? half : 0), half);
        self(self, 2 * node + 2 - (swap ? 1 : 0), start + (swap ? 0 : half), half);
    };
    visit(visit, 0, 0, leaves);
    return order;
}

inline BlockSequence permute_block_tree(const BlockSequence &b, const TreeChoices &choices)
{
    const auto order = block_tree_order(b.levels(), choices);
    BlockSequence out;
    out.values.reserve(order.size());
    for (std::size_t l : order)
        out.values.push_back(b.values[l]);
    return out;
}

// For every k, inputs sharing (x_k..x_n) have images sharing (y_k..y_n).
inline bool is_suffix_compatible(const Mapping &i)
{
    const Alphabet &a = i.alphabet();
    if (a.s() != 2)
        throw Error(ErrorKind::NotBoolean, "suffix compatibility is defined over {0,1}");
    for (std::size_t k = 1; k <= a.n(); ++k)
    {
        const std::size_t shift = k - 1;
        std::vector<Index> suffix_image(a.size() >> shift, detail::kNone);
        for (Index x = 0; x < a.size(); ++x)
        {
            Index &slot = suffix_image[x >> shift];
            const Index y = i(x) >> shift;
            if (slot == detail::kNone)
                slot = y;
            else if (slot != y)
                return false;
        }
    }
    return true;
}

// Program with signature 1..n computing B o I, where B is computed by b
// (signature 1..n) and I is suffix-compatible.
inline Program compose_forward_program(const Mapping &i, const Program &b)
{
    const Alphabet &a = i.alphabet();
    if (!(b.alphabet() == a))
        throw Error(ErrorKind::DimensionMismatch, "program and mapping use different alphabets");
    Signature expected(a.n());
    for (std::size_t k = 0; k < a.n(); ++k)
        expected[k] = k + 1;
    if (b.signature() != expected)
        throw Error(ErrorKind::BadSignature, "composed program must have signature 1..n");
    if (!is_suffix_compatible(i))
        throw Error(ErrorKind::NotSuffixCompatible, "mapping is not suffix-compatible");
    auto p = detail::sweep_program(compose(execute_all(b), i));
    if (!p)
        throw Error(ErrorKind::NotSuffixCompatible, "composed butterfly program is not well defined");
    return std::move(*p);
}

namespace detail
{

inline Program flexible_boolean(const Mapping &e, const ClassOrder &slots)
{
    const Alphabet &a = e.alphabet();
    const std::size_t n = a.n();
    ClassOrder padded = slots;
    if (padded.size() > a.size())
        throw Error(ErrorKind::InvalidOrdering, "more slots than vectors");
    padded.resize(a.size());

    const PFactorisation pf = p_factorise(e, padded);
    const auto sizes = pf.partition.sizes();
    if (!is_block_sequence(sizes))
        throw Error(ErrorKind::NotBlockSequence, "class sizes along the slots do not form a block-sequence");

    const Program g = route_bijection(pf.g);
    const Program f = route_bijection(pf.f);
    const Program fused = compose_forward_program(pf.i, f.slice(0, n));
    const Program tail = f.slice(n, f.length());
    return merge_adjacent(concatenate({&g, &fused, &tail}));
}

inline Program on_boolean_components(const Mapping &e, auto &&compile_boolean)
{
    const Alphabet &a = e.alphabet();
    if (a.s() == 2)
        return compile_boolean(e);
    if (!std::has_single_bit(a.s()))
        throw Error(ErrorKind::NotBoolean, "the flexible method needs s to be a power of two");
    const std::size_t m = static_cast<std::size_t>(std::countr_zero(a.s()));
    const Mapping bits(Alphabet(2, m * a.n()), e.images());
    return regroup(compile_boolean(bits), m);
}

} // namespace detail

// Slot layout used by compile_4n_flexible: the class sizes (in increasing
// image order, padded with zeros to s^n) are arranged into a block-sequence,
// optionally permuted along its tree, and classes of equal size fill the
// slots of that size in increasing image order.
inline ClassOrder flexible_class_order(const Mapping &e, const TreeChoices &choices = {})
{
    const Alphabet &a = e.alphabet();
    a.require_dense();
    const std::vector<Index> images = e.image_set();
    std::vector<Index> class_size(a.size(), 0);
    for (Index y : e.images())
        ++class_size[y];

    std::vector<Index> values(a.size(), 0);
    for (std::size_t k = 0; k < images.size(); ++k)
        values[k] = class_size[images[k]];
    const BlockSequence arranged = permute_block_tree(make_block_sequence(values).sequence, choices);

    std::map<Index, std::deque<Index>> by_size;
    for (Index y : images)
        by_size[class_size[y]].push_back(y);
    ClassOrder order(a.size());
    for (std::size_t l = 0; l < order.size(); ++l)
    {
        const Index v = arranged.values[l];
        if (v == 0)
            continue;
        order[l] = by_size[v].front();
        by_size[v].pop_front();
    }
    return order;
}

// Length at most 4n-3, signature 1..n..1..n..1. For s = 2^m > 2 the mapping
// is compiled over {0,1}^(mn) and the program regrouped into registers of m
// bits; choices then refer to the boolean tree.
inline Program compile_4n_flexible(const Mapping &e, const TreeChoices &choices)
{
    return detail::on_boolean_components(e, [&](const Mapping &boolean) {
        return detail::flexible_boolean(boolean, flexible_class_order(boolean, choices));
    });
}

inline Program compile_4n_flexible(const Mapping &e) { return compile_4n_flexible(e, TreeChoices{}); }

// Explicit slot layout; the class sizes along the slots must form a
// block-sequence of length s^n (missing trailing slots are empty).
inline Program compile_4n_flexible(const Mapping &e, const ClassOrder &slots)
{
    return detail::on_boolean_components(
        e, [&](const Mapping &boolean) { return detail::flexible_boolean(boolean, slots); });
}

} // namespace insitu

#endif
