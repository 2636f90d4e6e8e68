#include "test_support.hpp"

#include <gtest/gtest.h>

#include <regex>
#include <sstream>

using namespace insitu;

namespace
{

std::size_t count_of(const std::string &text, const std::string &needle)
{
    std::size_t count = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + needle.size()))
        ++count;
    return count;
}

// Line-level grammar check for the subset of DOT that export_dot emits.
bool looks_like_dot(const std::string &text)
{
    static const std::regex header(R"(digraph \w+ \{)");
    static const std::regex statement(
        R"(\s*(rankdir=LR;|node \[shape=box, fontsize=10\];|subgraph \w+ \{|rank=same;|\}|)"
        R"(\w+ \[label="[0-9,]+"\];|\w+ -> \w+ \[style=(bold|dotted, color=gray)\];))");
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || !std::regex_match(line, header))
        return false;
    int depth = 1;
    while (std::getline(in, line))
    {
        if (!std::regex_match(line, statement))
            return false;
        depth += static_cast<int>(count_of(line, "{")) - static_cast<int>(count_of(line, "}"));
    }
    return depth == 0;
}

} // namespace

TEST(Min, NamedNetworks)
{
    const Alphabet a(2, 3);
    EXPECT_EQ(benes(a).signature(), (Signature{1, 2, 3, 2, 1}));
    EXPECT_EQ(benes(a).stage_count(), 6u);
    EXPECT_EQ(butterfly(a).signature(), (Signature{3, 2, 1}));
    EXPECT_EQ(reversed_butterfly(a).signature(), (Signature{1, 2, 3}));
    EXPECT_EQ(butterfly(Alphabet(2, 1)).signature(), (Signature{1}));
    const Min twice = concatenate(concatenate(reversed_butterfly(a), butterfly(a)),
                                  concatenate(reversed_butterfly(a), butterfly(a)));
    EXPECT_EQ(twice.signature(), (Signature{1, 2, 3, 3, 2, 1, 1, 2, 3, 3, 2, 1}));
}

TEST(Min, EdgesChangeOnlyTheStageComponent)
{
    const Alphabet a(3, 2);
    const Min m = min_of({2, 1}, a);
    EXPECT_EQ(m.successors(0, 4), (std::vector<Index>{1, 4, 7}));
    EXPECT_EQ(m.successors(1, 4), (std::vector<Index>{3, 4, 5}));
}

TEST(Min, RejectsBadSignature)
{
    try
    {
        min_of({1, 3}, Alphabet(2, 2));
        FAIL();
    }
    catch (const Error &e)
    {
        EXPECT_EQ(e.kind(), ErrorKind::BadSignature);
    }
}

TEST(Verify, IdentityRouting)
{
    const Alphabet a(2, 2);
    Program p(a);
    for (std::size_t c : benes_signature(2))
        p.push_back(Assignment::identity(a, c));
    const RoutingReport r = verify(routing_of(p), Mapping::identity(a));
    EXPECT_TRUE(r.performs);
    EXPECT_TRUE(r.vertex_disjoint);
    EXPECT_TRUE(r.multicast_inverse);
    EXPECT_EQ(r.merge_profile, (std::vector<Index>{0, 0, 0}));
}

TEST(Verify, BenesRoutingsAreVertexDisjoint)
{
    Rng rng(71);
    for (auto [s, n] : {std::pair<Index, std::size_t>{2, 3}, {3, 2}, {2, 4}})
        for (int trial = 0; trial < 30; ++trial)
        {
            const Mapping e = random_bijection(Alphabet(s, n), rng);
            const RoutingReport r = verify(routing_of(route_bijection(e)), e);
            EXPECT_TRUE(r.performs);
            EXPECT_TRUE(r.vertex_disjoint);
            EXPECT_TRUE(r.multicast_inverse);
        }
}

TEST(Verify, ConstantMappingMergesEveryPath)
{
    const Alphabet a(2, 3);
    const Mapping e(a, std::vector<Index>(8, 5));
    const RoutingReport r = verify(routing_of(compile_4n_sorted(e)), e);
    EXPECT_TRUE(r.performs);
    EXPECT_FALSE(r.vertex_disjoint);
    EXPECT_TRUE(r.multicast_inverse);
    EXPECT_EQ(r.occupied.back(), 1u);
    Index merges = 0;
    for (Index m : r.merge_profile)
        merges += m;
    EXPECT_EQ(merges, 7u);
}

TEST(Verify, MergesAreMonotone)
{
    Rng rng(73);
    const Alphabet a(3, 2);
    for (int trial = 0; trial < 50; ++trial)
    {
        const Mapping e = random_mapping(a, rng);
        const RoutingReport r = verify(routing_of(compile_5n(e)), e);
        EXPECT_TRUE(r.performs);
        for (std::size_t t = 0; t + 1 < r.occupied.size(); ++t)
            EXPECT_GE(r.occupied[t], r.occupied[t + 1]);
        EXPECT_EQ(r.occupied.back(), e.image_set().size());
    }
}

TEST(Verify, DetectsACorruptedChoice)
{
    const Alphabet a(2, 2);
    const Mapping e(a, {2, 0, 3, 1});
    Routing r = routing_of(route_bijection(e));
    r.chosen[1][0] ^= 1;
    const RoutingReport report = verify(r, e);
    EXPECT_FALSE(report.performs);
    EXPECT_FALSE(report.multicast_inverse);
}

TEST(Verify, RejectsMismatchedShapes)
{
    const Alphabet a(2, 2);
    const Routing r = routing_of(route_bijection(Mapping::identity(a)));
    EXPECT_THROW(verify(r, Mapping::identity(Alphabet(2, 3))), Error);
}

TEST(PerformsOn, AgreesWithDenseVerification)
{
    Rng rng(79);
    const Alphabet a(3, 3);
    const Mapping e = random_mapping(a, rng);
    const Program p = compile_4n_sorted(e);
    std::vector<Index> all(a.size());
    for (Index x = 0; x < a.size(); ++x)
        all[x] = x;
    auto choose = [&](std::size_t t, Index x) { return p[t].value(x); };
    EXPECT_TRUE(performs_on(Min(a, p.signature()), choose, [&](Index x) { return e(x); }, all));
    EXPECT_FALSE(performs_on(Min(a, p.signature()), choose, [&](Index x) { return (e(x) + 1) % a.size(); }, all));
}

TEST(ExportDot, EmptySignatureHasOneRankAndNoEdges)
{
    const Alphabet a(2, 2);
    const std::string dot = export_dot(Min(a, {}), nullptr);
    EXPECT_EQ(count_of(dot, "rank=same;"), 1u);
    EXPECT_EQ(count_of(dot, "->"), 0u);
    EXPECT_TRUE(looks_like_dot(dot));
}

TEST(ExportDot, IdentityBenesHasBoldSelfEdges)
{
    const Alphabet a(2, 2);
    Program p(a);
    for (std::size_t c : benes_signature(2))
        p.push_back(Assignment::identity(a, c));
    const Routing r = routing_of(p);
    const std::string dot = export_dot(r.network, &r);
    EXPECT_EQ(count_of(dot, "rank=same;"), 4u);
    EXPECT_EQ(count_of(dot, "[style=bold]"), 12u);
    EXPECT_NE(dot.find("t0_3 -> t1_3 [style=bold];"), std::string::npos);
    EXPECT_EQ(count_of(dot, "[style=dotted, color=gray]"), 12u);
    EXPECT_TRUE(looks_like_dot(dot));
}

TEST(ExportDot, DeterministicAndWellFormed)
{
    Rng rng(83);
    const Alphabet a(2, 3);
    const Mapping e = random_mapping(a, rng);
    const Routing r = routing_of(compile_4n_flexible(e));
    DotOptions bits;
    bits.bit_strings = true;
    const std::string first = export_dot(r.network, &r, bits);
    EXPECT_EQ(first, export_dot(r.network, &r, bits));
    EXPECT_TRUE(looks_like_dot(first));
    EXPECT_NE(first.find("t0_6 [label=\"110\"];"), std::string::npos);
}
