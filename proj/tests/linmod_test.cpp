#include "test_support.hpp"

#include <gtest/gtest.h>

#include <numeric>

using namespace insitu;

namespace
{

template <class F> ErrorKind kind_of(F &&f)
{
    try
    {
        f();
    }
    catch (const Error &e)
    {
        return e.kind();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorKind::InvalidArgument;
}

// Executes the factors one row assignment at a time and compares with M x on
// random vectors.
void expect_computes(const LinearProgram &p, const MatrixMod &m, Rng &rng, int vectors)
{
    const Residue s = m.ring().modulus();
    for (int t = 0; t < vectors; ++t)
    {
        std::vector<std::uint64_t> x(m.n());
        for (auto &v : x)
            v = rng.below(s);
        std::vector<std::uint64_t> y = x;
        for (const auto &f : p.factors())
        {
            std::uint64_t acc = 0;
            for (std::size_t j = 0; j < m.n(); ++j)
                acc = (acc + f.coefficients()[j] * y[j]) % s;
            y[f.row() - 1] = acc;
        }
        EXPECT_EQ(y, oracle::mat_vec(m.entries(), s, x));
    }
}

Signature benes_like(std::size_t n) { return benes_signature(n); }

} // namespace

TEST(ModRing, FactorsAndInverts)
{
    const ModRing r(360);
    ASSERT_EQ(r.factorization().size(), 3u);
    EXPECT_EQ(r.factorization()[0].power, 8u);
    EXPECT_EQ(r.factorization()[1].power, 9u);
    EXPECT_EQ(r.factorization()[2].power, 5u);
    for (Residue a = 0; a < 360; ++a)
    {
        const auto inv = r.inverse(a);
        EXPECT_EQ(inv.has_value(), std::gcd(a, Residue{360}) == 1);
        if (inv)
        {
            EXPECT_EQ(a * *inv % 360, 1u);
        }
    }
    EXPECT_EQ(r.sub(3, 5), 358u);
    EXPECT_EQ(r.neg(0), 0u);
}

TEST(ModRing, WideModulusArithmetic)
{
    const Residue p = (Residue{1} << 61) - 1;
    const ModRing r(p);
    EXPECT_EQ(r.mul(p - 1, p - 1), 1u);
    EXPECT_EQ(r.add(p - 1, p - 1), p - 2);
    EXPECT_EQ(r.mul(*r.inverse(12345), 12345), 1u);
}

TEST(UnitMultipliers, ReachTheColumnGcdUpToAUnit)
{
    Rng rng(41);
    for (Residue s : {12u, 30u, 16u, 101u, 360u, 2u})
    {
        const ModRing ring(s);
        for (int trial = 0; trial < 300; ++trial)
        {
            const std::size_t n = 1 + rng.below(4);
            Residues xs(n);
            for (auto &v : xs)
                v = rng.below(s) * (rng.below(3) == 0 ? 0 : 1);
            Residue g = 0;
            for (Residue v : xs)
                g = std::gcd(g, v);
            if (g == 0)
                continue;
            const std::size_t i0 = 1 + rng.below(n);
            const Residues lambda = unit_multipliers(xs, i0, ring);
            EXPECT_EQ(lambda[i0 - 1], 1u);
            Residue sum = 0;
            for (std::size_t i = 0; i < n; ++i)
                sum = (sum + lambda[i] * xs[i]) % s;
            EXPECT_EQ(std::gcd(sum, s), std::gcd(g, s));
        }
    }
}

TEST(UnitMultipliers, NeedsCrtWhenNoPairSuffices)
{
    // Mod 30: x = (6, 10, 15) has gcd 1 but no single entry or pair sum with
    // x_1 is a unit.
    const ModRing ring(30);
    const Residues xs{6, 10, 15};
    const Residues lambda = unit_multipliers(xs, 1, ring);
    Residue sum = 0;
    for (std::size_t i = 0; i < 3; ++i)
        sum = (sum + lambda[i] * xs[i]) % 30;
    EXPECT_EQ(std::gcd(sum, Residue{30}), 1u);
    EXPECT_EQ(kind_of([&] { unit_multipliers(Residues{0, 0}, 1, ring); }), ErrorKind::ZeroColumn);
}

// The 2x2 example over Z/12 and its published three-step program.
TEST(Decompose, PublishedZ12Example)
{
    const ModRing ring(12);
    const MatrixMod m(ring, 2, {4, 5, 6, 4});
    const LinearProgram p = decompose(m);
    ASSERT_EQ(p.length(), 3u);
    EXPECT_EQ(p.signature(), (Signature{1, 2, 1}));
    EXPECT_EQ(p.factors()[0].coefficients(), (Residues{10, 9}));
    EXPECT_EQ(p.factors()[1].coefficients(), (Residues{3, 1}));
    EXPECT_EQ(p.factors()[2].coefficients(), (Residues{1, 11}));

    const LinearProgram printed(ring, 2,
                                {AssignmentMatrix(ring, 1, {10, 9}), AssignmentMatrix(ring, 2, {3, 1}),
                                 AssignmentMatrix(ring, 1, {1, 11})});
    for (std::uint64_t x1 = 0; x1 < 12; ++x1)
        for (std::uint64_t x2 = 0; x2 < 12; ++x2)
            EXPECT_EQ(printed.apply({x1, x2}), oracle::mat_vec({4, 5, 6, 4}, 12, {x1, x2}));
}

TEST(Decompose, RandomMatricesOverSeveralRings)
{
    Rng rng(43);
    for (Residue s : {2u, 3u, 4u, 6u, 12u, 16u, 30u, 101u, 360u})
        for (std::size_t n = 1; n <= 5; ++n)
            for (int trial = 0; trial < 30; ++trial)
            {
                const MatrixMod m = random_matrix(ModRing(s), n, rng);
                const LinearProgram p = decompose(m);
                EXPECT_EQ(p.length(), 2 * n - 1);
                EXPECT_EQ(p.signature(), benes_like(n));
                EXPECT_EQ(p.matrix(), m);
                expect_computes(p, m, rng, 10);
            }
}

TEST(Decompose, SingularAndStructuredMatrices)
{
    Rng rng(47);
    const ModRing ring(12);
    const std::vector<Residues> cases{
        {0, 0, 0, 0}, {0, 1, 0, 1}, {1, 1, 1, 1}, {0, 0, 1, 0}, {6, 4, 3, 9}, {2, 0, 0, 3}, {9, 0, 0, 9},
    };
    for (const auto &entries : cases)
    {
        const MatrixMod m(ring, 2, entries);
        const LinearProgram p = decompose(m);
        EXPECT_EQ(p.matrix(), m);
        expect_computes(p, m, rng, 20);
    }
    const MatrixMod z3(ring, 3);
    EXPECT_EQ(decompose(z3).matrix(), z3);
    EXPECT_EQ(decompose(MatrixMod::identity(ring, 4)).matrix(), MatrixMod::identity(ring, 4));
}

TEST(Product, MultipliesInFactorOrder)
{
    const ModRing ring(7);
    const std::vector<AssignmentMatrix> f{AssignmentMatrix(ring, 1, {2, 3}), AssignmentMatrix(ring, 2, {1, 5})};
    const MatrixMod p = product(ring, 2, f);
    // [[2,3],[0,1]] * [[1,0],[1,5]] = [[5,15],[1,5]]
    EXPECT_EQ(p.entries(), (Residues{5, 1, 1, 5}));
}

TEST(InvertLinearProgram, RoundTripsOverAPrimeField)
{
    Rng rng(53);
    const ModRing ring(101);
    for (int trial = 0; trial < 100; ++trial)
    {
        const std::size_t n = 1 + rng.below(6);
        const MatrixMod m = random_invertible_matrix(ring, n, rng);
        const LinearProgram p = decompose(m);
        const LinearProgram q = invert_linear_program(p);
        for (int t = 0; t < 20; ++t)
        {
            Residues x(n);
            for (auto &v : x)
                v = rng.below(101);
            EXPECT_EQ(q.apply(p.apply(x)), x);
        }
    }
}

TEST(InvertLinearProgram, RejectsNonUnitDiagonal)
{
    const ModRing ring(12);
    EXPECT_EQ(kind_of([&] { invert_linear_program(decompose(MatrixMod(ring, 2, {4, 5, 6, 4}))); }),
              ErrorKind::NotInvertible);
}

TEST(IsInvertible, AgreesWithDeterminant)
{
    Rng rng(59);
    for (Residue s : {2u, 12u, 30u, 101u})
        for (std::size_t n = 1; n <= 4; ++n)
            for (int trial = 0; trial < 50; ++trial)
            {
                const MatrixMod m = random_matrix(ModRing(s), n, rng);
                std::vector<long long> entries(m.entries().begin(), m.entries().end());
                long long det = oracle::determinant(entries, n) % static_cast<long long>(s);
                if (det < 0)
                    det += static_cast<long long>(s);
                EXPECT_EQ(is_invertible(m), std::gcd(static_cast<Residue>(det), s) == 1);
            }
}

TEST(ToInSitu, MatchesTheMatrixOnEveryVector)
{
    Rng rng(61);
    for (auto [s, n] : {std::pair<Residue, std::size_t>{12, 2}, {3, 3}, {16, 2}, {2, 4}})
    {
        const MatrixMod m = random_matrix(ModRing(s), n, rng);
        const Program p = to_in_situ(decompose(m));
        const Mapping e = mapping_of(m);
        const Alphabet a(s, n);
        for (Index x = 0; x < a.size(); ++x)
        {
            const auto y = oracle::mat_vec(m.entries(), s, oracle::digits(x, s, n));
            EXPECT_EQ(e(x), oracle::undigits(y, s));
            EXPECT_EQ(oracle::run(p, x), e(x));
        }
    }
}
