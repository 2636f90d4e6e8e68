#ifndef INSITU_LINMOD_HPP
#define INSITU_LINMOD_HPP

// Linear mappings over Z/sZ. Any n x n matrix factors into 2n-1 assignment
// matrices (identity except one row) applied along rows 1, 2, ..., n, n-1,
// ..., 1, which is an in-situ program made of linear assignments.

#include "insitu/core.hpp"

#include <cstddef>
#include <numeric>
#include <optional>
#include <tuple>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace insitu
{

using Residue = std::uint64_t;
using Residues = std::vector<Residue>;

namespace detail
{
__extension__ typedef unsigned __int128 Wide;
__extension__ typedef __int128 SignedWide;
} // namespace detail

class ModRing
{
  public:
    struct PrimePower
    {
        Residue prime;
        unsigned exponent;
        Residue power;
    };

    explicit ModRing(Residue s) : s_(s)
    {
        if (s < 2)
            throw Error(ErrorKind::InvalidArgument, "modulus must be at least 2");
        Residue rest = s;
        for (Residue p = 2; p <= rest / p; ++p)
        {
            if (rest % p != 0)
                continue;
            PrimePower pp{p, 0, 1};
            while (rest % p == 0)
            {
                rest /= p;
                ++pp.exponent;
                pp.power *= p;
            }
            factors_.push_back(pp);
        }
        if (rest > 1)
            factors_.push_back({rest, 1, rest});
    }

    Residue modulus() const noexcept { return s_; }
    const std::vector<PrimePower> &factorization() const noexcept { return factors_; }

    Residue reduce(Residue a) const noexcept { return a % s_; }
    Residue add(Residue a, Residue b) const noexcept
    {
        a %= s_;
        b %= s_;
        return a >= s_ - b ? a - (s_ - b) : a + b;
    }
    Residue sub(Residue a, Residue b) const noexcept { return add(a, s_ - b % s_); }
    Residue neg(Residue a) const noexcept { return (s_ - a % s_) % s_; }
    Residue mul(Residue a, Residue b) const noexcept
    {
        if (s_ <= kNarrow)
            return (a % s_) * (b % s_) % s_;
        return static_cast<Residue>(static_cast<detail::Wide>(a) * b % s_);
    }

    bool is_unit(Residue a) const noexcept { return std::gcd(a % s_, s_) == 1; }

    std::optional<Residue> inverse(Residue a) const
    {
        // extended Euclid on (a, s)
        detail::SignedWide r0 = s_, r1 = a % s_, t0 = 0, t1 = 1;
        while (r1 != 0)
        {
            const detail::SignedWide q = r0 / r1;
            std::tie(r0, r1) = std::pair{r1, r0 - q * r1};
            std::tie(t0, t1) = std::pair{t1, t0 - q * t1};
        }
        if (r0 != 1)
            return std::nullopt;
        if (t0 < 0)
            t0 += s_;
        return static_cast<Residue>(t0);
    }

    friend bool operator==(const ModRing &a, const ModRing &b) noexcept { return a.s_ == b.s_; }

  private:
    // Products of two residues below this bound fit 64 bits.
    static constexpr Residue kNarrow = Residue{1} << 32;

    Residue s_;
    std::vector<PrimePower> factors_;
};

class MatrixMod
{
  public:
    MatrixMod(ModRing ring, std::size_t n) : ring_(std::move(ring)), n_(n), entries_(n * n, 0) {}

    MatrixMod(ModRing ring, std::size_t n, Residues row_major) : ring_(std::move(ring)), n_(n), entries_(std::move(row_major))
    {
        if (entries_.size() != n * n)
            throw Error(ErrorKind::DimensionMismatch, "matrix needs n*n entries");
        for (auto &v : entries_)
            v = ring_.reduce(v);
    }

    static MatrixMod identity(const ModRing &ring, std::size_t n)
    {
        MatrixMod m(ring, n);
        for (std::size_t i = 1; i <= n; ++i)
            m(i, i) = 1;
        return m;
    }

    const ModRing &ring() const noexcept { return ring_; }
    std::size_t n() const noexcept { return n_; }
    const Residues &entries() const noexcept { return entries_; }

    // 1-based
    Residue &operator()(std::size_t row, std::size_t col) { return entries_[(row - 1) * n_ + (col - 1)]; }
    Residue operator()(std::size_t row, std::size_t col) const { return entries_[(row - 1) * n_ + (col - 1)]; }

    Residues apply(std::span<const Residue> x) const
    {
        if (x.size() != n_)
            throw Error(ErrorKind::DimensionMismatch, "vector length differs from n");
        Residues y(n_, 0);
        for (std::size_t i = 1; i <= n_; ++i)
            for (std::size_t j = 1; j <= n_; ++j)
                y[i - 1] = ring_.add(y[i - 1], ring_.mul((*this)(i, j), x[j - 1]));
        return y;
    }

    friend MatrixMod operator*(const MatrixMod &a, const MatrixMod &b)
    {
        if (!(a.ring_ == b.ring_) || a.n_ != b.n_)
            throw Error(ErrorKind::DimensionMismatch, "matrix product needs equal rings and sizes");
        MatrixMod c(a.ring_, a.n_);
        const ModRing &r = a.ring_;
        for (std::size_t i = 1; i <= a.n_; ++i)
            for (std::size_t k = 1; k <= a.n_; ++k)
            {
                const Residue aik = a(i, k);
                if (aik == 0)
                    continue;
                for (std::size_t j = 1; j <= a.n_; ++j)
                    c(i, j) = r.add(c(i, j), r.mul(aik, b(k, j)));
            }
        return c;
    }

    friend bool operator==(const MatrixMod &a, const MatrixMod &b)
    {
        return a.ring_ == b.ring_ && a.n_ == b.n_ && a.entries_ == b.entries_;
    }

  private:
    ModRing ring_;
    std::size_t n_;
    Residues entries_;
};

// Identity except row `row`, whose entries are `coefficients`; as an
// assignment, x_row := sum_j coefficients[j] * x_j.
class AssignmentMatrix
{
  public:
    AssignmentMatrix(ModRing ring, std::size_t row, Residues coefficients)
        : ring_(std::move(ring)), row_(row), coefficients_(std::move(coefficients))
    {
        if (row_ < 1 || row_ > coefficients_.size())
            throw Error(ErrorKind::IndexOutOfRange, "assignment row is not in [1, n]");
        for (auto &c : coefficients_)
            c = ring_.reduce(c);
    }

    static AssignmentMatrix identity(const ModRing &ring, std::size_t n, std::size_t row)
    {
        Residues c(n, 0);
        c.at(row - 1) = 1;
        return AssignmentMatrix(ring, row, std::move(c));
    }

    const ModRing &ring() const noexcept { return ring_; }
    std::size_t n() const noexcept { return coefficients_.size(); }
    std::size_t row() const noexcept { return row_; }
    const Residues &coefficients() const noexcept { return coefficients_; }
    Residue diagonal() const { return coefficients_[row_ - 1]; }

    bool is_identity() const
    {
        for (std::size_t j = 1; j <= n(); ++j)
            if (coefficients_[j - 1] != (j == row_ ? 1u : 0u))
                return false;
        return true;
    }

    MatrixMod to_matrix() const
    {
        MatrixMod m = MatrixMod::identity(ring_, n());
        for (std::size_t j = 1; j <= n(); ++j)
            m(row_, j) = coefficients_[j - 1];
        return m;
    }

    Residue evaluate(std::span<const Residue> x) const
    {
        Residue acc = 0;
        for (std::size_t j = 0; j < coefficients_.size(); ++j)
            acc = ring_.add(acc, ring_.mul(coefficients_[j], x[j]));
        return acc;
    }

    void apply_in_place(std::span<Residue> x) const { x[row_ - 1] = evaluate(x); }

    friend bool operator==(const AssignmentMatrix &a, const AssignmentMatrix &b)
    {
        return a.ring_ == b.ring_ && a.row_ == b.row_ && a.coefficients_ == b.coefficients_;
    }

  private:
    ModRing ring_;
    std::size_t row_;
    Residues coefficients_;
};

// Left-to-right matrix product factors[0] * factors[1] * ...
inline MatrixMod product(const ModRing &ring, std::size_t n, std::span<const AssignmentMatrix> factors)
{
    MatrixMod m = MatrixMod::identity(ring, n);
    for (const auto &f : factors)
    {
        if (!(f.ring() == ring) || f.n() != n)
            throw Error(ErrorKind::DimensionMismatch, "factor does not match ring or size");
        m = m * f.to_matrix();
    }
    return m;
}

// Factors in application order: factors()[0] acts first.
class LinearProgram
{
  public:
    LinearProgram(ModRing ring, std::size_t n) : ring_(std::move(ring)), n_(n) {}

    LinearProgram(ModRing ring, std::size_t n, std::vector<AssignmentMatrix> factors)
        : ring_(std::move(ring)), n_(n), factors_(std::move(factors))
    {
        for (const auto &f : factors_)
            check(f);
    }

    const ModRing &ring() const noexcept { return ring_; }
    std::size_t n() const noexcept { return n_; }
    const std::vector<AssignmentMatrix> &factors() const noexcept { return factors_; }
    std::size_t length() const noexcept { return factors_.size(); }

    void push_back(AssignmentMatrix f)
    {
        check(f);
        factors_.push_back(std::move(f));
    }

    Signature signature() const
    {
        Signature sig;
        for (const auto &f : factors_)
            sig.push_back(f.row());
        return sig;
    }

    Residues apply(Residues x) const
    {
        if (x.size() != n_)
            throw Error(ErrorKind::DimensionMismatch, "vector length differs from n");
        for (auto &v : x)
            v = ring_.reduce(v);
        for (const auto &f : factors_)
            f.apply_in_place(x);
        return x;
    }

    // The matrix of x -> apply(x), i.e. the product of the factors taken in
    // reverse application order.
    MatrixMod matrix() const
    {
        std::vector<AssignmentMatrix> reversed(factors_.rbegin(), factors_.rend());
        return product(ring_, n_, reversed);
    }

  private:
    void check(const AssignmentMatrix &f) const
    {
        if (!(f.ring() == ring_) || f.n() != n_)
            throw Error(ErrorKind::DimensionMismatch, "factor does not match ring or size");
    }

    ModRing ring_;
    std::size_t n_;
    std::vector<AssignmentMatrix> factors_;
};

namespace detail
{

inline Residue gcd_of(std::span<const Residue> xs)
{
    Residue g = 0;
    for (Residue x : xs)
        g = std::gcd(g, x);
    return g;
}

} // namespace detail

// Multipliers with lambda[i0] = 1 and sum_i lambda_i x_i in g.S*, where g is
// the gcd of the canonical representatives of xs (i0 is 1-based). Single
// index and index-pair candidates are tried first; otherwise the multipliers
// are fixed modulo each prime power of s (the indicator of i0, or of i0 and
// one i1 whose quotient x_i1/g is prime to p) and glued by Chinese
// remaindering.
inline Residues unit_multipliers(std::span<const Residue> xs, std::size_t i0, const ModRing &ring)
{
    const std::size_t n = xs.size();
    if (i0 < 1 || i0 > n)
        throw Error(ErrorKind::IndexOutOfRange, "pivot index is not in [1, n]");
    const Residue s = ring.modulus();
    Residues x(xs.begin(), xs.end());
    for (auto &v : x)
        v = ring.reduce(v);
    const Residue g = detail::gcd_of(x);
    if (g == 0)
        throw Error(ErrorKind::ZeroColumn, "all residues are zero");
    const Residue target = std::gcd(g, s);
    auto reaches_target = [&](Residue v) { return std::gcd(v, s) == target; };

    Residues lambda(n, 0);
    lambda[i0 - 1] = 1;
    if (reaches_target(x[i0 - 1]))
        return lambda;
    for (std::size_t i1 = 1; i1 <= n; ++i1)
        if (i1 != i0 && reaches_target(ring.add(x[i0 - 1], x[i1 - 1])))
        {
            lambda[i1 - 1] = 1;
            return lambda;
        }

    std::fill(lambda.begin(), lambda.end(), 0);
    for (const auto &pp : ring.factorization())
    {
        std::size_t i1 = i0;
        if ((x[i0 - 1] / g) % pp.prime == 0)
        {
            i1 = 0;
            for (std::size_t i = 1; i <= n && i1 == 0; ++i)
                if ((x[i - 1] / g) % pp.prime != 0)
                    i1 = i;
        }
        // CRT basis element: 1 mod pp.power, 0 mod the other prime powers.
        const Residue cofactor = s / pp.power;
        const Residue basis = ring.mul(cofactor, *ModRing(pp.power).inverse(cofactor % pp.power));
        lambda[i0 - 1] = ring.add(lambda[i0 - 1], basis);
        if (i1 != i0)
            lambda[i1 - 1] = ring.add(lambda[i1 - 1], basis);
    }
    Residue sum = 0;
    for (std::size_t i = 0; i < n; ++i)
        sum = ring.add(sum, ring.mul(lambda[i], x[i]));
    if (lambda[i0 - 1] != 1 || !reaches_target(sum))
        throw Error(ErrorKind::InvalidArgument, "multiplier construction failed");
    return lambda;
}

// Factors m as L_1 ... L_(n-1) R_n ... R_1. Step k makes the pivot m_kk an
// associate of the column gcd (left factor T, if needed), sets R_k to the
// resulting row k, and divides it out so that rows 1..k become identity
// rows. Application order is R_1, ..., R_n, L_(n-1), ..., L_1; identity
// factors are kept so the signature is exactly 1..n..1.
inline LinearProgram decompose(const MatrixMod &m)
{
    const ModRing &ring = m.ring();
    const std::size_t n = m.n();
    const Residue s = ring.modulus();
    MatrixMod work = m;
    std::vector<AssignmentMatrix> rights, lefts;

    auto row_of = [&](std::size_t k) {
        Residues r(n);
        for (std::size_t j = 1; j <= n; ++j)
            r[j - 1] = work(k, j);
        return r;
    };

    for (std::size_t k = 1; k <= n; ++k)
    {
        Residues column(n);
        for (std::size_t i = 1; i <= n; ++i)
            column[i - 1] = work(i, k);
        const Residue g = detail::gcd_of(column);

        if (g == 0)
        {
            // x_k := (row k of work), whose k-th entry is zero.
            rights.emplace_back(ring, k, row_of(k));
            if (k < n)
                lefts.push_back(AssignmentMatrix::identity(ring, n, k));
            for (std::size_t j = 1; j <= n; ++j)
                work(k, j) = j == k ? 1 : 0;
            continue;
        }

        const Residue d = std::gcd(g, s);
        if (std::gcd(work(k, k), s) != d)
        {
            const Residues lambda = unit_multipliers(column, k, ring);
            Residues new_row(n, 0);
            for (std::size_t i = 1; i <= n; ++i)
                if (lambda[i - 1] != 0)
                    for (std::size_t j = 1; j <= n; ++j)
                        new_row[j - 1] = ring.add(new_row[j - 1], ring.mul(lambda[i - 1], work(i, j)));
            for (std::size_t j = 1; j <= n; ++j)
                work(k, j) = new_row[j - 1];
            Residues inverse_row(n);
            for (std::size_t j = 1; j <= n; ++j)
                inverse_row[j - 1] = j == k ? 1 : ring.neg(lambda[j - 1]);
            lefts.emplace_back(ring, k, std::move(inverse_row));
        }
        else if (k < n)
        {
            lefts.push_back(AssignmentMatrix::identity(ring, n, k));
        }

        rights.emplace_back(ring, k, row_of(k));

        // Divide column k by d; the pivot quotient is lifted to a unit mod s.
        const Residue step = s / d;
        Residue pivot = work(k, k) / d;
        while (!ring.is_unit(pivot))
            pivot += step;
        const Residue pivot_inv = *ring.inverse(pivot);
        Residues scaled(n);
        for (std::size_t i = 1; i <= n; ++i)
            scaled[i - 1] = i == k ? pivot : work(i, k) / d;
        // work := (work G^-1) U^-1, with U the identity except row k.
        Residues u_inv(n);
        for (std::size_t j = 1; j <= n; ++j)
            u_inv[j - 1] = j == k ? pivot_inv : ring.neg(ring.mul(pivot_inv, work(k, j)));
        for (std::size_t i = 1; i <= n; ++i)
        {
            const Residue c = scaled[i - 1];
            for (std::size_t j = 1; j <= n; ++j)
                work(i, j) = j == k ? ring.mul(c, pivot_inv) : ring.add(work(i, j), ring.mul(c, u_inv[j - 1]));
        }
    }

    LinearProgram p(ring, n);
    for (auto &r : rights)
        p.push_back(std::move(r));
    for (auto it = lefts.rbegin(); it != lefts.rend(); ++it)
        p.push_back(std::move(*it));
    return p;
}

// Invertible mod s iff the determinant is a unit, i.e. non-zero modulo every
// prime factor of s (Gaussian elimination over each prime field).
inline bool is_invertible(const MatrixMod &m)
{
    const std::size_t n = m.n();
    for (const auto &pp : m.ring().factorization())
    {
        const ModRing field(pp.prime);
        std::vector<Residues> rows(n, Residues(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                rows[i][j] = m(i + 1, j + 1) % pp.prime;
        for (std::size_t c = 0; c < n; ++c)
        {
            std::size_t r = c;
            while (r < n && rows[r][c] == 0)
                ++r;
            if (r == n)
                return false;
            std::swap(rows[r], rows[c]);
            const Residue inv = *field.inverse(rows[c][c]);
            for (std::size_t i = c + 1; i < n; ++i)
            {
                const Residue f = field.mul(rows[i][c], inv);
                for (std::size_t j = c; j < n; ++j)
                    rows[i][j] = field.sub(rows[i][j], field.mul(f, rows[c][j]));
            }
        }
    }
    return true;
}

// Reversed sequence with x_i := a x_i + f(others) replaced by
// x_i := a^-1 (x_i - f(others)).
inline LinearProgram invert_linear_program(const LinearProgram &p)
{
    const ModRing &ring = p.ring();
    LinearProgram out(ring, p.n());
    for (auto it = p.factors().rbegin(); it != p.factors().rend(); ++it)
    {
        const auto a_inv = ring.inverse(it->diagonal());
        if (!a_inv)
            throw Error(ErrorKind::NotInvertible, "diagonal coefficient " + std::to_string(it->diagonal()) +
                                                      " of row " + std::to_string(it->row()) + " is not a unit");
        Residues c(p.n());
        for (std::size_t j = 1; j <= p.n(); ++j)
            c[j - 1] = j == it->row() ? *a_inv : ring.neg(ring.mul(*a_inv, it->coefficients()[j - 1]));
        out.push_back(AssignmentMatrix(ring, it->row(), std::move(c)));
    }
    return out;
}

namespace detail
{

// Calls visit(x, digits) for x = 0, 1, ..., s^n - 1 with the digits of x kept
// incrementally.
template <class Visit> void for_each_vector(const Alphabet &alphabet, Visit &&visit)
{
    Residues digits(alphabet.n(), 0);
    for (Index x = 0; x < alphabet.size(); ++x)
    {
        visit(x, std::as_const(digits));
        for (std::size_t i = 0; i < digits.size() && ++digits[i] == alphabet.s(); ++i)
            digits[i] = 0;
    }
}

} // namespace detail

inline Assignment to_assignment(const AssignmentMatrix &f, const Alphabet &alphabet)
{
    alphabet.require_dense();
    std::vector<Digit> table(alphabet.size());
    detail::for_each_vector(alphabet, [&](Index x, const Residues &digits) {
        table[x] = static_cast<Digit>(f.evaluate(digits));
    });
    return Assignment(alphabet, f.row(), std::move(table));
}

// Materialises every factor as a dense table over (Z/sZ)^n.
inline Program to_in_situ(const LinearProgram &p)
{
    const Alphabet alphabet(p.ring().modulus(), p.n());
    alphabet.require_dense();
    Program out(alphabet);
    for (const auto &f : p.factors())
        out.push_back(to_assignment(f, alphabet));
    return out;
}

// Dense table of x -> m x.
inline Mapping mapping_of(const MatrixMod &m)
{
    const Alphabet alphabet(m.ring().modulus(), m.n());
    alphabet.require_dense();
    std::vector<Index> images(alphabet.size());
    detail::for_each_vector(alphabet, [&](Index x, const Residues &digits) {
        const Residues y = m.apply(digits);
        Index v = 0;
        for (std::size_t i = y.size(); i-- > 0;)
            v = v * alphabet.s() + y[i];
        images[x] = v;
    });
    return Mapping(alphabet, std::move(images));
}

} // namespace insitu

#endif
