#ifndef INSITU_CORE_HPP
#define INSITU_CORE_HPP

// Data model for mappings E : S^n -> S^n and in-situ programs, i.e. sequences
// of assignments x_i := psi(x_1, ..., x_n) that overwrite one component at a
// time with no auxiliary storage.
//
// Conventions used throughout the library:
//  * S is {0, ..., s-1}; a vector (x_1, ..., x_n) has index
//    x_1 + s*x_2 + ... + s^(n-1)*x_n, so component 1 is the least significant
//    digit.
//  * Components are numbered from 1, as in program signatures.

#include "insitu/error.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace insitu
{

using Index = std::uint64_t;
using Digit = std::uint32_t;
using Vector = std::vector<Digit>;
using Signature = std::vector<std::size_t>;

// Upper bound on the number of entries of a dense assignment table.
inline constexpr Index kMaxTableSize = Index{1} << 28;

class Alphabet
{
  public:
    Alphabet(Index s, std::size_t n) : s_(s), n_(n)
    {
        if (s < 2)
            throw Error(ErrorKind::InvalidArgument, "alphabet size s must be at least 2");
        if (s > std::numeric_limits<Digit>::max())
            throw Error(ErrorKind::Overflow, "alphabet size s does not fit a digit");
        if (n < 1)
            throw Error(ErrorKind::InvalidArgument, "arity n must be at least 1");
        weights_.reserve(n + 1);
        Index w = 1;
        weights_.push_back(w);
        for (std::size_t i = 0; i < n; ++i)
        {
            if (w > std::numeric_limits<Index>::max() / s)
                throw Error(ErrorKind::Overflow, "s^n overflows the 64-bit index width");
            w *= s;
            weights_.push_back(w);
        }
    }

    Index s() const noexcept { return s_; }
    std::size_t n() const noexcept { return n_; }
    // s^n, the number of vectors.
    Index size() const noexcept { return weights_.back(); }

    // s^(component-1).
    Index weight(std::size_t component) const { return weights_.at(component - 1); }

    Digit digit(Index x, std::size_t component) const
    {
        return static_cast<Digit>((x / weights_[component - 1]) % s_);
    }

    Index with_digit(Index x, std::size_t component, Digit value) const
    {
        const Index w = weights_[component - 1];
        return x - digit(x, component) * w + static_cast<Index>(value) * w;
    }

    bool contains(Index x) const noexcept { return x < size(); }

    Index index_of(std::span<const Digit> v) const
    {
        if (v.size() != n_)
            throw Error(ErrorKind::DimensionMismatch, "vector length differs from n");
        Index x = 0;
        for (std::size_t i = 0; i < n_; ++i)
        {
            if (v[i] >= s_)
                throw Error(ErrorKind::IndexOutOfRange, "vector entry is not below s");
            x += static_cast<Index>(v[i]) * weights_[i];
        }
        return x;
    }

    Vector vector_of(Index x) const
    {
        if (!contains(x))
            throw Error(ErrorKind::IndexOutOfRange, "index " + std::to_string(x) + " is not below s^n");
        Vector v(n_);
        for (std::size_t i = 0; i < n_; ++i)
        {
            v[i] = static_cast<Digit>(x % s_);
            x /= s_;
        }
        return v;
    }

    // Throws unless a dense table over this alphabet is reasonable to allocate.
    void require_dense() const
    {
        if (size() > kMaxTableSize)
            throw Error(ErrorKind::TableTooLarge,
                        "s^n = " + std::to_string(size()) + " exceeds the dense table limit");
    }

    friend bool operator==(const Alphabet &a, const Alphabet &b) noexcept
    {
        return a.s_ == b.s_ && a.n_ == b.n_;
    }

  private:
    Index s_;
    std::size_t n_;
    std::vector<Index> weights_;
};

inline Index index_of(std::span<const Digit> v, const Alphabet &alphabet) { return alphabet.index_of(v); }
inline Vector vector_of(Index i, const Alphabet &alphabet) { return alphabet.vector_of(i); }

// Dense function table of E : S^n -> S^n; images[i] is the index of E(X_i).
class Mapping
{
  public:
    Mapping(Alphabet alphabet, std::vector<Index> images) : alphabet_(std::move(alphabet)), images_(std::move(images))
    {
        if (images_.size() != alphabet_.size())
            throw Error(ErrorKind::DimensionMismatch, "mapping table length differs from s^n");
        for (Index y : images_)
            if (!alphabet_.contains(y))
                throw Error(ErrorKind::IndexOutOfRange, "mapping image " + std::to_string(y) + " is not below s^n");
    }

    static Mapping identity(const Alphabet &alphabet)
    {
        alphabet.require_dense();
        std::vector<Index> images(alphabet.size());
        std::iota(images.begin(), images.end(), Index{0});
        return Mapping(alphabet, std::move(images));
    }

    // Builds the table from f : Vector -> Vector.
    template <class F> static Mapping from_function(const Alphabet &alphabet, F &&f)
    {
        alphabet.require_dense();
        std::vector<Index> images(alphabet.size());
        for (Index x = 0; x < alphabet.size(); ++x)
        {
            const Vector y = f(alphabet.vector_of(x));
            images[x] = alphabet.index_of(y);
        }
        return Mapping(alphabet, std::move(images));
    }

    const Alphabet &alphabet() const noexcept { return alphabet_; }
    Index size() const noexcept { return images_.size(); }
    Index operator()(Index x) const { return images_.at(x); }
    const std::vector<Index> &images() const noexcept { return images_; }

    bool is_bijective() const
    {
        std::vector<bool> hit(images_.size(), false);
        for (Index y : images_)
        {
            if (hit[y])
                return false;
            hit[y] = true;
        }
        return true;
    }

    bool is_identity() const
    {
        for (Index x = 0; x < size(); ++x)
            if (images_[x] != x)
                return false;
        return true;
    }

    Mapping inverse() const
    {
        if (!is_bijective())
            throw Error(ErrorKind::NotBijective, "only bijective mappings have an inverse");
        std::vector<Index> inv(images_.size());
        for (Index x = 0; x < size(); ++x)
            inv[images_[x]] = x;
        return Mapping(alphabet_, std::move(inv));
    }

    // Distinct images in increasing order.
    std::vector<Index> image_set() const
    {
        std::vector<Index> ys(images_);
        std::sort(ys.begin(), ys.end());
        ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
        return ys;
    }

    friend bool operator==(const Mapping &a, const Mapping &b)
    {
        return a.alphabet_ == b.alphabet_ && a.images_ == b.images_;
    }

  private:
    Alphabet alphabet_;
    std::vector<Index> images_;
};

// outer o inner
inline Mapping compose(const Mapping &outer, const Mapping &inner)
{
    if (!(outer.alphabet() == inner.alphabet()))
        throw Error(ErrorKind::DimensionMismatch, "cannot compose mappings over different alphabets");
    std::vector<Index> images(inner.size());
    for (Index x = 0; x < inner.size(); ++x)
        images[x] = outer.images()[inner.images()[x]];
    return Mapping(inner.alphabet(), std::move(images));
}

// x_target := table[x]; the table is indexed by the whole current vector.
class Assignment
{
  public:
    Assignment(const Alphabet &alphabet, std::size_t target, std::vector<Digit> table)
        : target_(target), table_(std::move(table))
    {
        if (target_ < 1 || target_ > alphabet.n())
            throw Error(ErrorKind::IndexOutOfRange, "assignment target " + std::to_string(target_) + " is not in [1, n]");
        if (table_.size() != alphabet.size())
            throw Error(ErrorKind::DimensionMismatch, "assignment table length differs from s^n");
        for (Digit v : table_)
            if (v >= alphabet.s())
                throw Error(ErrorKind::IndexOutOfRange, "assignment value is not below s");
    }

    // x_target := x_target
    static Assignment identity(const Alphabet &alphabet, std::size_t target)
    {
        return from_function(alphabet, target, [&](Index x) { return alphabet.digit(x, target); });
    }

    // psi : Index -> Digit
    template <class F> static Assignment from_function(const Alphabet &alphabet, std::size_t target, F &&psi)
    {
        alphabet.require_dense();
        std::vector<Digit> table(alphabet.size());
        for (Index x = 0; x < alphabet.size(); ++x)
            table[x] = static_cast<Digit>(psi(x));
        return Assignment(alphabet, target, std::move(table));
    }

    std::size_t target() const noexcept { return target_; }
    const std::vector<Digit> &table() const noexcept { return table_; }
    Digit value(Index x) const { return table_[x]; }

    Index apply(const Alphabet &alphabet, Index x) const { return alphabet.with_digit(x, target_, table_[x]); }

    bool is_identity(const Alphabet &alphabet) const
    {
        for (Index x = 0; x < table_.size(); ++x)
            if (table_[x] != alphabet.digit(x, target_))
                return false;
        return true;
    }

    friend bool operator==(const Assignment &a, const Assignment &b)
    {
        return a.target_ == b.target_ && a.table_ == b.table_;
    }

  private:
    std::size_t target_;
    std::vector<Digit> table_;
};

class Program
{
  public:
    explicit Program(Alphabet alphabet) : alphabet_(std::move(alphabet)) {}

    Program(Alphabet alphabet, std::vector<Assignment> assignments)
        : alphabet_(std::move(alphabet)), assignments_(std::move(assignments))
    {
        for (const auto &a : assignments_)
            check(a);
    }

    const Alphabet &alphabet() const noexcept { return alphabet_; }
    const std::vector<Assignment> &assignments() const noexcept { return assignments_; }
    const Assignment &operator[](std::size_t k) const { return assignments_.at(k); }
    std::size_t length() const noexcept { return assignments_.size(); }
    bool empty() const noexcept { return assignments_.empty(); }

    void push_back(Assignment a)
    {
        check(a);
        assignments_.push_back(std::move(a));
    }

    void append(const Program &other)
    {
        if (!(other.alphabet_ == alphabet_))
            throw Error(ErrorKind::DimensionMismatch, "cannot concatenate programs over different alphabets");
        assignments_.insert(assignments_.end(), other.assignments_.begin(), other.assignments_.end());
    }

    // Assignments [first, last).
    Program slice(std::size_t first, std::size_t last) const
    {
        if (first > last || last > length())
            throw Error(ErrorKind::IndexOutOfRange, "program slice out of range");
        return Program(alphabet_, std::vector<Assignment>(assignments_.begin() + static_cast<std::ptrdiff_t>(first),
                                                          assignments_.begin() + static_cast<std::ptrdiff_t>(last)));
    }

    Signature signature() const
    {
        Signature sig;
        sig.reserve(assignments_.size());
        for (const auto &a : assignments_)
            sig.push_back(a.target());
        return sig;
    }

    Index apply(Index x) const
    {
        for (const auto &a : assignments_)
            x = a.apply(alphabet_, x);
        return x;
    }

    // X_0, X_1, ..., X_m for input x.
    std::vector<Index> trace(Index x) const
    {
        std::vector<Index> states{x};
        states.reserve(length() + 1);
        for (const auto &a : assignments_)
            states.push_back(x = a.apply(alphabet_, x));
        return states;
    }

    friend bool operator==(const Program &a, const Program &b)
    {
        return a.alphabet_ == b.alphabet_ && a.assignments_ == b.assignments_;
    }

  private:
    void check(const Assignment &a) const
    {
        if (a.target() < 1 || a.target() > alphabet_.n() || a.table().size() != alphabet_.size())
            throw Error(ErrorKind::DimensionMismatch, "assignment does not match the program alphabet");
    }

    Alphabet alphabet_;
    std::vector<Assignment> assignments_;
};

inline Vector execute(const Program &p, const Vector &x)
{
    return p.alphabet().vector_of(p.apply(p.alphabet().index_of(x)));
}

inline Mapping execute_all(const Program &p)
{
    std::vector<Index> images(p.alphabet().size());
    for (Index x = 0; x < images.size(); ++x)
        images[x] = p.apply(x);
    return Mapping(p.alphabet(), std::move(images));
}

// First input on which p disagrees with e, if any.
inline std::optional<Index> first_mismatch(const Program &p, const Mapping &e)
{
    if (!(p.alphabet() == e.alphabet()))
        throw Error(ErrorKind::DimensionMismatch, "program and mapping use different alphabets");
    for (Index x = 0; x < e.size(); ++x)
        if (p.apply(x) != e(x))
            return x;
    return std::nullopt;
}

// 1, 2, ..., n, n-1, ..., 1
inline Signature benes_signature(std::size_t n)
{
    Signature sig;
    for (std::size_t i = 1; i <= n; ++i)
        sig.push_back(i);
    for (std::size_t i = n; i-- > 1;)
        sig.push_back(i);
    return sig;
}

// Rotation (x_1, ..., x_k) -> (x_2, ..., x_k, x_1) over the group Z/sZ in k+1
// steps: x_1 := x_1 + ... + x_k, then x_k, x_(k-1), ..., x_1 each receive
// x_1 - x_2 - ... - x_k.
inline Program cycle_program(std::size_t k, const Alphabet &alphabet)
{
    if (k < 2 || k > alphabet.n())
        throw Error(ErrorKind::InvalidArgument, "cycle length must lie in [2, n]");
    const Index s = alphabet.s();
    auto sum = [&](Index x) {
        Index acc = 0;
        for (std::size_t i = 1; i <= k; ++i)
            acc = (acc + alphabet.digit(x, i)) % s;
        return acc;
    };
    auto difference = [&](Index x) {
        Index acc = alphabet.digit(x, 1);
        for (std::size_t i = 2; i <= k; ++i)
            acc = (acc + s - alphabet.digit(x, i)) % s;
        return acc;
    };
    Program p(alphabet);
    p.push_back(Assignment::from_function(alphabet, 1, sum));
    for (std::size_t i = k; i >= 1; --i)
        p.push_back(Assignment::from_function(alphabet, i, difference));
    return p;
}

// perm[i-1] is the component whose value lands in component i.
inline Mapping permutation_mapping(const Alphabet &alphabet, std::span<const std::size_t> perm)
{
    if (perm.size() != alphabet.n())
        throw Error(ErrorKind::DimensionMismatch, "permutation length differs from n");
    std::vector<bool> seen(perm.size() + 1, false);
    for (std::size_t c : perm)
    {
        if (c < 1 || c > perm.size() || seen[c])
            throw Error(ErrorKind::InvalidArgument, "not a permutation of 1..n");
        seen[c] = true;
    }
    return Mapping::from_function(alphabet, [&](const Vector &x) {
        Vector y(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            y[i] = x[perm[i] - 1];
        return y;
    });
}

// Lower bound n - f + c on the length of any program permuting variables,
// where f counts fixed components and c counts cycles of length >= 2.
inline std::size_t permutation_length_bound(std::span<const std::size_t> perm)
{
    const std::size_t n = perm.size();
    std::vector<bool> seen(n + 1, false);
    for (std::size_t c : perm)
    {
        if (c < 1 || c > n || seen[c])
            throw Error(ErrorKind::InvalidArgument, "not a permutation of 1..n");
        seen[c] = true;
    }
    std::size_t fixed = 0, cycles = 0;
    std::fill(seen.begin(), seen.end(), false);
    for (std::size_t i = 1; i <= n; ++i)
    {
        if (seen[i])
            continue;
        std::size_t len = 0;
        for (std::size_t j = i; !seen[j]; j = perm[j - 1])
        {
            seen[j] = true;
            ++len;
        }
        if (len == 1)
            ++fixed;
        else
            ++cycles;
    }
    return n - fixed + cycles;
}

// Over {0,1}, an assignment inside a bijective program has the form
// x_i := x_i + h(other components).
inline bool is_flip_form(const Alphabet &alphabet, const Assignment &a)
{
    if (alphabet.s() != 2)
        return false;
    const Index w = alphabet.weight(a.target());
    for (Index x = 0; x < alphabet.size(); ++x)
        if (a.value(x ^ w) != 1 - a.value(x))
            return false;
    return true;
}

inline Program reverse_boolean_bijection(const Program &p)
{
    if (p.alphabet().s() != 2)
        throw Error(ErrorKind::NotBoolean, "program reversal needs s = 2");
    if (!execute_all(p).is_bijective())
        throw Error(ErrorKind::NotBijective, "program does not compute a bijection");
    std::vector<Assignment> reversed(p.assignments().rbegin(), p.assignments().rend());
    return Program(p.alphabet(), std::move(reversed));
}

// Composes every run of consecutive assignments with the same target into one.
inline Program merge_adjacent(const Program &p)
{
    const Alphabet &alphabet = p.alphabet();
    Program out(alphabet);
    std::size_t k = 0;
    while (k < p.length())
    {
        std::size_t end = k + 1;
        while (end < p.length() && p[end].target() == p[k].target())
            ++end;
        if (end == k + 1)
        {
            out.push_back(p[k]);
        }
        else
        {
            const std::size_t target = p[k].target();
            std::vector<Digit> table(alphabet.size());
            for (Index x = 0; x < alphabet.size(); ++x)
            {
                Index y = x;
                for (std::size_t j = k; j < end; ++j)
                    y = p[j].apply(alphabet, y);
                table[x] = alphabet.digit(y, target);
            }
            out.push_back(Assignment(alphabet, target, std::move(table)));
        }
        k = end;
    }
    return out;
}

// True when consecutive targets never differ by more than one, i.e. the
// signature walks along neighbouring components.
inline bool walks_consecutive_components(const Signature &sig)
{
    for (std::size_t k = 1; k < sig.size(); ++k)
    {
        const std::size_t a = sig[k - 1], b = sig[k];
        if ((a > b ? a - b : b - a) > 1)
            return false;
    }
    return true;
}

// Views a program over S^(m*n) as a program over (S^m)^n: component j belongs
// to register (j-1)/m + 1, and every maximal run of assignments inside one
// register becomes a single assignment on that register. The index spaces
// coincide, so behaviour is unchanged.
inline Program regroup(const Program &p, std::size_t m)
{
    const Alphabet &fine = p.alphabet();
    if (m < 1 || fine.n() % m != 0)
        throw Error(ErrorKind::InvalidArgument, "group size must divide the arity");
    if (m == 1)
        return p;
    if (!walks_consecutive_components(p.signature()))
        throw Error(ErrorKind::SignatureNotGroupable, "signature does not traverse consecutive components");

    Index base = 1;
    for (std::size_t i = 0; i < m; ++i)
    {
        if (base > std::numeric_limits<Digit>::max() / fine.s())
            throw Error(ErrorKind::Overflow, "regrouped alphabet size overflows");
        base *= fine.s();
    }
    const Alphabet coarse(base, fine.n() / m);
    auto register_of = [m](std::size_t component) { return (component - 1) / m + 1; };

    Program out(coarse);
    std::size_t k = 0;
    while (k < p.length())
    {
        const std::size_t reg = register_of(p[k].target());
        std::size_t end = k + 1;
        while (end < p.length() && register_of(p[end].target()) == reg)
            ++end;
        std::vector<Digit> table(coarse.size());
        for (Index x = 0; x < coarse.size(); ++x)
        {
            Index y = x;
            for (std::size_t j = k; j < end; ++j)
                y = p[j].apply(fine, y);
            table[x] = coarse.digit(y, reg);
        }
        out.push_back(Assignment(coarse, reg, std::move(table)));
        k = end;
    }
    return out;
}

} // namespace insitu

#endif
