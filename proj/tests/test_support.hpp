#pragma once

// Reference implementations used as test oracles. They decode vectors by hand
// and share no code with the library's execution paths.

#include "insitu/insitu.hpp"

#include <cstdint>
#include <vector>

namespace oracle
{

using insitu::Index;

inline std::vector<std::uint64_t> digits(Index x, std::uint64_t s, std::size_t n)
{
    std::vector<std::uint64_t> v(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        v[i] = x % s;
        x /= s;
    }
    return v;
}

inline Index undigits(const std::vector<std::uint64_t> &v, std::uint64_t s)
{
    Index x = 0;
    for (std::size_t i = v.size(); i-- > 0;)
        x = x * s + v[i];
    return x;
}

// One assignment at a time: decode, overwrite the target digit, re-encode.
inline Index run(const insitu::Program &p, Index x)
{
    const auto s = p.alphabet().s();
    const auto n = p.alphabet().n();
    for (const auto &a : p.assignments())
    {
        auto v = digits(x, s, n);
        v[a.target() - 1] = a.table()[x];
        x = undigits(v, s);
    }
    return x;
}

inline std::vector<Index> run_all(const insitu::Program &p)
{
    std::vector<Index> out(p.alphabet().size());
    for (Index x = 0; x < out.size(); ++x)
        out[x] = run(p, x);
    return out;
}

// States after each assignment, for every input: states[t][x].
inline std::vector<std::vector<Index>> states(const insitu::Program &p)
{
    std::vector<std::vector<Index>> out;
    std::vector<Index> current(p.alphabet().size());
    for (Index x = 0; x < current.size(); ++x)
        current[x] = x;
    for (std::size_t t = 0; t < p.length(); ++t)
    {
        for (auto &x : current)
            x = run(p.slice(t, t + 1), x);
        out.push_back(current);
    }
    return out;
}

// y = M x mod s with M given row-major.
inline std::vector<std::uint64_t> mat_vec(const std::vector<std::uint64_t> &m, std::uint64_t s,
                                          const std::vector<std::uint64_t> &x)
{
    const std::size_t n = x.size();
    std::vector<std::uint64_t> y(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            y[i] = (y[i] + m[i * n + j] % s * (x[j] % s)) % s;
    return y;
}

// Determinant over the integers by cofactor expansion (small n only).
inline long long determinant(const std::vector<long long> &m, std::size_t n)
{
    if (n == 1)
        return m[0];
    long long det = 0;
    for (std::size_t c = 0; c < n; ++c)
    {
        std::vector<long long> minor;
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (j != c)
                    minor.push_back(m[i * n + j]);
        const long long term = m[c] * determinant(minor, n - 1);
        det += c % 2 == 0 ? term : -term;
    }
    return det;
}

inline bool is_permutation(const std::vector<Index> &v)
{
    std::vector<bool> seen(v.size(), false);
    for (Index x : v)
    {
        if (x >= v.size() || seen[x])
            return false;
        seen[x] = true;
    }
    return true;
}

} // namespace oracle
