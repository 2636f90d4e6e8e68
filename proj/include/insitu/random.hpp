#ifndef INSITU_RANDOM_HPP
#define INSITU_RANDOM_HPP

// Seeded generators for test inputs. The engine is std::mt19937_64, whose
// output sequence is fixed by the standard; bounded draws use rejection
// sampling instead of std::uniform_int_distribution so results agree across
// standard libraries.

#include "insitu/core.hpp"
#include "insitu/linmod.hpp"

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace insitu
{

class Rng
{
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform in [0, bound).
    std::uint64_t below(std::uint64_t bound)
    {
        if (bound == 0)
            throw Error(ErrorKind::InvalidArgument, "empty range");
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t v;
        do
            v = engine_();
        while (v >= limit);
        return v % bound;
    }

  private:
    std::mt19937_64 engine_;
};

// SplitMix64 finaliser applied to seed + k * golden ratio; gives independent
// seeds for case k of a suite.
inline std::uint64_t case_seed(std::uint64_t seed, std::uint64_t k)
{
    std::uint64_t z = seed + (k + 1) * 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline Mapping random_mapping(const Alphabet &a, Rng &rng)
{
    a.require_dense();
    std::vector<Index> images(a.size());
    for (auto &y : images)
        y = rng.below(a.size());
    return Mapping(a, std::move(images));
}

// Fisher-Yates from the top down.
inline Mapping random_bijection(const Alphabet &a, Rng &rng)
{
    Mapping id = Mapping::identity(a);
    std::vector<Index> images = id.images();
    for (Index k = images.size(); k > 1; --k)
        std::swap(images[k - 1], images[rng.below(k)]);
    return Mapping(a, std::move(images));
}

inline MatrixMod random_matrix(const ModRing &ring, std::size_t n, Rng &rng)
{
    Residues entries(n * n);
    for (auto &v : entries)
        v = rng.below(ring.modulus());
    return MatrixMod(ring, n, std::move(entries));
}

// Rejection sampling over random_matrix.
inline MatrixMod random_invertible_matrix(const ModRing &ring, std::size_t n, Rng &rng)
{
    while (true)
    {
        MatrixMod m = random_matrix(ring, n, rng);
        if (is_invertible(m))
            return m;
    }
}

} // namespace insitu

#endif
