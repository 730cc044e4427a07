#ifndef SGM_RNG_HPP
#define SGM_RNG_HPP

#include <cstdint>
#include <random>

namespace sgm {

// SplitMix64 mixing step; used to derive independent stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic random source. mt19937_64 is fully specified by the
// standard, and the bounded draw below avoids std::uniform_int_distribution
// (whose output is implementation-defined), so sequences are identical
// across platforms and runs.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    // Unbiased draw from [0, n). n >= 1.
    std::uint64_t next_below(std::uint64_t n) {
        unsigned __int128 m = static_cast<unsigned __int128>(gen_()) * n;
        auto low = static_cast<std::uint64_t>(m);
        if (low < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (low < threshold) {
                m = static_cast<unsigned __int128>(gen_()) * n;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

private:
    std::mt19937_64 gen_;
};

// Independent stream for (seed, stream_id); streams derived this way can be
// consumed in any order or in parallel without affecting each other.
inline Rng derive_stream(std::uint64_t seed, std::uint64_t stream_id) {
    return Rng(splitmix64(splitmix64(seed) ^ splitmix64(stream_id + 0x51b365cdf93ULL)));
}

} // namespace sgm

#endif
