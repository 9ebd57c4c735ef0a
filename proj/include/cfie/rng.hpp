#ifndef CFIE_RNG_HPP
#define CFIE_RNG_HPP

#include <cstdint>

namespace cfie {

// SplitMix64 (Steele/Lea/Vigna). Chosen because its output sequence is
// fully specified by the seed and identical on every platform, which the
// perturbation determinism contract depends on. Do not swap the engine or
// the derived draws below without bumping the tool version.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next_u64() noexcept {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1) from the top 53 bits.
    double next_double() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) noexcept {
        if (p <= 0.0)
            return false;
        if (p >= 1.0)
            return true;
        return next_double() < p;
    }

    // Uniform integer in [0, bound) via 128-bit multiply-shift.
    std::uint64_t below(std::uint64_t bound) noexcept {
        if (bound <= 1)
            return 0;
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
    }

private:
    std::uint64_t state_;
};

} // namespace cfie

#endif
