#ifndef CASCADELAB_RNG_HPP
#define CASCADELAB_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace cascadelab {

/// SplitMix64 finalizer. Used to derive independent stream seeds from a
/// master seed and a tuple of counters.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Deterministic seed derivation: mix(base, a, b, ...) depends only on the
/// values and their order, never on scheduling.
constexpr std::uint64_t mix_seed(std::uint64_t base, std::initializer_list<std::uint64_t> keys) noexcept {
    std::uint64_t h = splitmix64(base);
    for (std::uint64_t k : keys) {
        h = splitmix64(h ^ splitmix64(k + 0x632be59bd9b4e019ULL));
    }
    return h;
}

/// Portable random stream. The engine is fully specified by the standard;
/// the conversions below are ours, so sequences are identical across
/// standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1) with 53 bits of precision.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    /// Uniform integer in [0, bound). bound must be > 0.
    std::uint64_t below(std::uint64_t bound) {
        // Rejection on the top of the range removes modulo bias.
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t x = engine_();
        while (x >= limit) {
            x = engine_();
        }
        return x % bound;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace cascadelab

#endif  // CASCADELAB_RNG_HPP
