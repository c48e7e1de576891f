#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace drdf {

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace detail

/// Seeded random stream. Independent substreams are derived by hashing the
/// parent seed with a list of tags, so the stream a consumer sees depends
/// only on (seed, tags) and never on how many draws happened elsewhere.
class Rng {
public:
    using engine_type = std::mt19937_64;

    explicit Rng(std::uint64_t seed = 0) : seed_(seed), engine_(detail::splitmix64(seed)) {}

    [[nodiscard]] std::uint64_t seed() const { return seed_; }

    [[nodiscard]] Rng substream(std::initializer_list<std::uint64_t> tags) const {
        std::uint64_t h = detail::splitmix64(seed_ ^ 0x5bd1e9955bd1e995ULL);
        for (auto tag : tags) {
            h = detail::splitmix64(h ^ detail::splitmix64(tag + 0x632be59bd9b4e019ULL));
        }
        return Rng(h);
    }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) {
        if (!(hi > lo)) return lo;
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }

    double normal(double mean, double stddev) {
        if (stddev <= 0.0) return mean;
        return std::normal_distribution<double>(mean, stddev)(engine_);
    }

    engine_type& engine() { return engine_; }

private:
    std::uint64_t seed_;
    engine_type engine_;
};

}  // namespace drdf
