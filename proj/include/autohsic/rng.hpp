#ifndef AUTOHSIC_RNG_HPP
#define AUTOHSIC_RNG_HPP

#include <cstdint>
#include <random>

namespace autohsic {

/// splitmix64 finalizer; bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derives an independent substream seed from a master seed and one or more
/// stream tags (replication index, bootstrap index, lag, ...). Used everywhere
/// a reproducible parallel stream is needed.
constexpr std::uint64_t derive_seed(std::uint64_t seed) { return mix64(seed); }

template <typename... Tags>
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag, Tags... rest) {
    return derive_seed(mix64(seed ^ mix64(tag)), static_cast<std::uint64_t>(rest)...);
}

/// Deterministic random stream. The engine (mt19937_64) is bit-exact per the
/// C++ standard; the distribution transforms below are implemented by hand so
/// that outputs do not depend on the standard library vendor.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1]; safe as a log argument.
    double uniform01_open() { return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53; }

    /// Standard normal via Box-Muller; pairs are cached.
    double normal();

    /// Gamma(shape, 1) via Marsaglia-Tsang, any shape > 0.
    double gamma(double shape);

    /// Chi-squared with nu > 0 degrees of freedom.
    double chi_squared(double nu) { return 2.0 * gamma(0.5 * nu); }

    /// Random sign, +1 or -1 with equal probability.
    double rademacher() { return (engine_() >> 63) ? 1.0 : -1.0; }

    /// Uniform integer in [0, n), unbiased via rejection.
    std::size_t index(std::size_t n);

private:
    std::mt19937_64 engine_;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

} // namespace autohsic

#endif
