#pragma once

#include <cstdint>
#include <limits>

namespace allpay {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based generator: the stream for (seed, counter) is a pure function
/// of both, so trial t of a simulation draws the same skills no matter which
/// worker runs it. Satisfies UniformRandomBitGenerator.
class CounterRng {
public:
    using result_type = std::uint64_t;

    CounterRng(std::uint64_t seed, std::uint64_t counter)
        : state_(mix64(seed ^ 0x6a09e667f3bcc909ULL) ^ mix64(counter + 0x9e3779b97f4a7c15ULL)) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

private:
    std::uint64_t state_;
};

/// Uniform double strictly inside (0, 1) from 53 random bits of a 64-bit
/// generator.
template <typename URBG>
double uniform_open01(URBG& gen) {
    static_assert(URBG::min() == 0 && URBG::max() == std::numeric_limits<std::uint64_t>::max(),
                  "uniform_open01 needs a full 64-bit generator");
    std::uint64_t bits = static_cast<std::uint64_t>(gen()) >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

} // namespace allpay
