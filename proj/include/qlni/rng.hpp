#pragma once

#include <array>
#include <cstdint>

namespace qlni {

/// One block of the Philox 4x64-10 counter-based generator
/// (reference values reproduced by numpy.random.Philox).
std::array<std::uint64_t, 4> philox4x64(std::array<std::uint64_t, 4> counter,
                                        std::array<std::uint64_t, 2> key);

/// Deterministic random stream keyed by (seed, stream). Streams with the same
/// key produce identical draws regardless of execution order, which keeps
/// per-scan noise reproducible under parallel Monte Carlo.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_{seed, stream}, counter_{0, 0, 0, 0} {}

    std::uint64_t next_u64();

    /// Uniform in [0, 1) with 53 random bits.
    double next_double();

    /// Standard normal via Box-Muller on the uniform stream.
    double next_gaussian();

private:
    void refill();

    std::array<std::uint64_t, 2> key_;
    std::array<std::uint64_t, 4> counter_;
    std::array<std::uint64_t, 4> block_{};
    int index_ = 4;
    double cached_gaussian_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace qlni
