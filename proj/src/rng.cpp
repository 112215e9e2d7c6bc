#include "qlni/rng.hpp"

#include <cmath>
#include <numbers>

namespace qlni {

namespace {

constexpr std::uint64_t kMult0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMult1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline void mul_hi_lo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
    const unsigned __int128 prod = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(prod >> 64);
    lo = static_cast<std::uint64_t>(prod);
}

inline std::array<std::uint64_t, 4> round_once(const std::array<std::uint64_t, 4>& ctr,
                                               const std::array<std::uint64_t, 2>& key) {
    std::uint64_t hi0, lo0, hi1, lo1;
    mul_hi_lo(kMult0, ctr[0], hi0, lo0);
    mul_hi_lo(kMult1, ctr[2], hi1, lo1);
    return {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

}  // namespace

std::array<std::uint64_t, 4> philox4x64(std::array<std::uint64_t, 4> counter,
                                        std::array<std::uint64_t, 2> key) {
    for (int r = 0;;) {
        counter = round_once(counter, key);
        if (++r == 10) break;
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return counter;
}

void CounterRng::refill() {
    // pre-increment, matching the numpy.random.Philox block sequence
    if (++counter_[0] == 0)
        if (++counter_[1] == 0)
            if (++counter_[2] == 0) ++counter_[3];
    block_ = philox4x64(counter_, key_);
    index_ = 0;
}

std::uint64_t CounterRng::next_u64() {
    if (index_ >= 4) refill();
    return block_[static_cast<std::size_t>(index_++)];
}

double CounterRng::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::next_gaussian() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_gaussian_;
    }
    const double u1 = next_double();
    const double u2 = next_double();
    const double radius = std::sqrt(-2.0 * std::log1p(-u1));  // log(1-u1), never log(0)
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_gaussian_ = radius * std::sin(angle);
    has_cached_ = true;
    return radius * std::cos(angle);
}

}  // namespace qlni
