#include <array>
#include <cmath>
#include <cstdint>

#include "doctest.h"
#include "qlni/rng.hpp"

using namespace qlni;

TEST_CASE("philox4x64-10 known-answer vectors") {
    // reference outputs from numpy.random.Philox (same counter/key layout;
    // numpy consumes blocks starting at counter + 1)
    SUBCASE("zero key") {
        const auto block = philox4x64({1, 0, 0, 0}, {0, 0});
        CHECK(block[0] == 0x02f4ba6408e4d89bULL);
        CHECK(block[1] == 0x3dd62b0b9ca8c5b2ULL);
        CHECK(block[2] == 0x1c8667a55d902e79ULL);
        CHECK(block[3] == 0x907d7a052fd5b4dcULL);
        const auto second = philox4x64({2, 0, 0, 0}, {0, 0});
        CHECK(second[0] == 0x809bf322883987c3ULL);
        CHECK(second[3] == 0xfc6ed66767a457bcULL);
    }

    SUBCASE("carry into the second counter word") {
        const auto block = philox4x64({1, 1, 0, 0}, {0, 0});
        CHECK(block[0] == 0x363c6d54f81ba26eULL);
        CHECK(block[1] == 0x372e02c93de0b01eULL);
        CHECK(block[2] == 0xc182a0e88e99b6d5ULL);
        CHECK(block[3] == 0x8893b0f0fb6673dcULL);
    }

    SUBCASE("wide counter and two-word key") {
        const auto block = philox4x64({123456790, 0, 0, 0}, {42, 7});
        CHECK(block[0] == 0xc805f759d60f5f5eULL);
        CHECK(block[1] == 0xb4768a3e3197dfe3ULL);
        CHECK(block[2] == 0x353ba7a6a76ab8c4ULL);
        CHECK(block[3] == 0xc7626907fdb79675ULL);
    }
}

TEST_CASE("counter stream") {
    SUBCASE("matches the raw numpy stream for key = (seed, stream)") {
        CounterRng rng(0xdeadbeefcafebabeULL, 0);
        const std::array<std::uint64_t, 8> expected = {
            0xc15b325be5b6c6e8ULL, 0x1c148a136ff8a268ULL, 0xbdfbcbbd9cfbc088ULL,
            0x31844a21e7441992ULL, 0x4100d053a8d08aa0ULL, 0x6a0360d87121e745ULL,
            0xb99941ba9d199793ULL, 0x899b38aceb9dbb24ULL};
        for (std::uint64_t v : expected) CHECK(rng.next_u64() == v);
    }

    SUBCASE("identical (seed, stream) pairs give identical draws") {
        CounterRng a(99, 5), b(99, 5);
        for (int i = 0; i < 100; ++i) CHECK(a.next_gaussian() == b.next_gaussian());
    }

    SUBCASE("different streams differ") {
        CounterRng a(99, 0), b(99, 1);
        int equal = 0;
        for (int i = 0; i < 64; ++i) equal += (a.next_u64() == b.next_u64());
        CHECK(equal == 0);
    }

    SUBCASE("uniform doubles live in [0, 1)") {
        CounterRng rng(7, 0);
        for (int i = 0; i < 10000; ++i) {
            const double u = rng.next_double();
            CHECK(u >= 0.0);
            CHECK(u < 1.0);
        }
    }

    SUBCASE("gaussian moments") {
        CounterRng rng(2024, 3);
        const int n = 100000;
        double sum = 0.0, sum2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double g = rng.next_gaussian();
            sum += g;
            sum2 += g * g;
        }
        const double mean = sum / n;
        const double var = sum2 / n - mean * mean;
        CHECK(std::abs(mean) < 0.01);
        CHECK(std::abs(var - 1.0) < 0.02);
    }
}
