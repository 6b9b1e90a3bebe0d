#include <doctest.h>

#include <cmath>
#include <vector>

#include "wia/rng.hpp"

using wia::CounterRng;

TEST_CASE("identical keys give identical streams") {
    CounterRng a{1, 2, 3};
    CounterRng b{1, 2, 3};
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different keys give different streams") {
    CounterRng a{1, 2, 3};
    CounterRng b{1, 2, 4};
    int same = 0;
    for (int i = 0; i < 64; ++i) same += a.next_u64() == b.next_u64();
    CHECK(same == 0);
}

TEST_CASE("stream depends on every key word") {
    CounterRng a{7, 0};
    CounterRng b{0, 7};
    CHECK(a.next_u64() != b.next_u64());
}

TEST_CASE("next_unit lies strictly inside (0, 1)") {
    CounterRng r{42};
    for (int i = 0; i < 10000; ++i) {
        const double u = r.next_unit();
        CHECK(u > 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("next_gauss moments") {
    CounterRng r{11, 22};
    const int n = 200000;
    double s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double g = r.next_gauss();
        s1 += g;
        s2 += g * g;
    }
    const double mean = s1 / n;
    const double var = s2 / n - mean * mean;
    // 3-sigma bands for the sample mean and variance of N(0,1)
    CHECK(std::abs(mean) < 3.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(var - 1.0) < 3.0 * std::sqrt(2.0 / n));
}

TEST_CASE("next_below stays in range and covers it") {
    CounterRng r{5};
    std::vector<int> hits(7, 0);
    for (int i = 0; i < 7000; ++i) {
        const auto v = r.next_below(7);
        REQUIRE(v < 7);
        ++hits[static_cast<size_t>(v)];
    }
    for (int h : hits) CHECK(h > 0);
}
