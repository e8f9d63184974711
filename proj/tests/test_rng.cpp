#include "doctest.h"

#include <cmath>
#include <vector>

#include "excursion/rng.hpp"

using excursion::RngStream;
using excursion::StreamGenerator;

TEST_CASE("identical stream ids reproduce the sequence exactly") {
    StreamGenerator a({42, 7});
    StreamGenerator b({42, 7});
    for (int i = 0; i < 1000; ++i) {
        CHECK(a.next_u64() == b.next_u64());
    }
    StreamGenerator c({42, 7});
    StreamGenerator d({42, 7});
    for (int i = 0; i < 1000; ++i) {
        CHECK(c.next_gaussian() == d.next_gaussian());
    }
}

TEST_CASE("distinct stream indices and seeds give distinct sequences") {
    StreamGenerator a({42, 0});
    StreamGenerator b({42, 1});
    StreamGenerator c({43, 0});
    int equal_ab = 0, equal_ac = 0;
    for (int i = 0; i < 64; ++i) {
        const std::uint64_t xa = a.next_u64();
        if (xa == b.next_u64()) ++equal_ab;
        if (xa == c.next_u64()) ++equal_ac;
    }
    CHECK(equal_ab == 0);
    CHECK(equal_ac == 0);
}

TEST_CASE("uniforms stay strictly inside (0,1)") {
    StreamGenerator gen({1, 2});
    for (int i = 0; i < 100000; ++i) {
        const double u = gen.next_uniform();
        CHECK(u > 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("gaussian moments and cross-stream correlation") {
    const int n = 2000000;
    StreamGenerator a({42, 0});
    StreamGenerator b({42, 1});
    double sum_a = 0.0, sum_sq_a = 0.0, sum_b = 0.0, cross = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = a.next_gaussian();
        const double y = b.next_gaussian();
        sum_a += x;
        sum_sq_a += x * x;
        sum_b += y;
        cross += x * y;
    }
    const double mean_a = sum_a / n;
    const double var_a = sum_sq_a / n - mean_a * mean_a;
    const double corr = (cross / n - mean_a * (sum_b / n)) / std::sqrt(var_a);
    CHECK(std::fabs(mean_a) < 4.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::fabs(var_a - 1.0) < 4.0 * std::sqrt(2.0 / n));
    CHECK(std::fabs(corr) < 4.0 / std::sqrt(static_cast<double>(n)));
}
