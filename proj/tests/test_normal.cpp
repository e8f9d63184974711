#include "doctest.h"

#include <cmath>

#include "excursion/normal.hpp"

using excursion::normal_cdf;
using excursion::normal_quantile;

TEST_CASE("normal cdf matches high-precision values") {
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    // Reference values from 30-digit numerical integration of the density.
    CHECK(normal_cdf(1.0) == doctest::Approx(0.84134474606854294859).epsilon(1e-13));
    CHECK(normal_cdf(0.5) == doctest::Approx(0.69146246127401310364).epsilon(1e-13));
    CHECK(normal_cdf(2.0) == doctest::Approx(0.97724986805182079280).epsilon(1e-13));
    CHECK(normal_cdf(-1.0) == doctest::Approx(0.15865525393145705141).epsilon(1e-13));
    CHECK(1.0 - normal_cdf(10.0) < 1e-20);
    CHECK(normal_cdf(-10.0) < 1e-20);
}

TEST_CASE("normal cdf symmetry and monotonicity") {
    double prev = -1.0;
    for (int i = -60; i <= 60; ++i) {
        const double z = 0.1 * i;
        const double p = normal_cdf(z);
        CHECK(std::fabs(p + normal_cdf(-z) - 1.0) < 1e-10);
        CHECK(p >= prev);
        prev = p;
    }
}

TEST_CASE("normal quantile matches high-precision values") {
    CHECK(normal_quantile(0.5) == 0.0);
    CHECK(normal_quantile(0.975) == doctest::Approx(1.9599639845400542355).epsilon(1e-13));
    CHECK(normal_quantile(0.841344746068543) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(normal_quantile(0.0013498980316300945) == doctest::Approx(-3.0).epsilon(1e-12));
    CHECK(normal_quantile(1e-9) == doctest::Approx(-5.9978070150076868716).epsilon(1e-12));
    CHECK(normal_quantile(0.3) == doctest::Approx(-0.52440051270804078404).epsilon(1e-13));
    CHECK(normal_quantile(0.9) == doctest::Approx(1.281551565544600467).epsilon(1e-13));
}

TEST_CASE("normal quantile round-trips through the cdf") {
    for (int i = 1; i < 2000; ++i) {
        const double u = static_cast<double>(i) / 2000.0;
        CHECK(std::fabs(normal_cdf(normal_quantile(u)) - u) < 1e-13);
    }
    // Deep tails stay finite and ordered.
    CHECK(normal_quantile(1e-300) < normal_quantile(1e-12));
    CHECK(std::isinf(normal_quantile(0.0)));
    CHECK(std::isinf(normal_quantile(1.0)));
}
