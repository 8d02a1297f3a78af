#include <doctest.h>

#include <cmath>

#include "rainbow_net/progressive_source.hpp"

using namespace rnf;

TEST_CASE("zero-bit prefix reconstructs the mean") {
    const std::size_t n = 20000;
    const ProgressiveSource src = progressive_gaussian_source(0, n, 2);
    const double m = empirical_mse(src, 0);
    double var = 0.0;
    for (double x : src.samples) var += x * x;
    var /= static_cast<double>(n);
    CHECK(m == doctest::Approx(var).epsilon(1e-12));
    // E[X^2] = 1 with variance 2/n for the sample second moment
    CHECK(std::abs(m - 1.0) < 3.0 * std::sqrt(2.0 / static_cast<double>(n)));
}

TEST_CASE("longer prefixes never hurt") {
    const std::size_t n = 20000;
    const ProgressiveSource src = progressive_gaussian_source(1, n, 8);
    CHECK(src.planes == 8);
    const auto bits = [&](double r) { return static_cast<std::int64_t>(r * static_cast<double>(n)); };
    const double m2 = empirical_mse(src, bits(2));
    const double m4 = empirical_mse(src, bits(4));
    const double m8 = empirical_mse(src, bits(8));
    CHECK(m8 < m4);
    CHECK(m4 < m2);
    double prev = empirical_mse(src, 0);
    for (int b = 1; b <= 16; ++b) {
        const double cur = empirical_mse(src, bits(b * 0.5));
        CHECK(cur <= prev + 1e-12);
        prev = cur;
    }
}

TEST_CASE("two-bit quality band") {
    const std::size_t n = 100000;
    const ProgressiveSource src = progressive_gaussian_source(2, n, 2);
    const double m = empirical_mse(src, 2 * static_cast<std::int64_t>(n));
    CHECK(m < 2.0 * 0.0625);
    CHECK(m > 0.0625);
}

TEST_CASE("same seed, same stream") {
    const auto a = progressive_gaussian_source(42, 1001, 3);
    const auto b = progressive_gaussian_source(42, 1001, 3);
    const auto c = progressive_gaussian_source(43, 1001, 3);
    CHECK(a.bitstream == b.bitstream);
    CHECK(a.samples == b.samples);
    CHECK(a.bitstream != c.bitstream);
    CHECK(a.bits == 3003);
    CHECK(a.bitstream.size() == 376);
}
