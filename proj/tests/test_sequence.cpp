#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"
#include "modsamp/sequence.hpp"

using namespace modsamp;

namespace {

double unit_draw(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double draw(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * unit_draw(rng);
}

}  // namespace

TEST_CASE("sample sequence rejects non-finite values") {
    CHECK_THROWS_AS(SampleSequence({1.0, std::nan("")}), std::domain_error);
    CHECK_THROWS_AS(SampleSequence({std::numeric_limits<double>::infinity()}), std::domain_error);
    const SampleSequence a{1.0, -3.0, 2.0};
    CHECK(a.size() == 3);
    CHECK(a.max_abs() == 3.0);
}

TEST_CASE("fractional part stays in the unit interval") {
    CHECK(fractional_part(0.25) == 0.25);
    CHECK(fractional_part(3.0) == 0.0);
    CHECK(fractional_part(-0.3) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(fractional_part(-2.0) == 0.0);

    // The guard must keep results below 1 even when floor rounding would not.
    const double near_one = fractional_part(-1e-18);
    CHECK(near_one >= 0.0);
    CHECK(near_one < 1.0);

    std::mt19937_64 rng(11);
    for (int i = 0; i < 20000; ++i) {
        const double t = draw(rng, -1e6, 1e6);
        const double f = fractional_part(t);
        CHECK(f >= 0.0);
        CHECK(f < 1.0);
        CHECK(std::abs(t - f - std::floor(t)) <= 1e-9 * std::max(1.0, std::abs(t)));
    }

    CHECK_THROWS_AS(fractional_part(std::nan("")), std::domain_error);
}

TEST_CASE("centered modulo folds onto the half-open range") {
    // Boundary folds to the negative edge, not the positive one.
    CHECK(centered_modulo(1.0, 1.0) == -1.0);
    CHECK(centered_modulo(-1.2, 1.0) == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(centered_modulo(1.7, 0.5) == doctest::Approx(-0.3).epsilon(1e-12));

    // Exact identity on the range, including values far below fp resolution
    // of the fold arithmetic.
    CHECK(centered_modulo(0.3, 1.0) == 0.3);
    CHECK(centered_modulo(-1.0, 1.0) == -1.0);
    CHECK(centered_modulo(1e-300, 1.0) == 1e-300);
    CHECK(centered_modulo(-3e-17, 1.0) == -3e-17);

    CHECK_THROWS_AS(centered_modulo(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(centered_modulo(1.0, -2.0), std::invalid_argument);
    CHECK_THROWS_AS(centered_modulo(std::nan(""), 1.0), std::domain_error);
}

TEST_CASE("centered modulo congruence and periodicity") {
    std::mt19937_64 rng(17);
    const double lambdas[] = {0.05, 1.0, 3.14159};
    for (int i = 0; i < 10000; ++i) {
        const double lambda = lambdas[i % 3];
        const double t = draw(rng, -50.0, 50.0);
        const double m = centered_modulo(t, lambda);
        CHECK(m >= -lambda);
        CHECK(m < lambda);
        const double q = (t - m) / (2.0 * lambda);
        CHECK(std::abs(q - std::round(q)) <= 1e-8 * std::max(1.0, std::abs(q)));
        const int k = static_cast<int>(rng() % 7) - 3;
        CHECK(centered_modulo(t + 2.0 * lambda * k, lambda) ==
              doctest::Approx(m).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("finite differences shorten and telescope") {
    const SampleSequence a{1.0, 3.0, 6.0, 10.0};
    const SampleSequence d1 = finite_diff(a, 1);
    REQUIRE(d1.size() == 3);
    CHECK(d1[0] == 2.0);
    CHECK(d1[1] == 3.0);
    CHECK(d1[2] == 4.0);

    const SampleSequence d2 = finite_diff(a, 2);
    REQUIRE(d2.size() == 2);
    CHECK(d2[0] == 1.0);
    CHECK(d2[1] == 1.0);

    // Second difference of an affine sequence vanishes.
    const SampleSequence lin{2.0, 4.5, 7.0, 9.5, 12.0};
    for (double v : finite_diff(lin, 2)) CHECK(v == doctest::Approx(0.0).scale(1.0));

    CHECK_THROWS_AS(finite_diff(a, 0), std::invalid_argument);
    CHECK_THROWS_AS(finite_diff(a, 4), std::length_error);
}

TEST_CASE("cumulative sums preserve length") {
    const SampleSequence a{1.0, 0.0, 0.0};
    const SampleSequence s2 = cumsum(a, 2);
    REQUIRE(s2.size() == 3);
    CHECK(s2[0] == 1.0);
    CHECK(s2[1] == 2.0);
    CHECK(s2[2] == 3.0);

    const SampleSequence b{2.0, -1.0, 3.0};
    const SampleSequence s1 = cumsum(b);
    CHECK(s1[0] == 2.0);
    CHECK(s1[1] == 1.0);
    CHECK(s1[2] == 4.0);

    CHECK_THROWS_AS(cumsum(SampleSequence{}, 1), std::length_error);
    CHECK_THROWS_AS(cumsum(b, 0), std::invalid_argument);
}

TEST_CASE("difference and summation are offset inverses") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> raw(8 + rng() % 30);
        for (double& v : raw) v = draw(rng, -5.0, 5.0);
        const SampleSequence a(raw);

        const SampleSequence ds = finite_diff(cumsum(a, 1), 1);
        for (std::size_t k = 0; k < ds.size(); ++k) {
            CHECK(ds[k] == doctest::Approx(a[k + 1]).epsilon(1e-12).scale(1.0));
        }

        const SampleSequence sd = cumsum(finite_diff(a, 1), 1);
        for (std::size_t k = 0; k < sd.size(); ++k) {
            CHECK(sd[k] == doctest::Approx(a[k + 1] - a[0]).epsilon(1e-12).scale(1.0));
        }

        // One difference at most doubles the sup norm.
        CHECK(finite_diff(a, 1).max_abs() <= 2.0 * a.max_abs() + 1e-15);
    }
}

TEST_CASE("grid rounding is half-up and verifiable") {
    const GridScalar up = round_to_grid(0.05, 0.1);
    CHECK(up.value() == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(up.quotient() == 1);

    const GridScalar down = round_to_grid(-0.06, 0.1);
    CHECK(down.value() == doctest::Approx(-0.1).epsilon(1e-15));
    CHECK(down.quotient() == -1);

    CHECK(round_to_grid(0.149, 0.1).quotient() == 1);
    CHECK(round_to_grid(0.0, 0.1).quotient() == 0);

    const GridScalar on(0.3, 0.1);
    CHECK(on.quotient() == 3);
    CHECK_THROWS_AS(GridScalar(0.35, 0.2), grid_error);
    CHECK_THROWS_AS(GridScalar(1.0, 0.0), std::invalid_argument);

    std::mt19937_64 rng(29);
    for (int i = 0; i < 5000; ++i) {
        const double step = draw(rng, 1e-3, 2.0);
        const double x = draw(rng, -100.0, 100.0);
        const GridScalar g = round_to_grid(x, step);
        CHECK(std::abs(g.value() - x) <= step / 2.0 + 1e-9);
        CHECK(std::abs(g.value() - g.quotient() * step) <= 1e-9 * std::max(1.0, std::abs(g.value())));
    }
}

TEST_CASE("elementwise combination requires matched lengths") {
    const SampleSequence a{1.0, 2.0};
    const SampleSequence b{0.5, -2.0};
    const SampleSequence s = add(a, b);
    CHECK(s[0] == 1.5);
    CHECK(s[1] == 0.0);
    const SampleSequence d = subtract(a, b);
    CHECK(d[0] == 0.5);
    CHECK(d[1] == 4.0);
    CHECK_THROWS_AS(add(a, SampleSequence{1.0}), std::length_error);
}
