#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "marclab/ergodic.hpp"
#include "marclab/exp_integral.hpp"
#include "marclab/rng.hpp"

using namespace marclab;

namespace {

// Plain (non-antithetic) Monte Carlo oracle with its own rng stream.
std::pair<double, double> mc_oracle(const std::vector<double>& scales, std::uint64_t samples,
                                    std::uint64_t seed) {
    Rng rng(seed, 0xabcdef);
    double sum = 0.0, sum_sq = 0.0;
    for (std::uint64_t i = 0; i < samples; ++i) {
        double snr = 0.0;
        for (double a : scales) snr += a * rng.exponential();
        const double v = std::log2(1.0 + snr);
        sum += v;
        sum_sq += v * v;
    }
    const double n = static_cast<double>(samples);
    const double mean = sum / n;
    const double se = std::sqrt(std::max(sum_sq / n - mean * mean, 0.0) / n);
    return {mean, se};
}

} // namespace

TEST_CASE("one unit scale gives e*E1(1)/ln2") {
    const auto v = expected_log2_capacity({1.0});
    CHECK(v.exact);
    CHECK(v.bits == doctest::Approx(std::exp(1.0) * exp_integral_e1(1.0) / std::log(2.0))
                        .epsilon(1e-12));
    CHECK(v.bits == doctest::Approx(0.86034).epsilon(1e-4));
}

TEST_CASE("vanishing scale gives vanishing rate") {
    CHECK(expected_log2_capacity({1e-9}).bits == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("two distinct scales match the Monte Carlo oracle within 3 sigma") {
    const auto exact = expected_log2_capacity({2.0, 0.5});
    CHECK(exact.exact);
    const auto [mc, se] = mc_oracle({2.0, 0.5}, 2'000'000, 17);
    CHECK(std::fabs(exact.bits - mc) < 3.0 * se);
}

TEST_CASE("equal scales use the analytic Gamma(2) limit") {
    const auto equal = expected_log2_capacity({1.5, 1.5});
    CHECK(equal.exact);
    // derivative identity: E{ln(1+a(G1+G2))} = (1 - 1/a) g(a) + 1
    const double a = 1.5;
    const double g = std::exp(1.0 / a) * exp_integral_e1(1.0 / a);
    CHECK(equal.bits == doctest::Approx(((1.0 - 1.0 / a) * g + 1.0) / std::log(2.0))
                            .epsilon(1e-12));
    const auto [mc, se] = mc_oracle({1.5, 1.5}, 2'000'000, 23);
    CHECK(std::fabs(equal.bits - mc) < 3.0 * se);
    // continuity against two barely distinct scales
    const auto near = expected_log2_capacity({1.5 + 1e-7, 1.5 - 1e-7});
    CHECK(std::fabs(near.bits - equal.bits) < 1e-6);
}

TEST_CASE("three scales run Monte Carlo with a sane standard error") {
    McParams mc;
    mc.samples = 400'000;
    mc.seed = 5;
    const auto v = expected_log2_capacity({1.0, 2.0, 0.25}, mc);
    CHECK_FALSE(v.exact);
    CHECK(v.std_error > 0.0);
    CHECK(v.std_error < 0.01);
    const auto [ref, se] = mc_oracle({1.0, 2.0, 0.25}, 2'000'000, 29);
    CHECK(std::fabs(v.bits - ref) < 3.0 * std::sqrt(se * se + v.std_error * v.std_error) + 1e-3);
    // determinism
    const auto again = expected_log2_capacity({1.0, 2.0, 0.25}, mc);
    CHECK(again.bits == v.bits);
}

TEST_CASE("input validation") {
    CHECK_THROWS(static_cast<void>(expected_log2_capacity({})));
    CHECK_THROWS(static_cast<void>(expected_log2_capacity({1.0, 0.0})));
    CHECK_THROWS(static_cast<void>(expected_log2_capacity({-2.0})));
}
