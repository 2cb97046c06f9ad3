#include "marclab/sim/gaussian_channel.hpp"

#include <cmath>
#include <stdexcept>

#include "marclab/rng.hpp"

namespace marclab::sim {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::complex<double> unit_cn(Rng& rng) {
    // CN(0,1): independent N(0, 1/2) components
    const double scale = std::sqrt(0.5);
    return {scale * rng.normal(), scale * rng.normal()};
}

std::complex<double> draw_coefficient(FadingKind kind, double attenuation, Rng& rng) {
    if (kind == FadingKind::Phase) {
        const double theta = kTwoPi * rng.uniform();
        return std::polar(attenuation, theta);
    }
    return attenuation * unit_cn(rng);
}

void check_power(std::span<const std::complex<double>> x, double limit, const char* name) {
    double acc = 0.0;
    for (const auto& v : x) acc += std::norm(v);
    const double mean = x.empty() ? 0.0 : acc / static_cast<double>(x.size());
    if (mean > limit + 1e-9)
        throw std::invalid_argument(std::string(name) + " exceeds its power limit: " +
                                    std::to_string(mean) + " > " + std::to_string(limit));
}

} // namespace

GaussianMarcFrame simulate_fading_frame(const FadingMarcParams& p,
                                        std::span<const std::complex<double>> x1,
                                        std::span<const std::complex<double>> x2,
                                        std::span<const std::complex<double>> x3,
                                        std::uint64_t seed) {
    p.validate();
    if (x1.size() != x2.size() || x1.size() != x3.size())
        throw std::invalid_argument("input sequences must share one length");
    check_power(x1, p.p1, "x1");
    check_power(x2, p.p2, "x2");
    check_power(x3, p.p3, "x3");

    const std::size_t n = x1.size();
    GaussianMarcFrame f;
    f.y.resize(n);
    f.y3.resize(n);
    f.h11.resize(n);
    f.h21.resize(n);
    f.h31.resize(n);
    f.h13.resize(n);
    f.h23.resize(n);

    Rng rng(seed);
    for (std::size_t k = 0; k < n; ++k) {
        f.h11[k] = draw_coefficient(p.kind, p.a11, rng);
        f.h21[k] = draw_coefficient(p.kind, p.a21, rng);
        f.h31[k] = draw_coefficient(p.kind, p.a31, rng);
        f.h13[k] = draw_coefficient(p.kind, p.a13, rng);
        f.h23[k] = draw_coefficient(p.kind, p.a23, rng);
        f.y[k] = f.h11[k] * x1[k] + f.h21[k] * x2[k] + f.h31[k] * x3[k] + unit_cn(rng);
        f.y3[k] = f.h13[k] * x1[k] + f.h23[k] * x2[k] + unit_cn(rng);
    }
    return f;
}

std::array<ErgodicValue, 3> estimate_ergodic_rate(const FadingMarcParams& p, const McParams& mc) {
    p.validate();
    if (p.kind == FadingKind::Phase) {
        // |H| is constant, no randomness to average over
        const auto t = phase_region(p, 1.0);
        return {ErgodicValue{t[0], 0.0, true}, ErgodicValue{t[1], 0.0, true},
                ErgodicValue{t[2], 0.0, true}};
    }

    const double d1 = p.a11 * p.a11 * p.p1;
    const double d2 = p.a21 * p.a21 * p.p2;
    const double d3 = p.a31 * p.a31 * p.p3;

    constexpr std::uint64_t kChunk = 1u << 15;
    const std::uint64_t samples = std::max<std::uint64_t>(mc.samples, 1);
    const std::uint64_t chunks = (samples + kChunk - 1) / kChunk;

    double sum[3] = {0, 0, 0}, sum_sq[3] = {0, 0, 0};
    for (std::uint64_t chunk = 0; chunk < chunks; ++chunk) {
        Rng rng(mc.seed, chunk + 1);
        const std::uint64_t lo = chunk * kChunk;
        const std::uint64_t hi = std::min(lo + kChunk, samples);
        double cs[3] = {0, 0, 0}, cs2[3] = {0, 0, 0};
        for (std::uint64_t i = lo; i < hi; ++i) {
            // |CN(0,1)|^2 via simulated complex coefficients
            const double g1 = std::norm(unit_cn(rng));
            const double g2 = std::norm(unit_cn(rng));
            const double g3 = std::norm(unit_cn(rng));
            const double v[3] = {std::log2(1.0 + d1 * g1 + d3 * g3),
                                 std::log2(1.0 + d2 * g2 + d3 * g3),
                                 std::log2(1.0 + d1 * g1 + d2 * g2 + d3 * g3)};
            for (int j = 0; j < 3; ++j) {
                cs[j] += v[j];
                cs2[j] += v[j] * v[j];
            }
        }
        for (int j = 0; j < 3; ++j) {
            sum[j] += cs[j];
            sum_sq[j] += cs2[j];
        }
    }

    std::array<ErgodicValue, 3> out;
    const double n = static_cast<double>(samples);
    for (int j = 0; j < 3; ++j) {
        const double mean = sum[j] / n;
        const double var = std::max(sum_sq[j] / n - mean * mean, 0.0);
        out[j] = {mean, std::sqrt(var / n), false};
    }
    return out;
}

} // namespace marclab::sim
