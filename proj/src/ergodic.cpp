#include "marclab/ergodic.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "marclab/exp_integral.hpp"
#include "marclab/rng.hpp"

namespace marclab {

namespace {

constexpr double kLn2 = 0.69314718055994530941723212145818;

std::uint64_t pairs_of(const McParams& mc) { return std::max<std::uint64_t>(mc.samples / 2, 1); }

// g(a) = E{ln(1 + a G)} = e^{1/a} E1(1/a), G ~ Exp(1)
double one_scale_ln(double a) { return exp_integral_e1_scaled(1.0 / a); }

// E{ln(1 + a(G1 + G2))} = (1 - 1/a) g(a) + 1, the a->b limit of the
// two-scale difference quotient (G1 + G2 ~ Gamma(2,1)).
double equal_pair_ln(double a) { return (1.0 - 1.0 / a) * one_scale_ln(a) + 1.0; }

// E{ln(1 + a G1 + b G2)} = (a g(a) - b g(b)) / (a - b) for a != b
double distinct_pair_ln(double a, double b) {
    return (a * one_scale_ln(a) - b * one_scale_ln(b)) / (a - b);
}

ErgodicValue monte_carlo(const std::vector<double>& scales, const McParams& mc) {
    const std::uint64_t pairs = std::max<std::uint64_t>(mc.samples / 2, 1);
    constexpr std::uint64_t kChunk = 1u << 16;
    const std::uint64_t chunks = (pairs + kChunk - 1) / kChunk;

    // Per-chunk derived seeds; chunk sums are folded in fixed chunk order, so
    // the estimate is independent of how chunks are scheduled.
    auto run_chunk = [&scales, &mc](std::uint64_t chunk) {
        Rng rng(mc.seed, chunk + 1);
        const std::uint64_t lo = chunk * kChunk;
        const std::uint64_t hi = std::min(lo + kChunk, pairs_of(mc));
        double csum = 0.0, csum_sq = 0.0;
        for (std::uint64_t i = lo; i < hi; ++i) {
            double snr = 0.0, snr_anti = 0.0;
            for (double a : scales) {
                const double u = rng.uniform();
                snr += a * -std::log1p(-u);   // -ln(1-u) ~ Exp(1)
                snr_anti += a * -std::log(u ? u : 1e-300);  // antithetic mate
            }
            const double v = 0.5 * (std::log2(1.0 + snr) + std::log2(1.0 + snr_anti));
            csum += v;
            csum_sq += v * v;
        }
        return std::pair<double, double>(csum, csum_sq);
    };

    const unsigned workers = std::max(1u, std::min(std::thread::hardware_concurrency(), 8u));
    std::vector<std::pair<double, double>> chunk_sums(chunks);
    if (workers <= 1 || chunks <= 1) {
        for (std::uint64_t c = 0; c < chunks; ++c) chunk_sums[c] = run_chunk(c);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::uint64_t c = w; c < chunks; c += workers) chunk_sums[c] = run_chunk(c);
            });
        for (auto& th : pool) th.join();
    }
    double sum = 0.0, sum_sq = 0.0;
    for (const auto& [cs, cs2] : chunk_sums) {
        sum += cs;
        sum_sq += cs2;
    }
    const double n = static_cast<double>(pairs);
    const double mean = sum / n;
    const double var = std::max(sum_sq / n - mean * mean, 0.0);
    ErgodicValue out;
    out.bits = mean;
    out.std_error = std::sqrt(var / n);
    out.exact = false;
    return out;
}

} // namespace

ErgodicValue expected_log2_capacity(const std::vector<double>& scales, const McParams& mc) {
    if (scales.empty()) throw std::invalid_argument("expected_log2_capacity: no scales");
    for (double a : scales)
        if (!(a > 0.0)) throw std::invalid_argument("expected_log2_capacity: nonpositive scale");

    ErgodicValue out;
    if (scales.size() == 1) {
        out.bits = one_scale_ln(scales[0]) / kLn2;
        return out;
    }
    if (scales.size() == 2) {
        const double a = scales[0], b = scales[1];
        const bool equal = std::fabs(a - b) <= 1e-9 * std::max(a, b);
        out.bits = (equal ? equal_pair_ln(a) : distinct_pair_ln(a, b)) / kLn2;
        return out;
    }
    return monte_carlo(scales, mc);
}

} // namespace marclab
