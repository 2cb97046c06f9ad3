#include "marclab/sim/sim_somarc.hpp"

#include <chrono>
#include <stdexcept>

#include "marclab/somarc.hpp"

namespace marclab::sim {

SimReport run_uncoded_somarc_with_decoder(std::uint64_t trials, std::uint64_t seed,
                                          int decode_of_ys1) {
    if (trials < 1) throw std::invalid_argument("at least one trial required");
    const auto t0 = std::chrono::steady_clock::now();
    const JointPmf source = somarc_source_pair();
    const detail::JointSampler sampler(source);

    Rng rng(seed);
    std::vector<int> pair(2);
    std::uint64_t errors = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        sampler.draw(pair, rng);
        const int ys = pair[0] + pair[1];  // X1 = S1, X2 = S2
        int s1_hat, s2_hat;
        switch (ys) {
            case 0: s1_hat = 0; s2_hat = 0; break;
            case 2: s1_hat = 1; s2_hat = 1; break;
            default: s1_hat = decode_of_ys1 >> 1; s2_hat = decode_of_ys1 & 1; break;
        }
        if (s1_hat != pair[0] || s2_hat != pair[1]) ++errors;
    }

    SimReport report;
    report.trials = trials;
    report.dest_block_errors = errors;
    report.dest_trial_errors = errors;
    report.union_trial_errors = errors;
    report.first_error_block_histogram.assign(1, errors);
    report.config_echo = {{"scheme", "uncoded-somarc"},
                          {"seed", seed},
                          {"decode_of_ys1", decode_of_ys1}};
    report.finalize();
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

SimReport run_uncoded_somarc(std::uint64_t trials, std::uint64_t seed) {
    return run_uncoded_somarc_with_decoder(trials, seed, 0b01);
}

} // namespace marclab::sim
