#ifndef MARCLAB_ERGODIC_HPP
#define MARCLAB_ERGODIC_HPP

#include <cstdint>
#include <vector>

namespace marclab {

struct McParams {
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 1;
};

struct ErgodicValue {
    double bits = 0.0;
    double std_error = 0.0;  // zero for closed forms
    bool exact = true;
};

/// E{log2(1 + sum_i scale_i * G_i)} with G_i iid Exp(1) (the law of |U|^2 for
/// U ~ CN(0,1)). One scale and two scales evaluate in closed form through E1
/// (the equal-scale pair via the analytic limit); longer lists fall back to
/// antithetic Monte Carlo with a reported standard error. Scales must be
/// strictly positive.
ErgodicValue expected_log2_capacity(const std::vector<double>& scales, const McParams& mc = {});

} // namespace marclab

#endif
