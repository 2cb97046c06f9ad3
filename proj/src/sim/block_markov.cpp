#include "marclab/sim/block_markov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace marclab::sim {

void BlockMarkovConfig::validate() const {
    if (m < 1 || n < 1 || B < 1)
        throw std::invalid_argument("block config needs m >= 1, n >= 1, B >= 1");
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    const double rs[] = {rates.r1_relay, rates.r2_relay, rates.r1_dest,
                         rates.r2_dest,  rates.r1,       rates.r2};
    for (double r : rs)
        if (r < 0.0 || !std::isfinite(r)) throw std::invalid_argument("rates must be >= 0");
}

nlohmann::json BlockMarkovConfig::to_json() const {
    return {{"m", m},
            {"n", n},
            {"B", B},
            {"rates",
             {{"r1_relay", rates.r1_relay},
              {"r2_relay", rates.r2_relay},
              {"r1_dest", rates.r1_dest},
              {"r2_dest", rates.r2_dest},
              {"r1", rates.r1},
              {"r2", rates.r2}}},
            {"epsilon", epsilon},
            {"seed", seed},
            {"mabrc", mabrc}};
}

void wilson_interval(std::uint64_t k, std::uint64_t n, double& lo, double& hi) {
    if (n == 0) {
        lo = 0.0;
        hi = 1.0;
        return;
    }
    const double z = 1.959963984540054;  // 95%
    if (k == 0) {
        lo = 0.0;
        const double nn = static_cast<double>(n);
        hi = (z * z / nn) / (1.0 + z * z / nn);
        return;
    }
    if (k == n) {
        double flipped_lo = 0.0, flipped_hi = 0.0;
        wilson_interval(0, n, flipped_lo, flipped_hi);
        lo = 1.0 - flipped_hi;
        hi = 1.0;
        return;
    }
    const double nn = static_cast<double>(n);
    const double phat = static_cast<double>(k) / nn;
    const double denom = 1.0 + z * z / nn;
    const double center = (phat + z * z / (2.0 * nn)) / denom;
    const double half =
        z * std::sqrt(phat * (1.0 - phat) / nn + z * z / (4.0 * nn * nn)) / denom;
    lo = std::max(0.0, center - half);
    hi = std::min(1.0, center + half);
}

void SimReport::finalize() {
    const std::uint64_t k = mabrc ? union_trial_errors : dest_trial_errors;
    p_err_estimate = trials ? static_cast<double>(k) / static_cast<double>(trials) : 0.0;
    wilson_interval(k, trials, wilson_lo, wilson_hi);
}

nlohmann::json SimReport::to_json() const {
    return {{"trials", trials},
            {"relay_block_errors", relay_block_errors},
            {"dest_block_errors", dest_block_errors},
            {"relay_trial_errors", relay_trial_errors},
            {"dest_trial_errors", dest_trial_errors},
            {"union_trial_errors", union_trial_errors},
            {"mabrc", mabrc},
            {"p_err_estimate", p_err_estimate},
            {"wilson_95", {wilson_lo, wilson_hi}},
            {"first_error_block_histogram", first_error_block_histogram},
            {"wall_seconds", wall_seconds},
            {"config", config_echo}};
}

std::uint64_t table_size(int m, double rate_bits_per_sample) {
    const double bits = std::ceil(static_cast<double>(m) * rate_bits_per_sample - 1e-9);
    if (bits < 0.0) return 1;
    if (bits > 30.0) throw std::invalid_argument("codebook table of 2^" + std::to_string(bits) +
                                                 " entries exceeds the memory budget");
    return 1ull << static_cast<int>(bits);
}

namespace detail {

std::uint64_t checked_table(std::uint64_t a, std::uint64_t b, const char* what) {
    if (b != 0 && a > kMaxCodewords / b)
        throw std::invalid_argument(std::string(what) + ": table of " + std::to_string(a) + "x" +
                                    std::to_string(b) + " codewords exceeds the 2^20 budget");
    return a * b;
}

SeqSpace::SeqSpace(int alphabet, int length) : alphabet_(alphabet), length_(length) {
    if (alphabet < 1 || length < 1) throw std::invalid_argument("bad sequence space");
    count_ = 1;
    for (int i = 0; i < length; ++i) {
        if (count_ > kMaxCandidates)
            throw std::invalid_argument("sequence space exceeds the 2^20 enumeration budget");
        count_ *= static_cast<std::uint64_t>(alphabet);
    }
    if (count_ > kMaxCandidates)
        throw std::invalid_argument("sequence space exceeds the 2^20 enumeration budget");
}

std::uint64_t SeqSpace::rank(std::span<const int> seq) const {
    std::uint64_t r = 0;
    for (int k = 0; k < length_; ++k) r = r * alphabet_ + static_cast<std::uint64_t>(seq[k]);
    return r;
}

void SeqSpace::unrank(std::uint64_t r, std::span<int> out) const {
    for (int k = length_; k-- > 0;) {
        out[k] = static_cast<int>(r % alphabet_);
        r /= alphabet_;
    }
}

BinMap BinMap::uniform(const SeqSpace& space, std::uint64_t bins, Rng& rng) {
    BinMap map;
    map.bins = static_cast<std::uint32_t>(bins);
    map.of.resize(space.count());
    map.members.assign(bins, {});
    for (std::uint64_t r = 0; r < space.count(); ++r) {
        const auto b = static_cast<std::uint32_t>(rng.below(bins));
        map.of[r] = b;
        map.members[b].push_back(static_cast<std::uint32_t>(r));
    }
    return map;
}

KernelSampler::KernelSampler(const ConditionalPmf& kernel)
    : given_cells_(kernel.given_cells()), output_cells_(kernel.output_cells()) {
    cdf_ = kernel.kernel();
    for (std::size_t g = 0; g < given_cells_; ++g) {
        double acc = 0.0;
        for (std::size_t o = 0; o < output_cells_; ++o) {
            acc += cdf_[g * output_cells_ + o];
            cdf_[g * output_cells_ + o] = acc;
        }
        cdf_[g * output_cells_ + output_cells_ - 1] = 1.0;
    }
}

std::size_t KernelSampler::draw_flat(std::size_t given_flat, Rng& rng) const {
    const double u = rng.uniform();
    const auto begin = cdf_.begin() + static_cast<std::ptrdiff_t>(given_flat * output_cells_);
    const auto it = std::upper_bound(begin, begin + static_cast<std::ptrdiff_t>(output_cells_), u);
    const std::size_t off = static_cast<std::size_t>(it - begin);
    return std::min(off, output_cells_ - 1);
}

TupleTypicality::TupleTypicality(const JointPmf& joint, double epsilon, int n)
    : p_(joint.weights()), epsilon_(epsilon), n_(n) {
    if (!(epsilon > 0.0) || n < 1) throw std::invalid_argument("bad typicality parameters");
    const auto& vars = joint.variables();
    strides_.assign(vars.size(), 1);
    for (std::size_t i = vars.size(); i-- > 1;)
        strides_[i - 1] = strides_[i] * static_cast<std::size_t>(vars[i].alphabet_size);
    counts_.assign(p_.size(), 0);
    touched_.reserve(static_cast<std::size_t>(n));
    for (double w : p_)
        if (w > 0.0) ++support_size_;
}

bool TupleTypicality::check(std::span<const int* const> seqs) {
    touched_.clear();
    bool ok = true;
    for (int k = 0; k < n_ && ok; ++k) {
        std::size_t idx = 0;
        for (std::size_t c = 0; c < strides_.size(); ++c)
            idx += strides_[c] * static_cast<std::size_t>(seqs[c][k]);
        if (p_[idx] == 0.0) {
            ok = false;
            break;
        }
        if (counts_[idx]++ == 0) touched_.push_back(idx);
    }
    if (ok) {
        // every in-support symbol must appear when epsilon < 1 (the lower
        // bound N >= n p (1 - eps) is positive), so demand full coverage
        if (epsilon_ < 1.0 && touched_.size() != support_size_) ok = false;
        if (ok) {
            const double n = static_cast<double>(n_);
            for (std::size_t idx : touched_) {
                const double dev = std::fabs(counts_[idx] / n - p_[idx]);
                if (dev > epsilon_ * p_[idx]) {
                    ok = false;
                    break;
                }
            }
        }
    }
    for (std::size_t idx : touched_) counts_[idx] = 0;
    return ok;
}

JointSampler::JointSampler(JointPmf joint) : joint_(std::move(joint)) {
    cdf_ = joint_.weights();
    double acc = 0.0;
    for (auto& w : cdf_) {
        acc += w;
        w = acc;
    }
    cdf_.back() = 1.0;
}

void JointSampler::draw(std::span<int> out, Rng& rng) const {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const std::size_t cell =
        std::min(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
    joint_.unflatten(cell, out);
}

} // namespace detail

} // namespace marclab::sim
