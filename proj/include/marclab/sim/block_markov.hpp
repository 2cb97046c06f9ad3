#ifndef MARCLAB_SIM_BLOCK_MARKOV_HPP
#define MARCLAB_SIM_BLOCK_MARKOV_HPP

#include <cstdint>
#include <json.hpp>

#include "marclab/models.hpp"
#include "marclab/rng.hpp"

namespace marclab::sim {

/// Binning/coding rates in bits per source sample. The separation scheme
/// uses the four relay/destination rates; the CPM schemes use r1/r2.
struct Rates {
    double r1_relay = 0.0;
    double r2_relay = 0.0;
    double r1_dest = 0.0;
    double r2_dest = 0.0;
    double r1 = 0.0;
    double r2 = 0.0;
};

struct BlockMarkovConfig {
    int m = 8;  // source samples per block
    int n = 8;  // channel uses per block (B data blocks span B+1 channel blocks)
    int B = 3;
    Rates rates;
    double epsilon = 0.1;
    std::uint64_t seed = 1;
    bool mabrc = false;    // count relay reconstruction errors in p_err
    int max_threads = 0;   // 0 = hardware concurrency

    void validate() const;
    nlohmann::json to_json() const;
};

struct SimReport {
    std::uint64_t trials = 0;
    std::uint64_t relay_block_errors = 0;
    std::uint64_t dest_block_errors = 0;
    std::uint64_t relay_trial_errors = 0;
    std::uint64_t dest_trial_errors = 0;
    std::uint64_t union_trial_errors = 0;  // MABRC error event
    bool mabrc = false;
    double p_err_estimate = 0.0;  // dest-only (MARC) or union (MABRC)
    double wilson_lo = 0.0;
    double wilson_hi = 0.0;
    std::vector<std::uint64_t> first_error_block_histogram;  // index = data block - 1
    double wall_seconds = 0.0;
    nlohmann::json config_echo;

    void finalize();  // fills p_err_estimate and the Wilson interval
    nlohmann::json to_json() const;
};

/// 95% Wilson score interval for k successes out of n.
void wilson_interval(std::uint64_t k, std::uint64_t n, double& lo, double& hi);

/// 2^ceil(m * rate) codebook/bin table size.
std::uint64_t table_size(int m, double rate_bits_per_sample);

namespace detail {

// Budget guards from the scheme descriptions: candidate enumerations and
// codeword tables are capped at 2^20 entries.
inline constexpr std::uint64_t kMaxCodewords = 1u << 20;
inline constexpr std::uint64_t kMaxCandidates = 1u << 20;

/// Rank/unrank fixed-length sequences over a finite alphabet (first symbol
/// most significant).
class SeqSpace {
public:
    SeqSpace(int alphabet, int length);
    std::uint64_t count() const { return count_; }
    int alphabet() const { return alphabet_; }
    int length() const { return length_; }
    std::uint64_t rank(std::span<const int> seq) const;
    void unrank(std::uint64_t r, std::span<int> out) const;

private:
    int alphabet_;
    int length_;
    std::uint64_t count_;
};

/// Uniform random bin assignment over a sequence space, with member lists for
/// decoder-side enumeration.
struct BinMap {
    std::uint32_t bins = 1;
    std::vector<std::uint32_t> of;                     // seq rank -> bin
    std::vector<std::vector<std::uint32_t>> members;   // bin -> seq ranks

    static BinMap uniform(const SeqSpace& space, std::uint64_t bins, Rng& rng);
};

/// Draws output tuples from a ConditionalPmf row by inverse CDF.
class KernelSampler {
public:
    explicit KernelSampler(const ConditionalPmf& kernel);
    /// Flat output index for the given flat row index.
    std::size_t draw_flat(std::size_t given_flat, Rng& rng) const;

private:
    std::vector<double> cdf_;
    std::size_t given_cells_;
    std::size_t output_cells_;
};

/// Strong-typicality test specialized for repeated decoder calls: counts are
/// kept in a scratch array reset via a touched list, and candidates are
/// rejected early on support violations.
class TupleTypicality {
public:
    /// `joint` axes define the tuple component order.
    TupleTypicality(const JointPmf& joint, double epsilon, int n);

    /// One pointer per component, each an array of n symbols.
    bool check(std::span<const int* const> seqs);

private:
    std::vector<double> p_;
    std::vector<std::size_t> strides_;
    std::vector<int> counts_;
    std::vector<std::size_t> touched_;
    double epsilon_;
    int n_;
    std::size_t support_size_ = 0;
};

/// Per-symbol iid sampler for a joint pmf (symbols per variable).
class JointSampler {
public:
    explicit JointSampler(JointPmf joint);
    /// Draws one symbol tuple into `out` (one entry per variable).
    void draw(std::span<int> out, Rng& rng) const;

private:
    JointPmf joint_;
    std::vector<double> cdf_;
};

std::uint64_t checked_table(std::uint64_t a, std::uint64_t b, const char* what);

} // namespace detail

} // namespace marclab::sim

#endif
