#include "marclab/sim/sim_separation.hpp"

#include <chrono>
#include <thread>

namespace marclab::sim {

namespace {

using detail::BinMap;
using detail::JointSampler;
using detail::KernelSampler;
using detail::SeqSpace;
using detail::TupleTypicality;

struct Codebook {
    SeqSpace s1_space, s2_space;
    BinMap f1r, f2r, f1d, f2d;
    std::uint32_t n1r, n2r, n1d, n2d;
    int n;
    std::vector<int> v1, v2;  // [u_d * n + k]
    std::vector<int> x1, x2;  // [(u_r * n_d + u_d) * n + k]
    std::vector<int> x3;      // [(u1_d * n2d + u2_d) * n + k]

    const int* v1_at(std::uint32_t ud) const { return v1.data() + std::size_t(ud) * n; }
    const int* v2_at(std::uint32_t ud) const { return v2.data() + std::size_t(ud) * n; }
    const int* x1_at(std::uint32_t ur, std::uint32_t ud) const {
        return x1.data() + (std::size_t(ur) * n1d + ud) * n;
    }
    const int* x2_at(std::uint32_t ur, std::uint32_t ud) const {
        return x2.data() + (std::size_t(ur) * n2d + ud) * n;
    }
    const int* x3_at(std::uint32_t u1d, std::uint32_t u2d) const {
        return x3.data() + (std::size_t(u1d) * n2d + u2d) * n;
    }
};

Codebook build_codebook(const SourceSideInfoModel& model, const DmChannel& ch,
                        const SeparationInput& input, const BlockMarkovConfig& cfg) {
    input.validate(ch);
    Codebook cb{SeqSpace(model.s1_size(), cfg.m),
                SeqSpace(model.s2_size(), cfg.m),
                {}, {}, {}, {},
                0, 0, 0, 0,
                cfg.n,
                {}, {}, {}, {}, {}};
    cb.n1r = static_cast<std::uint32_t>(table_size(cfg.m, cfg.rates.r1_relay));
    cb.n2r = static_cast<std::uint32_t>(table_size(cfg.m, cfg.rates.r2_relay));
    cb.n1d = static_cast<std::uint32_t>(table_size(cfg.m, cfg.rates.r1_dest));
    cb.n2d = static_cast<std::uint32_t>(table_size(cfg.m, cfg.rates.r2_dest));
    detail::checked_table(cb.n1r, cb.n1d, "x1 codebook");
    detail::checked_table(cb.n2r, cb.n2d, "x2 codebook");
    detail::checked_table(cb.n1d, cb.n2d, "x3 codebook");
    detail::checked_table(cb.n1r, cb.n2r, "relay candidate pairs");
    detail::checked_table(cb.n1d, cb.n2d, "destination candidate pairs");

    Rng rng(cfg.seed, 0);
    cb.f1r = BinMap::uniform(cb.s1_space, cb.n1r, rng);
    cb.f2r = BinMap::uniform(cb.s2_space, cb.n2r, rng);
    cb.f1d = BinMap::uniform(cb.s1_space, cb.n1d, rng);
    cb.f2d = BinMap::uniform(cb.s2_space, cb.n2d, rng);

    const KernelSampler sample_v1(ConditionalPmf::marginal(input.p_v1.variables(),
                                                           input.p_v1.weights()));
    const KernelSampler sample_v2(ConditionalPmf::marginal(input.p_v2.variables(),
                                                           input.p_v2.weights()));
    const KernelSampler sample_x1(input.k_x1);
    const KernelSampler sample_x2(input.k_x2);
    const KernelSampler sample_x3(input.k_x3);
    const std::size_t v2_card = input.p_v2.variables()[0].alphabet_size;

    cb.v1.resize(std::size_t(cb.n1d) * cfg.n);
    for (auto& v : cb.v1) v = static_cast<int>(sample_v1.draw_flat(0, rng));
    cb.v2.resize(std::size_t(cb.n2d) * cfg.n);
    for (auto& v : cb.v2) v = static_cast<int>(sample_v2.draw_flat(0, rng));

    cb.x1.resize(std::size_t(cb.n1r) * cb.n1d * cfg.n);
    for (std::uint32_t ur = 0; ur < cb.n1r; ++ur)
        for (std::uint32_t ud = 0; ud < cb.n1d; ++ud)
            for (int k = 0; k < cfg.n; ++k)
                cb.x1[(std::size_t(ur) * cb.n1d + ud) * cfg.n + k] =
                    static_cast<int>(sample_x1.draw_flat(cb.v1_at(ud)[k], rng));
    cb.x2.resize(std::size_t(cb.n2r) * cb.n2d * cfg.n);
    for (std::uint32_t ur = 0; ur < cb.n2r; ++ur)
        for (std::uint32_t ud = 0; ud < cb.n2d; ++ud)
            for (int k = 0; k < cfg.n; ++k)
                cb.x2[(std::size_t(ur) * cb.n2d + ud) * cfg.n + k] =
                    static_cast<int>(sample_x2.draw_flat(cb.v2_at(ud)[k], rng));
    cb.x3.resize(std::size_t(cb.n1d) * cb.n2d * cfg.n);
    for (std::uint32_t u1 = 0; u1 < cb.n1d; ++u1)
        for (std::uint32_t u2 = 0; u2 < cb.n2d; ++u2)
            for (int k = 0; k < cfg.n; ++k)
                cb.x3[(std::size_t(u1) * cb.n2d + u2) * cfg.n + k] = static_cast<int>(
                    sample_x3.draw_flat(std::size_t(cb.v1_at(u1)[k]) * v2_card + cb.v2_at(u2)[k],
                                        rng));
    return cb;
}

struct TrialCounters {
    std::uint64_t relay_block_errors = 0;
    std::uint64_t dest_block_errors = 0;
    std::uint64_t relay_trial_errors = 0;
    std::uint64_t dest_trial_errors = 0;
    std::uint64_t union_trial_errors = 0;
    std::vector<std::uint64_t> first_error_block;

    explicit TrialCounters(int B) : first_error_block(B, 0) {}
    void merge(const TrialCounters& o) {
        relay_block_errors += o.relay_block_errors;
        dest_block_errors += o.dest_block_errors;
        relay_trial_errors += o.relay_trial_errors;
        dest_trial_errors += o.dest_trial_errors;
        union_trial_errors += o.union_trial_errors;
        for (std::size_t i = 0; i < first_error_block.size(); ++i)
            first_error_block[i] += o.first_error_block[i];
    }
};

JointPmf project(const JointPmf& joint, const std::vector<std::string>& order) {
    return joint.marginalize(order).reorder(order);
}

class TrialRunner {
public:
    TrialRunner(const SourceSideInfoModel& model, const DmChannel& ch,
                const JointPmf& chan_joint, const Codebook& cb, const BlockMarkovConfig& cfg)
        : model_(model),
          cb_(cb),
          cfg_(cfg),
          source_sampler_(model.joint),
          channel_sampler_(ch.law),
          relay_chan_typ_(project(chan_joint, {kV1, kV2, kX1, kX2, kX3, kY3}), cfg.epsilon,
                          cfg.n),
          dest_chan_typ_(project(chan_joint, {kV1, kV2, kX1, kX2, kX3, kY}), cfg.epsilon, cfg.n),
          relay_src_typ_(project(model.joint, {kS1, kS2, kW3}), cfg.epsilon, cfg.m),
          dest_src_typ_(project(model.joint, {kS1, kS2, kW}), cfg.epsilon, cfg.m),
          y3_size_(ch.y3_size()),
          x2_card_(ch.x2_size()),
          x3_card_(ch.x3_size()) {}

    void run(std::uint64_t trial, TrialCounters& out);

private:
    const SourceSideInfoModel& model_;
    const Codebook& cb_;
    const BlockMarkovConfig& cfg_;
    JointSampler source_sampler_;
    KernelSampler channel_sampler_;
    TupleTypicality relay_chan_typ_;
    TupleTypicality dest_chan_typ_;
    TupleTypicality relay_src_typ_;
    TupleTypicality dest_src_typ_;
    int y3_size_;
    int x2_card_;
    int x3_card_;
};

void TrialRunner::run(std::uint64_t trial, TrialCounters& out) {
    Rng rng(cfg_.seed, trial + 1);
    const int m = cfg_.m, n = cfg_.n, B = cfg_.B;

    // sources and their bins
    std::vector<std::vector<int>> s1(B), s2(B), w(B), w3(B);
    std::vector<std::uint32_t> u1r(B), u2r(B), u1d(B), u2d(B);
    std::vector<int> tuple(4);
    for (int b = 0; b < B; ++b) {
        s1[b].resize(m);
        s2[b].resize(m);
        w[b].resize(m);
        w3[b].resize(m);
        for (int k = 0; k < m; ++k) {
            source_sampler_.draw(tuple, rng);
            s1[b][k] = tuple[0];
            s2[b][k] = tuple[1];
            w[b][k] = tuple[2];
            w3[b][k] = tuple[3];
        }
        u1r[b] = cb_.f1r.of[cb_.s1_space.rank(s1[b])];
        u2r[b] = cb_.f2r.of[cb_.s2_space.rank(s2[b])];
        u1d[b] = cb_.f1d.of[cb_.s1_space.rank(s1[b])];
        u2d[b] = cb_.f2d.of[cb_.s2_space.rank(s2[b])];
    }

    // channel blocks; the relay runs live (no genie), decoding block b before
    // encoding block b+1
    std::vector<std::vector<int>> y(B + 1), y3(B + 1);
    std::vector<std::uint32_t> rly_u1d(B, 0), rly_u2d(B, 0);  // relay's decoded dest bins
    bool relay_failed = false;
    std::vector<bool> relay_block_ok(B, true);

    std::uint32_t rly_prev_u1d = 0, rly_prev_u2d = 0;  // what the relay believes
    for (int cb_block = 0; cb_block <= B; ++cb_block) {
        const bool first = cb_block == 0;
        const bool flush = cb_block == B;
        const std::uint32_t tx_u1r = flush ? 0 : u1r[cb_block];
        const std::uint32_t tx_u2r = flush ? 0 : u2r[cb_block];
        const std::uint32_t tx_u1d = first ? 0 : u1d[cb_block - 1];
        const std::uint32_t tx_u2d = first ? 0 : u2d[cb_block - 1];
        const std::uint32_t tx_r1d = first ? 0 : rly_prev_u1d;
        const std::uint32_t tx_r2d = first ? 0 : rly_prev_u2d;

        const int* cx1 = cb_.x1_at(tx_u1r, tx_u1d);
        const int* cx2 = cb_.x2_at(tx_u2r, tx_u2d);
        const int* cx3 = cb_.x3_at(tx_r1d, tx_r2d);
        y[cb_block].resize(n);
        y3[cb_block].resize(n);
        for (int k = 0; k < n; ++k) {
            const std::size_t row =
                (std::size_t(cx1[k]) * x2_card_ + cx2[k]) * x3_card_ + cx3[k];
            const std::size_t out_flat = channel_sampler_.draw_flat(row, rng);
            y[cb_block][k] = static_cast<int>(out_flat / y3_size_);
            y3[cb_block][k] = static_cast<int>(out_flat % y3_size_);
        }

        if (flush) break;
        const int b = cb_block;  // data block index decoded by the relay now

        // relay channel decoder: unique (u1r, u2r) jointly typical with its
        // own belief about the previous destination bins
        std::uint32_t got1 = 0, got2 = 0;
        int hits = 0;
        for (std::uint32_t c1 = 0; c1 < cb_.n1r && hits < 2; ++c1)
            for (std::uint32_t c2 = 0; c2 < cb_.n2r && hits < 2; ++c2) {
                const int* cand[6] = {cb_.v1_at(tx_r1d),      cb_.v2_at(tx_r2d),
                                      cb_.x1_at(c1, tx_r1d),  cb_.x2_at(c2, tx_r2d),
                                      cb_.x3_at(tx_r1d, tx_r2d), y3[b].data()};
                if (relay_chan_typ_.check(cand)) {
                    ++hits;
                    got1 = c1;
                    got2 = c2;
                }
            }
        bool block_ok = hits == 1;

        // relay source decoder: unique bin-consistent typical pair
        std::uint32_t est1_rank = 0, est2_rank = 0;
        if (block_ok) {
            int src_hits = 0;
            for (std::uint32_t r1 : cb_.f1r.members[got1]) {
                if (src_hits >= 2) break;
                std::vector<int> cs1(m);
                cb_.s1_space.unrank(r1, cs1);
                for (std::uint32_t r2 : cb_.f2r.members[got2]) {
                    std::vector<int> cs2(m);
                    cb_.s2_space.unrank(r2, cs2);
                    const int* cand[3] = {cs1.data(), cs2.data(), w3[b].data()};
                    if (relay_src_typ_.check(cand)) {
                        if (++src_hits >= 2) break;
                        est1_rank = r1;
                        est2_rank = r2;
                    }
                }
            }
            block_ok = src_hits == 1 && est1_rank == cb_.s1_space.rank(s1[b]) &&
                       est2_rank == cb_.s2_space.rank(s2[b]);
            if (src_hits != 1) {
                // deterministic fallback so the chain can continue
                est1_rank = cb_.f1r.members[got1].empty() ? 0 : cb_.f1r.members[got1][0];
                est2_rank = cb_.f2r.members[got2].empty() ? 0 : cb_.f2r.members[got2][0];
            }
        }
        relay_block_ok[b] = block_ok;
        if (!block_ok) {
            ++out.relay_block_errors;
            relay_failed = true;
        }
        rly_prev_u1d = cb_.f1d.of[est1_rank];
        rly_prev_u2d = cb_.f2d.of[est2_rank];
        rly_u1d[b] = rly_prev_u1d;
        rly_u2d[b] = rly_prev_u2d;
    }

    // destination: backward decoding from the flush block
    bool dest_failed = false;
    int first_bad_block = -1;
    std::uint32_t next_u1r = 0, next_u2r = 0;  // flush indices in block B+1
    for (int b = B - 1; b >= 0; --b) {
        std::uint32_t got1 = 0, got2 = 0;
        int hits = 0;
        for (std::uint32_t d1 = 0; d1 < cb_.n1d && hits < 2; ++d1)
            for (std::uint32_t d2 = 0; d2 < cb_.n2d && hits < 2; ++d2) {
                const int* cand[6] = {cb_.v1_at(d1),          cb_.v2_at(d2),
                                      cb_.x1_at(next_u1r, d1), cb_.x2_at(next_u2r, d2),
                                      cb_.x3_at(d1, d2),       y[b + 1].data()};
                if (dest_chan_typ_.check(cand)) {
                    ++hits;
                    got1 = d1;
                    got2 = d2;
                }
            }
        bool block_ok = hits == 1;

        std::uint32_t est1_rank = 0, est2_rank = 0;
        if (block_ok) {
            int src_hits = 0;
            for (std::uint32_t r1 : cb_.f1d.members[got1]) {
                if (src_hits >= 2) break;
                std::vector<int> cs1(m);
                cb_.s1_space.unrank(r1, cs1);
                for (std::uint32_t r2 : cb_.f2d.members[got2]) {
                    std::vector<int> cs2(m);
                    cb_.s2_space.unrank(r2, cs2);
                    const int* cand[3] = {cs1.data(), cs2.data(), w[b].data()};
                    if (dest_src_typ_.check(cand)) {
                        if (++src_hits >= 2) break;
                        est1_rank = r1;
                        est2_rank = r2;
                    }
                }
            }
            block_ok = src_hits == 1 && est1_rank == cb_.s1_space.rank(s1[b]) &&
                       est2_rank == cb_.s2_space.rank(s2[b]);
            if (src_hits != 1) {
                est1_rank = cb_.f1d.members[got1].empty() ? 0 : cb_.f1d.members[got1][0];
                est2_rank = cb_.f2d.members[got2].empty() ? 0 : cb_.f2d.members[got2][0];
            }
        }
        if (!block_ok) {
            ++out.dest_block_errors;
            dest_failed = true;
            first_bad_block = b;
        }
        // backward chain: the next iteration (block b-1) needs this block's
        // relay bins as decoded by the destination
        next_u1r = cb_.f1r.of[est1_rank];
        next_u2r = cb_.f2r.of[est2_rank];
    }

    if (relay_failed) ++out.relay_trial_errors;
    if (dest_failed) ++out.dest_trial_errors;
    if (relay_failed || dest_failed) ++out.union_trial_errors;
    const bool counted = cfg_.mabrc ? (relay_failed || dest_failed) : dest_failed;
    if (counted) {
        int first = first_bad_block;
        if (cfg_.mabrc)
            for (int b = 0; b < B; ++b)
                if (!relay_block_ok[b]) {
                    first = first < 0 ? b : std::min(first, b);
                    break;
                }
        if (first < 0) first = 0;
        ++out.first_error_block[first];
    }
}

} // namespace

SimReport run_separation_df(const SourceSideInfoModel& model, const DmChannel& ch,
                            const SeparationInput& input, const BlockMarkovConfig& cfg,
                            std::uint64_t trials) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const Codebook cb = build_codebook(model, ch, input, cfg);
    const JointPmf chan_joint = input.induced_joint(ch);

    const unsigned threads = cfg.max_threads > 0
                                 ? static_cast<unsigned>(cfg.max_threads)
                                 : std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers =
        static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(trials, 1)));

    std::vector<TrialCounters> partial(workers, TrialCounters(cfg.B));
    auto work = [&](unsigned wid) {
        TrialRunner runner(model, ch, chan_joint, cb, cfg);
        for (std::uint64_t t = wid; t < trials; t += workers) runner.run(t, partial[wid]);
    };
    if (workers <= 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned wid = 0; wid < workers; ++wid) pool.emplace_back(work, wid);
        for (auto& th : pool) th.join();
    }

    SimReport report;
    report.trials = trials;
    report.mabrc = cfg.mabrc;
    report.first_error_block_histogram.assign(cfg.B, 0);
    TrialCounters total(cfg.B);
    for (const auto& p : partial) total.merge(p);
    report.relay_block_errors = total.relay_block_errors;
    report.dest_block_errors = total.dest_block_errors;
    report.relay_trial_errors = total.relay_trial_errors;
    report.dest_trial_errors = total.dest_trial_errors;
    report.union_trial_errors = total.union_trial_errors;
    report.first_error_block_histogram = total.first_error_block;
    report.config_echo = cfg.to_json();
    report.config_echo["scheme"] = "sep";
    report.finalize();
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

} // namespace marclab::sim
