#include "marclab/sim/sim_cpm.hpp"

#include <chrono>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "marclab/common_part.hpp"

namespace marclab::sim {

namespace {

using detail::BinMap;
using detail::JointSampler;
using detail::KernelSampler;
using detail::SeqSpace;
using detail::TupleTypicality;

JointPmf project(const JointPmf& joint, const std::vector<std::string>& order) {
    return joint.marginalize(order).reorder(order);
}

// Source-sequence bookkeeping shared by both CPM schemes: materialized
// sequence tables, per-sequence common-part ranks, and the grouping of S2
// sequences by common-part rank for t-matched candidate enumeration.
struct SourceTables {
    SeqSpace s1_space, s2_space, t_space;
    CommonPart cp;
    std::vector<int> s1_seq, s2_seq;          // [rank * n + k]
    std::vector<std::uint32_t> t1_of, t2_of;  // sequence rank -> t rank
    std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> s2_by_t;
    std::vector<int> t_seq;                   // [t rank * n + k] (achieved ranks only valid)

    SourceTables(const SourceSideInfoModel& model, int n)
        : s1_space(model.s1_size(), n),
          s2_space(model.s2_size(), n),
          t_space(1, 1),
          cp(gacs_korner_common_part(model.joint.marginalize({kS1, kS2}))) {
        const int t_size = std::max(cp.t_size, 1);
        t_space = SeqSpace(t_size, n);
        s1_seq.resize(s1_space.count() * n);
        t1_of.resize(s1_space.count());
        std::vector<int> buf(n), tbuf(n);
        for (std::uint64_t r = 0; r < s1_space.count(); ++r) {
            s1_space.unrank(r, buf);
            for (int k = 0; k < n; ++k) {
                s1_seq[r * n + k] = buf[k];
                tbuf[k] = cp.h1[buf[k]];
            }
            t1_of[r] = static_cast<std::uint32_t>(t_space.rank(tbuf));
        }
        s2_seq.resize(s2_space.count() * n);
        t2_of.resize(s2_space.count());
        for (std::uint64_t r = 0; r < s2_space.count(); ++r) {
            s2_space.unrank(r, buf);
            for (int k = 0; k < n; ++k) {
                s2_seq[r * n + k] = buf[k];
                tbuf[k] = cp.h2[buf[k]];
            }
            t2_of[r] = static_cast<std::uint32_t>(t_space.rank(tbuf));
            s2_by_t[t2_of[r]].push_back(static_cast<std::uint32_t>(r));
        }
        t_seq.resize(t_space.count() * n);
        for (std::uint64_t r = 0; r < t_space.count(); ++r)
            t_space.unrank(r, std::span<int>(t_seq.data() + r * n, static_cast<std::size_t>(n)));
    }

    const int* s1_at(std::uint32_t r) const { return s1_seq.data() + std::size_t(r) * t_space.length(); }
    const int* s2_at(std::uint32_t r) const { return s2_seq.data() + std::size_t(r) * t_space.length(); }
    const int* t_at(std::uint32_t tr) const { return t_seq.data() + std::size_t(tr) * t_space.length(); }
};

// Filler sequences for block B+1 plus the surrogate side information the
// backward/bootstrap decodes need.
struct Fillers {
    std::vector<int> a1, a2, alpha_w, alpha_w3;
    std::uint32_t a1_rank = 0, a2_rank = 0, t_rank = 0;
};

Fillers draw_fillers(const SourceSideInfoModel& model, const SourceTables& tables, int n,
                     Rng& rng) {
    Fillers f;
    f.a1.resize(n);
    f.a2.resize(n);
    f.alpha_w.resize(n);
    f.alpha_w3.resize(n);
    const JointSampler pair_sampler(project(model.joint, {kS1, kS2}));
    const KernelSampler w_given(model.joint.conditional({kW}, {kS1, kS2}));
    const KernelSampler w3_given(model.joint.conditional({kW3}, {kS1, kS2}));
    const std::size_t s2c = model.s2_size();
    std::vector<int> pair(2);
    for (int k = 0; k < n; ++k) {
        pair_sampler.draw(pair, rng);
        f.a1[k] = pair[0];
        f.a2[k] = pair[1];
        const std::size_t row = std::size_t(pair[0]) * s2c + pair[1];
        f.alpha_w[k] = static_cast<int>(w_given.draw_flat(row, rng));
        f.alpha_w3[k] = static_cast<int>(w3_given.draw_flat(row, rng));
    }
    f.a1_rank = static_cast<std::uint32_t>(tables.s1_space.rank(f.a1));
    f.a2_rank = static_cast<std::uint32_t>(tables.s2_space.rank(f.a2));
    f.t_rank = tables.t1_of[f.a1_rank];
    return f;
}

struct Counters {
    std::uint64_t relay_block_errors = 0;
    std::uint64_t dest_block_errors = 0;
    std::uint64_t relay_trial_errors = 0;
    std::uint64_t dest_trial_errors = 0;
    std::uint64_t union_trial_errors = 0;
    std::vector<std::uint64_t> first_error_block;

    explicit Counters(int B) : first_error_block(B, 0) {}
    void merge(const Counters& o) {
        relay_block_errors += o.relay_block_errors;
        dest_block_errors += o.dest_block_errors;
        relay_trial_errors += o.relay_trial_errors;
        dest_trial_errors += o.dest_trial_errors;
        union_trial_errors += o.union_trial_errors;
        for (std::size_t i = 0; i < first_error_block.size(); ++i)
            first_error_block[i] += o.first_error_block[i];
    }
};

struct BlockData {
    std::vector<std::vector<int>> s1, s2, w, w3;  // data blocks
    std::vector<std::uint32_t> r1, r2;            // sequence ranks
    std::vector<std::uint32_t> u1, u2;            // bin indices
};

BlockData draw_sources(const SourceSideInfoModel& model, const SourceTables& tables,
                       const BinMap& f1, const BinMap& f2, int n, int B, Rng& rng) {
    BlockData d;
    d.s1.assign(B, std::vector<int>(n));
    d.s2.assign(B, std::vector<int>(n));
    d.w.assign(B, std::vector<int>(n));
    d.w3.assign(B, std::vector<int>(n));
    d.r1.resize(B);
    d.r2.resize(B);
    d.u1.resize(B);
    d.u2.resize(B);
    const JointSampler sampler(model.joint);
    std::vector<int> tuple(4);
    for (int b = 0; b < B; ++b) {
        for (int k = 0; k < n; ++k) {
            sampler.draw(tuple, rng);
            d.s1[b][k] = tuple[0];
            d.s2[b][k] = tuple[1];
            d.w[b][k] = tuple[2];
            d.w3[b][k] = tuple[3];
        }
        d.r1[b] = static_cast<std::uint32_t>(tables.s1_space.rank(d.s1[b]));
        d.r2[b] = static_cast<std::uint32_t>(tables.s2_space.rank(d.s2[b]));
        d.u1[b] = f1.of[d.r1[b]];
        d.u2[b] = f2.of[d.r2[b]];
    }
    return d;
}

void finalize_counters(Counters& total, const BlockMarkovConfig& cfg, std::uint64_t trials,
                       const char* scheme, double wall, SimReport& report) {
    report.trials = trials;
    report.mabrc = cfg.mabrc;
    report.relay_block_errors = total.relay_block_errors;
    report.dest_block_errors = total.dest_block_errors;
    report.relay_trial_errors = total.relay_trial_errors;
    report.dest_trial_errors = total.dest_trial_errors;
    report.union_trial_errors = total.union_trial_errors;
    report.first_error_block_histogram = total.first_error_block;
    report.config_echo = cfg.to_json();
    report.config_echo["scheme"] = scheme;
    report.config_echo["bootstrap"] = "filler";
    report.finalize();
    report.wall_seconds = wall;
}

void require_unit_rate(const BlockMarkovConfig& cfg) {
    cfg.validate();
    if (cfg.m != cfg.n)
        throw std::invalid_argument("CPM schemes run at kappa = 1 and need m == n");
}

// ---------------------------------------------------------------------------
// Scheme A

struct CodebookA {
    BinMap f1, f2;
    std::uint32_t n1 = 1, n2 = 1;
    int n = 0;
    std::vector<int> q;        // [t rank * n + k]
    std::vector<int> v1, v2;   // [u * n + k]
    std::vector<int> x1, x2;   // [(seq rank * bins + u) * n + k]
    std::vector<int> x3;       // [(u1 * n2 + u2) * n + k]
    Fillers fillers;

    const int* q_at(std::uint32_t t) const { return q.data() + std::size_t(t) * n; }
    const int* v1_at(std::uint32_t u) const { return v1.data() + std::size_t(u) * n; }
    const int* v2_at(std::uint32_t u) const { return v2.data() + std::size_t(u) * n; }
    const int* x1_at(std::uint32_t r, std::uint32_t u) const {
        return x1.data() + (std::size_t(r) * n1 + u) * n;
    }
    const int* x2_at(std::uint32_t r, std::uint32_t u) const {
        return x2.data() + (std::size_t(r) * n2 + u) * n;
    }
    const int* x3_at(std::uint32_t u1, std::uint32_t u2) const {
        return x3.data() + (std::size_t(u1) * n2 + u2) * n;
    }
};

CodebookA build_codebook_a(const SourceSideInfoModel& model, const DmChannel& ch,
                           const CpmInputA& input, const SourceTables& tables,
                           const BlockMarkovConfig& cfg) {
    input.validate(model, ch);
    CodebookA cb;
    cb.n = cfg.n;
    cb.n1 = static_cast<std::uint32_t>(table_size(cfg.n, cfg.rates.r1));
    cb.n2 = static_cast<std::uint32_t>(table_size(cfg.n, cfg.rates.r2));
    detail::checked_table(tables.s1_space.count(), cb.n1, "x1 codebook");
    detail::checked_table(tables.s2_space.count(), cb.n2, "x2 codebook");
    detail::checked_table(cb.n1, cb.n2, "x3 codebook");
    detail::checked_table(tables.s1_space.count(), tables.s2_space.count(),
                          "relay candidate pairs");

    Rng rng(cfg.seed, 0);
    cb.f1 = BinMap::uniform(tables.s1_space, cb.n1, rng);
    cb.f2 = BinMap::uniform(tables.s2_space, cb.n2, rng);

    const KernelSampler sample_q(ConditionalPmf::marginal(input.p_q.variables(),
                                                          input.p_q.weights()));
    const KernelSampler sample_v1(ConditionalPmf::marginal(input.p_v1.variables(),
                                                           input.p_v1.weights()));
    const KernelSampler sample_v2(ConditionalPmf::marginal(input.p_v2.variables(),
                                                           input.p_v2.weights()));
    const KernelSampler sample_x1(input.k_x1);
    const KernelSampler sample_x2(input.k_x2);
    const KernelSampler sample_x3(input.k_x3);
    const std::size_t v1c = input.p_v1.variables()[0].alphabet_size;
    const std::size_t v2c = input.p_v2.variables()[0].alphabet_size;
    const std::size_t qc = input.p_q.variables()[0].alphabet_size;

    cb.q.resize(tables.t_space.count() * cfg.n);
    for (auto& sym : cb.q) sym = static_cast<int>(sample_q.draw_flat(0, rng));
    cb.v1.resize(std::size_t(cb.n1) * cfg.n);
    for (auto& sym : cb.v1) sym = static_cast<int>(sample_v1.draw_flat(0, rng));
    cb.v2.resize(std::size_t(cb.n2) * cfg.n);
    for (auto& sym : cb.v2) sym = static_cast<int>(sample_v2.draw_flat(0, rng));

    // x1 letters ~ p(x1 | s1_k, v1_k(u), q_k(t(s1)))
    cb.x1.resize(tables.s1_space.count() * cb.n1 * cfg.n);
    for (std::uint64_t r = 0; r < tables.s1_space.count(); ++r) {
        const int* q_row = cb.q_at(tables.t1_of[r]);
        const int* s_row = tables.s1_at(static_cast<std::uint32_t>(r));
        for (std::uint32_t u = 0; u < cb.n1; ++u)
            for (int k = 0; k < cfg.n; ++k) {
                const std::size_t given =
                    (std::size_t(s_row[k]) * v1c + cb.v1_at(u)[k]) * qc + q_row[k];
                cb.x1[(r * cb.n1 + u) * cfg.n + k] =
                    static_cast<int>(sample_x1.draw_flat(given, rng));
            }
    }
    cb.x2.resize(tables.s2_space.count() * cb.n2 * cfg.n);
    for (std::uint64_t r = 0; r < tables.s2_space.count(); ++r) {
        const int* q_row = cb.q_at(tables.t2_of[r]);
        const int* s_row = tables.s2_at(static_cast<std::uint32_t>(r));
        for (std::uint32_t u = 0; u < cb.n2; ++u)
            for (int k = 0; k < cfg.n; ++k) {
                const std::size_t given =
                    (std::size_t(s_row[k]) * v2c + cb.v2_at(u)[k]) * qc + q_row[k];
                cb.x2[(r * cb.n2 + u) * cfg.n + k] =
                    static_cast<int>(sample_x2.draw_flat(given, rng));
            }
    }
    cb.x3.resize(std::size_t(cb.n1) * cb.n2 * cfg.n);
    for (std::uint32_t u1 = 0; u1 < cb.n1; ++u1)
        for (std::uint32_t u2 = 0; u2 < cb.n2; ++u2)
            for (int k = 0; k < cfg.n; ++k)
                cb.x3[(std::size_t(u1) * cb.n2 + u2) * cfg.n + k] = static_cast<int>(
                    sample_x3.draw_flat(std::size_t(cb.v1_at(u1)[k]) * v2c + cb.v2_at(u2)[k],
                                        rng));
    cb.fillers = draw_fillers(model, tables, cfg.n, rng);
    return cb;
}

void run_trial_a(const SourceSideInfoModel& model, const DmChannel& ch,
                 const SourceTables& tables, const CodebookA& cb, const BlockMarkovConfig& cfg,
                 const KernelSampler& channel, TupleTypicality& relay_typ,
                 TupleTypicality& dest_typ, TupleTypicality& dest_src_typ, std::uint64_t trial,
                 Counters& out) {
    Rng rng(cfg.seed, trial + 1);
    const int n = cfg.n, B = cfg.B;
    const int x2c = ch.x2_size(), x3c = ch.x3_size(), y3c = ch.y3_size();
    BlockData d = draw_sources(model, tables, cb.f1, cb.f2, n, B, rng);

    std::vector<std::vector<int>> y(B + 1), y3(B + 1);
    std::vector<bool> relay_ok(B, true);
    bool relay_failed = false;

    // relay chain state: its current estimates' bin indices
    std::uint32_t rly_u1 = 0, rly_u2 = 0;
    for (int blk = 0; blk <= B; ++blk) {
        const bool first = blk == 0;
        const bool flush = blk == B;
        const std::uint32_t tx_r1 = flush ? cb.fillers.a1_rank : d.r1[blk];
        const std::uint32_t tx_r2 = flush ? cb.fillers.a2_rank : d.r2[blk];
        const std::uint32_t tx_u1 = first ? 0 : (flush ? d.u1[B - 1] : d.u1[blk - 1]);
        const std::uint32_t tx_u2 = first ? 0 : (flush ? d.u2[B - 1] : d.u2[blk - 1]);
        const std::uint32_t tx_b1 = first ? 0 : rly_u1;
        const std::uint32_t tx_b2 = first ? 0 : rly_u2;

        const int* cx1 = cb.x1_at(tx_r1, tx_u1);
        const int* cx2 = cb.x2_at(tx_r2, tx_u2);
        const int* cx3 = cb.x3_at(tx_b1, tx_b2);
        y[blk].resize(n);
        y3[blk].resize(n);
        for (int k = 0; k < n; ++k) {
            const std::size_t row = (std::size_t(cx1[k]) * x2c + cx2[k]) * x3c + cx3[k];
            const std::size_t flat = channel.draw_flat(row, rng);
            y[blk][k] = static_cast<int>(flat / y3c);
            y3[blk][k] = static_cast<int>(flat % y3c);
        }
        if (flush) break;

        // relay decodes the sources of this block directly (one-step CPM
        // decoding over t-matched candidate pairs); the cooperative slots use
        // the relay's own belief about the previous bins, not the truth
        const int b = blk;
        std::uint32_t est1 = 0, est2 = 0;
        int hits = 0;
        for (std::uint32_t r1 = 0; r1 < tables.s1_space.count() && hits < 2; ++r1) {
            const auto it = tables.s2_by_t.find(tables.t1_of[r1]);
            if (it == tables.s2_by_t.end()) continue;
            for (std::uint32_t r2 : it->second) {
                const std::uint32_t tr = tables.t1_of[r1];
                const int* cand[11] = {tables.s1_at(r1),     tables.s2_at(r2),
                                       tables.t_at(tr),      cb.q_at(tr),
                                       cb.v1_at(tx_b1),      cb.v2_at(tx_b2),
                                       cb.x1_at(r1, tx_b1),  cb.x2_at(r2, tx_b2),
                                       cb.x3_at(tx_b1, tx_b2), d.w3[b].data(),
                                       y3[b].data()};
                if (relay_typ.check(cand)) {
                    ++hits;
                    if (hits >= 2) break;
                    est1 = r1;
                    est2 = r2;
                }
            }
        }
        bool ok = hits == 1 && est1 == d.r1[b] && est2 == d.r2[b];
        if (hits != 1) {
            est1 = cb.fillers.a1_rank;  // deterministic fallback, chain continues
            est2 = cb.fillers.a2_rank;
        }
        relay_ok[b] = ok;
        if (!ok) {
            ++out.relay_block_errors;
            relay_failed = true;
        }
        rly_u1 = cb.f1.of[est1];
        rly_u2 = cb.f2.of[est2];
    }

    // destination: backward decoding; block B+1 sources are the fillers and
    // the side information surrogate stands in for the nonexistent w_{B+1}
    bool dest_failed = false;
    int first_bad = -1;
    std::uint32_t next_r1 = cb.fillers.a1_rank, next_r2 = cb.fillers.a2_rank;
    const int* next_w = cb.fillers.alpha_w.data();
    std::vector<int> est_s1(n), est_s2(n);
    for (int b = B - 1; b >= 0; --b) {
        const std::uint32_t tr = tables.t1_of[next_r1];
        std::uint32_t got1 = 0, got2 = 0;
        int hits = 0;
        for (std::uint32_t u1 = 0; u1 < cb.n1 && hits < 2; ++u1)
            for (std::uint32_t u2 = 0; u2 < cb.n2 && hits < 2; ++u2) {
                const int* cand[11] = {tables.s1_at(next_r1), tables.s2_at(next_r2),
                                       tables.t_at(tr),       cb.q_at(tr),
                                       cb.v1_at(u1),          cb.v2_at(u2),
                                       cb.x1_at(next_r1, u1), cb.x2_at(next_r2, u2),
                                       cb.x3_at(u1, u2),      next_w,
                                       y[b + 1].data()};
                if (dest_typ.check(cand)) {
                    ++hits;
                    got1 = u1;
                    got2 = u2;
                }
            }
        bool ok = hits == 1;

        std::uint32_t est1 = cb.fillers.a1_rank, est2 = cb.fillers.a2_rank;
        if (ok) {
            int src_hits = 0;
            for (std::uint32_t r1 : cb.f1.members[got1]) {
                if (src_hits >= 2) break;
                for (std::uint32_t r2 : cb.f2.members[got2]) {
                    const int* cand[3] = {tables.s1_at(r1), tables.s2_at(r2), d.w[b].data()};
                    if (dest_src_typ.check(cand)) {
                        if (++src_hits >= 2) break;
                        est1 = r1;
                        est2 = r2;
                    }
                }
            }
            ok = src_hits == 1 && est1 == d.r1[b] && est2 == d.r2[b];
            if (src_hits != 1) {
                est1 = cb.fillers.a1_rank;
                est2 = cb.fillers.a2_rank;
            }
        }
        if (!ok) {
            ++out.dest_block_errors;
            dest_failed = true;
            first_bad = b;
        }
        next_r1 = est1;
        next_r2 = est2;
        next_w = d.w[b].data();
    }

    if (relay_failed) ++out.relay_trial_errors;
    if (dest_failed) ++out.dest_trial_errors;
    if (relay_failed || dest_failed) ++out.union_trial_errors;
    if (cfg.mabrc ? (relay_failed || dest_failed) : dest_failed) {
        int first = first_bad;
        if (cfg.mabrc)
            for (int b = 0; b < B; ++b)
                if (!relay_ok[b]) {
                    first = first < 0 ? b : std::min(first, b);
                    break;
                }
        if (first < 0) first = 0;
        ++out.first_error_block[first];
    }
}

// ---------------------------------------------------------------------------
// Scheme B

struct CodebookB {
    BinMap f1, f2;
    std::uint32_t n1 = 1, n2 = 1;
    int n = 0;
    std::vector<int> q;        // [t rank * n + k]
    std::vector<int> x1, x2;   // [(u * seq count + rank) * n + k]
    std::vector<int> x3;       // [(r1 * count2 + r2) * n + k], t-matched pairs only
    std::uint64_t count1 = 0, count2 = 0;
    Fillers fillers;

    const int* q_at(std::uint32_t t) const { return q.data() + std::size_t(t) * n; }
    const int* x1_at(std::uint32_t u, std::uint32_t r) const {
        return x1.data() + (std::size_t(u) * count1 + r) * n;
    }
    const int* x2_at(std::uint32_t u, std::uint32_t r) const {
        return x2.data() + (std::size_t(u) * count2 + r) * n;
    }
    const int* x3_at(std::uint32_t r1, std::uint32_t r2) const {
        return x3.data() + (std::size_t(r1) * count2 + r2) * n;
    }
};

CodebookB build_codebook_b(const SourceSideInfoModel& model, const DmChannel& ch,
                           const CpmInputB& input, const SourceTables& tables,
                           const BlockMarkovConfig& cfg) {
    input.validate(model, ch);
    CodebookB cb;
    cb.n = cfg.n;
    cb.count1 = tables.s1_space.count();
    cb.count2 = tables.s2_space.count();
    cb.n1 = static_cast<std::uint32_t>(table_size(cfg.n, cfg.rates.r1));
    cb.n2 = static_cast<std::uint32_t>(table_size(cfg.n, cfg.rates.r2));
    detail::checked_table(cb.count1, cb.n1, "x1 codebook");
    detail::checked_table(cb.count2, cb.n2, "x2 codebook");
    detail::checked_table(cb.count1, cb.count2, "x3 codebook");

    Rng rng(cfg.seed, 0);
    cb.f1 = BinMap::uniform(tables.s1_space, cb.n1, rng);
    cb.f2 = BinMap::uniform(tables.s2_space, cb.n2, rng);

    const KernelSampler sample_q(ConditionalPmf::marginal(input.p_q.variables(),
                                                          input.p_q.weights()));
    const KernelSampler sample_x1(input.k_x1);
    const KernelSampler sample_x2(input.k_x2);
    const KernelSampler sample_x3(input.k_x3);
    const std::size_t qc = input.p_q.variables()[0].alphabet_size;
    const std::size_t s2c = model.s2_size();

    cb.q.resize(tables.t_space.count() * cfg.n);
    for (auto& sym : cb.q) sym = static_cast<int>(sample_q.draw_flat(0, rng));

    cb.x1.resize(std::size_t(cb.n1) * cb.count1 * cfg.n);
    for (std::uint32_t u = 0; u < cb.n1; ++u)
        for (std::uint64_t r = 0; r < cb.count1; ++r) {
            const int* q_row = cb.q_at(tables.t1_of[r]);
            const int* s_row = tables.s1_at(static_cast<std::uint32_t>(r));
            for (int k = 0; k < cfg.n; ++k)
                cb.x1[(std::size_t(u) * cb.count1 + r) * cfg.n + k] = static_cast<int>(
                    sample_x1.draw_flat(std::size_t(s_row[k]) * qc + q_row[k], rng));
        }
    cb.x2.resize(std::size_t(cb.n2) * cb.count2 * cfg.n);
    for (std::uint32_t u = 0; u < cb.n2; ++u)
        for (std::uint64_t r = 0; r < cb.count2; ++r) {
            const int* q_row = cb.q_at(tables.t2_of[r]);
            const int* s_row = tables.s2_at(static_cast<std::uint32_t>(r));
            for (int k = 0; k < cfg.n; ++k)
                cb.x2[(std::size_t(u) * cb.count2 + r) * cfg.n + k] = static_cast<int>(
                    sample_x2.draw_flat(std::size_t(s_row[k]) * qc + q_row[k], rng));
        }

    // relay codewords exist for common-part-compatible pairs only
    cb.x3.assign(cb.count1 * cb.count2 * cfg.n, 0);
    for (std::uint64_t r1 = 0; r1 < cb.count1; ++r1) {
        const auto it = tables.s2_by_t.find(tables.t1_of[r1]);
        if (it == tables.s2_by_t.end()) continue;
        const int* q_row = cb.q_at(tables.t1_of[r1]);
        const int* s1_row = tables.s1_at(static_cast<std::uint32_t>(r1));
        for (std::uint32_t r2 : it->second) {
            const int* s2_row = tables.s2_at(r2);
            for (int k = 0; k < cfg.n; ++k) {
                const std::size_t given =
                    (std::size_t(s1_row[k]) * s2c + s2_row[k]) * qc + q_row[k];
                cb.x3[(r1 * cb.count2 + r2) * cfg.n + k] =
                    static_cast<int>(sample_x3.draw_flat(given, rng));
            }
        }
    }
    cb.fillers = draw_fillers(model, tables, cfg.n, rng);
    return cb;
}

void run_trial_b(const SourceSideInfoModel& model, const DmChannel& ch,
                 const SourceTables& tables, const CodebookB& cb, const BlockMarkovConfig& cfg,
                 const KernelSampler& channel, TupleTypicality& relay_typ,
                 TupleTypicality& dest_typ, TupleTypicality& relay_src_typ, std::uint64_t trial,
                 Counters& out) {
    Rng rng(cfg.seed, trial + 1);
    const int n = cfg.n, B = cfg.B;
    const int x2c = ch.x2_size(), x3c = ch.x3_size(), y3c = ch.y3_size();
    BlockData d = draw_sources(model, tables, cb.f1, cb.f2, n, B, rng);

    std::vector<std::vector<int>> y(B + 1), y3(B + 1);
    std::vector<bool> relay_ok(B, true);
    bool relay_failed = false;

    // relay estimates of the previous data block (bootstrap: the fillers)
    std::uint32_t rly_r1 = cb.fillers.a1_rank, rly_r2 = cb.fillers.a2_rank;
    for (int blk = 0; blk <= B; ++blk) {
        const bool first = blk == 0;
        const bool flush = blk == B;
        const std::uint32_t tx_u1 = flush ? 0 : d.u1[blk];
        const std::uint32_t tx_u2 = flush ? 0 : d.u2[blk];
        const std::uint32_t tx_p1 = first ? cb.fillers.a1_rank : d.r1[blk - 1];
        const std::uint32_t tx_p2 = first ? cb.fillers.a2_rank : d.r2[blk - 1];

        const int* cx1 = cb.x1_at(tx_u1, tx_p1);
        const int* cx2 = cb.x2_at(tx_u2, tx_p2);
        const int* cx3 = cb.x3_at(rly_r1, rly_r2);
        y[blk].resize(n);
        y3[blk].resize(n);
        for (int k = 0; k < n; ++k) {
            const std::size_t row = (std::size_t(cx1[k]) * x2c + cx2[k]) * x3c + cx3[k];
            const std::size_t flat = channel.draw_flat(row, rng);
            y[blk][k] = static_cast<int>(flat / y3c);
            y3[blk][k] = static_cast<int>(flat % y3c);
        }
        if (flush) break;

        // relay channel decoder: bin pair of the current block, checked
        // against the one-block-earlier side information
        const int b = blk;
        const std::uint32_t tr = tables.t1_of[rly_r1];
        const int* w3_prev = first ? cb.fillers.alpha_w3.data() : d.w3[b - 1].data();
        std::uint32_t got1 = 0, got2 = 0;
        int hits = 0;
        for (std::uint32_t c1 = 0; c1 < cb.n1 && hits < 2; ++c1)
            for (std::uint32_t c2 = 0; c2 < cb.n2 && hits < 2; ++c2) {
                const int* cand[9] = {tables.s1_at(rly_r1), tables.s2_at(rly_r2),
                                      tables.t_at(tr),      cb.q_at(tr),
                                      cb.x1_at(c1, rly_r1), cb.x2_at(c2, rly_r2),
                                      cb.x3_at(rly_r1, rly_r2), w3_prev,
                                      y3[b].data()};
                if (relay_typ.check(cand)) {
                    ++hits;
                    got1 = c1;
                    got2 = c2;
                }
            }
        bool ok = hits == 1;

        std::uint32_t est1 = cb.fillers.a1_rank, est2 = cb.fillers.a2_rank;
        if (ok) {
            int src_hits = 0;
            for (std::uint32_t r1 : cb.f1.members[got1]) {
                if (src_hits >= 2) break;
                for (std::uint32_t r2 : cb.f2.members[got2]) {
                    const int* cand[3] = {tables.s1_at(r1), tables.s2_at(r2), d.w3[b].data()};
                    if (relay_src_typ.check(cand)) {
                        if (++src_hits >= 2) break;
                        est1 = r1;
                        est2 = r2;
                    }
                }
            }
            ok = src_hits == 1 && est1 == d.r1[b] && est2 == d.r2[b];
            if (src_hits != 1) {
                est1 = cb.fillers.a1_rank;
                est2 = cb.fillers.a2_rank;
            }
        }
        relay_ok[b] = ok;
        if (!ok) {
            ++out.relay_block_errors;
            relay_failed = true;
        }
        rly_r1 = est1;
        rly_r2 = est2;
    }

    // destination: backward decoding of the sources directly, with the
    // one-block-earlier side information w_b against y_{b+1}
    bool dest_failed = false;
    int first_bad = -1;
    std::uint32_t next_u1 = 0, next_u2 = 0;  // flush bins of block B+1
    for (int b = B - 1; b >= 0; --b) {
        std::uint32_t est1 = cb.fillers.a1_rank, est2 = cb.fillers.a2_rank;
        int hits = 0;
        for (std::uint32_t r1 = 0; r1 < cb.count1 && hits < 2; ++r1) {
            const auto it = tables.s2_by_t.find(tables.t1_of[r1]);
            if (it == tables.s2_by_t.end()) continue;
            const std::uint32_t tr = tables.t1_of[r1];
            for (std::uint32_t r2 : it->second) {
                const int* cand[9] = {tables.s1_at(r1),     tables.s2_at(r2),
                                      tables.t_at(tr),      cb.q_at(tr),
                                      cb.x1_at(next_u1, r1), cb.x2_at(next_u2, r2),
                                      cb.x3_at(r1, r2),     d.w[b].data(),
                                      y[b + 1].data()};
                if (dest_typ.check(cand)) {
                    ++hits;
                    if (hits >= 2) break;
                    est1 = r1;
                    est2 = r2;
                }
            }
        }
        const bool ok = hits == 1 && est1 == d.r1[b] && est2 == d.r2[b];
        if (hits != 1) {
            est1 = cb.fillers.a1_rank;
            est2 = cb.fillers.a2_rank;
        }
        if (!ok) {
            ++out.dest_block_errors;
            dest_failed = true;
            first_bad = b;
        }
        next_u1 = cb.f1.of[est1];
        next_u2 = cb.f2.of[est2];
    }

    if (relay_failed) ++out.relay_trial_errors;
    if (dest_failed) ++out.dest_trial_errors;
    if (relay_failed || dest_failed) ++out.union_trial_errors;
    if (cfg.mabrc ? (relay_failed || dest_failed) : dest_failed) {
        int first = first_bad;
        if (cfg.mabrc)
            for (int b = 0; b < B; ++b)
                if (!relay_ok[b]) {
                    first = first < 0 ? b : std::min(first, b);
                    break;
                }
        if (first < 0) first = 0;
        ++out.first_error_block[first];
    }
}

// StateFactory builds per-worker scratch (typicality counters); TrialFn runs
// one trial against that scratch. Per-trial seeds make the outcome
// independent of the worker count.
template <typename StateFactory, typename TrialFn>
SimReport run_parallel(const BlockMarkovConfig& cfg, std::uint64_t trials, const char* scheme,
                       const std::chrono::steady_clock::time_point& t0,
                       StateFactory&& make_state, TrialFn&& trial_fn) {
    const unsigned threads = cfg.max_threads > 0
                                 ? static_cast<unsigned>(cfg.max_threads)
                                 : std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers =
        static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(trials, 1)));
    std::vector<Counters> partial(workers, Counters(cfg.B));
    auto work = [&](unsigned wid) {
        auto state = make_state();
        for (std::uint64_t t = wid; t < trials; t += workers) trial_fn(state, t, partial[wid]);
    };
    if (workers <= 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned wid = 0; wid < workers; ++wid) pool.emplace_back(work, wid);
        for (auto& th : pool) th.join();
    }
    Counters total(cfg.B);
    for (const auto& p : partial) total.merge(p);
    SimReport report;
    finalize_counters(total, cfg, trials, scheme, 0.0, report);
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

} // namespace

SimReport run_cpm_scheme_a(const SourceSideInfoModel& model, const DmChannel& ch,
                           const CpmInputA& input, const BlockMarkovConfig& cfg,
                           std::uint64_t trials) {
    require_unit_rate(cfg);
    const auto t0 = std::chrono::steady_clock::now();
    const SourceTables tables(model, cfg.n);
    const CodebookA cb = build_codebook_a(model, ch, input, tables, cfg);
    const JointPmf joint = input.induced_joint(model, ch);
    const JointPmf relay_joint =
        project(joint, {kS1, kS2, kT, kQ, kV1, kV2, kX1, kX2, kX3, kW3, kY3});
    const JointPmf dest_joint =
        project(joint, {kS1, kS2, kT, kQ, kV1, kV2, kX1, kX2, kX3, kW, kY});
    const JointPmf dest_src = project(model.joint, {kS1, kS2, kW});
    const KernelSampler channel(ch.law);

    struct Workspace {
        TupleTypicality relay, dest, dest_src;
    };
    return run_parallel(
        cfg, trials, "cpm-a", t0,
        [&] {
            return Workspace{TupleTypicality(relay_joint, cfg.epsilon, cfg.n),
                             TupleTypicality(dest_joint, cfg.epsilon, cfg.n),
                             TupleTypicality(dest_src, cfg.epsilon, cfg.n)};
        },
        [&](Workspace& ws, std::uint64_t t, Counters& c) {
            run_trial_a(model, ch, tables, cb, cfg, channel, ws.relay, ws.dest, ws.dest_src, t,
                        c);
        });
}

SimReport run_cpm_scheme_b(const SourceSideInfoModel& model, const DmChannel& ch,
                           const CpmInputB& input, const BlockMarkovConfig& cfg,
                           std::uint64_t trials) {
    require_unit_rate(cfg);
    const auto t0 = std::chrono::steady_clock::now();
    const SourceTables tables(model, cfg.n);
    const CodebookB cb = build_codebook_b(model, ch, input, tables, cfg);
    const JointPmf joint = input.induced_joint(model, ch);
    const JointPmf relay_joint = project(joint, {kS1, kS2, kT, kQ, kX1, kX2, kX3, kW3, kY3});
    const JointPmf dest_joint = project(joint, {kS1, kS2, kT, kQ, kX1, kX2, kX3, kW, kY});
    const JointPmf relay_src = project(model.joint, {kS1, kS2, kW3});
    const KernelSampler channel(ch.law);

    struct Workspace {
        TupleTypicality relay, dest, relay_src;
    };
    return run_parallel(
        cfg, trials, "cpm-b", t0,
        [&] {
            return Workspace{TupleTypicality(relay_joint, cfg.epsilon, cfg.n),
                             TupleTypicality(dest_joint, cfg.epsilon, cfg.n),
                             TupleTypicality(relay_src, cfg.epsilon, cfg.n)};
        },
        [&](Workspace& ws, std::uint64_t t, Counters& c) {
            run_trial_b(model, ch, tables, cb, cfg, channel, ws.relay, ws.dest, ws.relay_src, t,
                        c);
        });
}

} // namespace marclab::sim
