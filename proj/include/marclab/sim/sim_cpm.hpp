#ifndef MARCLAB_SIM_SIM_CPM_HPP
#define MARCLAB_SIM_SIM_CPM_HPP

#include "marclab/sim/block_markov.hpp"

namespace marclab::sim {

// Both CPM schemes run at source-channel rate 1, so cfg.m must equal cfg.n.
// Block B+1 carries known filler source sequences; scheme B's block-1 relay
// decoding additionally uses a surrogate side-information sequence drawn from
// p(w3 | s1, s2) at the fillers, since no earlier block exists (flagged in
// the report as "bootstrap": "filler").

/// First CPM scheme: channel codewords x_i(s_i, u_i, q(t)) correlate with the
/// current sources (CPM toward the relay); the destination decodes
/// Slepian-Wolf bin indices backward and then the sources.
SimReport run_cpm_scheme_a(const SourceSideInfoModel& model, const DmChannel& ch,
                           const CpmInputA& input, const BlockMarkovConfig& cfg,
                           std::uint64_t trials);

/// Second CPM scheme: codewords x_i(u_i, s_i^prev, q) bin the current block
/// and correlate with the previous one (CPM toward the destination, which
/// decodes the sources directly); the relay decodes bin indices using the
/// one-block-earlier side information.
SimReport run_cpm_scheme_b(const SourceSideInfoModel& model, const DmChannel& ch,
                           const CpmInputB& input, const BlockMarkovConfig& cfg,
                           std::uint64_t trials);

} // namespace marclab::sim

#endif
