#ifndef MARCLAB_SIM_SIM_SEPARATION_HPP
#define MARCLAB_SIM_SIM_SEPARATION_HPP

#include "marclab/sim/block_markov.hpp"

namespace marclab::sim {

/// Monte-Carlo run of the separation-based DF scheme: distinct relay and
/// destination Slepian-Wolf bins per user (irregular encoding), superposition
/// codewords x_i(u_i^r, u_i^d) over v_i(u_i^d), relay successive decoding,
/// destination backward decoding. A trial counts as a destination error when
/// any data block is reconstructed wrongly (zero or multiple typical
/// candidates included); relay errors join the count in MABRC mode.
SimReport run_separation_df(const SourceSideInfoModel& model, const DmChannel& ch,
                            const SeparationInput& input, const BlockMarkovConfig& cfg,
                            std::uint64_t trials);

} // namespace marclab::sim

#endif
