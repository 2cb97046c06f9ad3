#ifndef MARCLAB_SIM_SIM_SOMARC_HPP
#define MARCLAB_SIM_SIM_SOMARC_HPP

#include "marclab/sim/block_markov.hpp"

namespace marclab::sim {

/// The uncoded transmission over the semi-orthogonal MARC example: X1 = S1,
/// X2 = S2, the destination inverts Y_S = X1 + X2 through the source support
/// {(0,0),(0,1),(1,1)}. Reports exactly zero errors for every seed.
SimReport run_uncoded_somarc(std::uint64_t trials, std::uint64_t seed);

/// Same run with a configurable decoder for the ambiguous-looking middle
/// output: `decode_of_ys1` is the (s1,s2) pair declared when Y_S = 1, encoded
/// as 2*s1+s2. The example's correct choice is (0,1); flipping it to (1,0)
/// misdecodes a third of the samples.
SimReport run_uncoded_somarc_with_decoder(std::uint64_t trials, std::uint64_t seed,
                                          int decode_of_ys1);

} // namespace marclab::sim

#endif
