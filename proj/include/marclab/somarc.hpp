#ifndef MARCLAB_SOMARC_HPP
#define MARCLAB_SOMARC_HPP

#include "marclab/models.hpp"

namespace marclab {

// The semi-orthogonal MARC example: binary X1, X2, X3 with
//   Y_S = X1 + X2 (noiseless adder toward the destination),
//   Y_R = X3     (orthogonal relay-destination pipe),
//   Y_3 = X1 XOR X2 (what the relay hears),
// and the source pair p(0,0) = p(0,1) = p(1,1) = 1/3.

/// p(s1, s2) of the example's source table.
JointPmf somarc_source_pair();

/// Source table padded with degenerate side information (|W| = |W3| = 1).
SourceSideInfoModel somarc_source_model();

/// The full channel; the destination output Y packs (Y_S, Y_R) as
/// y = 2 * y_s + y_r (|Y| = 6), Y3 is the XOR.
DmChannel somarc_channel();

/// The adder-MAC reduction used for the sum-capacity bound: Y = Y_S only
/// (|Y| = 3), X3 degenerate, Y3 the XOR.
DmChannel somarc_mac_channel();

} // namespace marclab

#endif
