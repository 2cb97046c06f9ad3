#ifndef MARCLAB_OUTER_BOUNDS_HPP
#define MARCLAB_OUTER_BOUNDS_HPP

#include "marclab/mi_search.hpp"

namespace marclab {

/// Necessary conditions on an achievable kappa for the MARC: three
/// constraints over a fully general input p(x1,x2,x3) (thm2.dst.*) and three
/// over the auxiliary family p(v)p(x1,x2|v)p(x3|v), |V| = cfg.aux_cardinality
/// (thm2.aux.*). Right-hand sides are heuristically maximized, so the report
/// distinguishes "necessary-conditions-violated" (kappa provably
/// unachievable) from "inconclusive".
ConditionReport check_outer_thm2(const SourceSideInfoModel& model, const DmChannel& ch,
                                 double kappa, const SearchConfig& cfg);

/// The three additional relay-side necessary conditions that the broadcast
/// variant adds (thm3.rly.*): H(.|., W3) <= kappa * max I(.; Y3 | ., X3).
ConditionReport check_outer_thm3_relay(const SourceSideInfoModel& model, const DmChannel& ch,
                                       double kappa, const SearchConfig& cfg);

} // namespace marclab

#endif
