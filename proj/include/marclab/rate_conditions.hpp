#ifndef MARCLAB_RATE_CONDITIONS_HPP
#define MARCLAB_RATE_CONDITIONS_HPP

#include "marclab/models.hpp"

namespace marclab {

/// Achievability of source-channel rate kappa via the separation-based DF
/// scheme: six conditions labeled thm1.{rly,dst}.{S1,S2,S1S2}. Source
/// entropies on the left, kappa-scaled channel mutual informations (under
/// `input`) on the right.
ConditionReport check_thm1(const SourceSideInfoModel& model, const DmChannel& ch,
                           const SeparationInput& input, double kappa,
                           double strictness_margin = kStrictnessMargin);

/// Achievability at kappa = 1 via the first CPM scheme: seven conditions
/// thm6.rly.{S1,S2,S1S2.T,S1S2} and thm6.dst.{S1,S2,S1S2}.
ConditionReport check_thm6_cpm(const SourceSideInfoModel& model, const DmChannel& ch,
                               const CpmInputA& input,
                               double strictness_margin = kStrictnessMargin);

/// Achievability at kappa = 1 via the second CPM scheme: seven conditions
/// thm7.rly.{S1,S2,S1S2} and thm7.dst.{S1,S2,S1S2.T,S1S2}.
ConditionReport check_thm7_cpm(const SourceSideInfoModel& model, const DmChannel& ch,
                               const CpmInputB& input,
                               double strictness_margin = kStrictnessMargin);

/// Single-source cooperative relay-broadcast reduction: S2 (and X2) must be
/// degenerate; `input` is an arbitrary joint over (X1,X3). Two conditions,
/// crbc.rly.S1 and crbc.dst.S1.
ConditionReport check_crbc(const SourceSideInfoModel& model_single_source, const DmChannel& ch,
                           const JointPmf& input_x1x3, double kappa,
                           double strictness_margin = kStrictnessMargin);

} // namespace marclab

#endif
