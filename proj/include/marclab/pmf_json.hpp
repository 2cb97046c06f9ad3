#ifndef MARCLAB_PMF_JSON_HPP
#define MARCLAB_PMF_JSON_HPP

#include <json.hpp>

#include "marclab/joint_pmf.hpp"

namespace marclab {

// Wire schema:
//   JointPmf        {"variables":[{"name":"S1","size":2},...],"weights":[...]}
//   ConditionalPmf  {"given":[...],"outputs":[...],"kernel":[...]}
// Weights and kernels are row-major with the last-listed variable fastest.
// A variable entry may carry "role"; when present it replaces the name, which
// lets external files use their own labels for S1/S2/W/W3/X1/.../Y3.

nlohmann::json to_json(const JointPmf& pmf);
nlohmann::json to_json(const ConditionalPmf& kernel);

/// `normalize_slack` > 0 accepts slightly off-mass weight vectors and
/// renormalizes them; 0 demands construction-grade mass.
JointPmf joint_pmf_from_json(const nlohmann::json& j, double normalize_slack = 1e-9);
ConditionalPmf conditional_pmf_from_json(const nlohmann::json& j);

} // namespace marclab

#endif
