#ifndef MARCLAB_MODELS_HPP
#define MARCLAB_MODELS_HPP

#include <cstdint>
#include <functional>
#include <json.hpp>

#include "marclab/joint_pmf.hpp"

namespace marclab {

// Canonical variable names used throughout the checkers. External JSON may
// use other labels via per-variable "role" annotations; loaders canonicalize.
inline constexpr const char* kS1 = "S1";
inline constexpr const char* kS2 = "S2";
inline constexpr const char* kW = "W";
inline constexpr const char* kW3 = "W3";
inline constexpr const char* kX1 = "X1";
inline constexpr const char* kX2 = "X2";
inline constexpr const char* kX3 = "X3";
inline constexpr const char* kY = "Y";
inline constexpr const char* kY3 = "Y3";
inline constexpr const char* kV1 = "V1";
inline constexpr const char* kV2 = "V2";
inline constexpr const char* kQ = "Q";
inline constexpr const char* kT = "T";

/// Sources and side information p(s1, s2, w, w3).
struct SourceSideInfoModel {
    JointPmf joint;

    explicit SourceSideInfoModel(JointPmf j);
    static SourceSideInfoModel from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    int s1_size() const { return joint.variable(kS1).alphabet_size; }
    int s2_size() const { return joint.variable(kS2).alphabet_size; }
};

/// Memoryless channel law p(y, y3 | x1, x2, x3).
struct DmChannel {
    ConditionalPmf law;

    explicit DmChannel(ConditionalPmf k);
    static DmChannel from_json(const nlohmann::json& j);

    /// Deterministic channel y = fy(x1,x2,x3), y3 = fy3(x1,x2,x3).
    static DmChannel deterministic(int x1, int x2, int x3, int y, int y3,
                                   const std::function<int(int, int, int)>& fy,
                                   const std::function<int(int, int, int)>& fy3);
    nlohmann::json to_json() const;

    int x1_size() const { return law.given()[0].alphabet_size; }
    int x2_size() const { return law.given()[1].alphabet_size; }
    int x3_size() const { return law.given()[2].alphabet_size; }
    int y_size() const { return law.outputs()[0].alphabet_size; }
    int y3_size() const { return law.outputs()[1].alphabet_size; }
};

/// Input distribution of the separation-based scheme:
/// p(v1) p(x1|v1) p(v2) p(x2|v2) p(x3|v1,v2).
struct SeparationInput {
    JointPmf p_v1;          // over V1
    JointPmf p_v2;          // over V2
    ConditionalPmf k_x1;    // X1 | V1
    ConditionalPmf k_x2;    // X2 | V2
    ConditionalPmf k_x3;    // X3 | V1,V2

    /// Trivial auxiliaries (|V1| = |V2| = 1) with fixed input marginals.
    static SeparationInput independent(std::vector<double> px1, std::vector<double> px2,
                                       std::vector<double> px3);
    static SeparationInput from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    /// Throws, naming the offending factor, unless all factors are shaped and
    /// named per the scheme's factorization.
    void validate(const DmChannel& ch) const;

    /// Joint over (V1,V2,X1,X2,X3,Y,Y3).
    JointPmf induced_joint(const DmChannel& ch) const;
};

/// Input distribution of the first CPM scheme:
/// p(q) p(v1) p(x1|s1,v1,q) p(v2) p(x2|s2,v2,q) p(x3|v1,v2).
struct CpmInputA {
    JointPmf p_q;           // over Q
    JointPmf p_v1;          // over V1
    JointPmf p_v2;          // over V2
    ConditionalPmf k_x1;    // X1 | S1,V1,Q
    ConditionalPmf k_x2;    // X2 | S2,V2,Q
    ConditionalPmf k_x3;    // X3 | V1,V2

    static CpmInputA from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
    void validate(const SourceSideInfoModel& model, const DmChannel& ch) const;

    /// Joint over (S1,S2,W,W3,T,Q,V1,V2,X1,X2,X3,Y,Y3); T is the
    /// Gacs-Korner common part of (S1,S2).
    JointPmf induced_joint(const SourceSideInfoModel& model, const DmChannel& ch) const;
};

/// Input distribution of the second CPM scheme:
/// p(q) p(x1|s1,q) p(x2|s2,q) p(x3|s1,s2,q).
struct CpmInputB {
    JointPmf p_q;           // over Q
    ConditionalPmf k_x1;    // X1 | S1,Q
    ConditionalPmf k_x2;    // X2 | S2,Q
    ConditionalPmf k_x3;    // X3 | S1,S2,Q

    static CpmInputB from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
    void validate(const SourceSideInfoModel& model, const DmChannel& ch) const;

    /// Joint over (S1,S2,W,W3,T,Q,X1,X2,X3,Y,Y3).
    JointPmf induced_joint(const SourceSideInfoModel& model, const DmChannel& ch) const;
};

/// Per-inequality verdicts with values and margins.
struct ConditionReport {
    struct Condition {
        std::string label;
        double lhs_bits = 0.0;
        double rhs_bits = 0.0;
        double margin_bits = 0.0;  // rhs - lhs
        bool satisfied = false;
    };
    std::vector<Condition> conditions;
    bool all_satisfied = false;
    std::string verdict;  // achievability: "satisfied"/"not-satisfied";
                          // converse: "necessary-conditions-violated"/"inconclusive"

    void finalize_achievability(double strictness_margin);
    void finalize_converse();
    const Condition& find(const std::string& label) const;
    nlohmann::json to_json() const;
};

/// Knobs for the heuristic input-distribution searches.
struct SearchConfig {
    int grid_points_per_simplex_dim = 21;
    int random_restarts = 48;
    int aux_cardinality = 4;  // |V| bound of the auxiliary outer bound
    std::uint64_t seed = 1;
    int max_ascent_sweeps = 200;
};

// Strict achievability inequalities are tested as lhs < rhs - delta, converse
// ones as lhs <= rhs + delta.
inline constexpr double kStrictnessMargin = 1e-9;

} // namespace marclab

#endif
