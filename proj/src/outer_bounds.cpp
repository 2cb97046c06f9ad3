#include "marclab/outer_bounds.hpp"

#include <stdexcept>

#include "marclab/info_measures.hpp"

namespace marclab {

namespace {

ConditionReport::Condition bound_condition(const DmChannel& ch, const SourceSideInfoModel& model,
                                           const std::string& label,
                                           const std::vector<std::string>& lhs_target,
                                           const std::vector<std::string>& lhs_given,
                                           const MiObjective& objective, const DistFamily& family,
                                           double kappa, const SearchConfig& cfg) {
    ConditionReport::Condition c;
    c.label = label;
    c.lhs_bits = entropy(model.joint, lhs_target, lhs_given);
    c.rhs_bits = kappa * maximize_mi(ch, objective, family, cfg).best_bits;
    return c;
}

} // namespace

ConditionReport check_outer_thm2(const SourceSideInfoModel& model, const DmChannel& ch,
                                 double kappa, const SearchConfig& cfg) {
    if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
    const DistFamily joint = DistFamily::joint_inputs(ch);
    const DistFamily aux = DistFamily::aux_broadcast(ch, cfg.aux_cardinality);

    ConditionReport report;
    report.conditions = {
        bound_condition(ch, model, "thm2.dst.S1", {kS1}, {kS2, kW},
                        {"I(X1,X3;Y|X2)", {kX1, kX3}, {kY}, {kX2}}, joint, kappa, cfg),
        bound_condition(ch, model, "thm2.dst.S2", {kS2}, {kS1, kW},
                        {"I(X2,X3;Y|X1)", {kX2, kX3}, {kY}, {kX1}}, joint, kappa, cfg),
        bound_condition(ch, model, "thm2.dst.S1S2", {kS1, kS2}, {kW},
                        {"I(X1,X2,X3;Y)", {kX1, kX2, kX3}, {kY}, {}}, joint, kappa, cfg),
        bound_condition(ch, model, "thm2.aux.S1", {kS1}, {kS2, kW, kW3},
                        {"I(X1;Y,Y3|X2,V)", {kX1}, {kY, kY3}, {kX2, "V"}}, aux, kappa, cfg),
        bound_condition(ch, model, "thm2.aux.S2", {kS2}, {kS1, kW, kW3},
                        {"I(X2;Y,Y3|X1,V)", {kX2}, {kY, kY3}, {kX1, "V"}}, aux, kappa, cfg),
        bound_condition(ch, model, "thm2.aux.S1S2", {kS1, kS2}, {kW, kW3},
                        {"I(X1,X2;Y,Y3|V)", {kX1, kX2}, {kY, kY3}, {"V"}}, aux, kappa, cfg),
    };
    report.finalize_converse();
    return report;
}

ConditionReport check_outer_thm3_relay(const SourceSideInfoModel& model, const DmChannel& ch,
                                       double kappa, const SearchConfig& cfg) {
    if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
    const DistFamily joint = DistFamily::joint_inputs(ch);

    ConditionReport report;
    report.conditions = {
        bound_condition(ch, model, "thm3.rly.S1", {kS1}, {kS2, kW3},
                        {"I(X1;Y3|X2,X3)", {kX1}, {kY3}, {kX2, kX3}}, joint, kappa, cfg),
        bound_condition(ch, model, "thm3.rly.S2", {kS2}, {kS1, kW3},
                        {"I(X2;Y3|X1,X3)", {kX2}, {kY3}, {kX1, kX3}}, joint, kappa, cfg),
        bound_condition(ch, model, "thm3.rly.S1S2", {kS1, kS2}, {kW3},
                        {"I(X1,X2;Y3|X3)", {kX1, kX2}, {kY3}, {kX3}}, joint, kappa, cfg),
    };
    report.finalize_converse();
    return report;
}

} // namespace marclab
