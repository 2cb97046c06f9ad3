#include "marclab/rate_conditions.hpp"

#include <stdexcept>

#include "marclab/info_measures.hpp"

namespace marclab {

namespace {

using Vars = std::vector<std::string>;

ConditionReport::Condition make(const std::string& label, double lhs, double rhs) {
    ConditionReport::Condition c;
    c.label = label;
    c.lhs_bits = lhs;
    c.rhs_bits = rhs;
    return c;
}

} // namespace

ConditionReport check_thm1(const SourceSideInfoModel& model, const DmChannel& ch,
                           const SeparationInput& input, double kappa,
                           double strictness_margin) {
    if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
    const JointPmf& src = model.joint;
    const JointPmf chan = input.induced_joint(ch);

    ConditionReport report;
    report.conditions = {
        make("thm1.rly.S1", entropy(src, {kS1}, {kS2, kW3}),
             kappa * mutual_information(chan, {kX1}, {kY3}, {kV1, kX2, kX3})),
        make("thm1.rly.S2", entropy(src, {kS2}, {kS1, kW3}),
             kappa * mutual_information(chan, {kX2}, {kY3}, {kV2, kX1, kX3})),
        make("thm1.rly.S1S2", entropy(src, {kS1, kS2}, {kW3}),
             kappa * mutual_information(chan, {kX1, kX2}, {kY3}, {kV1, kV2, kX3})),
        make("thm1.dst.S1", entropy(src, {kS1}, {kS2, kW}),
             kappa * mutual_information(chan, {kX1, kX3}, {kY}, {kV2, kX2})),
        make("thm1.dst.S2", entropy(src, {kS2}, {kS1, kW}),
             kappa * mutual_information(chan, {kX2, kX3}, {kY}, {kV1, kX1})),
        make("thm1.dst.S1S2", entropy(src, {kS1, kS2}, {kW}),
             kappa * mutual_information(chan, {kX1, kX2, kX3}, {kY})),
    };
    report.finalize_achievability(strictness_margin);
    return report;
}

ConditionReport check_thm6_cpm(const SourceSideInfoModel& model, const DmChannel& ch,
                               const CpmInputA& input, double strictness_margin) {
    const JointPmf joint = input.induced_joint(model, ch);

    ConditionReport report;
    report.conditions = {
        make("thm6.rly.S1", entropy(joint, {kS1}, {kS2, kW3}),
             mutual_information(joint, {kX1}, {kY3}, {kS2, kV1, kX2, kX3, kW3, kQ})),
        make("thm6.rly.S2", entropy(joint, {kS2}, {kS1, kW3}),
             mutual_information(joint, {kX2}, {kY3}, {kS1, kV2, kX1, kX3, kW3, kQ})),
        make("thm6.rly.S1S2.T", entropy(joint, {kS1, kS2}, {kW3, kT}),
             mutual_information(joint, {kX1, kX2}, {kY3}, {kV1, kV2, kX3, kW3, kT, kQ})),
        make("thm6.rly.S1S2", entropy(joint, {kS1, kS2}, {kW3}),
             mutual_information(joint, {kX1, kX2}, {kY3}, {kV1, kV2, kX3, kW3})),
        make("thm6.dst.S1", entropy(joint, {kS1}, {kS2, kW}),
             mutual_information(joint, {kX1, kX3}, {kY}, {kS1, kV2, kX2, kQ})),
        make("thm6.dst.S2", entropy(joint, {kS2}, {kS1, kW}),
             mutual_information(joint, {kX2, kX3}, {kY}, {kS2, kV1, kX1, kQ})),
        make("thm6.dst.S1S2", entropy(joint, {kS1, kS2}, {kW}),
             mutual_information(joint, {kX1, kX2, kX3}, {kY}, {kS1, kS2, kQ})),
    };
    report.finalize_achievability(strictness_margin);
    return report;
}

ConditionReport check_thm7_cpm(const SourceSideInfoModel& model, const DmChannel& ch,
                               const CpmInputB& input, double strictness_margin) {
    const JointPmf joint = input.induced_joint(model, ch);

    ConditionReport report;
    report.conditions = {
        make("thm7.rly.S1", entropy(joint, {kS1}, {kS2, kW3}),
             mutual_information(joint, {kX1}, {kY3}, {kS1, kX2, kX3, kQ})),
        make("thm7.rly.S2", entropy(joint, {kS2}, {kS1, kW3}),
             mutual_information(joint, {kX2}, {kY3}, {kS2, kX1, kX3, kQ})),
        make("thm7.rly.S1S2", entropy(joint, {kS1, kS2}, {kW3}),
             mutual_information(joint, {kX1, kX2}, {kY3}, {kS1, kS2, kX3, kQ})),
        make("thm7.dst.S1", entropy(joint, {kS1}, {kS2, kW}),
             mutual_information(joint, {kX1, kX3}, {kY}, {kS2, kX2, kW, kQ})),
        make("thm7.dst.S2", entropy(joint, {kS2}, {kS1, kW}),
             mutual_information(joint, {kX2, kX3}, {kY}, {kS1, kX1, kW, kQ})),
        make("thm7.dst.S1S2.T", entropy(joint, {kS1, kS2}, {kW, kT}),
             mutual_information(joint, {kX1, kX2, kX3}, {kY}, {kW, kT, kQ})),
        make("thm7.dst.S1S2", entropy(joint, {kS1, kS2}, {kW}),
             mutual_information(joint, {kX1, kX2, kX3}, {kY}, {kW})),
    };
    report.finalize_achievability(strictness_margin);
    return report;
}

ConditionReport check_crbc(const SourceSideInfoModel& model, const DmChannel& ch,
                           const JointPmf& input_x1x3, double kappa,
                           double strictness_margin) {
    if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
    if (model.s2_size() != 1 && entropy(model.joint, {kS2}) > 1e-9)
        throw std::invalid_argument("CRBC reduction requires a degenerate S2");
    if (ch.x2_size() != 1)
        throw std::invalid_argument("CRBC reduction requires |X2| = 1");

    const JointPmf in = input_x1x3.reorder({kX1, kX3});
    const ConditionalPmf factors[] = {
        ConditionalPmf::marginal(in.variables(), in.weights()),
        ConditionalPmf::marginal({{kX2, 1}}, {1.0}),
        ch.law,
    };
    const JointPmf chan = JointPmf::from_factors(factors, {kX1, kX3, kX2, kY, kY3});

    ConditionReport report;
    report.conditions = {
        make("crbc.rly.S1", entropy(model.joint, {kS1}, {kW3}),
             kappa * mutual_information(chan, {kX1}, {kY3}, {kX3})),
        make("crbc.dst.S1", entropy(model.joint, {kS1}, {kW}),
             kappa * mutual_information(chan, {kX1, kX3}, {kY})),
    };
    report.finalize_achievability(strictness_margin);
    return report;
}

} // namespace marclab
