#include "marclab/models.hpp"

#include <functional>
#include <stdexcept>

#include "marclab/common_part.hpp"
#include "marclab/pmf_json.hpp"

namespace marclab {

namespace {

void require_names(const std::vector<VariableId>& vars, const std::vector<std::string>& names,
                   const std::string& what) {
    if (vars.size() != names.size())
        throw std::invalid_argument(what + ": expected " + std::to_string(names.size()) +
                                    " variables, got " + std::to_string(vars.size()));
    for (std::size_t i = 0; i < names.size(); ++i)
        if (vars[i].name != names[i])
            throw std::invalid_argument(what + ": variable " + std::to_string(i) +
                                        " must be '" + names[i] + "', got '" + vars[i].name + "'");
}

void require_factor(const ConditionalPmf& k, const std::vector<std::string>& given,
                    const std::vector<std::string>& outputs, const std::string& factor_name) {
    require_names(k.given(), given, "factor " + factor_name + " conditioning");
    require_names(k.outputs(), outputs, "factor " + factor_name + " outputs");
}

void require_size(int actual, int expected, const std::string& what) {
    if (actual != expected)
        throw std::invalid_argument(what + ": alphabet size " + std::to_string(actual) +
                                    " does not match " + std::to_string(expected));
}

ConditionalPmf as_marginal_factor(const JointPmf& p) {
    return ConditionalPmf::marginal(p.variables(), p.weights());
}

/// T = h1(S1) as a deterministic kernel of (S1,S2); off-support pairs carry
/// zero joint mass so the h1/h2 disagreement there is immaterial.
ConditionalPmf common_part_kernel(const SourceSideInfoModel& model) {
    const JointPmf s12 = model.joint.marginalize({kS1, kS2});
    const CommonPart cp = gacs_korner_common_part(s12);
    const int t_size = std::max(cp.t_size, 1);
    std::vector<int> table;
    table.reserve(static_cast<std::size_t>(model.s1_size()) * model.s2_size());
    for (int s1 = 0; s1 < model.s1_size(); ++s1)
        for (int s2 = 0; s2 < model.s2_size(); ++s2) {
            (void)s2;
            table.push_back(cp.h1[s1]);
        }
    return ConditionalPmf::deterministic({model.joint.variable(kS1), model.joint.variable(kS2)},
                                         {kT, t_size}, table);
}

} // namespace

// ---------------------------------------------------------------------------
// SourceSideInfoModel

SourceSideInfoModel::SourceSideInfoModel(JointPmf j) : joint(j.reorder({kS1, kS2, kW, kW3})) {}

SourceSideInfoModel SourceSideInfoModel::from_json(const nlohmann::json& j) {
    return SourceSideInfoModel(joint_pmf_from_json(j));
}

nlohmann::json SourceSideInfoModel::to_json() const { return marclab::to_json(joint); }

// ---------------------------------------------------------------------------
// DmChannel

DmChannel::DmChannel(ConditionalPmf k) : law(std::move(k)) {
    require_names(law.given(), {kX1, kX2, kX3}, "channel conditioning");
    require_names(law.outputs(), {kY, kY3}, "channel outputs");
}

DmChannel DmChannel::from_json(const nlohmann::json& j) {
    return DmChannel(conditional_pmf_from_json(j));
}

nlohmann::json DmChannel::to_json() const { return marclab::to_json(law); }

DmChannel DmChannel::deterministic(int x1, int x2, int x3, int y, int y3,
                                   const std::function<int(int, int, int)>& fy,
                                   const std::function<int(int, int, int)>& fy3) {
    std::vector<double> kernel(static_cast<std::size_t>(x1) * x2 * x3 * y * y3, 0.0);
    std::size_t row = 0;
    for (int a = 0; a < x1; ++a)
        for (int b = 0; b < x2; ++b)
            for (int c = 0; c < x3; ++c, ++row) {
                const int yy = fy(a, b, c);
                const int zz = fy3(a, b, c);
                if (yy < 0 || yy >= y || zz < 0 || zz >= y3)
                    throw std::invalid_argument("deterministic channel map out of range");
                kernel[(row * y + yy) * y3 + zz] = 1.0;
            }
    return DmChannel(ConditionalPmf({{kX1, x1}, {kX2, x2}, {kX3, x3}}, {{kY, y}, {kY3, y3}},
                                    std::move(kernel)));
}

// ---------------------------------------------------------------------------
// SeparationInput

SeparationInput SeparationInput::independent(std::vector<double> px1, std::vector<double> px2,
                                             std::vector<double> px3) {
    const int n1 = static_cast<int>(px1.size());
    const int n2 = static_cast<int>(px2.size());
    const int n3 = static_cast<int>(px3.size());
    return SeparationInput{
        JointPmf({{kV1, 1}}, {1.0}),
        JointPmf({{kV2, 1}}, {1.0}),
        ConditionalPmf({{kV1, 1}}, {{kX1, n1}}, std::move(px1)),
        ConditionalPmf({{kV2, 1}}, {{kX2, n2}}, std::move(px2)),
        ConditionalPmf({{kV1, 1}, {kV2, 1}}, {{kX3, n3}}, std::move(px3))};
}

void SeparationInput::validate(const DmChannel& ch) const {
    require_names(p_v1.variables(), {kV1}, "factor p(v1)");
    require_names(p_v2.variables(), {kV2}, "factor p(v2)");
    require_factor(k_x1, {kV1}, {kX1}, "p(x1|v1)");
    require_factor(k_x2, {kV2}, {kX2}, "p(x2|v2)");
    require_factor(k_x3, {kV1, kV2}, {kX3}, "p(x3|v1,v2)");
    require_size(k_x1.given()[0].alphabet_size, p_v1.variables()[0].alphabet_size, "p(x1|v1)");
    require_size(k_x2.given()[0].alphabet_size, p_v2.variables()[0].alphabet_size, "p(x2|v2)");
    require_size(k_x3.given()[0].alphabet_size, p_v1.variables()[0].alphabet_size, "p(x3|v1,v2)");
    require_size(k_x3.given()[1].alphabet_size, p_v2.variables()[0].alphabet_size, "p(x3|v1,v2)");
    require_size(k_x1.outputs()[0].alphabet_size, ch.x1_size(), "p(x1|v1) output");
    require_size(k_x2.outputs()[0].alphabet_size, ch.x2_size(), "p(x2|v2) output");
    require_size(k_x3.outputs()[0].alphabet_size, ch.x3_size(), "p(x3|v1,v2) output");
}

JointPmf SeparationInput::induced_joint(const DmChannel& ch) const {
    validate(ch);
    const ConditionalPmf factors[] = {as_marginal_factor(p_v1), as_marginal_factor(p_v2),
                                      k_x1, k_x2, k_x3, ch.law};
    return JointPmf::from_factors(factors, {kV1, kV2, kX1, kX2, kX3, kY, kY3});
}

nlohmann::json SeparationInput::to_json() const {
    return {{"type", "separation"},
            {"p_v1", marclab::to_json(p_v1)},
            {"p_v2", marclab::to_json(p_v2)},
            {"k_x1", marclab::to_json(k_x1)},
            {"k_x2", marclab::to_json(k_x2)},
            {"k_x3", marclab::to_json(k_x3)}};
}

SeparationInput SeparationInput::from_json(const nlohmann::json& j) {
    return SeparationInput{joint_pmf_from_json(j.at("p_v1")), joint_pmf_from_json(j.at("p_v2")),
                           conditional_pmf_from_json(j.at("k_x1")),
                           conditional_pmf_from_json(j.at("k_x2")),
                           conditional_pmf_from_json(j.at("k_x3"))};
}

// ---------------------------------------------------------------------------
// CpmInputA

void CpmInputA::validate(const SourceSideInfoModel& model, const DmChannel& ch) const {
    require_names(p_q.variables(), {kQ}, "factor p(q)");
    require_names(p_v1.variables(), {kV1}, "factor p(v1)");
    require_names(p_v2.variables(), {kV2}, "factor p(v2)");
    require_factor(k_x1, {kS1, kV1, kQ}, {kX1}, "p(x1|s1,v1,q)");
    require_factor(k_x2, {kS2, kV2, kQ}, {kX2}, "p(x2|s2,v2,q)");
    require_factor(k_x3, {kV1, kV2}, {kX3}, "p(x3|v1,v2)");
    require_size(k_x1.given()[0].alphabet_size, model.s1_size(), "p(x1|s1,v1,q)");
    require_size(k_x1.given()[1].alphabet_size, p_v1.variables()[0].alphabet_size, "p(x1|s1,v1,q)");
    require_size(k_x1.given()[2].alphabet_size, p_q.variables()[0].alphabet_size, "p(x1|s1,v1,q)");
    require_size(k_x2.given()[0].alphabet_size, model.s2_size(), "p(x2|s2,v2,q)");
    require_size(k_x2.given()[1].alphabet_size, p_v2.variables()[0].alphabet_size, "p(x2|s2,v2,q)");
    require_size(k_x2.given()[2].alphabet_size, p_q.variables()[0].alphabet_size, "p(x2|s2,v2,q)");
    require_size(k_x3.given()[0].alphabet_size, p_v1.variables()[0].alphabet_size, "p(x3|v1,v2)");
    require_size(k_x3.given()[1].alphabet_size, p_v2.variables()[0].alphabet_size, "p(x3|v1,v2)");
    require_size(k_x1.outputs()[0].alphabet_size, ch.x1_size(), "p(x1|s1,v1,q) output");
    require_size(k_x2.outputs()[0].alphabet_size, ch.x2_size(), "p(x2|s2,v2,q) output");
    require_size(k_x3.outputs()[0].alphabet_size, ch.x3_size(), "p(x3|v1,v2) output");
}

JointPmf CpmInputA::induced_joint(const SourceSideInfoModel& model, const DmChannel& ch) const {
    validate(model, ch);
    const ConditionalPmf factors[] = {as_marginal_factor(model.joint),
                                      common_part_kernel(model),
                                      as_marginal_factor(p_q),
                                      as_marginal_factor(p_v1),
                                      as_marginal_factor(p_v2),
                                      k_x1,
                                      k_x2,
                                      k_x3,
                                      ch.law};
    return JointPmf::from_factors(
        factors, {kS1, kS2, kW, kW3, kT, kQ, kV1, kV2, kX1, kX2, kX3, kY, kY3});
}

nlohmann::json CpmInputA::to_json() const {
    return {{"type", "cpm-a"},
            {"p_q", marclab::to_json(p_q)},
            {"p_v1", marclab::to_json(p_v1)},
            {"p_v2", marclab::to_json(p_v2)},
            {"k_x1", marclab::to_json(k_x1)},
            {"k_x2", marclab::to_json(k_x2)},
            {"k_x3", marclab::to_json(k_x3)}};
}

CpmInputA CpmInputA::from_json(const nlohmann::json& j) {
    return CpmInputA{joint_pmf_from_json(j.at("p_q")),   joint_pmf_from_json(j.at("p_v1")),
                     joint_pmf_from_json(j.at("p_v2")),  conditional_pmf_from_json(j.at("k_x1")),
                     conditional_pmf_from_json(j.at("k_x2")),
                     conditional_pmf_from_json(j.at("k_x3"))};
}

// ---------------------------------------------------------------------------
// CpmInputB

void CpmInputB::validate(const SourceSideInfoModel& model, const DmChannel& ch) const {
    require_names(p_q.variables(), {kQ}, "factor p(q)");
    require_factor(k_x1, {kS1, kQ}, {kX1}, "p(x1|s1,q)");
    require_factor(k_x2, {kS2, kQ}, {kX2}, "p(x2|s2,q)");
    require_factor(k_x3, {kS1, kS2, kQ}, {kX3}, "p(x3|s1,s2,q)");
    require_size(k_x1.given()[0].alphabet_size, model.s1_size(), "p(x1|s1,q)");
    require_size(k_x1.given()[1].alphabet_size, p_q.variables()[0].alphabet_size, "p(x1|s1,q)");
    require_size(k_x2.given()[0].alphabet_size, model.s2_size(), "p(x2|s2,q)");
    require_size(k_x2.given()[1].alphabet_size, p_q.variables()[0].alphabet_size, "p(x2|s2,q)");
    require_size(k_x3.given()[0].alphabet_size, model.s1_size(), "p(x3|s1,s2,q)");
    require_size(k_x3.given()[1].alphabet_size, model.s2_size(), "p(x3|s1,s2,q)");
    require_size(k_x3.given()[2].alphabet_size, p_q.variables()[0].alphabet_size, "p(x3|s1,s2,q)");
    require_size(k_x1.outputs()[0].alphabet_size, ch.x1_size(), "p(x1|s1,q) output");
    require_size(k_x2.outputs()[0].alphabet_size, ch.x2_size(), "p(x2|s2,q) output");
    require_size(k_x3.outputs()[0].alphabet_size, ch.x3_size(), "p(x3|s1,s2,q) output");
}

JointPmf CpmInputB::induced_joint(const SourceSideInfoModel& model, const DmChannel& ch) const {
    validate(model, ch);
    const ConditionalPmf factors[] = {as_marginal_factor(model.joint), common_part_kernel(model),
                                      as_marginal_factor(p_q),         k_x1,
                                      k_x2,                            k_x3,
                                      ch.law};
    return JointPmf::from_factors(factors,
                                  {kS1, kS2, kW, kW3, kT, kQ, kX1, kX2, kX3, kY, kY3});
}

nlohmann::json CpmInputB::to_json() const {
    return {{"type", "cpm-b"},
            {"p_q", marclab::to_json(p_q)},
            {"k_x1", marclab::to_json(k_x1)},
            {"k_x2", marclab::to_json(k_x2)},
            {"k_x3", marclab::to_json(k_x3)}};
}

CpmInputB CpmInputB::from_json(const nlohmann::json& j) {
    return CpmInputB{joint_pmf_from_json(j.at("p_q")), conditional_pmf_from_json(j.at("k_x1")),
                     conditional_pmf_from_json(j.at("k_x2")),
                     conditional_pmf_from_json(j.at("k_x3"))};
}

// ---------------------------------------------------------------------------
// ConditionReport

void ConditionReport::finalize_achievability(double strictness_margin) {
    all_satisfied = true;
    for (auto& c : conditions) {
        c.margin_bits = c.rhs_bits - c.lhs_bits;
        c.satisfied = c.lhs_bits < c.rhs_bits - strictness_margin;
        all_satisfied &= c.satisfied;
    }
    verdict = all_satisfied ? "satisfied" : "not-satisfied";
}

void ConditionReport::finalize_converse() {
    all_satisfied = true;
    for (auto& c : conditions) {
        c.margin_bits = c.rhs_bits - c.lhs_bits;
        c.satisfied = c.lhs_bits <= c.rhs_bits + kStrictnessMargin;
        all_satisfied &= c.satisfied;
    }
    verdict = all_satisfied ? "inconclusive" : "necessary-conditions-violated";
}

const ConditionReport::Condition& ConditionReport::find(const std::string& label) const {
    for (const auto& c : conditions)
        if (c.label == label) return c;
    throw std::invalid_argument("no condition labeled '" + label + "'");
}

nlohmann::json ConditionReport::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : conditions)
        arr.push_back({{"label", c.label},
                       {"lhs_bits", c.lhs_bits},
                       {"rhs_bits", c.rhs_bits},
                       {"margin_bits", c.margin_bits},
                       {"satisfied", c.satisfied}});
    return {{"conditions", arr}, {"all_satisfied", all_satisfied}, {"verdict", verdict}};
}

} // namespace marclab
