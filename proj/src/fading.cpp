#include "marclab/fading.hpp"

#include <cmath>
#include <stdexcept>

#include "marclab/exp_integral.hpp"
#include "marclab/info_measures.hpp"

namespace marclab {

namespace {

// g(x) = e^{1/x} E1(1/x) = E{ln(1 + x G)}, the ergodic-rate kernel the
// Rayleigh conditions are phrased in.
double g(double x) { return exp_integral_e1_scaled(1.0 / x); }

std::vector<double> active_scales(std::initializer_list<double> scales) {
    std::vector<double> out;
    for (double s : scales)
        if (s > 0.0) out.push_back(s);
    return out;
}

ErgodicValue scaled_threshold(const std::vector<double>& scales, double kappa,
                              const McParams& mc) {
    if (scales.empty()) return {0.0, 0.0, true};
    ErgodicValue v = expected_log2_capacity(scales, mc);
    v.bits *= kappa;
    v.std_error *= kappa;
    return v;
}

} // namespace

void FadingMarcParams::validate() const {
    for (double x : {a11, a21, a31, a13, a23, p1, p2, p3})
        if (!(x >= 0.0) || !std::isfinite(x))
            throw std::invalid_argument("fading parameters must be finite and nonnegative");
}

FadingMarcParams FadingMarcParams::from_json(const nlohmann::json& j) {
    FadingMarcParams p;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "phase")
        p.kind = FadingKind::Phase;
    else if (kind == "rayleigh")
        p.kind = FadingKind::Rayleigh;
    else
        throw std::invalid_argument("fading kind must be 'phase' or 'rayleigh'");
    const auto& a = j.at("a");
    p.a11 = a.at("11").get<double>();
    p.a21 = a.at("21").get<double>();
    p.a31 = a.at("31").get<double>();
    p.a13 = a.at("13").get<double>();
    p.a23 = a.at("23").get<double>();
    const auto& power = j.at("P");
    if (!power.is_array() || power.size() != 3)
        throw std::invalid_argument("field 'P' must be [P1, P2, P3]");
    p.p1 = power[0].get<double>();
    p.p2 = power[1].get<double>();
    p.p3 = power[2].get<double>();
    p.validate();
    return p;
}

nlohmann::json FadingMarcParams::to_json() const {
    return {{"kind", kind == FadingKind::Phase ? "phase" : "rayleigh"},
            {"a", {{"11", a11}, {"21", a21}, {"31", a31}, {"13", a13}, {"23", a23}}},
            {"P", {p1, p2, p3}}};
}

void SourceEntropies::validate() const {
    for (double h : {h1_given_2w, h2_given_1w, h12_given_w, h1_given_2w3, h2_given_1w3,
                     h12_given_w3})
        if (!(h >= 0.0) || !std::isfinite(h))
            throw std::invalid_argument("source entropies must be finite and nonnegative");
    if (h12_given_w + 1e-9 < h1_given_2w + h2_given_1w ||
        h12_given_w3 + 1e-9 < h1_given_2w3 + h2_given_1w3)
        throw std::invalid_argument(
            "inconsistent entropies: H(S1,S2|.) < H(S1|S2,.) + H(S2|S1,.)");
}

SourceEntropies SourceEntropies::from_model(const SourceSideInfoModel& model) {
    SourceEntropies e;
    const JointPmf& j = model.joint;
    e.h1_given_2w = entropy(j, {kS1}, {kS2, kW});
    e.h2_given_1w = entropy(j, {kS2}, {kS1, kW});
    e.h12_given_w = entropy(j, {kS1, kS2}, {kW});
    e.h1_given_2w3 = entropy(j, {kS1}, {kS2, kW3});
    e.h2_given_1w3 = entropy(j, {kS2}, {kS1, kW3});
    e.h12_given_w3 = entropy(j, {kS1, kS2}, {kW3});
    e.validate();
    return e;
}

nlohmann::json SourceEntropies::to_json() const {
    return {{"H(S1|S2,W)", h1_given_2w},   {"H(S2|S1,W)", h2_given_1w},
            {"H(S1,S2|W)", h12_given_w},   {"H(S1|S2,W3)", h1_given_2w3},
            {"H(S2|S1,W3)", h2_given_1w3}, {"H(S1,S2|W3)", h12_given_w3}};
}

std::array<bool, 3> phase_df_conditions(const FadingMarcParams& p) {
    p.validate();
    const double d1 = p.a11 * p.a11 * p.p1;
    const double d2 = p.a21 * p.a21 * p.p2;
    const double d3 = p.a31 * p.a31 * p.p3;
    const double r1 = p.a13 * p.a13 * p.p1;
    const double r2 = p.a23 * p.a23 * p.p2;
    return {d1 + d3 <= r1, d2 + d3 <= r2, d1 + d2 + d3 <= r1 + r2};
}

std::array<double, 3> phase_region(const FadingMarcParams& p, double kappa) {
    p.validate();
    if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
    const double d1 = p.a11 * p.a11 * p.p1;
    const double d2 = p.a21 * p.a21 * p.p2;
    const double d3 = p.a31 * p.a31 * p.p3;
    return {kappa * std::log2(1.0 + d1 + d3), kappa * std::log2(1.0 + d2 + d3),
            kappa * std::log2(1.0 + d1 + d2 + d3)};
}

std::array<bool, 3> rayleigh_df_conditions(const FadingMarcParams& p) {
    p.validate();
    if (p.kind != FadingKind::Rayleigh)
        throw std::invalid_argument("rayleigh_df_conditions requires Rayleigh parameters");
    const double d1 = p.a11 * p.a11 * p.p1;
    const double d2 = p.a21 * p.a21 * p.p2;
    const double d3 = p.a31 * p.a31 * p.p3;
    const double r1 = p.a13 * p.a13 * p.p1;
    const double r2 = p.a23 * p.a23 * p.p2;
    if (!(r1 > 0.0)) throw std::domain_error("relay-link SNR a13^2*P1 is zero");
    if (!(r2 > 0.0)) throw std::domain_error("relay-link SNR a23^2*P2 is zero");

    // Third condition: (r2 - r1) / (g(r2) - g(r1)); at r1 = r2 the quotient
    // tends to 1/g'(r) = r^2 / (r - g(r)).
    double third_rhs;
    if (std::fabs(r1 - r2) <= 1e-9 * std::max(r1, r2)) {
        third_rhs = r1 * r1 / (r1 - g(r1));
    } else {
        third_rhs = (r2 - r1) / (g(r2) - g(r1));
    }
    return {1.0 + d1 + d3 <= r1 / g(r1), 1.0 + d2 + d3 <= r2 / g(r2),
            1.0 + d1 + d2 + d3 <= third_rhs};
}

std::array<ErgodicValue, 3> rayleigh_region(const FadingMarcParams& p, double kappa,
                                            const McParams& mc) {
    p.validate();
    if (p.kind != FadingKind::Rayleigh)
        throw std::invalid_argument("rayleigh_region requires Rayleigh parameters");
    if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
    const double d1 = p.a11 * p.a11 * p.p1;
    const double d2 = p.a21 * p.a21 * p.p2;
    const double d3 = p.a31 * p.a31 * p.p3;
    return {scaled_threshold(active_scales({d1, d3}), kappa, mc),
            scaled_threshold(active_scales({d2, d3}), kappa, mc),
            scaled_threshold(active_scales({d1, d2, d3}), kappa, mc)};
}

RegionReport check_separation_optimal(const SourceEntropies& e, const FadingMarcParams& p,
                                      double kappa, bool mabrc, const McParams& mc) {
    e.validate();
    if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");

    RegionReport r;
    if (p.kind == FadingKind::Phase) {
        r.df_conditions = phase_df_conditions(p);
        const auto t = phase_region(p, kappa);
        for (int i = 0; i < 3; ++i) r.thresholds[i] = {t[i], 0.0, true};
    } else {
        r.df_conditions = rayleigh_df_conditions(p);
        r.thresholds = rayleigh_region(p, kappa, mc);
    }
    r.df_conditions_hold = r.df_conditions[0] && r.df_conditions[1] && r.df_conditions[2];

    const double lhs[3] = {e.h1_given_2w, e.h2_given_1w, e.h12_given_w};
    bool any_converse_violation = false;
    bool all_strict = true;
    for (int i = 0; i < 3; ++i) {
        r.strict_entropy_conditions[i] = lhs[i] < r.thresholds[i].bits - kStrictnessMargin;
        all_strict &= r.strict_entropy_conditions[i];
        any_converse_violation |= lhs[i] > r.thresholds[i].bits + kStrictnessMargin;
    }

    bool mabrc_ok = true;
    if (mabrc) {
        mabrc_ok = e.h1_given_2w3 <= e.h1_given_2w + kStrictnessMargin &&
                   e.h2_given_1w3 <= e.h2_given_1w + kStrictnessMargin &&
                   e.h12_given_w3 <= e.h12_given_w + kStrictnessMargin;
        r.mabrc_entropy_conditions_hold = mabrc_ok;
    }

    if (any_converse_violation)
        r.verdict = SeparationVerdict::NotAchievable;
    else if (r.df_conditions_hold && all_strict && mabrc_ok)
        r.verdict = SeparationVerdict::Achievable;
    else
        r.verdict = SeparationVerdict::Boundary;
    return r;
}

nlohmann::json RegionReport::to_json() const {
    nlohmann::json thr = nlohmann::json::array();
    for (const auto& t : thresholds)
        thr.push_back({{"bits", t.bits}, {"std_error", t.std_error}, {"exact", t.exact}});
    nlohmann::json out = {
        {"df_conditions", {df_conditions[0], df_conditions[1], df_conditions[2]}},
        {"df_conditions_hold", df_conditions_hold},
        {"thresholds", thr},
        {"strict_entropy_conditions",
         {strict_entropy_conditions[0], strict_entropy_conditions[1],
          strict_entropy_conditions[2]}},
        {"verdict", verdict == SeparationVerdict::Achievable      ? "ACHIEVABLE"
                    : verdict == SeparationVerdict::NotAchievable ? "NOT_ACHIEVABLE"
                                                                  : "BOUNDARY"}};
    if (mabrc_entropy_conditions_hold)
        out["mabrc_entropy_conditions_hold"] = *mabrc_entropy_conditions_hold;
    return out;
}

} // namespace marclab
