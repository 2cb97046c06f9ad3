#ifndef MARCLAB_FADING_HPP
#define MARCLAB_FADING_HPP

#include <array>
#include <json.hpp>
#include <optional>

#include "marclab/ergodic.hpp"
#include "marclab/models.hpp"

namespace marclab {

enum class FadingKind { Phase, Rayleigh };

/// Link attenuations a_{li} (first index: transmitter 1/2/3, second: receiver
/// 1 = destination, 3 = relay) and per-symbol power limits.
struct FadingMarcParams {
    double a11 = 1.0, a21 = 1.0, a31 = 1.0;  // towards the destination
    double a13 = 1.0, a23 = 1.0;             // towards the relay
    double p1 = 1.0, p2 = 1.0, p3 = 1.0;
    FadingKind kind = FadingKind::Phase;

    void validate() const;  // finite, nonnegative
    static FadingMarcParams from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

/// The six conditional source entropies the fading theorems compare against
/// channel thresholds, in bits.
struct SourceEntropies {
    double h1_given_2w = 0.0;   // H(S1|S2,W)
    double h2_given_1w = 0.0;   // H(S2|S1,W)
    double h12_given_w = 0.0;   // H(S1,S2|W)
    double h1_given_2w3 = 0.0;  // H(S1|S2,W3)
    double h2_given_1w3 = 0.0;  // H(S2|S1,W3)
    double h12_given_w3 = 0.0;  // H(S1,S2|W3)

    /// Checks nonnegativity and the chain-rule consistency
    /// H(S1,S2|·) >= H(S1|S2,·) + H(S2|S1,·) on both side-information sets.
    void validate() const;
    static SourceEntropies from_model(const SourceSideInfoModel& model);
    nlohmann::json to_json() const;
};

enum class SeparationVerdict { Achievable, NotAchievable, Boundary };

struct RegionReport {
    std::array<bool, 3> df_conditions{};  // relay-decoding feasibility
    bool df_conditions_hold = false;
    std::array<ErgodicValue, 3> thresholds{};  // bits per channel use, kappa applied
    std::array<bool, 3> strict_entropy_conditions{};
    SeparationVerdict verdict = SeparationVerdict::Boundary;
    std::optional<bool> mabrc_entropy_conditions_hold;
    nlohmann::json to_json() const;
};

/// Phase-fading relay-decoding conditions: received relay powers dominate the
/// corresponding destination powers.
std::array<bool, 3> phase_df_conditions(const FadingMarcParams& p);

/// Phase-fading thresholds (kappa * log2(1 + received power)), deterministic.
std::array<double, 3> phase_region(const FadingMarcParams& p, double kappa);

/// Rayleigh relay-decoding conditions via E1 closed forms; the third uses the
/// difference quotient of x e^{1/x} E1(1/x) with its analytic limit at equal
/// relay-link SNRs. Throws when a13^2 P1 or a23^2 P2 is zero.
std::array<bool, 3> rayleigh_df_conditions(const FadingMarcParams& p);

/// Rayleigh ergodic thresholds; the two-term sums are closed-form, the
/// three-term sum falls back to Monte Carlo (standard error reported).
std::array<ErgodicValue, 3> rayleigh_region(const FadingMarcParams& p, double kappa,
                                            const McParams& mc = {});

/// Separation-optimality verdict at rate kappa. Achievable requires the DF
/// conditions plus strict entropy-vs-threshold inequalities (and, for the
/// broadcast variant, relay-side entropies no larger than destination-side);
/// NotAchievable fires when a non-strict inequality fails, which is sound
/// irrespective of the DF conditions; Boundary otherwise.
RegionReport check_separation_optimal(const SourceEntropies& e, const FadingMarcParams& p,
                                      double kappa, bool mabrc, const McParams& mc = {});

} // namespace marclab

#endif
