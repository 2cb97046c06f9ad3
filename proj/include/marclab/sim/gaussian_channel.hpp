#ifndef MARCLAB_SIM_GAUSSIAN_CHANNEL_HPP
#define MARCLAB_SIM_GAUSSIAN_CHANNEL_HPP

#include <array>
#include <complex>

#include "marclab/fading.hpp"

namespace marclab::sim {

/// One simulated channel frame: received sequences plus the realized fading
/// coefficients (Rx-CSI: destination-side links attach to Y, relay-side to
/// Y3).
struct GaussianMarcFrame {
    std::vector<std::complex<double>> y, y3;
    std::vector<std::complex<double>> h11, h21, h31;  // at the destination
    std::vector<std::complex<double>> h13, h23;       // at the relay
};

/// Draws iid fading (phase: a e^{j Theta}; Rayleigh: a U, U ~ CN(0,1)) and
/// unit complex Gaussian noise, then forms
///   Y = H11 X1 + H21 X2 + H31 X3 + Z,  Y3 = H13 X1 + H23 X2 + Z3.
/// The empirical per-frame mean power of each input must respect its limit.
GaussianMarcFrame simulate_fading_frame(const FadingMarcParams& p,
                                        std::span<const std::complex<double>> x1,
                                        std::span<const std::complex<double>> x2,
                                        std::span<const std::complex<double>> x3,
                                        std::uint64_t seed);

/// Empirical ergodic thresholds E{log2(1 + sum a^2 |H|^2 P)} matching
/// phase_region / rayleigh_region: simulated fading magnitude draws for
/// Rayleigh, exact (variance-free) evaluation for phase fading.
std::array<ErgodicValue, 3> estimate_ergodic_rate(const FadingMarcParams& p,
                                                  const McParams& mc = {});

} // namespace marclab::sim

#endif
