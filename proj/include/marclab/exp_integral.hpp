#ifndef MARCLAB_EXP_INTEGRAL_HPP
#define MARCLAB_EXP_INTEGRAL_HPP

namespace marclab {

/// Exponential integral E1(x) = integral_x^inf e^(-q)/q dq for x > 0.
/// Power series below x = 1, modified Lentz continued fraction above.
/// Relative error <= 1e-10 across [1e-6, 700]. Throws std::domain_error for
/// x <= 0.
double exp_integral_e1(double x);

/// e^x * E1(x), stable for arbitrarily large x where the plain product would
/// overflow against an underflowing E1. Same domain and accuracy contract.
double exp_integral_e1_scaled(double x);

} // namespace marclab

#endif
