#include "marclab/exp_integral.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace marclab {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

// E1(x) = -gamma - ln(x) + sum_{k>=1} (-1)^{k+1} x^k / (k * k!)
double e1_series(double x) {
    double term = 1.0;  // x^k / k! carried incrementally
    double sum = 0.0;
    for (int k = 1; k <= 60; ++k) {
        term *= x / k;
        const double contrib = (k % 2 == 1 ? term : -term) / k;
        sum += contrib;
        if (std::fabs(contrib) < 1e-18 * std::fabs(sum)) break;
    }
    return -kEulerGamma - std::log(x) + sum;
}

// e^x E1(x) = 1 / (x + 1 - 1/(x + 3 - 4/(x + 5 - 9/(...)))), modified Lentz.
double e1_continued_fraction_scaled(double x) {
    constexpr double kTiny = std::numeric_limits<double>::min() * 1e10;
    double b = x + 1.0;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 200; ++i) {
        const double a = -static_cast<double>(i) * i;
        b += 2.0;
        d = a * d + b;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = b + a / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-15) break;
    }
    return h;
}

} // namespace

double exp_integral_e1(double x) {
    if (!(x > 0.0)) throw std::domain_error("E1 requires x > 0");
    return x <= 1.0 ? e1_series(x) : e1_continued_fraction_scaled(x) * std::exp(-x);
}

double exp_integral_e1_scaled(double x) {
    if (!(x > 0.0)) throw std::domain_error("E1 requires x > 0");
    return x <= 1.0 ? e1_series(x) * std::exp(x) : e1_continued_fraction_scaled(x);
}

} // namespace marclab
