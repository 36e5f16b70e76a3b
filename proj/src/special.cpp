#include "fracbern/special.hpp"

#include "fracbern/errors.hpp"

#include <cmath>

namespace fracbern {

namespace {

// Lanczos coefficients for g = 7, n = 9 (Godfrey's set, ~15 significant digits).
constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

constexpr double kPi = 3.141592653589793238462643383279502884;

bool is_nonpositive_integer(double x) {
    return x <= 0.0 && x == std::floor(x);
}

double lanczos_core(double x) {
    // Valid for x >= 0.5. Gamma(x) = sqrt(2*pi) * t^(x-0.5) * e^(-t) * A(x),
    // t = x + g - 0.5.
    double a = kLanczos[0];
    for (int i = 1; i < 9; ++i)
        a += kLanczos[i] / (x - 1.0 + static_cast<double>(i));
    const double t = x + kLanczosG - 0.5;
    return std::sqrt(2.0 * kPi) * std::pow(t, x - 0.5) * std::exp(-t) * a;
}

} // namespace

double gamma_fn(double x) {
    if (is_nonpositive_integer(x))
        throw DomainError("gamma undefined at non-positive integer " + std::to_string(x));
    if (x >= 0.5)
        return lanczos_core(x);
    // Reflection: Gamma(x) * Gamma(1-x) = pi / sin(pi*x).
    return kPi / (std::sin(kPi * x) * lanczos_core(1.0 - x));
}

double log_gamma(double x) {
    if (is_nonpositive_integer(x))
        throw DomainError("log_gamma undefined at non-positive integer " + std::to_string(x));
    if (x >= 0.5) {
        double a = kLanczos[0];
        for (int i = 1; i < 9; ++i)
            a += kLanczos[i] / (x - 1.0 + static_cast<double>(i));
        const double t = x + kLanczosG - 0.5;
        return 0.5 * std::log(2.0 * kPi) + (x - 0.5) * std::log(t) - t + std::log(a);
    }
    return std::log(kPi / std::abs(std::sin(kPi * x))) - log_gamma(1.0 - x);
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i)
        r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

} // namespace fracbern
