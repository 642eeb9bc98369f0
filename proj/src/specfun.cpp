#include "udw/specfun.hpp"

#include <cmath>
#include <stdexcept>

namespace udw {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240;
constexpr double kSeriesSwitch = 4.0;

// E_1(i x) by the modified Lentz continued fraction
//   E_1(z) = e^{-z} / (z + 1 - 1/(z + 3 - 4/(z + 5 - 9/(...)))),
// solid for |z| >= 4 on the imaginary axis.
std::complex<double> e1_imag_cf(double x) {
    const std::complex<double> z(0.0, x);
    const double tiny = 1e-290;
    std::complex<double> fv = z + 1.0;
    if (std::abs(fv) < tiny) fv = tiny;
    std::complex<double> C = fv, D = 0.0;
    for (int n = 1; n <= 400; ++n) {
        const double an = -double(n) * double(n);
        const std::complex<double> bn = z + double(2 * n + 1);
        D = bn + an * D;
        if (std::abs(D) < tiny) D = tiny;
        C = bn + an / C;
        if (std::abs(C) < tiny) C = tiny;
        D = 1.0 / D;
        const std::complex<double> delta = C * D;
        fv *= delta;
        if (std::abs(delta - 1.0) < 1e-16)
            return std::complex<double>(std::cos(x), -std::sin(x)) / fv;
    }
    throw std::runtime_error("gamma0_imaginary: continued fraction failed to converge");
}

double si_series(double x) {
    // Si(x) = sum_k (-1)^k x^{2k+1} / ((2k+1)(2k+1)!)
    const double x2 = x * x;
    double term = x;
    double sum = x;
    for (int k = 1; k <= 40; ++k) {
        const double tk = 2.0 * k;
        term *= -x2 * (tk - 1.0) / ((tk + 1.0) * (tk + 1.0) * tk);
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

double ci_series(double x) {
    // Ci(x) = gamma_E + ln x + sum_{k>=1} (-1)^k x^{2k} / ((2k)(2k)!)
    const double x2 = x * x;
    double term = -x2 / 4.0;  // k = 1
    double sum = term;
    for (int k = 2; k <= 40; ++k) {
        const double tk = 2.0 * k;
        term *= -x2 * (tk - 2.0) / (tk * tk * (tk - 1.0));
        sum += term;
        if (std::abs(term) < 1e-17) break;
    }
    return kEulerGamma + std::log(x) + sum;
}

}  // namespace

double sine_integral(double x) {
    if (x == 0.0) return 0.0;
    const double ax = std::abs(x);
    double v;
    if (ax <= kSeriesSwitch) {
        v = si_series(ax);
    } else {
        v = M_PI / 2 + e1_imag_cf(ax).imag();
    }
    return x > 0.0 ? v : -v;
}

double cosine_integral(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("cosine_integral: requires x > 0");
    if (x <= kSeriesSwitch) return ci_series(x);
    return -e1_imag_cf(x).real();
}

std::complex<double> gamma0_imaginary(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("gamma0_imaginary: requires x > 0");
    if (x <= kSeriesSwitch)
        return {-ci_series(x), si_series(x) - M_PI / 2};
    return e1_imag_cf(x);
}

}  // namespace udw
