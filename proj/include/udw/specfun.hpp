#pragma once

#include <complex>

namespace udw {

// Sine integral Si(x) = int_0^x sin t / t dt. Odd in x.
double sine_integral(double x);

// Cosine integral Ci(x) = gamma_E + ln x + int_0^x (cos t - 1)/t dt, x > 0.
double cosine_integral(double x);

// Incomplete gamma at zero order with imaginary argument:
//   Gamma(0, i x) = E_1(i x) = -Ci(x) + i (Si(x) - pi/2),  x > 0.
// Power series below x = 4, modified Lentz continued fraction above.
std::complex<double> gamma0_imaginary(double x);

}  // namespace udw
