#pragma once

#include <complex>

namespace sfhf {

/// log Gamma(z) for complex z. The real part is log|Gamma(z)|; the imaginary
/// part is correct modulo 2*pi, which is all exp() of a sum needs.
/// Lanczos approximation (g = 607/128, 15 terms) with reflection for
/// Re z < 1/2. Returns +inf at the poles.
std::complex<double> log_gamma(std::complex<double> z);

/// log sin(pi z), stable for large |Im z|.
std::complex<double> log_sin_pi(std::complex<double> z);

}  // namespace sfhf
