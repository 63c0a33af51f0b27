#include "sfhf/complex_gamma.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace sfhf {

namespace {

constexpr double lanczos_g = 607.0 / 128.0;

constexpr std::array<double, 15> lanczos_c = {
    0.99999999999999709182,     57.156235665862923517,      -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,    .33994649984811888699e-4,
    .46523628927048575665e-4,   -.98374475304879564677e-4,  .15808870322491248884e-3,
    -.21026444172410488319e-3,  .21743961811521264320e-3,   -.16431810653676389022e-3,
    .84418223983852743293e-4,   -.26190838401581408670e-4,  .36899182659531622704e-5};

const double half_log_two_pi = 0.5 * std::log(2.0 * std::numbers::pi);

std::complex<double> lanczos_log_gamma(std::complex<double> z)
{
    // Gamma(z) with z = w + 1, Re z >= 1/2.
    std::complex<double> w = z - 1.0;
    std::complex<double> sum = lanczos_c[0];
    for (std::size_t k = 1; k < lanczos_c.size(); ++k)
        sum += lanczos_c[k] / (w + static_cast<double>(k));
    std::complex<double> t = w + lanczos_g + 0.5;
    return half_log_two_pi + (w + 0.5) * std::log(t) - t + std::log(sum);
}

}  // namespace

std::complex<double> log_sin_pi(std::complex<double> z)
{
    using namespace std::complex_literals;
    const std::complex<double> w = std::numbers::pi * z;
    if (std::abs(w.imag()) < 15.0)
        return std::log(std::sin(w));
    if (w.imag() > 0.0)
        return std::log(0.5i) - 1.0i * w + std::log(1.0 - std::exp(2.0i * w));
    return std::log(-0.5i) + 1.0i * w + std::log(1.0 - std::exp(-2.0i * w));
}

std::complex<double> log_gamma(std::complex<double> z)
{
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
        return {std::numeric_limits<double>::infinity(), 0.0};
    if (z.real() >= 0.5)
        return lanczos_log_gamma(z);
    // Gamma(z) Gamma(1 - z) = pi / sin(pi z)
    std::complex<double> r = std::log(std::numbers::pi) - log_sin_pi(z) - lanczos_log_gamma(1.0 - z);
    return r;
}

}  // namespace sfhf
