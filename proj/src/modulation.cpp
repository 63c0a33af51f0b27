#include "sfhf/modulation.hpp"

#include "sfhf/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <numbers>

namespace sfhf {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double inf = std::numeric_limits<double>::infinity();

void check(Scheme scheme, int M)
{
    if (scheme == Scheme::gcdqpsk) {
        if (M != 4)
            throw ParamError("GC-DQPSK is defined for M = 4 only");
        return;
    }
    if (M < 2)
        throw ParamError("modulation order M must be at least 2");
    // Non-square sizes (8-QAM) use the same expressions with a formal sqrt(M).
    if (scheme == Scheme::mqam && M < 4)
        throw ParamError("M-QAM requires M >= 4");
}

template <class F>
double integrate(F f, double lo, double hi)
{
    if (!(hi > lo))
        return 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, lo, hi, 15, 1e-13);
}

// e^{k lo^2} int_lo^hi exp(-k u^2) / (1 + u^2) du for 0 <= lo < hi <= inf,
// in the variable w = sqrt(k) (u - lo), where the integrand has unit width.
double gauss_lorentz(double k, double lo, double hi)
{
    const double r = std::sqrt(k);
    const double top = std::min((hi - lo) * r, 40.0);
    return integrate([&](double w) {
        const double u = lo + w / r;
        return std::exp(-2.0 * r * lo * w - w * w) / (1.0 + u * u);
    }, 0.0, top) / r;
}

// (a/pi) int_0^{b pi} exp(-c gamma / sin^2 t) dt
double d_kernel(double a, double b, double c, double gamma)
{
    if (gamma == 0.0)
        return a * b;
    // With u = cot t the integrand is exp(-k (1 + u^2)) / (1 + u^2), k = c gamma.
    const double k = c * gamma;
    if (b <= 0.5) {
        const double lo = b == 0.5 ? 0.0 : 1.0 / std::tan(b * pi);
        const double scale = std::exp(-k * (1.0 + lo * lo));
        return scale == 0.0 ? 0.0 : a / pi * scale * gauss_lorentz(k, lo, INFINITY);
    }
    const double scale = std::exp(-k);
    if (scale == 0.0)
        return 0.0;
    const double hi = 1.0 / std::tan((1.0 - b) * pi);
    return a / pi * scale * (gauss_lorentz(k, 0.0, INFINITY) + gauss_lorentz(k, 0.0, hi));
}

// (a/pi) int_0^{b pi} exp(-c gamma / (1 + d cos t)) dt
double e_kernel(double a, double b, double c, double d, double gamma)
{
    if (gamma == 0.0)
        return a * b;
    // The integrand peaks at a stationary end point (t = 0 or pi) with
    // width ~ gamma^{-1/2}; integrate in a rescaled distance from it,
    // relative to the peak value.
    const double peak = d > 0.0 ? 0.0 : pi;
    const double top = 1.0 / (1.0 + d * std::cos(peak));
    const double scale = std::exp(-c * gamma * top);
    if (scale == 0.0)
        return 0.0;
    const double r = std::sqrt(1.0 + c * gamma);
    const double from = std::abs(peak - b * pi) * r;  // far end of [0, b pi]
    const double to = std::abs(peak - 0.0) * r;       // near end
    auto f = [&](double s) {
        const double t = peak + (peak == 0.0 ? s : -s) / r;
        return std::exp(-c * gamma * (1.0 / (1.0 + d * std::cos(t)) - top));
    };
    // [0, b pi] maps to s in [min(from, to), max(from, to)].
    return a / pi * scale * integrate(f, std::min(from, to), std::max(from, to)) / r;
}

}  // namespace

std::string to_string(Scheme s)
{
    switch (s) {
    case Scheme::mpsk: return "mpsk";
    case Scheme::mqam: return "mqam";
    case Scheme::mdpsk: return "mdpsk";
    case Scheme::gcdqpsk: return "gcdqpsk";
    }
    return "?";
}

Scheme scheme_from_string(const std::string& s)
{
    if (s == "mpsk" || s == "psk") return Scheme::mpsk;
    if (s == "mqam" || s == "qam") return Scheme::mqam;
    if (s == "mdpsk" || s == "dpsk") return Scheme::mdpsk;
    if (s == "gcdqpsk" || s == "gc-dqpsk") return Scheme::gcdqpsk;
    throw ParamError("unknown modulation scheme '" + s + "' (expected mpsk, mqam, mdpsk or gcdqpsk)");
}

int default_order(Scheme s) { return s == Scheme::mqam ? 6 : 5; }

ModulationCoeffs sep_coefficients(Scheme scheme, int M) { return sep_coefficients(scheme, M, default_order(scheme)); }

ModulationCoeffs sep_coefficients(Scheme scheme, int M, int N)
{
    check(scheme, M);
    if (N < 1)
        throw ParamError("trapezoid order N must be at least 1");
    if (scheme == Scheme::mqam && N % 2 != 0)
        throw ParamError("M-QAM trapezoid order N must be even");

    ModulationCoeffs c{scheme, M, N, std::vector<double>(N + 1), std::vector<double>(N + 1)};
    const double m = M;
    const double n_ = N;
    switch (scheme) {
    case Scheme::mpsk:
    case Scheme::mdpsk: {
        const double s2 = std::pow(std::sin(pi / m), 2);
        for (int n = 0; n <= N; ++n) {
            c.theta[n] = (m - 1.0) / ((n == 0 || n == N ? 2.0 : 1.0) * n_ * m);
            const double arg = n * (m - 1.0) * pi / (n_ * m);
            if (scheme == Scheme::mpsk)
                c.delta[n] = n == 0 ? inf : s2 / std::pow(std::sin(arg), 2);
            else
                c.delta[n] = s2 / (1.0 + std::cos(pi / m) * std::cos(arg));
        }
        break;
    }
    case Scheme::gcdqpsk:
        for (int n = 0; n <= N; ++n) {
            c.theta[n] = (n == 0 || n == N) ? 1.0 / (4.0 * n_) : 1.0 / (2.0 * n_);
            c.delta[n] = 1.0 / (1.0 - std::cos(n * pi / n_) / std::sqrt(2.0));
        }
        break;
    case Scheme::mqam: {
        const double r = std::sqrt(m);
        const int h = N / 2;
        for (int n = 0; n <= N; ++n) {
            if (n == 0)
                c.theta[n] = (r - 1.0) / (n_ * m);
            else if (n < h)
                c.theta[n] = 2.0 * (r - 1.0) / (n_ * m);
            else if (n == h)
                c.theta[n] = (m - 1.0) / (n_ * m);
            else if (n < N)
                c.theta[n] = 2.0 * (r - 1.0) / (n_ * r);
            else
                c.theta[n] = (r - 1.0) / (n_ * r);
            c.delta[n] = n == 0 ? inf : 3.0 / (2.0 * (m - 1.0) * std::pow(std::sin(n * pi / (2.0 * n_)), 2));
        }
        break;
    }
    }
    return c;
}

double sep_exact(Scheme scheme, int M, double gamma)
{
    check(scheme, M);
    if (!(gamma >= 0.0))
        throw DomainError("sep_exact: gamma must be non-negative");
    if (std::isinf(gamma))
        return 0.0;
    const double m = M;
    switch (scheme) {
    case Scheme::mpsk:
        return d_kernel(1.0, (m - 1.0) / m, std::pow(std::sin(pi / m), 2), gamma);
    case Scheme::mqam: {
        const double r = std::sqrt(m);
        const double c = 3.0 / (2.0 * (m - 1.0));
        return d_kernel(4.0 * (r - 1.0) / r, 0.5, c, gamma) -
               d_kernel(4.0 * std::pow((r - 1.0) / r, 2), 0.25, c, gamma);
    }
    case Scheme::mdpsk:
        return e_kernel(1.0, (m - 1.0) / m, std::pow(std::sin(pi / m), 2), std::cos(pi / m), gamma);
    case Scheme::gcdqpsk:
        return e_kernel(0.5, 1.0, 1.0, -1.0 / std::sqrt(2.0), gamma);
    }
    return 0.0;
}

double sep_approx(const ModulationCoeffs& c, double gamma)
{
    if (!(gamma >= 0.0))
        throw DomainError("sep_approx: gamma must be non-negative");
    double s = 0.0;
    for (std::size_t n = 0; n < c.theta.size(); ++n) {
        if (std::isinf(c.delta[n]))
            s += gamma == 0.0 ? c.theta[n] : 0.0;
        else
            s += c.theta[n] * std::exp(-c.delta[n] * gamma);
    }
    return s;
}

}  // namespace sfhf
