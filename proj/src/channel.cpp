#include "sfhf/channel.hpp"

#include "sfhf/complex_gamma.hpp"
#include "sfhf/errors.hpp"

#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/factorials.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sfhf {

namespace {

bool nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

// Real gamma-ratio kernel value; zero when a denominator is singular.
double kernel_value(const FoxHParams& h, double v)
{
    std::complex<double> acc = 0.0;
    for (const auto& f : gamma_factors(h)) {
        const double arg = f.c0 + f.c1 * v;
        if (nonpositive_integer(arg)) {
            if (f.power < 0)
                return 0.0;
            std::ostringstream msg;
            msg << "gamma argument " << arg << " is a nonpositive integer";
            throw PoleError(msg.str());
        }
        acc += static_cast<double>(f.power) * log_gamma(std::complex<double>(arg, 0.0));
    }
    return std::exp(acc).real();
}

void check_term(const SFHFTerm& t)
{
    if (!(t.psi > 0.0) || !(t.phi > 0.0) || !std::isfinite(t.psi) || !std::isfinite(t.phi))
        throw ParamError("SFHF term weights psi and phi must be positive and finite");
}

struct TailPair {
    double lower;
    double upper;
    double error;
};

TailPair tails(const SFHFDistribution& d, double gamma, const EvalOptions& opt)
{
    TailPair out{0.0, 0.0, 0.0};
    const EvalOptions& k = opt;
    for (const auto& t : d.terms) {
        check_term(t);
        const double e = normalization_constant(t.h);
        const double w = t.psi / t.phi;
        const double z = t.phi * gamma;
        const Evaluation lo = eval_foxh(lower_tail_kernel(t.h), z, k);
        double lower = lo.value;
        double upper = e - lower;
        double err = lo.error;
        if (lower > 0.5 * e) {
            const Evaluation up = eval_foxh(tail_kernel(t.h), z, k);
            upper = up.value;
            lower = e - upper;
            err = up.error;
        }
        out.lower += w * lower;
        out.upper += w * upper;
        out.error += w * err;
    }
    return out;
}

}  // namespace

MalagaParams MalagaParams::from_omega_prime(double alpha, int beta, double omega,
                                            double omega_prime, double rho, double xi, int r,
                                            double mu_r)
{
    if (!(rho > 0.0))
        throw ParamError("malaga: b0 cannot be recovered from omega' when rho = 0");
    return {alpha, beta, omega, (omega_prime - omega) / (2.0 * rho), rho, xi, r, mu_r};
}

FoxHParams shifted(const FoxHParams& h)
{
    FoxHParams s = h;
    for (auto& a : s.upper)
        a.coef += a.scale;
    for (auto& b : s.lower)
        b.coef += b.scale;
    return s;
}

double normalization_constant(const FoxHParams& h)
{
    return kernel_value(shifted(h), 0.0);
}

double normalization_sum(const SFHFDistribution& d)
{
    double s = 0.0;
    for (const auto& t : d.terms)
        s += normalization_constant(t.h) * t.psi / t.phi;
    return s;
}

SFHFDistribution make_alpha_mu(const AlphaMuParams& p)
{
    if (!(p.alpha > 0.0) || !(p.mu > 0.0) || !(p.mean_snr > 0.0))
        throw ParamError("alpha-mu: alpha, mu and mean SNR must be positive");
    const double B = 2.0 / p.alpha;
    const double phi = std::pow(p.mu, B) / p.mean_snr;
    const double psi = phi / std::tgamma(p.mu);
    FoxHParams h{1, 0, {}, {{p.mu - B, B}}};
    h.validate();
    return {{{psi, phi, h}}, p.mean_snr};
}

SFHFDistribution make_malaga(const MalagaParams& p)
{
    if (!(p.alpha > 0.0))
        throw ParamError("malaga: alpha must be positive");
    if (p.beta < 1)
        throw ParamError("malaga: beta must be a positive integer");
    if (!(p.omega >= 0.0) || !(p.b0 > 0.0))
        throw ParamError("malaga: omega must be non-negative and b0 positive");
    if (!(p.rho >= 0.0 && p.rho <= 1.0))
        throw ParamError("malaga: rho must lie in [0, 1]");
    if (!(p.xi > 0.0) || !(p.mu_r > 0.0))
        throw ParamError("malaga: xi and mu_r must be positive");
    if (p.r != 1 && p.r != 2)
        throw ParamError("malaga: r must be 1 (heterodyne) or 2 (IM/DD)");
    const double kappa = p.kappa();
    if (!(kappa > 0.0))
        throw ParamError("malaga: scatter power kappa = 2 b0 (1 - rho) must be positive");

    const double op = p.omega_prime();
    const double xi2 = p.xi * p.xi;
    const double beta = p.beta;
    const double r = p.r;
    const double x = op / (kappa * beta);
    const double a_prime = std::pow(1.0 + x, 1.0 - beta) / std::tgamma(p.alpha);
    const double b_prime = xi2 * p.alpha * beta * (kappa + op) / ((xi2 + 1.0) * (kappa * beta + op));
    const double phi = std::pow(b_prime, r) / p.mu_r;

    SFHFDistribution d;
    d.mean_snr = p.mu_r;
    for (int l = 1; l <= p.beta; ++l) {
        const double lambda = boost::math::binomial_coefficient<double>(p.beta - 1, l - 1) *
                              std::pow(x, l - 1) / boost::math::factorial<double>(l - 1);
        if (!(lambda > 0.0))
            continue;
        FoxHParams h{3, 0, {{xi2 - r + 1.0, r}}, {{xi2 - r, r}, {p.alpha - r, r}, {l - r, r}}};
        h.validate();
        d.terms.push_back({xi2 * a_prime * lambda * phi, phi, h});
    }
    return d;
}

FoxHParams tail_kernel(const FoxHParams& h)
{
    const FoxHParams s = shifted(h);
    FoxHParams k;
    k.m = h.m + 1;
    k.n = h.n;
    k.upper = s.upper;
    k.upper.push_back({1.0, 1.0});
    k.lower.push_back({0.0, 1.0});
    k.lower.insert(k.lower.end(), s.lower.begin(), s.lower.end());
    return k;
}

FoxHParams lower_tail_kernel(const FoxHParams& h)
{
    const FoxHParams s = shifted(h);
    FoxHParams k;
    k.m = h.m;
    k.n = h.n + 1;
    k.upper.push_back({1.0, 1.0});
    k.upper.insert(k.upper.end(), s.upper.begin(), s.upper.end());
    k.lower = s.lower;
    k.lower.push_back({0.0, 1.0});
    return k;
}

Evaluation pdf(const SFHFDistribution& d, double gamma, const EvalOptions& opt)
{
    if (!(gamma > 0.0))
        throw DomainError("pdf: gamma must be positive");
    if (std::isinf(gamma))
        return {0.0, 0.0};
    Evaluation out{0.0, 0.0};
    const EvalOptions& k = opt;
    for (const auto& t : d.terms) {
        check_term(t);
        const Evaluation e = eval_foxh(t.h, t.phi * gamma, k);
        out.value += t.psi * e.value;
        out.error += t.psi * e.error;
    }
    return out;
}

Evaluation cdf_ideal(const SFHFDistribution& d, double gamma, const EvalOptions& opt)
{
    if (gamma < 0.0 || std::isnan(gamma))
        throw DomainError("cdf_ideal: gamma must be non-negative");
    if (gamma == 0.0)
        return {0.0, 0.0};
    if (std::isinf(gamma))
        return {1.0, 0.0};
    const TailPair t = tails(d, gamma, opt);
    return {std::clamp(t.lower, 0.0, 1.0), t.error};
}

Evaluation tail_ideal(const SFHFDistribution& d, double gamma, const EvalOptions& opt)
{
    if (gamma < 0.0 || std::isnan(gamma))
        throw DomainError("tail_ideal: gamma must be non-negative");
    if (gamma == 0.0)
        return {1.0, 0.0};
    if (std::isinf(gamma))
        return {0.0, 0.0};
    const TailPair t = tails(d, gamma, opt);
    return {std::clamp(t.upper, 0.0, 1.0), t.error};
}

std::vector<std::vector<AsymptoticTerm>> asymptotic_cdf_coeffs(const SFHFDistribution& d)
{
    std::vector<std::vector<AsymptoticTerm>> out;
    for (const auto& t : d.terms) {
        const FoxHParams s = shifted(t.h);
        std::vector<AsymptoticTerm> row;
        for (int i = 0; i < s.m; ++i) {
            const double bi = s.lower[i].coef;
            const double Bi = s.lower[i].scale;
            const double v0 = -bi / Bi;
            // Residue of -M(v)/v at the first pole of Gamma(b_i + B_i v).
            FoxHParams rest = s;
            rest.lower.erase(rest.lower.begin() + i);
            rest.m -= 1;
            double coef = 0.0;
            try {
                coef = kernel_value(rest, v0) / bi;
            } catch (const PoleError& e) {
                std::ostringstream msg;
                msg << "asymptotic CDF coefficient (term " << (&t - d.terms.data()) << ", index " << i
                    << "): " << e.what();
                throw PoleError(msg.str());
            }
            row.push_back({coef, bi / Bi});
        }
        out.push_back(std::move(row));
    }
    return out;
}

double log_kernel_derivative_at_zero(const FoxHParams& h)
{
    using boost::math::digamma;
    const FoxHParams s = shifted(h);
    double d = 0.0;
    for (int i = 0; i < s.q(); ++i) {
        const auto& b = s.lower[i];
        d += i < s.m ? b.scale * digamma(b.coef) : b.scale * digamma(1.0 - b.coef);
    }
    for (int i = 0; i < s.p(); ++i) {
        const auto& a = s.upper[i];
        d -= i < s.n ? a.scale * digamma(1.0 - a.coef) : a.scale * digamma(a.coef);
    }
    return d;
}

double moment(const SFHFDistribution& d, double k)
{
    double m = 0.0;
    for (const auto& t : d.terms)
        m += t.psi / std::pow(t.phi, k + 1.0) * kernel_value(t.h, k + 1.0);
    return m;
}

}  // namespace sfhf
