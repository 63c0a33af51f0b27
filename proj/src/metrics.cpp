#include "sfhf/metrics.hpp"

#include "sfhf/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/hypergeometric_1F1.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace sfhf {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double pi = std::numbers::pi;
const double ln2 = std::numbers::ln2;

bool ideal(const ScenarioParams& sp) { return sp.rho == 0.0; }

// The ideal-hardware kernels below all carry M(v), the shifted kernel.

// Gamma(1 - v) M(v) Gamma(v)^2 / Gamma(1 + v)
FoxHParams capacity_ideal_kernel(const FoxHParams& h)
{
    const FoxHParams s = shifted(h);
    FoxHParams k;
    k.m = s.m + 2;
    k.n = s.n + 1;
    k.upper.push_back({0.0, 1.0});
    k.upper.insert(k.upper.end(), s.upper.begin(), s.upper.end());
    k.upper.push_back({1.0, 1.0});
    k.lower = {{0.0, 1.0}, {0.0, 1.0}};
    k.lower.insert(k.lower.end(), s.lower.begin(), s.lower.end());
    return k;
}

// Gamma(1 - v) M(v) Gamma(v) / Gamma(1 + v): E minus the Laplace transform of the CDF.
FoxHParams asep_ideal_kernel(const FoxHParams& h)
{
    const FoxHParams s = shifted(h);
    FoxHParams k;
    k.m = s.m + 1;
    k.n = s.n + 1;
    k.upper.push_back({0.0, 1.0});
    k.upper.insert(k.upper.end(), s.upper.begin(), s.upper.end());
    k.upper.push_back({1.0, 1.0});
    k.lower.push_back({0.0, 1.0});
    k.lower.insert(k.lower.end(), s.lower.begin(), s.lower.end());
    return k;
}

// Gamma(-v) M(v) on the strip left of the origin: the Laplace transform itself.
FoxHParams asep_ideal_lower_kernel(const FoxHParams& h)
{
    const FoxHParams s = shifted(h);
    FoxHParams k;
    k.m = s.m;
    k.n = s.n + 1;
    k.upper.push_back({1.0, 1.0});
    k.upper.insert(k.upper.end(), s.upper.begin(), s.upper.end());
    k.lower = s.lower;
    return k;
}

FoxHParams v_block(const FoxHParams& h)
{
    const FoxHParams s = shifted(h);
    FoxHParams k;
    k.m = s.m + 1;
    k.n = s.n;
    k.upper = s.upper;
    k.lower.push_back({0.0, 1.0});
    k.lower.insert(k.lower.end(), s.lower.begin(), s.lower.end());
    return k;
}

bool try_h(const MetricOptions& opt) { return opt.policy != RoutePolicy::quadrature_only; }
bool may_fall_back(const MetricOptions& opt) { return opt.policy == RoutePolicy::automatic; }

// The fallback integrals run over the ideal-hardware SNR y = e^u, where the
// tail and CDF are smooth, with dgamma = omega tau / (rho y + tau)^2 dy.
double gamma_of(double y, const ScenarioParams& sp) { return sp.omega * y / (sp.rho * y + sp.tau); }

double dgamma_dy(double y, const ScenarioParams& sp)
{
    const double s = sp.rho * y + sp.tau;
    return sp.omega * sp.tau / (s * s);
}

template <class F>
Evaluation integrate_log_axis(F f, double y_lo, double y_hi, double centre, double rel_tol)
{
    std::vector<double> cuts{std::log(y_lo), std::log(y_hi)};
    for (int k = -4; k <= 4; ++k) {
        const double u = std::log(centre) + k * std::numbers::ln10;
        if (u > cuts[0] && u < cuts[1])
            cuts.push_back(u);
    }
    std::sort(cuts.begin(), cuts.end());
    auto g = [&](double u) {
        const double y = std::exp(u);
        return f(y) * y;
    };
    Evaluation out{0.0, 0.0};
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double err = 0.0;
        double l1 = 0.0;
        out.value += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, cuts[i], cuts[i + 1], 10,
                                                                                   rel_tol, &err, &l1);
        out.error += err + 8.0 * std::numeric_limits<double>::epsilon() * l1;
    }
    return out;
}

// Ideal SNR above which the tail is negligible, and below which the CDF is.
std::pair<double, double> y_range(const SFHFDistribution& d, const EvalOptions& eo)
{
    double hi = d.mean_snr;
    while (tail_ideal(d, hi, eo).value > 1e-18 && hi < 1e300)
        hi *= 4.0;
    double lo = d.mean_snr;
    while (cdf_ideal(d, lo, eo).value > 1e-18 && lo > 1e-300)
        lo /= 16.0;
    return {lo, hi};
}

MetricResult capacity_quadrature(const SFHFDistribution& d, const ScenarioParams& sp,
                                 const MetricOptions& opt, bool fallback)
{
    const EvalOptions eo = opt.univariate;
    const auto [lo, hi] = y_range(d, eo);
    auto f = [&](double y) { return tail_ideal(d, y, eo).value / (1.0 + gamma_of(y, sp)) * dgamma_dy(y, sp); };
    Evaluation e = integrate_log_axis(f, lo, hi, d.mean_snr, opt.quad_rel_tol);
    e.value += std::log1p(gamma_of(lo, sp));  // tail is one below lo
    return {e.value / ln2, {MethodKind::exact, Route::quadrature, fallback}, e.error / ln2};
}

MetricResult asep_quadrature(const SFHFDistribution& d, const ScenarioParams& sp,
                             const ModulationCoeffs& c, const MetricOptions& opt, bool fallback)
{
    // P = ceiling + int_0^X S(g) F(g) dg with S = -d/dg sum theta_n exp(-delta_n g).
    const EvalOptions eo = opt.univariate;
    auto [lo, hi] = y_range(d, eo);
    double dmin = inf;
    for (double dl : c.delta)
        dmin = std::min(dmin, dl);
    auto s = [&](double g) {
        double acc = 0.0;
        for (std::size_t n = 0; n < c.theta.size(); ++n)
            if (std::isfinite(c.delta[n]))
                acc += c.theta[n] * c.delta[n] * std::exp(-c.delta[n] * g);
        return acc;
    };
    // Beyond hi the CDF is one and the remaining piece is elementary.
    auto s_integral = [&](double g) {
        double acc = 0.0;
        for (std::size_t n = 0; n < c.theta.size(); ++n)
            if (std::isfinite(c.delta[n]))
                acc += c.theta[n] * (std::exp(-c.delta[n] * g) - std::exp(-c.delta[n] * sp.ceiling()));
        return acc;
    };
    if (ideal(sp))
        hi = std::max(lo * 2.0, std::min(hi, 50.0 / dmin));
    auto f = [&](double y) { return s(gamma_of(y, sp)) * cdf_ideal(d, y, eo).value * dgamma_dy(y, sp); };
    Evaluation e = integrate_log_axis(f, lo, hi, d.mean_snr, opt.quad_rel_tol);
    e.value += s_integral(gamma_of(hi, sp));
    const double base = asep_ceiling(sp, c);
    return {base + e.value, {MethodKind::exact, Route::quadrature, fallback}, e.error};
}

void check_threshold(double gamma_th)
{
    if (!(gamma_th > 0.0))
        throw DomainError("outage threshold must be positive");
}

void check_integer_exponent(double beta)
{
    if (std::abs(beta - std::round(beta)) < 1e-9)
        throw PoleError("high-SNR correction diverges: CDF exponent " + std::to_string(beta) +
                        " is an integer, where the continued inner integral has a pole");
}

// Continued value of int_0^X (1+g)^{-1} (g/(X-g))^beta dg.
double capacity_inner_continued(double beta, double x)
{
    check_integer_exponent(beta);
    return pi / std::sin(pi * beta) * -std::expm1(-beta * std::log1p(x));
}

// Continued value of int_0^X exp(-delta g) g^beta (1 - g/X)^{-beta} dg.
double asep_inner_continued(double beta, double x, double delta)
{
    check_integer_exponent(beta);
    // 1F1(1+b; 2; -z) = e^{-z} 1F1(1-b; 2; z)
    const double z = delta * x;
    const double f11 = std::exp(-z) * boost::math::hypergeometric_1F1(1.0 - beta, 2.0, z);
    return std::pow(x, 1.0 + beta) * boost::math::tgamma(1.0 + beta) * boost::math::tgamma(1.0 - beta) *
           f11;
}

}  // namespace

std::string to_string(MethodKind k)
{
    switch (k) {
    case MethodKind::exact: return "exact";
    case MethodKind::asymptotic: return "asymptotic";
    case MethodKind::ceiling: return "ceiling";
    case MethodKind::monte_carlo: return "monte-carlo";
    }
    return "?";
}

std::string to_string(Route r)
{
    switch (r) {
    case Route::univariate_h: return "univariate-h";
    case Route::bivariate_h: return "bivariate-h";
    case Route::quadrature: return "quadrature";
    case Route::continuation: return "continuation";
    case Route::closed_form: return "closed-form";
    case Route::saturated: return "saturated";
    }
    return "?";
}

std::string to_string(const MethodTag& t)
{
    return to_string(t.kind) + ":" + to_string(t.route) + (t.fallback ? "(fallback)" : "");
}

BivariateFoxHParams capacity_bivariate_params(const FoxHParams& h)
{
    BivariateFoxHParams b;
    b.n1 = 1;
    b.joint_upper = {{1.0, 1.0, 1.0}};  // Gamma(-v - s)
    b.first = v_block(h);
    b.second = FoxHParams{1, 1, {{1.0, 1.0}}, {{1.0, 1.0}, {0.0, 1.0}}};
    return b;
}

BivariateFoxHParams asep_bivariate_params(const FoxHParams& h)
{
    BivariateFoxHParams b;
    b.n1 = 1;
    b.joint_upper = {{1.0, 1.0, 1.0}};
    b.first = v_block(h);
    b.second = FoxHParams{1, 0, {}, {{1.0, 1.0}, {0.0, 1.0}}};
    return b;
}

BivariateFoxHParams capacity_asymptotic_bivariate_params(double beta)
{
    BivariateFoxHParams b;
    b.n1 = 1;
    b.joint_upper = {{-beta, 1.0, 1.0}};
    b.joint_lower = {{-1.0 - beta, 1.0, 1.0}};
    b.first = FoxHParams{1, 1, {{0.0, 1.0}}, {{0.0, 1.0}}};
    b.second = FoxHParams{1, 1, {{1.0 - beta, 1.0}}, {{0.0, 1.0}}};
    return b;
}

BivariateFoxHParams asep_asymptotic_bivariate_params(double beta)
{
    BivariateFoxHParams b = capacity_asymptotic_bivariate_params(beta);
    b.first = FoxHParams{1, 0, {}, {{0.0, 1.0}}};
    return b;
}

MetricResult outage_probability(const SFHFDistribution& d, const ScenarioParams& sp, double gamma_th,
                                const MetricOptions& opt)
{
    check_threshold(gamma_th);
    if (gamma_th >= sp.ceiling())
        return {1.0, {MethodKind::exact, Route::saturated, false}, 0.0};
    const Evaluation e = cdf_ideal(d, sinr_inverse(gamma_th, sp), opt.univariate);
    return {e.value, {MethodKind::exact, Route::univariate_h, false}, e.error};
}

MetricResult outage_asymptotic(const SFHFDistribution& d, const ScenarioParams& sp, double gamma_th)
{
    check_threshold(gamma_th);
    if (gamma_th >= sp.ceiling())
        return {1.0, {MethodKind::asymptotic, Route::saturated, false}, 0.0};
    const double y = sinr_inverse(gamma_th, sp);
    const auto coeffs = asymptotic_cdf_coeffs(d);
    double s = 0.0;
    for (std::size_t l = 0; l < d.terms.size(); ++l) {
        const auto& t = d.terms[l];
        for (const auto& a : coeffs[l])
            s += t.psi / t.phi * a.coef * std::pow(t.phi * y, a.exponent);
    }
    return {s, {MethodKind::asymptotic, Route::closed_form, false}, 0.0};
}

MetricResult capacity_ora_ideal(const SFHFDistribution& d, const MetricOptions& opt)
{
    if (!try_h(opt))
        return capacity_quadrature(d, {}, opt, false);
    try {
        Evaluation acc{0.0, 0.0};
        for (const auto& t : d.terms) {
            const Evaluation e = eval_foxh(capacity_ideal_kernel(t.h), t.phi, opt.univariate);
            acc.value += t.psi / t.phi * e.value;
            acc.error += t.psi / t.phi * e.error;
        }
        return {acc.value / ln2, {MethodKind::exact, Route::univariate_h, false}, acc.error / ln2};
    } catch (const NumericalError&) {
        if (!may_fall_back(opt))
            throw;
        return capacity_quadrature(d, {}, opt, true);
    }
}

MetricResult capacity_ora(const SFHFDistribution& d, const ScenarioParams& sp, const MetricOptions& opt)
{
    if (ideal(sp))
        return capacity_ora_ideal(d, opt);
    if (!try_h(opt))
        return capacity_quadrature(d, sp, opt, false);
    try {
        const double x = sp.ceiling();
        Evaluation acc{0.0, 0.0};
        for (const auto& t : d.terms) {
            const Evaluation e =
                eval_foxh_bivariate(capacity_bivariate_params(t.h), t.phi * sp.tau / sp.rho, x, opt.bivariate);
            acc.value += t.psi / t.phi * e.value;
            acc.error += t.psi / t.phi * e.error;
        }
        return {acc.value / ln2, {MethodKind::exact, Route::bivariate_h, false}, acc.error / ln2};
    } catch (const NumericalError&) {
        if (!may_fall_back(opt))
            throw;
        return capacity_quadrature(d, sp, opt, true);
    }
}

double capacity_ceiling(const ScenarioParams& sp)
{
    if (ideal(sp))
        throw InfiniteCeiling();
    return std::log2(1.0 + sp.ceiling());
}

MetricResult capacity_asymptotic(const SFHFDistribution& d, const ScenarioParams& sp)
{
    const auto coeffs = asymptotic_cdf_coeffs(d);
    if (ideal(sp)) {
        // Double pole of Gamma(v)^2 at the origin.
        double s = 0.0;
        for (const auto& t : d.terms)
            s += t.psi / t.phi * normalization_constant(t.h) *
                 (log_kernel_derivative_at_zero(t.h) - std::log(t.phi));
        return {s / ln2, {MethodKind::asymptotic, Route::closed_form, false}, 0.0};
    }
    const double x = sp.ceiling();
    bool fallback = false;
    double correction = 0.0;
    for (std::size_t l = 0; l < d.terms.size(); ++l) {
        const auto& t = d.terms[l];
        const double c = t.phi * sp.tau / sp.rho;
        for (const auto& a : coeffs[l]) {
            double inner;
            try {
                const Evaluation e = eval_foxh_bivariate(capacity_asymptotic_bivariate_params(a.exponent), x, -1.0);
                inner = e.value * x / boost::math::tgamma(a.exponent);
            } catch (const NumericalError&) {
                // The inner integral diverges for exponents >= 1; use its continuation.
                fallback = true;
                inner = capacity_inner_continued(a.exponent, x);
            }
            correction += t.psi / t.phi * a.coef * std::pow(c, a.exponent) * inner;
        }
    }
    return {capacity_ceiling(sp) - correction / ln2,
            {MethodKind::asymptotic, fallback ? Route::continuation : Route::bivariate_h, fallback}, 0.0};
}

double asep_ceiling(const ScenarioParams& sp, const ModulationCoeffs& c)
{
    if (ideal(sp))
        return 0.0;
    const double x = sp.ceiling();
    double s = 0.0;
    for (std::size_t n = 0; n < c.theta.size(); ++n)
        if (std::isfinite(c.delta[n]))
            s += c.theta[n] * std::exp(-c.delta[n] * x);
    return s;
}

MetricResult asep(const SFHFDistribution& d, const ScenarioParams& sp, const ModulationCoeffs& c,
                  const MetricOptions& opt)
{
    if (!try_h(opt))
        return asep_quadrature(d, sp, c, opt, false);
    try {
        double total = 0.0;
        double err = 0.0;
        for (std::size_t n = 0; n < c.theta.size(); ++n) {
            const double delta = c.delta[n];
            if (!std::isfinite(delta))
                continue;  // exp(-inf * gamma) vanishes for gamma > 0
            double in = 0.0;
            for (const auto& t : d.terms) {
                const double w = t.psi / t.phi;
                if (ideal(sp)) {
                    const double e = normalization_constant(t.h);
                    Evaluation lap = eval_foxh(asep_ideal_lower_kernel(t.h), t.phi / delta, opt.univariate);
                    if (lap.value > 0.5 * e) {
                        const Evaluation up = eval_foxh(asep_ideal_kernel(t.h), t.phi / delta, opt.univariate);
                        lap = {e - up.value, up.error};
                    }
                    in += w * lap.value;
                    err += c.theta[n] * w * lap.error;
                } else {
                    const Evaluation e = eval_foxh_bivariate(asep_bivariate_params(t.h), t.phi * sp.tau / sp.rho,
                                                             delta * sp.ceiling(), opt.bivariate);
                    in -= w * e.value;
                    err += c.theta[n] * w * e.error;
                }
            }
            if (!ideal(sp))
                in += 1.0;
            total += c.theta[n] * in;
        }
        return {total, {MethodKind::exact, ideal(sp) ? Route::univariate_h : Route::bivariate_h, false}, err};
    } catch (const NumericalError&) {
        if (!may_fall_back(opt))
            throw;
        return asep_quadrature(d, sp, c, opt, true);
    }
}

MetricResult asep_asymptotic(const SFHFDistribution& d, const ScenarioParams& sp, const ModulationCoeffs& c)
{
    const auto coeffs = asymptotic_cdf_coeffs(d);
    if (ideal(sp)) {
        double s = 0.0;
        for (std::size_t n = 0; n < c.theta.size(); ++n) {
            if (!std::isfinite(c.delta[n]))
                continue;
            for (std::size_t l = 0; l < d.terms.size(); ++l) {
                const auto& t = d.terms[l];
                for (const auto& a : coeffs[l])
                    s += c.theta[n] * t.psi / t.phi * a.coef * boost::math::tgamma(1.0 + a.exponent) *
                         std::pow(t.phi / c.delta[n], a.exponent);
            }
        }
        return {s, {MethodKind::asymptotic, Route::closed_form, false}, 0.0};
    }
    const double x = sp.ceiling();
    bool fallback = false;
    double correction = 0.0;
    for (std::size_t n = 0; n < c.theta.size(); ++n) {
        const double delta = c.delta[n];
        if (!std::isfinite(delta))
            continue;
        for (std::size_t l = 0; l < d.terms.size(); ++l) {
            const auto& t = d.terms[l];
            const double c0 = t.phi * sp.tau / sp.omega;
            for (const auto& a : coeffs[l]) {
                double inner;
                try {
                    const Evaluation e =
                        eval_foxh_bivariate(asep_asymptotic_bivariate_params(a.exponent), delta * x, -1.0);
                    inner = e.value * x / boost::math::tgamma(a.exponent);
                } catch (const NumericalError&) {
                    fallback = true;
                    inner = asep_inner_continued(a.exponent, x, delta);
                }
                correction += c.theta[n] * delta * t.psi / t.phi * a.coef * std::pow(c0, a.exponent) * inner;
            }
        }
    }
    return {asep_ceiling(sp, c) + correction,
            {MethodKind::asymptotic, fallback ? Route::continuation : Route::bivariate_h, fallback}, 0.0};
}

}  // namespace sfhf
