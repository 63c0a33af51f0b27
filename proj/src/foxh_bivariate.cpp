#include "sfhf/complex_gamma.hpp"
#include "sfhf/errors.hpp"
#include "sfhf/foxh.hpp"
#include "sfhf/quadrature.hpp"
#include "strip_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace sfhf {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double pi = std::numbers::pi;

std::complex<double> principal_log(double x)
{
    return {std::log(std::abs(x)), x < 0.0 ? pi : 0.0};
}

struct Integrand {
    std::vector<JointGammaFactor> only1;  // factors independent of s2
    std::vector<JointGammaFactor> rest;
    std::vector<JointGammaFactor> all;
    std::complex<double> log_x;
    std::complex<double> log_y;

    // Part of log F that depends on s1 alone.
    std::complex<double> outer_part(std::complex<double> s1) const
    {
        std::complex<double> acc = -s1 * log_x;
        for (const auto& f : only1)
            acc += static_cast<double>(f.power) * log_gamma(f.c0 + f.c1 * s1);
        return acc;
    }

    std::complex<double> inner_part(std::complex<double> s1, std::complex<double> s2) const
    {
        std::complex<double> acc = -s2 * log_y;
        for (const auto& f : rest)
            acc += static_cast<double>(f.power) * log_gamma(f.c0 + f.c1 * s1 + f.c2 * s2);
        return acc;
    }

    std::complex<double> log_f(std::complex<double> s1, std::complex<double> s2) const
    {
        return outer_part(s1) + inner_part(s1, s2);
    }

    double log_mag(double c1, double c2, double t1, double t2) const
    {
        const double r = log_f({c1, t1}, {c2, t2}).real();
        return std::isnan(r) ? inf : r;
    }

    // Exponential decay rate of |F| along the unit direction (u1, u2).
    double rate(double u1, double u2) const
    {
        double r = -log_x.imag() * u1 - log_y.imag() * u2;
        for (const auto& f : all)
            r += 0.5 * pi * f.power * std::abs(f.c1 * u1 + f.c2 * u2);
        return r;
    }
};

Integrand make_integrand(const BivariateFoxHParams& h, double x, double y)
{
    Integrand in;
    in.all = h.joint_factors();
    for (const auto& g : gamma_factors(h.first))
        in.all.push_back({g.c0, g.c1, 0.0, g.power});
    for (const auto& g : gamma_factors(h.second))
        in.all.push_back({g.c0, 0.0, g.c1, g.power});
    for (const auto& f : in.all)
        (f.c2 == 0.0 ? in.only1 : in.rest).push_back(f);
    in.log_x = principal_log(x);
    in.log_y = principal_log(y);
    return in;
}

double log_sum_exp(std::initializer_list<double> xs)
{
    double mx = -inf;
    for (double x : xs)
        mx = std::max(mx, x);
    if (!std::isfinite(mx))
        return mx;
    double s = 0.0;
    for (double x : xs)
        s += std::exp(x - mx);
    return mx + std::log(s);
}

double anchor_scale(const Integrand& in, double c1, double c2)
{
    return log_sum_exp({in.log_mag(c1, c2, 0.0, 0.0), in.log_mag(c1, c2, 0.7, 0.0),
                        in.log_mag(c1, c2, 0.0, 0.7), in.log_mag(c1, c2, 0.7, -0.7),
                        in.log_mag(c1, c2, 0.7, 0.7)});
}

double margin(const std::vector<JointGammaFactor>& fs, double c1, double c2)
{
    double m = inf;
    for (const auto& f : fs)
        if (f.power > 0)
            m = std::min(m, (f.c0 + f.c1 * c1 + f.c2 * c2) / std::max(1.0, std::abs(f.c1) + std::abs(f.c2)));
    return m;
}

// Feasible open interval for one anchor coordinate with the other fixed.
std::pair<double, double> coordinate_interval(const std::vector<JointGammaFactor>& fs, int k,
                                              double other)
{
    double lo = -inf;
    double hi = inf;
    for (const auto& f : fs) {
        if (f.power < 0)
            continue;
        const double a = k == 0 ? f.c1 : f.c2;
        const double rest = f.c0 + (k == 0 ? f.c2 : f.c1) * other;
        if (a > 0.0)
            lo = std::max(lo, -rest / a);
        else if (a < 0.0)
            hi = std::min(hi, -rest / a);
    }
    return {lo, hi};
}

std::pair<double, double> box_side(const PoleStrip& s)
{
    double lo = s.left;
    double hi = s.right;
    if (!std::isfinite(lo))
        lo = std::isfinite(hi) ? hi - 4.0 : -4.0;
    if (!std::isfinite(hi))
        hi = lo + 4.0;
    return {lo, hi};
}

}  // namespace

void BivariateFoxHParams::validate() const
{
    if (n1 < 0 || n1 > static_cast<int>(joint_upper.size()))
        throw ParamError("BivariateFoxHParams: joint block order n1 out of range");
    for (const auto& t : joint_upper)
        if (!std::isfinite(t.coef) || !std::isfinite(t.alpha) || !std::isfinite(t.beta))
            throw ParamError("BivariateFoxHParams: non-finite joint coefficient");
    for (const auto& t : joint_lower)
        if (!std::isfinite(t.coef) || !std::isfinite(t.alpha) || !std::isfinite(t.beta))
            throw ParamError("BivariateFoxHParams: non-finite joint coefficient");
    first.validate();
    second.validate();
}

std::vector<JointGammaFactor> BivariateFoxHParams::joint_factors() const
{
    std::vector<JointGammaFactor> fs;
    for (std::size_t i = 0; i < joint_upper.size(); ++i) {
        const auto& t = joint_upper[i];
        if (static_cast<int>(i) < n1)
            fs.push_back({1.0 - t.coef, -t.alpha, -t.beta, +1});
        else
            fs.push_back({t.coef, t.alpha, t.beta, -1});
    }
    for (const auto& t : joint_lower)
        fs.push_back({1.0 - t.coef, -t.alpha, -t.beta, -1});
    return fs;
}

BivariateContour select_bivariate_contour(const BivariateFoxHParams& h, double x, double y)
{
    h.validate();
    if (x == 0.0 || y == 0.0 || !std::isfinite(x) || !std::isfinite(y))
        throw DomainError("bivariate H: arguments must be nonzero and finite");
    const Integrand in = make_integrand(h, x, y);

    const auto [lo1, hi1] = box_side(pole_strip(h.first));
    const auto [lo2, hi2] = box_side(pole_strip(h.second));
    double best = -inf;
    double c1 = 0.0;
    double c2 = 0.0;
    constexpr int grid = 40;
    for (int i = 1; i < grid; ++i)
        for (int j = 1; j < grid; ++j) {
            const double u = lo1 + (hi1 - lo1) * i / grid;
            const double v = lo2 + (hi2 - lo2) * j / grid;
            const double mg = margin(in.all, u, v);
            if (mg > best) {
                best = mg;
                c1 = u;
                c2 = v;
            }
        }
    if (!(best > 0.0))
        throw PoleSeparationError("bivariate H: no contour pair separates the pole clusters");

    for (int sweep = 0; sweep < 8; ++sweep) {
        const double p1 = c1;
        const double p2 = c2;
        {
            const auto [lo, hi] = coordinate_interval(in.all, 0, c2);
            c1 = detail::minimize_on_strip([&](double c) { return anchor_scale(in, c, c2); }, lo, hi);
        }
        {
            const auto [lo, hi] = coordinate_interval(in.all, 1, c1);
            c2 = detail::minimize_on_strip([&](double c) { return anchor_scale(in, c1, c); }, lo, hi);
        }
        if (std::abs(c1 - p1) + std::abs(c2 - p2) < 1e-6)
            break;
    }
    if (!(margin(in.all, c1, c2) > 0.0))
        throw PoleSeparationError("bivariate H: anchor search left the admissible region");
    return {c1, c2};
}

Evaluation eval_foxh_bivariate(const BivariateFoxHParams& h, double x, double y,
                               const EvalOptions& opt)
{
    const BivariateContour anchor = select_bivariate_contour(h, x, y);
    const Integrand in = make_integrand(h, x, y);
    const double c1 = anchor.anchor1;
    const double c2 = anchor.anchor2;

    double min_rate = inf;
    for (int k = 0; k < 720; ++k) {
        const double a = 2.0 * pi * k / 720.0;
        min_rate = std::min(min_rate, in.rate(std::cos(a), std::sin(a)));
    }
    if (!(min_rate > 1e-3)) {
        std::ostringstream msg;
        msg << "bivariate H: integrand does not decay exponentially in every direction (min rate "
            << min_rate << ")";
        throw ConvergenceError(msg.str());
    }
    const double rate_up = in.rate(0.0, 1.0);
    const double rate_down = in.rate(0.0, -1.0);

    const double peak = std::exp(anchor_scale(in, c1, c2));
    const double four_pi2 = 4.0 * pi * pi;
    const double abs_target = four_pi2 * std::max(opt.abs_tol, opt.rel_tol * peak / four_pi2);
    const double trunc = 1e-3 * abs_target;

    std::vector<double> ratios;
    for (const auto& f : in.rest)
        if (f.c1 != 0.0 && f.c2 != 0.0)
            ratios.push_back(-f.c1 / f.c2);
    auto centers = [&](double t1, double& lo, double& hi) {
        lo = 0.0;
        hi = 0.0;
        for (double r : ratios) {
            lo = std::min(lo, r * t1);
            hi = std::max(hi, r * t1);
        }
    };
    auto mag = [&](double t1, double t2) { return std::exp(in.log_mag(c1, c2, t1, t2)); };

    // Rough bound on the inner integral at t1, used to truncate the outer range.
    auto inner_proxy = [&](double t1) {
        double lo, hi;
        centers(t1, lo, hi);
        double m = 0.0;
        for (double t2 : {lo - 1.0, lo, 0.5 * (lo + hi), hi, hi + 1.0})
            m = std::max(m, mag(t1, t2));
        return m * (hi - lo + 2.0 / std::min(rate_up, rate_down) + 2.0);
    };
    auto outer_extent = [&](double dir) {
        double T = 2.0;
        for (;;) {
            const double a = inner_proxy(dir * T);
            const double b = inner_proxy(dir * 1.25 * T);
            if (a * 2.0 / min_rate < trunc && b <= a)
                return T;
            T *= 1.25;
            if (T > 1e4)
                throw ConvergenceError("bivariate H: outer tail does not fall below tolerance");
        }
    };
    const bool symmetric = x > 0.0 && y > 0.0;
    const double t_hi = outer_extent(+1.0);
    const double t_lo = symmetric ? 0.0 : -outer_extent(-1.0);
    const double span = t_hi - t_lo;
    const double inner_trunc = trunc / span;

    std::size_t evals = 0;
    double inner_err_max = 0.0;
    auto inner = [&](double t1) -> std::complex<double> {
        const std::complex<double> s1{c1, t1};
        const std::complex<double> base = in.outer_part(s1);
        auto f = [&](double t2) {
            return std::exp(base + in.inner_part(s1, {c2, t2}));
        };
        double lo, hi;
        centers(t1, lo, hi);
        auto extend = [&](double edge, double dir, double rate) {
            double d = 1.0;
            for (;;) {
                const double e = edge + dir * d;
                const double a = std::abs(f(e));
                if (a * 2.0 / rate < inner_trunc && std::abs(f(e + dir * 0.25 * d)) <= a)
                    return e;
                d *= 1.25;
                if (d > 1e4)
                    throw ConvergenceError("bivariate H: inner tail does not fall below tolerance");
            }
        };
        const double a = extend(lo, -1.0, rate_down);
        const double b = extend(hi, +1.0, rate_up);
        double freq = std::abs(in.log_y.real());
        for (const auto& g : in.rest)
            freq += std::abs(g.c2) * std::log(2.0 + std::abs(g.c2) * (b - a));
        QuadOptions q;
        q.abs_tol = 0.25 * abs_target / span;
        q.rel_tol = opt.rel_tol;
        q.max_evals = 40000;
        q.initial_panels = static_cast<std::size_t>(std::clamp((b - a) * freq / pi, 4.0, 512.0));
        const auto r = integrate_gk15(f, a, b, q);
        evals += r.evals;
        if (!r.converged)
            throw ConvergenceError("bivariate H: inner quadrature did not converge");
        inner_err_max = std::max(inner_err_max, r.error);
        return r.value;
    };

    QuadOptions q;
    q.abs_tol = 0.5 * abs_target;
    q.rel_tol = opt.rel_tol;
    q.max_evals = 6000;
    q.initial_panels = static_cast<std::size_t>(
        std::clamp(span * (std::abs(in.log_x.real()) + 1.0) / pi, 4.0, 256.0));
    const auto r = integrate_gk15(inner, t_lo, t_hi, q);
    if (!r.converged || evals > opt.node_budget) {
        std::ostringstream msg;
        msg << "bivariate H: outer quadrature error " << r.error / four_pi2 << " after " << evals
            << " inner nodes";
        throw ConvergenceError(msg.str());
    }
    const double error = (r.error + inner_err_max * span) / four_pi2;
    if (symmetric)
        return {2.0 * r.value.real() / four_pi2, 2.0 * error};

    const double re = r.value.real() / four_pi2;
    const double im = r.value.imag() / four_pi2;
    const double tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(re));
    if (std::abs(im) > 10.0 * std::max(tol, error)) {
        std::ostringstream msg;
        msg << "bivariate H: imaginary residue " << im << " against real part " << re;
        throw BranchAmbiguityError(msg.str());
    }
    return {re, error};
}

}  // namespace sfhf
