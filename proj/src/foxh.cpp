#include "sfhf/foxh.hpp"

#include "sfhf/complex_gamma.hpp"
#include "sfhf/errors.hpp"
#include "sfhf/quadrature.hpp"
#include "strip_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

namespace sfhf {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double pi = std::numbers::pi;

bool finite_pair(const GammaPair& g) { return std::isfinite(g.coef) && std::isfinite(g.scale); }

double log_sum_exp(const double* xs, int n)
{
    double mx = -inf;
    for (int i = 0; i < n; ++i)
        mx = std::max(mx, xs[i]);
    if (!std::isfinite(mx))
        return mx;
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        s += std::exp(xs[i] - mx);
    return mx + std::log(s);
}

// Log-magnitude scale of the integrand near the real axis. Sampling a few
// heights keeps the function finite where a denominator vanishes at t = 0.
double contour_scale(const FoxHParams& h, double log_z, double c)
{
    const double ts[3] = {0.0, 0.5, 1.5};
    double vals[3];
    for (int i = 0; i < 3; ++i) {
        std::complex<double> v{c, ts[i]};
        vals[i] = (log_kernel(h, v) - v * log_z).real();
        if (std::isnan(vals[i]))
            vals[i] = inf;
    }
    return log_sum_exp(vals, 3);
}

// Algebraic growth exponent of |kernel(c + jt)| in t.
double algebraic_exponent(const std::vector<GammaFactor>& fs, double c)
{
    double rho = 0.0;
    for (const auto& f : fs)
        rho += f.power * (f.c0 + f.c1 * c - 0.5);
    return rho;
}

}  // namespace

void FoxHParams::validate() const
{
    if (n < 0 || m < 0 || n > p() || m > q())
        throw ParamError("FoxHParams: orders must satisfy 0 <= n <= p and 0 <= m <= q");
    for (const auto& g : upper)
        if (!finite_pair(g) || g.scale <= 0.0)
            throw ParamError("FoxHParams: upper scales A_i must be finite and positive");
    for (const auto& g : lower)
        if (!finite_pair(g) || g.scale <= 0.0)
            throw ParamError("FoxHParams: lower scales B_i must be finite and positive");
    const PoleStrip s = pole_strip(*this);
    if (!(s.left < s.right)) {
        std::ostringstream msg;
        msg << "left poles (max " << s.left << ") and right poles (min " << s.right
            << ") cannot be separated by a vertical contour";
        throw PoleSeparationError(msg.str());
    }
}

std::vector<GammaFactor> gamma_factors(const FoxHParams& h)
{
    std::vector<GammaFactor> fs;
    fs.reserve(h.upper.size() + h.lower.size());
    for (int i = 0; i < h.q(); ++i) {
        const auto& b = h.lower[i];
        if (i < h.m)
            fs.push_back({b.coef, b.scale, +1});
        else
            fs.push_back({1.0 - b.coef, -b.scale, -1});
    }
    for (int i = 0; i < h.p(); ++i) {
        const auto& a = h.upper[i];
        if (i < h.n)
            fs.push_back({1.0 - a.coef, -a.scale, +1});
        else
            fs.push_back({a.coef, a.scale, -1});
    }
    return fs;
}

std::complex<double> log_kernel(const FoxHParams& h, std::complex<double> v)
{
    std::complex<double> acc = 0.0;
    for (int i = 0; i < h.q(); ++i) {
        const auto& b = h.lower[i];
        if (i < h.m)
            acc += log_gamma(b.coef + b.scale * v);
        else
            acc -= log_gamma(1.0 - b.coef - b.scale * v);
    }
    for (int i = 0; i < h.p(); ++i) {
        const auto& a = h.upper[i];
        if (i < h.n)
            acc += log_gamma(1.0 - a.coef - a.scale * v);
        else
            acc -= log_gamma(a.coef + a.scale * v);
    }
    return acc;
}

PoleStrip pole_strip(const FoxHParams& h)
{
    PoleStrip s{-inf, inf};
    for (int i = 0; i < h.m; ++i)
        s.left = std::max(s.left, -h.lower[i].coef / h.lower[i].scale);
    for (int i = 0; i < h.n; ++i)
        s.right = std::min(s.right, (1.0 - h.upper[i].coef) / h.upper[i].scale);
    return s;
}

double decay_exponent(const FoxHParams& h)
{
    double a = 0.0;
    for (int i = 0; i < h.p(); ++i)
        a += (i < h.n ? 1.0 : -1.0) * h.upper[i].scale;
    for (int i = 0; i < h.q(); ++i)
        a += (i < h.m ? 1.0 : -1.0) * h.lower[i].scale;
    return a;
}

ContourSpec select_contour(const FoxHParams& h, double z, const EvalOptions& opt)
{
    h.validate();
    if (!(z > 0.0) || !std::isfinite(z))
        throw DomainError("select_contour: argument must be positive and finite");
    const double astar = decay_exponent(h);
    if (!(astar > 0.0))
        throw ConvergenceError("Mellin-Barnes integrand does not decay along vertical lines (a* <= 0)");
    const double log_z = std::log(z);
    const PoleStrip strip = pole_strip(h);
    const double anchor = detail::minimize_on_strip(
        [&](double c) { return contour_scale(h, log_z, c); }, strip.left, strip.right);
    if (!(anchor > strip.left && anchor < strip.right))
        throw PoleSeparationError("select_contour: no admissible anchor found");

    const double rate = 0.5 * pi * astar;
    const auto fs = gamma_factors(h);
    const double rho = std::max(0.0, algebraic_exponent(fs, anchor));
    // Compared in logs so that values far below the double range still work.
    const double log_peak = contour_scale(h, log_z, anchor);
    const double log_target =
        std::log(1e-3) + std::max(std::log(opt.abs_tol), std::log(opt.rel_tol) + log_peak);
    double T = std::max(2.0, 2.0 * rho / rate);
    for (;;) {
        std::complex<double> v{anchor, T};
        const double log_mag = (log_kernel(h, v) - v * log_z).real();
        if (log_mag + std::log(2.0 / rate) < log_target)
            break;
        T *= 1.25;
        if (T > 1e5)
            throw ConvergenceError("select_contour: integrand tail does not fall below tolerance");
    }
    return {anchor, T, opt.node_budget};
}

Evaluation eval_foxh(const FoxHParams& h, double z, const EvalOptions& opt)
{
    const ContourSpec contour = select_contour(h, z, opt);
    // Below the double range the quadrature would only integrate zeros.
    const double log_z = std::log(z);
    double log_max = -inf;
    for (int k = 0; k <= 16; ++k) {
        std::complex<double> v{contour.anchor, contour.half_length * k / 16.0};
        log_max = std::max(log_max, (log_kernel(h, v) - v * log_z).real());
    }
    if (log_max + std::log(contour.half_length) < -760.0)
        return {0.0, 0.0};
    return eval_foxh_on(h, z, contour, opt);
}

Evaluation eval_foxh_on(const FoxHParams& h, double z, const ContourSpec& contour,
                        const EvalOptions& opt)
{
    h.validate();
    if (!(z > 0.0) || !std::isfinite(z))
        throw DomainError("eval_foxh: argument must be positive and finite");
    const PoleStrip strip = pole_strip(h);
    const double c = contour.anchor;
    if (!(c > strip.left && c < strip.right))
        throw PoleSeparationError("eval_foxh: contour anchor is outside the pole strip");
    if (!(decay_exponent(h) > 0.0))
        throw ConvergenceError("Mellin-Barnes integrand does not decay along vertical lines (a* <= 0)");
    const double log_z = std::log(z);
    const double T = contour.half_length;

    double freq = std::abs(log_z);
    for (const auto& f : gamma_factors(h))
        freq += std::abs(f.c1) * std::log(2.0 + std::abs(f.c1) * T);
    QuadOptions q;
    q.abs_tol = pi * opt.abs_tol;
    q.rel_tol = opt.rel_tol;
    q.max_evals = contour.node_budget;
    q.initial_panels = static_cast<std::size_t>(std::clamp(T * freq / (8.0 * pi), 4.0, 4096.0));

    // Conjugate symmetry folds the contour onto t >= 0.
    auto integrand = [&](double t) {
        std::complex<double> v{c, t};
        return std::exp(log_kernel(h, v) - v * log_z).real();
    };
    const auto r = integrate_gk15(integrand, 0.0, T, q);
    if (!r.converged) {
        std::ostringstream msg;
        msg << "eval_foxh: quadrature error " << r.error / pi << " above tolerance after " << r.evals
            << " nodes";
        throw ConvergenceError(msg.str());
    }
    return {r.value / pi, r.error / pi};
}

Evaluation eval_foxh_residue_series(const FoxHParams& h, double z, int max_terms, double tol)
{
    h.validate();
    if (!(z > 0.0))
        throw DomainError("eval_foxh_residue_series: argument must be positive");
    if (max_terms < 1)
        throw ParamError("eval_foxh_residue_series: max_terms must be positive");

    struct Pole {
        double v;
        int index;
        int k;
    };
    std::vector<Pole> poles;
    for (int i = 0; i < h.m; ++i)
        for (int k = 0; k < max_terms; ++k)
            poles.push_back({-(h.lower[i].coef + k) / h.lower[i].scale, i, k});
    std::sort(poles.begin(), poles.end(), [](const Pole& a, const Pole& b) {
        return a.v != b.v ? a.v > b.v : a.index < b.index;
    });
    if (poles.size() > static_cast<std::size_t>(max_terms))
        poles.resize(max_terms);
    for (std::size_t i = 1; i < poles.size(); ++i)
        if (std::abs(poles[i].v - poles[i - 1].v) <= 1e-10 * (1.0 + std::abs(poles[i].v))) {
            std::ostringstream msg;
            msg << "left poles of factors " << poles[i - 1].index << " and " << poles[i].index
                << " coincide at v = " << poles[i].v;
            throw PoleCollisionError(msg.str());
        }

    const double log_z = std::log(z);
    const double eps = std::numeric_limits<double>::epsilon();
    double sum = 0.0;
    double last = 0.0;
    double prev = 0.0;
    double largest = 0.0;
    double smallest = inf;
    int small_run = 0;
    for (const auto& pole : poles) {
        const double v = pole.v;
        std::complex<double> acc =
            -std::lgamma(pole.k + 1.0) - std::log(h.lower[pole.index].scale) - v * log_z;
        if (pole.k % 2 == 1)
            acc += std::complex<double>(0.0, pi);
        bool zero = false;
        auto add = [&](double arg, int power) {
            if (arg <= 0.0 && arg == std::floor(arg)) {
                if (power < 0)
                    zero = true;
                else
                    throw PoleCollisionError("residue series: numerator gamma singular at a left pole");
                return;
            }
            acc += static_cast<double>(power) * log_gamma(std::complex<double>(arg, 0.0));
        };
        for (int i = 0; i < h.q(); ++i) {
            const auto& b = h.lower[i];
            if (i < h.m) {
                if (i != pole.index)
                    add(b.coef + b.scale * v, +1);
            } else {
                add(1.0 - b.coef - b.scale * v, -1);
            }
        }
        for (int i = 0; i < h.p(); ++i) {
            const auto& a = h.upper[i];
            if (i < h.n)
                add(1.0 - a.coef - a.scale * v, +1);
            else
                add(a.coef + a.scale * v, -1);
        }
        if (zero)
            continue;
        const double term = std::exp(acc).real();
        if (!std::isfinite(term))
            throw DivergenceError("residue series: term overflow");
        sum += term;
        prev = last;
        last = std::abs(term);
        largest = std::max(largest, last);
        smallest = std::min(smallest, last);
        if (last <= tol * std::abs(sum)) {
            if (++small_run >= 3)
                break;
        } else {
            small_run = 0;
        }
    }
    if (small_run < 3 && last > prev && last > 1e6 * smallest)
        throw DivergenceError("residue series: terms grow; argument outside the convergence region");
    const double roundoff = 4.0 * eps * largest * std::sqrt(static_cast<double>(poles.size()));
    return {sum, std::max(last, roundoff)};
}

}  // namespace sfhf
