#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace sfhf::detail {

template <class F>
inline double golden_min(F&& f, double a, double b, int iters = 80)
{
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - r * (b - a);
    double x2 = a + r * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int i = 0; i < iters && (b - a) > 1e-10 * (1.0 + std::abs(a) + std::abs(b)); ++i) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        }
    }
    return f1 < f2 ? x1 : x2;
}

/// Minimizes f over the open interval (lo, hi), either end possibly
/// infinite. Scans uniformly and geometrically towards finite ends, then
/// refines the best bracket by golden section.
template <class F>
inline double minimize_on_strip(F&& f, double lo, double hi)
{
    auto decreasing_at = [&](double x, double dir) {
        const double step = 1e-3 * (1.0 + std::abs(x));
        return f(x + dir * step) < f(x);
    };
    double a = lo;
    double b = hi;
    if (!std::isfinite(a) && !std::isfinite(b)) {
        a = -8.0;
        b = 8.0;
    } else if (!std::isfinite(b)) {
        b = a + 8.0;
    } else if (!std::isfinite(a)) {
        a = b - 8.0;
    }
    if (!std::isfinite(hi))
        while (decreasing_at(b, +1.0) && b - a < 1e7)
            b = a + 2.0 * (b - a);
    if (!std::isfinite(lo))
        while (decreasing_at(a, -1.0) && b - a < 1e7)
            a = b - 2.0 * (b - a);

    const double w = b - a;
    std::vector<double> xs;
    for (int k = 1; k < 48; ++k)
        xs.push_back(a + w * k / 48.0);
    for (int k = 4; k <= 24; ++k) {
        const double d = w * std::pow(10.0, -0.5 * k);
        if (std::isfinite(lo))
            xs.push_back(a + d);
        if (std::isfinite(hi))
            xs.push_back(b - d);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::size_t best = 0;
    double fbest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double v = f(xs[i]);
        if (v < fbest) {
            fbest = v;
            best = i;
        }
    }
    const double left = best == 0 ? (std::isfinite(lo) ? a + 0.5 * (xs[0] - a) : a) : xs[best - 1];
    const double right =
        best + 1 == xs.size() ? (std::isfinite(hi) ? b - 0.5 * (b - xs.back()) : b) : xs[best + 1];
    const double x = golden_min(f, left, right);
    return f(x) <= fbest ? x : xs[best];
}

}  // namespace sfhf::detail
