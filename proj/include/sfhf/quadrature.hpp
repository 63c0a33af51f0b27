#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

namespace sfhf {

struct QuadOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    std::size_t max_evals = 200000;
    std::size_t initial_panels = 8;
};

template <class T>
struct QuadResult {
    T value{};
    double error = 0.0;
    double l1 = 0.0;  // integral of |f|, used for the roundoff floor
    std::size_t evals = 0;
    bool converged = false;
};

namespace detail {

inline constexpr std::array<double, 8> gk15_x = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> gk15_wk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for nodes 1, 3, 5 (pairs) and 7 (centre).
inline constexpr std::array<double, 4> g7_w = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(std::complex<double> x) { return std::abs(x); }

template <class T>
struct Panel {
    double a, b;
    T value;
    double error;
    double l1;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class T, class F>
Panel<T> gk15_panel(F& f, double a, double b)
{
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    std::array<T, 15> fv;
    fv[7] = f(c);
    T kron = fv[7] * gk15_wk[7];
    T gauss = fv[7] * g7_w[3];
    double l1 = magnitude(fv[7]) * gk15_wk[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * gk15_x[j];
        fv[j] = f(c - dx);
        fv[14 - j] = f(c + dx);
        kron += (fv[j] + fv[14 - j]) * gk15_wk[j];
        l1 += (magnitude(fv[j]) + magnitude(fv[14 - j])) * gk15_wk[j];
        if (j % 2 == 1)
            gauss += (fv[j] + fv[14 - j]) * g7_w[j / 2];
    }
    // QUADPACK error scaling: |K - G| overstates the error of smooth panels.
    const T mean = kron * 0.5;
    double asc = magnitude(fv[7] - mean) * gk15_wk[7];
    for (int j = 0; j < 7; ++j)
        asc += (magnitude(fv[j] - mean) + magnitude(fv[14 - j] - mean)) * gk15_wk[j];
    asc *= std::abs(h);
    double err = magnitude((kron - gauss) * h);
    if (asc > 0.0 && err > 0.0)
        err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
    return {a, b, kron * h, err, l1 * std::abs(h)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) quadrature of f over [a, b].
/// Stops when the summed error estimate falls below
/// max(abs_tol, rel_tol |I|, 64 eps L1) or the evaluation budget runs out.
template <class F>
auto integrate_gk15(F&& f, double a, double b, const QuadOptions& opt = {})
{
    using T = std::decay_t<decltype(f(a))>;
    QuadResult<T> out;
    if (a == b) {
        out.converged = true;
        return out;
    }
    std::priority_queue<detail::Panel<T>> heap;
    const std::size_t n0 = std::max<std::size_t>(1, opt.initial_panels);
    const double w = (b - a) / static_cast<double>(n0);
    T total{};
    double err = 0.0;
    double l1 = 0.0;
    for (std::size_t i = 0; i < n0; ++i) {
        const double lo = a + w * static_cast<double>(i);
        const double hi = (i + 1 == n0) ? b : lo + w;
        auto p = detail::gk15_panel<T>(f, lo, hi);
        total += p.value;
        err += p.error;
        l1 += p.l1;
        heap.push(p);
    }
    out.evals = 15 * n0;
    const double eps = std::numeric_limits<double>::epsilon();
    auto target = [&] {
        return std::max({opt.abs_tol, opt.rel_tol * detail::magnitude(total), 64.0 * eps * l1});
    };
    while (err > target() && out.evals + 30 <= opt.max_evals) {
        auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // Panel cannot be split further in double precision.
            heap.push({worst.a, worst.b, worst.value, 0.0, worst.l1});
            err -= worst.error;
            continue;
        }
        auto left = detail::gk15_panel<T>(f, worst.a, mid);
        auto right = detail::gk15_panel<T>(f, mid, worst.b);
        out.evals += 30;
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        l1 += left.l1 + right.l1 - worst.l1;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to shed the drift of incremental updates.
    total = T{};
    err = 0.0;
    l1 = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        err += heap.top().error;
        l1 += heap.top().l1;
        heap.pop();
    }
    out.value = total;
    out.l1 = l1;
    out.error = std::max(err, 64.0 * eps * l1);
    out.converged = err <= target();
    return out;
}

}  // namespace sfhf
