#include "sfhf/impairments.hpp"

#include "sfhf/errors.hpp"

#include <cmath>
#include <limits>

namespace sfhf {

namespace {

using cd = std::complex<double>;

void check(const IqiConfig& c)
{
    if (!(c.gain > 0.0) || !std::isfinite(c.gain) || !std::isfinite(c.phase))
        throw ParamError("IQI gain must be positive and phase finite");
}

void check(const RhiConfig& r)
{
    if (!(r.kappa_t >= 0.0) || !(r.kappa_r >= 0.0))
        throw ParamError("RHI levels kappa_t and kappa_r must be non-negative");
}

struct Zeta {
    cd z11, z12, z21, z22;
    double lambda;
};

Zeta zeta(const IqiConfig& iqi_t, const IqiConfig& iqi_r)
{
    const auto [gt1, gt2] = iqi_coefficients(iqi_t, Node::tx);
    const auto [gr1, gr2] = iqi_coefficients(iqi_r, Node::rx);
    return {gr1 * gt1, gr1 * gt2, gr2 * std::conj(gt1), gr2 * std::conj(gt2),
            std::norm(gr1) + std::norm(gr2)};
}

}  // namespace

std::string to_string(Scenario s)
{
    switch (s) {
    case Scenario::ideal: return "ideal";
    case Scenario::tx: return "tx";
    case Scenario::rx: return "rx";
    case Scenario::txrx: return "txrx";
    }
    return "?";
}

Scenario scenario_from_string(const std::string& s)
{
    if (s == "ideal") return Scenario::ideal;
    if (s == "tx") return Scenario::tx;
    if (s == "rx") return Scenario::rx;
    if (s == "txrx") return Scenario::txrx;
    throw ParamError("unknown scenario '" + s + "' (expected ideal, tx, rx or txrx)");
}

double ScenarioParams::ceiling() const
{
    return rho > 0.0 ? omega / rho : std::numeric_limits<double>::infinity();
}

std::pair<cd, cd> iqi_coefficients(const IqiConfig& c, Node node)
{
    check(c);
    const cd eps = node == Node::tx ? cd(0.0, 1.0) : cd(0.0, -1.0);
    const cd g1 = 0.5 * (1.0 + c.gain * std::exp(eps * c.phase));
    const cd g2 = 0.5 * (1.0 - c.gain * std::exp(-eps * c.phase));
    return {g1, g2};
}

double irr_db(const IqiConfig& c)
{
    check(c);
    const double g = c.gain;
    const double cs = std::cos(c.phase);
    const double den = g * g - 2.0 * g * cs + 1.0;
    if (den <= 0.0)
        throw InfiniteIrr();
    return 10.0 * std::log10((g * g + 2.0 * g * cs + 1.0) / den);
}

double gain_for_irr(double irr_db_target, double phase)
{
    // IRR(g) increases monotonically on (0, 1) from 0 dB to cot^2(phi/2).
    const double top = std::cos(phase) < 1.0 ? irr_db({1.0, phase}) : std::numeric_limits<double>::infinity();
    if (!(irr_db_target > 0.0) || !(irr_db_target < top))
        throw DomainError("no gain g < 1 reaches the requested IRR at this phase mismatch");
    double lo = 0.0;
    double hi = 1.0;
    for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (irr_db({mid, phase}) < irr_db_target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

ScenarioParams scenario_params(Scenario scenario, const IqiConfig& iqi_t, const IqiConfig& iqi_r,
                               const RhiConfig& rhi)
{
    check(iqi_t);
    check(iqi_r);
    check(rhi);
    const double kt2 = rhi.kappa_t * rhi.kappa_t;
    const double kr2 = rhi.kappa_r * rhi.kappa_r;
    switch (scenario) {
    case Scenario::ideal:
        return {scenario, 1.0, 0.0, 1.0};
    case Scenario::tx: {
        const auto [g1, g2] = iqi_coefficients(iqi_t, Node::tx);
        return {scenario, std::norm(g1), std::norm(g2) + kt2, 1.0};
    }
    case Scenario::rx: {
        const auto [g1, g2] = iqi_coefficients(iqi_r, Node::rx);
        const double lambda = std::norm(g1) + std::norm(g2);
        return {scenario, std::norm(g1), std::norm(g2) + kr2, lambda};
    }
    case Scenario::txrx: {
        const Zeta z = zeta(iqi_t, iqi_r);
        return {scenario, std::norm(z.z11) + std::norm(z.z22),
                std::norm(z.z12) + std::norm(z.z21) + kr2 + z.lambda * kt2, z.lambda};
    }
    }
    throw ParamError("unknown scenario");
}

double sinr_map(double gamma_id, const ScenarioParams& sp)
{
    if (!(gamma_id >= 0.0))
        throw DomainError("sinr_map: gamma_id must be non-negative");
    if (std::isinf(gamma_id))
        return sp.ceiling();
    return sp.omega * gamma_id / (sp.rho * gamma_id + sp.tau);
}

double sinr_inverse(double gamma, const ScenarioParams& sp)
{
    if (!(gamma >= 0.0))
        throw DomainError("sinr_inverse: gamma must be non-negative");
    const double den = sp.omega - sp.rho * gamma;
    if (!(den > 0.0))
        throw DomainError("sinr_inverse: gamma is at or above the SINR ceiling omega/rho");
    return sp.tau * gamma / den;
}

double txrx_exact_sinr(double gamma_id, double theta, const IqiConfig& iqi_t,
                       const IqiConfig& iqi_r, const RhiConfig& rhi)
{
    const Zeta z = zeta(iqi_t, iqi_r);
    // h* = h e^{-2j theta}; normalise powers by |h|^2 P_s.
    const cd rot = std::exp(cd(0.0, -2.0 * theta));
    const double signal = std::norm(z.z11 + z.z22 * rot);
    const double image = std::norm(z.z12 + z.z21 * rot);
    const double distortion = z.lambda * rhi.kappa_t * rhi.kappa_t + rhi.kappa_r * rhi.kappa_r;
    return signal / (image + distortion + z.lambda / gamma_id);
}

}  // namespace sfhf
