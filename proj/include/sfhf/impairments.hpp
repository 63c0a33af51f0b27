#pragma once

#include <complex>
#include <string>
#include <utility>

namespace sfhf {

/// I/Q imbalance of one node: amplitude ratio g and phase mismatch (radians).
struct IqiConfig {
    double gain = 1.0;
    double phase = 0.0;
};

/// Residual hardware impairment levels (error-vector magnitudes).
struct RhiConfig {
    double kappa_t = 0.0;
    double kappa_r = 0.0;
};

enum class Node { tx, rx };

enum class Scenario { ideal, tx, rx, txrx };

std::string to_string(Scenario s);
Scenario scenario_from_string(const std::string& s);

/// Unified SINR map gamma = omega / (rho + tau / gamma_id).
struct ScenarioParams {
    Scenario scenario = Scenario::ideal;
    double omega = 1.0;
    double rho = 0.0;
    double tau = 1.0;

    /// omega / rho; +inf for ideal hardware.
    double ceiling() const;
};

/// (G1, G2) with G1 = (1 + g e^{eps phi})/2, G2 = (1 - g e^{-eps phi})/2,
/// eps = +j at the transmitter and -j at the receiver.
std::pair<std::complex<double>, std::complex<double>> iqi_coefficients(const IqiConfig& c, Node node);

/// Image rejection ratio in dB. Throws InfiniteIrr for g = 1, phi = 0.
double irr_db(const IqiConfig& c);

/// Gain g < 1 giving the requested IRR at the given phase mismatch,
/// by bisection. Throws DomainError when no such root exists.
double gain_for_irr(double irr_db_target, double phase);

ScenarioParams scenario_params(Scenario scenario, const IqiConfig& iqi_t, const IqiConfig& iqi_r,
                               const RhiConfig& rhi);

double sinr_map(double gamma_id, const ScenarioParams& sp);

/// tau gamma / (omega - rho gamma). Throws DomainError for gamma >= omega/rho.
double sinr_inverse(double gamma, const ScenarioParams& sp);

/// Exact joint Tx/Rx SINR before the cross terms are dropped; depends on the
/// channel phase theta = arg(h).
double txrx_exact_sinr(double gamma_id, double theta, const IqiConfig& iqi_t,
                       const IqiConfig& iqi_r, const RhiConfig& rhi);

}  // namespace sfhf
