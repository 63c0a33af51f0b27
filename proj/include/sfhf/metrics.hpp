#pragma once

#include "sfhf/channel.hpp"
#include "sfhf/impairments.hpp"
#include "sfhf/modulation.hpp"

#include <string>

namespace sfhf {

enum class MethodKind { exact, asymptotic, ceiling, monte_carlo };

/// Numerical path that produced a value.
enum class Route {
    univariate_h,
    bivariate_h,
    quadrature,    // 1-D adaptive quadrature of the CDF-tail form
    continuation,  // closed-form analytic continuation of a divergent inner integral
    closed_form,
    saturated,     // threshold at or above the SINR ceiling
};

struct MethodTag {
    MethodKind kind = MethodKind::exact;
    Route route = Route::univariate_h;
    bool fallback = false;  // preferred route failed and this one was used instead
};

std::string to_string(MethodKind k);
std::string to_string(Route r);
/// e.g. "exact:bivariate-h" or "exact:quadrature(fallback)".
std::string to_string(const MethodTag& t);

struct MetricResult {
    double value;
    MethodTag method;
    double err_estimate;
};

enum class RoutePolicy {
    automatic,        // H-function route, quadrature when it fails
    h_function_only,  // never fall back
    quadrature_only,
};

struct MetricOptions {
    RoutePolicy policy = RoutePolicy::automatic;
    EvalOptions univariate{0.0, 1e-11, 400000};
    EvalOptions bivariate{1e-11, 1e-9, 4000000};
    double quad_rel_tol = 1e-9;
};

MetricResult outage_probability(const SFHFDistribution& d, const ScenarioParams& sp, double gamma_th,
                                const MetricOptions& opt = {});
MetricResult outage_asymptotic(const SFHFDistribution& d, const ScenarioParams& sp, double gamma_th);

/// Ergodic capacity under optimum rate adaptation, in bits/s/Hz.
MetricResult capacity_ora(const SFHFDistribution& d, const ScenarioParams& sp,
                          const MetricOptions& opt = {});
MetricResult capacity_ora_ideal(const SFHFDistribution& d, const MetricOptions& opt = {});
MetricResult capacity_asymptotic(const SFHFDistribution& d, const ScenarioParams& sp);
/// log2(1 + omega/rho). Throws InfiniteCeiling for ideal hardware.
double capacity_ceiling(const ScenarioParams& sp);

/// Average SEP under the exponential-sum approximation of the conditional SEP.
MetricResult asep(const SFHFDistribution& d, const ScenarioParams& sp, const ModulationCoeffs& c,
                  const MetricOptions& opt = {});
MetricResult asep_asymptotic(const SFHFDistribution& d, const ScenarioParams& sp,
                             const ModulationCoeffs& c);
/// sum_n theta_n exp(-delta_n omega/rho); zero for ideal hardware.
double asep_ceiling(const ScenarioParams& sp, const ModulationCoeffs& c);

/// Bivariate parameters of the exact impaired capacity for one term; the
/// capacity is sum_l psi_l/phi_l H(phi_l tau/rho, omega/rho) / ln 2.
BivariateFoxHParams capacity_bivariate_params(const FoxHParams& h);
/// Same for the impaired ASEP: I_n = 1 - sum_l psi_l/phi_l H(phi_l tau/rho, delta_n omega/rho).
BivariateFoxHParams asep_bivariate_params(const FoxHParams& h);
/// High-SNR correction terms with exponent beta, evaluated at (omega/rho, -1).
BivariateFoxHParams capacity_asymptotic_bivariate_params(double beta);
BivariateFoxHParams asep_asymptotic_bivariate_params(double beta);

}  // namespace sfhf
