#pragma once

#include "sfhf/foxh.hpp"

#include <vector>

namespace sfhf {

/// One weighted term psi * H(phi * gamma) of a sum-of-Fox-H SNR density.
struct SFHFTerm {
    double psi;
    double phi;
    FoxHParams h;
};

struct SFHFDistribution {
    std::vector<SFHFTerm> terms;
    double mean_snr = 1.0;  // scale the phi_l are inversely proportional to
};

struct AlphaMuParams {
    double alpha;
    double mu;
    double mean_snr;
};

/// Malaga-M turbulence with pointing errors. r = 1 heterodyne, r = 2 IM/DD.
struct MalagaParams {
    double alpha;
    int beta;
    double omega;  // LOS power
    double b0;     // half the total scatter power
    double rho;    // scatter power fraction coupled to the LOS
    double xi;     // beam radius to jitter ratio
    int r;
    double mu_r;   // average (electrical) SNR

    double omega_prime() const { return omega + 2.0 * b0 * rho; }
    double kappa() const { return 2.0 * b0 * (1.0 - rho); }

    /// Recovers b0 from omega' = omega + 2 b0 rho.
    static MalagaParams from_omega_prime(double alpha, int beta, double omega, double omega_prime,
                                         double rho, double xi, int r, double mu_r);
};

/// Kernel parameters shifted by one: (a_i + A_i, A_i), (b_i + B_i, B_i).
FoxHParams shifted(const FoxHParams& h);

/// E = gamma-ratio kernel of the shifted parameters at v = 0, so that
/// int_0^inf H(x) dx = E. Throws PoleError on a nonpositive integer argument.
double normalization_constant(const FoxHParams& h);

/// sum_l E_l psi_l / phi_l; equals one for a proper density.
double normalization_sum(const SFHFDistribution& d);

SFHFDistribution make_alpha_mu(const AlphaMuParams& p);
SFHFDistribution make_malaga(const MalagaParams& p);

/// Kernel H^{m+1,n}_{p+1,q+1}(. | Psi,(1,1); (0,1),Upsilon) of the upper tail.
FoxHParams tail_kernel(const FoxHParams& h);

/// Kernel H^{m,n+1}_{p+1,q+1}(. | (1,1),Psi; Upsilon,(0,1)) of the lower tail;
/// per term E - tail.
FoxHParams lower_tail_kernel(const FoxHParams& h);

Evaluation pdf(const SFHFDistribution& d, double gamma, const EvalOptions& opt = {});

/// Ideal-hardware CDF. Each term is computed from whichever of the upper
/// or lower tail kernels avoids cancellation.
Evaluation cdf_ideal(const SFHFDistribution& d, double gamma, const EvalOptions& opt = {});

/// 1 - cdf_ideal, accurate when small.
Evaluation tail_ideal(const SFHFDistribution& d, double gamma, const EvalOptions& opt = {});

/// F_{l,i} (gamma phi_l)^{exponent} terms of the small-argument CDF expansion.
struct AsymptoticTerm {
    double coef;
    double exponent;
};

/// Per distribution term, one entry for each numerator Gamma(b_i + B_i v).
/// The CDF behaves like sum_l psi_l/phi_l sum_i coef (phi_l gamma)^exponent.
std::vector<std::vector<AsymptoticTerm>> asymptotic_cdf_coeffs(const SFHFDistribution& d);

/// Derivative of log M at v = 0, where M is the shifted kernel.
double log_kernel_derivative_at_zero(const FoxHParams& h);

/// E[gamma^k] for real k inside the moment strip.
double moment(const SFHFDistribution& d, double k);

}  // namespace sfhf
