#pragma once

#include <string>
#include <vector>

namespace sfhf {

enum class Scheme { mpsk, mqam, mdpsk, gcdqpsk };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

/// Default trapezoid order: 6 for M-QAM, 5 otherwise.
int default_order(Scheme s);

/// SEP(gamma) ~ sum_n theta_n exp(-delta_n gamma). delta_n may be +inf, in
/// which case the term only contributes at gamma = 0.
struct ModulationCoeffs {
    Scheme scheme;
    int M;
    int N;
    std::vector<double> theta;
    std::vector<double> delta;
};

ModulationCoeffs sep_coefficients(Scheme scheme, int M, int N);
ModulationCoeffs sep_coefficients(Scheme scheme, int M);

/// Conditional SEP from its single-integral form.
double sep_exact(Scheme scheme, int M, double gamma);

double sep_approx(const ModulationCoeffs& c, double gamma);

}  // namespace sfhf
