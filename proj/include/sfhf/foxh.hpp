#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace sfhf {

/// One (a_i, A_i) or (b_i, B_i) coefficient pair.
struct GammaPair {
    double coef;
    double scale;
};

/// Parameters of the univariate H^{m,n}_{p,q}(z | (a_i, A_i); (b_i, B_i)).
///
/// Mellin-Barnes kernel:
///   prod_{i<=m} Gamma(b_i + B_i v) prod_{i<=n} Gamma(1 - a_i - A_i v)
///   / prod_{i>n} Gamma(a_i + A_i v) prod_{i>m} Gamma(1 - b_i - B_i v)
struct FoxHParams {
    int m = 0;
    int n = 0;
    std::vector<GammaPair> upper;  // p entries
    std::vector<GammaPair> lower;  // q entries

    int p() const { return static_cast<int>(upper.size()); }
    int q() const { return static_cast<int>(lower.size()); }

    /// Checks orders and positivity; throws ParamError, or PoleSeparationError
    /// when the left and right pole clusters overlap.
    void validate() const;
};

/// Gamma(c0 + c1 v)^{power}, power = +1 (numerator) or -1 (denominator).
struct GammaFactor {
    double c0;
    double c1;
    int power;
};

std::vector<GammaFactor> gamma_factors(const FoxHParams& h);

/// log of the Mellin-Barnes kernel at v.
std::complex<double> log_kernel(const FoxHParams& h, std::complex<double> v);

/// Open interval of admissible contour abscissae: (largest left pole,
/// smallest right pole). Either side may be infinite.
struct PoleStrip {
    double left;
    double right;
};

PoleStrip pole_strip(const FoxHParams& h);

/// Exponential decay rate a* of the kernel along vertical lines; the
/// integrand behaves like exp(-pi a* |t| / 2).
double decay_exponent(const FoxHParams& h);

struct ContourSpec {
    double anchor;
    double half_length;
    std::size_t node_budget;
};

struct EvalOptions {
    double abs_tol = 0.0;
    double rel_tol = 1e-11;
    std::size_t node_budget = 400000;
};

/// Value with an absolute error estimate.
struct Evaluation {
    double value;
    double error;
};

ContourSpec select_contour(const FoxHParams& h, double z, const EvalOptions& opt = {});

Evaluation eval_foxh(const FoxHParams& h, double z, const EvalOptions& opt = {});

/// Evaluates on a caller-supplied contour. The anchor must lie inside the
/// pole strip.
Evaluation eval_foxh_on(const FoxHParams& h, double z, const ContourSpec& contour,
                        const EvalOptions& opt = {});

/// Sum of residues at the poles of Gamma(b_i + B_i v), i <= m, taken in
/// order of decreasing real part. The error field carries the magnitude of
/// the last term added.
Evaluation eval_foxh_residue_series(const FoxHParams& h, double z, int max_terms,
                                    double tol = 1e-15);

/// Gamma(c0 + c1 s1 + c2 s2)^{power}.
struct JointGammaFactor {
    double c0;
    double c1;
    double c2;
    int power;
};

/// Bivariate H with one joint block and one block per variable:
///
///   (1/(2 pi j))^2 iint phi(s1, s2) theta1(s1) theta2(s2) x^{-s1} y^{-s2} ds1 ds2
///
/// The joint block follows the usual layout: the first n1 upper triples
/// (a; alpha, beta) give numerators Gamma(1 - a - alpha s1 - beta s2), the
/// remaining upper triples give denominators Gamma(a + alpha s1 + beta s2),
/// and every lower triple (b; alpha, beta) gives a denominator
/// Gamma(1 - b - alpha s1 - beta s2).
struct JointTriple {
    double coef;
    double alpha;
    double beta;
};

struct BivariateFoxHParams {
    int n1 = 0;
    std::vector<JointTriple> joint_upper;
    std::vector<JointTriple> joint_lower;
    FoxHParams first;   // block in s1
    FoxHParams second;  // block in s2

    void validate() const;
    std::vector<JointGammaFactor> joint_factors() const;
};

struct BivariateContour {
    double anchor1;
    double anchor2;
};

BivariateContour select_bivariate_contour(const BivariateFoxHParams& h, double x, double y);

/// Iterated double Mellin-Barnes integral. Negative arguments use the
/// principal branch (-|x|)^{-s} = |x|^{-s} exp(-j pi s); the real part is
/// returned.
Evaluation eval_foxh_bivariate(const BivariateFoxHParams& h, double x, double y,
                               const EvalOptions& opt = {1e-7, 1e-9, 4000000});

}  // namespace sfhf
