#include "sfhf/errors.hpp"
#include "sfhf/modulation.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace sfhf;

namespace {

double q(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

TEST_CASE("mpsk coefficients")
{
    const auto c = sep_coefficients(Scheme::mpsk, 4, 5);
    REQUIRE(c.theta.size() == 6);
    REQUIRE(c.delta.size() == 6);
    CHECK(c.theta[0] == doctest::Approx(3.0 / 40.0).epsilon(1e-15));
    CHECK(c.theta[5] == doctest::Approx(3.0 / 40.0).epsilon(1e-15));
    for (int n = 1; n < 5; ++n)
        CHECK(c.theta[n] == doctest::Approx(3.0 / 20.0).epsilon(1e-15));
    CHECK(std::isinf(c.delta[0]));
    for (int n = 1; n <= 5; ++n)
        CHECK(c.delta[n] > 0.0);
    CHECK(sum(c.theta) == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("gc-dqpsk and mdpsk coefficients")
{
    const auto g = sep_coefficients(Scheme::gcdqpsk, 4);
    CHECK(g.N == 5);
    CHECK(g.delta[0] == doctest::Approx(1.0 / (1.0 - 1.0 / std::sqrt(2.0))).epsilon(1e-14));
    CHECK(g.delta[0] == doctest::Approx(3.414214).epsilon(1e-7));
    CHECK(sum(g.theta) == doctest::Approx(0.5).epsilon(1e-14));

    const auto d = sep_coefficients(Scheme::mdpsk, 8);
    for (double x : d.delta)
        CHECK((x > 0.0 && std::isfinite(x)));
    CHECK(sum(d.theta) == doctest::Approx(7.0 / 8.0).epsilon(1e-14));
}

TEST_CASE("mqam coefficients")
{
    const auto c = sep_coefficients(Scheme::mqam, 16);
    CHECK(c.N == 6);
    REQUIRE(c.theta.size() == 7);
    CHECK(c.theta[3] == doctest::Approx(15.0 / 96.0).epsilon(1e-15));
    // The weights reproduce the SEP at zero SNR, 1 - 1/M.
    CHECK(sum(c.theta) == doctest::Approx(15.0 / 16.0).epsilon(1e-14));
    CHECK(sep_exact(Scheme::mqam, 16, 0.0) == doctest::Approx(15.0 / 16.0).epsilon(1e-14));
    CHECK_THROWS_AS(sep_coefficients(Scheme::mqam, 16, 5), ParamError);
    CHECK_THROWS_AS(sep_coefficients(Scheme::mqam, 2), ParamError);

    // 8-QAM through the formal sqrt(M) expressions.
    const auto c8 = sep_coefficients(Scheme::mqam, 8);
    CHECK(sum(c8.theta) == doctest::Approx(7.0 / 8.0).epsilon(1e-14));
    CHECK(sep_exact(Scheme::mqam, 8, 0.0) == doctest::Approx(7.0 / 8.0).epsilon(1e-14));
    CHECK(sep_exact(Scheme::mqam, 8, 10.0) > sep_exact(Scheme::mqam, 4, 10.0));
    CHECK(sep_exact(Scheme::mqam, 8, 10.0) < sep_exact(Scheme::mqam, 16, 10.0));
}

TEST_CASE("parameter validation")
{
    CHECK_THROWS_AS(sep_coefficients(Scheme::mpsk, 1), ParamError);
    CHECK_THROWS_AS(sep_coefficients(Scheme::mpsk, 4, 0), ParamError);
    CHECK_THROWS_AS(sep_coefficients(Scheme::gcdqpsk, 8), ParamError);
    CHECK_THROWS_AS(sep_exact(Scheme::mpsk, 4, -1.0), DomainError);
    CHECK_THROWS_AS(sep_approx(sep_coefficients(Scheme::mpsk, 4), -1.0), DomainError);
    for (Scheme s : {Scheme::mpsk, Scheme::mqam, Scheme::mdpsk, Scheme::gcdqpsk})
        CHECK(scheme_from_string(to_string(s)) == s);
    CHECK_THROWS_AS(scheme_from_string("fsk"), ParamError);
}

TEST_CASE("exact sep against classical forms")
{
    CHECK(sep_exact(Scheme::mpsk, 2, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(sep_exact(Scheme::gcdqpsk, 4, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
    for (double g : {0.1, 1.0, 10.0, 30.0}) {
        const double qq = q(std::sqrt(g));
        CHECK(std::abs(sep_exact(Scheme::mpsk, 4, g) - (2.0 * qq - qq * qq)) < 1e-12);
        CHECK(sep_exact(Scheme::mpsk, 2, g) == doctest::Approx(q(std::sqrt(2.0 * g))).epsilon(1e-10));
        CHECK(sep_exact(Scheme::mdpsk, 2, g) == doctest::Approx(0.5 * std::exp(-g)).epsilon(1e-10));
        const double q16 = q(std::sqrt(3.0 * g / 15.0));
        CHECK(sep_exact(Scheme::mqam, 16, g) ==
              doctest::Approx(3.0 * q16 - 2.25 * q16 * q16).epsilon(1e-10));
    }
    CHECK(sep_exact(Scheme::mpsk, 8, INFINITY) == 0.0);

    // Deep tail, to relative accuracy.
    for (double g : {100.0, 400.0, 1000.0}) {
        const double qq = q(std::sqrt(g));
        CHECK(sep_exact(Scheme::mpsk, 4, g) == doctest::Approx(2.0 * qq - qq * qq).epsilon(1e-10));
        CHECK(sep_exact(Scheme::mpsk, 2, g) == doctest::Approx(q(std::sqrt(2.0 * g))).epsilon(1e-10));
        CHECK(sep_exact(Scheme::mdpsk, 2, g) == doctest::Approx(0.5 * std::exp(-g)).epsilon(1e-10));
        const double q16 = q(std::sqrt(3.0 * g / 15.0));
        CHECK(sep_exact(Scheme::mqam, 16, g) == doctest::Approx(3.0 * q16 - 2.25 * q16 * q16).epsilon(1e-10));
    }
}

TEST_CASE("exponential-sum approximation")
{
    struct Case {
        Scheme s;
        int M;
    };
    for (auto [s, M] : {Case{Scheme::mpsk, 4}, Case{Scheme::mpsk, 8}, Case{Scheme::mpsk, 16},
                        Case{Scheme::mqam, 4}, Case{Scheme::mqam, 8}, Case{Scheme::mqam, 16}, Case{Scheme::mqam, 64},
                        Case{Scheme::mdpsk, 4}, Case{Scheme::mdpsk, 8}, Case{Scheme::gcdqpsk, 4}}) {
        const auto c = sep_coefficients(s, M);
        CHECK(sep_approx(c, 0.0) == doctest::Approx(sep_exact(s, M, 0.0)).epsilon(1e-3));
        double worst = 0.0;
        double abs_worst = 0.0;
        double prev = 2.0;
        for (double db = 0.0; db <= 30.0; db += 1.0) {
            const double g = std::pow(10.0, db / 10.0);
            const double a = sep_approx(c, g);
            const double e = sep_exact(s, M, g);
            CHECK(a < prev);
            prev = a;
            worst = std::max(worst, std::abs(a / e - 1.0));
            abs_worst = std::max(abs_worst, std::abs(a - e));
        }
        // The relative error grows without bound in the tail (the nodes miss
        // the integrand peak), but the absolute error stays small.
        MESSAGE(to_string(s) << " M=" << M << ": max relative error " << worst << ", max absolute error " << abs_worst);
        CHECK(abs_worst < 5e-2 * sep_exact(s, M, 0.0));
    }

    // Refining the trapezoid rule shrinks the error at a fixed SNR.
    for (Scheme s : {Scheme::mpsk, Scheme::mqam, Scheme::mdpsk, Scheme::gcdqpsk}) {
        const int M = s == Scheme::mqam ? 16 : 4;
        const double g = 10.0;
        const double e = sep_exact(s, M, g);
        double prev = INFINITY;
        for (int N : {4, 8, 16, 32, 64}) {
            const double err = std::abs(sep_approx(sep_coefficients(s, M, N), g) / e - 1.0);
            CHECK((err < prev || err < 1e-13));
            prev = err;
        }
        CHECK(prev < 1e-3);
    }

    // 8-PSK at 15 dB.
    const double g = std::pow(10.0, 1.5);
    const double e = sep_exact(Scheme::mpsk, 8, g);
    CHECK(std::abs(sep_approx(sep_coefficients(Scheme::mpsk, 8), g) / e - 1.0) < 2e-2);
}
