#include "sfhf/montecarlo.hpp"

#include "sfhf/errors.hpp"
#include "sfhf/philox.hpp"

#include "parallel.hpp"

#include <boost/random/gamma_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sfhf {

namespace {

// Stream ids above this belong to auxiliary draws (channel phases).
constexpr std::uint64_t aux_streams = std::uint64_t{1} << 40;

std::size_t chunk_count(std::size_t n, std::size_t chunking) { return (n + chunking - 1) / chunking; }

template <class Draw>
SampleSet generate(const SimConfig& cfg, Draw draw)
{
    cfg.validate();
    SampleSet s{std::vector<double>(cfg.samples), cfg.chunking};
    detail::parallel_for(chunk_count(cfg.samples, cfg.chunking), [&](std::size_t k) {
        Philox4x32 rng(cfg.seed, k);
        const std::size_t end = std::min(cfg.samples, (k + 1) * cfg.chunking);
        for (std::size_t i = k * cfg.chunking; i < end; ++i)
            s.values[i] = draw(rng);
    });
    return s;
}

struct Moments {
    double n = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x)
    {
        n += 1.0;
        const double d = x - mean;
        mean += d / n;
        m2 += d * (x - mean);
    }

    void merge(const Moments& o)
    {
        if (o.n == 0.0)
            return;
        const double tot = n + o.n;
        const double d = o.mean - mean;
        mean += d * o.n / tot;
        m2 += o.m2 + d * d * n * o.n / tot;
        n = tot;
    }
};

// Per-chunk moments of f over the samples, merged in chunk order.
template <class F>
Moments reduce(const SampleSet& s, F f)
{
    const std::size_t chunks = chunk_count(s.values.size(), s.chunking);
    std::vector<Moments> part(chunks);
    detail::parallel_for(chunks, [&](std::size_t k) {
        const std::size_t end = std::min(s.values.size(), (k + 1) * s.chunking);
        for (std::size_t i = k * s.chunking; i < end; ++i)
            part[k].add(f(s.values[i]));
    });
    Moments total;
    for (const auto& p : part)
        total.merge(p);
    return total;
}

EmpiricalEstimate sample_mean(const Moments& m)
{
    const double var = m.n > 1.0 ? m.m2 / (m.n - 1.0) : 0.0;
    return {m.mean, std::sqrt(var / m.n), static_cast<std::size_t>(m.n)};
}

}  // namespace

void SimConfig::validate() const
{
    if (samples < 1000)
        throw ParamError("simulation: at least 1000 samples are required");
    if (chunking == 0)
        throw ParamError("simulation: chunking must be positive");
}

ScenarioParams identity_map() { return {Scenario::ideal, 1.0, 0.0, 1.0}; }

SampleSet sample_alpha_mu(const SimConfig& cfg, const AlphaMuParams& p)
{
    make_alpha_mu(p);  // parameter checks
    const double expo = 2.0 / p.alpha;
    return generate(cfg, [&](Philox4x32& rng) {
        boost::random::gamma_distribution<double> g(p.mu, 1.0);
        return p.mean_snr * std::pow(g(rng) / p.mu, expo);
    });
}

SampleSet sample_malaga(const SimConfig& cfg, const MalagaParams& p)
{
    make_malaga(p);
    const double kappa = p.kappa();
    if (!(kappa > 0.0))
        throw ParamError("malaga sampler: scatter power kappa must be positive");
    const double op = p.omega_prime();
    const double sigma_jitter = 1.0 / (2.0 * p.xi);  // beam radius w = 1
    const double mean_i = (op + kappa) * p.xi * p.xi / (p.xi * p.xi + 1.0);
    return generate(cfg, [&](Philox4x32& rng) {
        boost::random::gamma_distribution<double> large(p.alpha, 1.0 / p.alpha);
        boost::random::gamma_distribution<double> shadow(p.beta, 1.0 / p.beta);
        boost::random::normal_distribution<double> scatter(0.0, std::sqrt(kappa / 2.0));
        boost::random::normal_distribution<double> jitter(0.0, sigma_jitter);
        boost::random::uniform_01<double> u;
        const double x = large(rng);
        const double los = std::sqrt(shadow(rng) * op);
        const double th = 2.0 * std::numbers::pi * u(rng);
        const double re = los * std::cos(th) + scatter(rng);
        const double im = los * std::sin(th) + scatter(rng);
        const double jx = jitter(rng);
        const double jy = jitter(rng);
        const double hp = std::exp(-2.0 * (jx * jx + jy * jy));
        const double irr = x * (re * re + im * im) * hp;
        return p.mu_r * std::pow(irr / mean_i, p.r);
    });
}

SampleSet exact_txrx_sinr(const SampleSet& gamma_id, std::uint64_t seed, const IqiConfig& iqi_t,
                          const IqiConfig& iqi_r, const RhiConfig& rhi)
{
    SampleSet out{std::vector<double>(gamma_id.values.size()), gamma_id.chunking};
    detail::parallel_for(chunk_count(out.values.size(), out.chunking), [&](std::size_t k) {
        Philox4x32 rng(seed, aux_streams + k);
        boost::random::uniform_01<double> u;
        const std::size_t end = std::min(out.values.size(), (k + 1) * out.chunking);
        for (std::size_t i = k * out.chunking; i < end; ++i)
            out.values[i] = txrx_exact_sinr(gamma_id.values[i], 2.0 * std::numbers::pi * u(rng), iqi_t, iqi_r, rhi);
    });
    return out;
}

EmpiricalEstimate empirical_op(const SampleSet& s, const ScenarioParams& sp, double gamma_th)
{
    if (!(gamma_th > 0.0))
        throw DomainError("outage threshold must be positive");
    const double n = static_cast<double>(s.values.size());
    if (gamma_th >= sp.ceiling())
        return {1.0, 0.0, s.values.size()};
    const Moments m = reduce(s, [&](double g) { return sinr_map(g, sp) < gamma_th ? 1.0 : 0.0; });
    return {m.mean, std::sqrt(m.mean * (1.0 - m.mean) / n), s.values.size()};
}

EmpiricalEstimate empirical_capacity(const SampleSet& s, const ScenarioParams& sp)
{
    return sample_mean(reduce(s, [&](double g) { return std::log2(1.0 + sinr_map(g, sp)); }));
}

EmpiricalEstimate empirical_asep(const SampleSet& s, const ScenarioParams& sp, Scheme scheme, int M)
{
    return sample_mean(reduce(s, [&](double g) { return sep_exact(scheme, M, sinr_map(g, sp)); }));
}

EmpiricalEstimate empirical_asep(const SampleSet& s, const ScenarioParams& sp, const ModulationCoeffs& c)
{
    return sample_mean(reduce(s, [&](double g) { return sep_approx(c, sinr_map(g, sp)); }));
}

}  // namespace sfhf
