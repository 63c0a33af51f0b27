#pragma once

#include "sfhf/channel.hpp"
#include "sfhf/impairments.hpp"
#include "sfhf/modulation.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace sfhf {

struct SimConfig {
    std::uint64_t seed = 1;
    std::size_t samples = 1000000;
    std::size_t chunking = 65536;  // samples per independent RNG stream

    void validate() const;
};

struct EmpiricalEstimate {
    double value;
    double std_error;
    std::size_t samples;
};

/// Ideal-hardware SNR draws. Chunk k is produced by stream k of the seed,
/// so the values do not depend on how many threads generated them.
struct SampleSet {
    std::vector<double> values;
    std::size_t chunking;
};

SampleSet sample_alpha_mu(const SimConfig& cfg, const AlphaMuParams& p);
SampleSet sample_malaga(const SimConfig& cfg, const MalagaParams& p);

/// Exact joint Tx/Rx SINR of each draw with a uniform channel phase taken
/// from a stream family disjoint from the fading draws.
SampleSet exact_txrx_sinr(const SampleSet& gamma_id, std::uint64_t seed, const IqiConfig& iqi_t,
                          const IqiConfig& iqi_r, const RhiConfig& rhi);

/// Fraction of draws with sinr_map(gamma) < gamma_th; binomial standard error.
EmpiricalEstimate empirical_op(const SampleSet& s, const ScenarioParams& sp, double gamma_th);
/// Mean of log2(1 + sinr_map(gamma)).
EmpiricalEstimate empirical_capacity(const SampleSet& s, const ScenarioParams& sp);
/// Mean of the exact conditional SEP at sinr_map(gamma).
EmpiricalEstimate empirical_asep(const SampleSet& s, const ScenarioParams& sp, Scheme scheme, int M);
/// Mean of the exponential-sum SEP at sinr_map(gamma).
EmpiricalEstimate empirical_asep(const SampleSet& s, const ScenarioParams& sp, const ModulationCoeffs& c);

/// Identity SINR map, for samples that are already SINR values.
ScenarioParams identity_map();

}  // namespace sfhf
