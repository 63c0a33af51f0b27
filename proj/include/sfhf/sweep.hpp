#pragma once

#include "sfhf/channel.hpp"
#include "sfhf/impairments.hpp"
#include "sfhf/metrics.hpp"
#include "sfhf/modulation.hpp"
#include "sfhf/montecarlo.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sfhf {

/// Version of the config grammar and of the CSV layout, see docs/.
inline constexpr int config_format_version = 1;
inline constexpr int csv_schema_version = 1;

enum class ChannelType { alpha_mu, malaga };

struct ChannelSpec {
    ChannelType type = ChannelType::alpha_mu;
    AlphaMuParams alpha_mu{2.0, 1.0, 1.0};
    MalagaParams malaga{};

    /// Distribution at the given ideal-hardware SNR scale.
    SFHFDistribution distribution(double snr) const;
};

enum class MetricKind { op, cc, asep };

struct MetricSpec {
    MetricKind kind = MetricKind::op;
    Scheme scheme = Scheme::mpsk;
    int M = 0;
    int N = 0;
    std::string label;  // "op", "cc" or e.g. "asep:mpsk:8"
};

struct SweepConfig {
    ChannelSpec channel;
    std::vector<Scenario> scenarios;
    IqiConfig iqi;  // applied at both nodes
    RhiConfig rhi;
    std::vector<MetricSpec> metrics;
    double snr_start_db = 0.0;
    double snr_stop_db = 0.0;
    double snr_step_db = 1.0;
    std::optional<double> gamma_th;
    bool validate = false;
    SimConfig sim;
    std::string output;

    std::vector<double> snr_grid_db() const;
    ScenarioParams scenario(Scenario s) const;
};

/// Parses the flat "key = value" format. Errors name the line and the key.
SweepConfig parse_config(const std::string& text);
SweepConfig load_config(const std::string& path);

struct ResultRow {
    double snr_db;
    Scenario scenario;
    std::string metric;
    std::optional<double> exact;
    std::optional<double> asymptotic;
    std::optional<double> ceiling;
    std::optional<double> mc_value;
    std::optional<double> mc_stderr;
    std::string method;
    std::optional<double> err_estimate;
};

/// Rows in grid order: snr, then scenario, then metric. Numerical failures
/// are recorded in the method column and the sweep continues.
std::vector<ResultRow> run_sweep(const SweepConfig& cfg);

std::string csv_header();
std::string format_csv(const std::vector<ResultRow>& rows);
/// Column descriptions written next to every CSV.
std::string csv_legend();
/// Writes path and path + ".legend.txt". Throws std::runtime_error naming the path.
void emit_csv(const std::vector<ResultRow>& rows, const std::string& path);

}  // namespace sfhf
