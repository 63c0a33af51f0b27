#include "sfhf/sweep.hpp"

#include "sfhf/errors.hpp"

#include "parallel.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace sfhf {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (auto t = trim(item); !t.empty())
            out.push_back(t);
    return out;
}

struct Entry {
    std::string value;
    int line;
    bool used = false;
};

class Document {
public:
    explicit Document(const std::string& text)
    {
        std::istringstream in(text);
        std::string raw;
        int line = 0;
        while (std::getline(in, raw)) {
            ++line;
            const std::string body = trim(raw.substr(0, raw.find('#')));
            if (body.empty())
                continue;
            const auto eq = body.find('=');
            if (eq == std::string::npos)
                throw ParamError("config line " + std::to_string(line) + ": expected 'key = value'");
            const std::string key = trim(body.substr(0, eq));
            const std::string value = trim(body.substr(eq + 1));
            if (key.empty())
                throw ParamError("config line " + std::to_string(line) + ": empty key");
            if (entries_.count(key))
                throw ParamError("config line " + std::to_string(line) + ": duplicate key '" + key + "'");
            entries_[key] = {value, line};
        }
    }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    std::optional<std::string> text(const std::string& key)
    {
        auto it = entries_.find(key);
        if (it == entries_.end())
            return std::nullopt;
        it->second.used = true;
        return it->second.value;
    }

    std::string require_text(const std::string& key)
    {
        auto v = text(key);
        if (!v)
            throw ParamError("config: missing required key '" + key + "'");
        return *v;
    }

    std::optional<double> number(const std::string& key)
    {
        auto v = text(key);
        if (!v)
            return std::nullopt;
        double x = 0.0;
        const char* end = v->data() + v->size();
        auto [ptr, ec] = std::from_chars(v->data(), end, x);
        if (ec != std::errc{} || ptr != end)
            fail(key, "expected a number, got '" + *v + "'");
        return x;
    }

    double number_or(const std::string& key, double fallback) { return number(key).value_or(fallback); }

    double require_number(const std::string& key)
    {
        auto v = number(key);
        if (!v)
            throw ParamError("config: missing required key '" + key + "'");
        return *v;
    }

    std::optional<long long> integer(const std::string& key)
    {
        auto v = text(key);
        if (!v)
            return std::nullopt;
        long long x = 0;
        const char* end = v->data() + v->size();
        auto [ptr, ec] = std::from_chars(v->data(), end, x);
        if (ec != std::errc{} || ptr != end)
            fail(key, "expected an integer, got '" + *v + "'");
        return x;
    }

    [[noreturn]] void fail(const std::string& key, const std::string& what) const
    {
        auto it = entries_.find(key);
        const std::string where = it == entries_.end() ? "config" : "config line " + std::to_string(it->second.line);
        throw ParamError(where + ": key '" + key + "': " + what);
    }

    void reject_unused() const
    {
        for (const auto& [key, e] : entries_)
            if (!e.used)
                throw ParamError("config line " + std::to_string(e.line) + ": unknown key '" + key + "'");
    }

private:
    std::map<std::string, Entry> entries_;
};

MetricSpec parse_metric(const std::string& item)
{
    std::vector<std::string> parts;
    std::stringstream ss(item);
    std::string p;
    while (std::getline(ss, p, ':'))
        parts.push_back(trim(p));
    MetricSpec m;
    m.label = item;
    if (parts[0] == "op" && parts.size() == 1) {
        m.kind = MetricKind::op;
        return m;
    }
    if (parts[0] == "cc" && parts.size() == 1) {
        m.kind = MetricKind::cc;
        return m;
    }
    if (parts[0] == "asep" && (parts.size() == 3 || parts.size() == 4)) {
        m.kind = MetricKind::asep;
        m.scheme = scheme_from_string(parts[1]);
        auto order = [&](const std::string& t) {
            int x = 0;
            auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
            if (ec != std::errc{} || ptr != t.data() + t.size())
                throw ParamError("metric '" + item + "': expected an integer, got '" + t + "'");
            return x;
        };
        m.M = order(parts[2]);
        m.N = parts.size() == 4 ? order(parts[3]) : default_order(m.scheme);
        sep_coefficients(m.scheme, m.M, m.N);  // validates
        return m;
    }
    throw ParamError("unrecognized metric '" + item + "'");
}

std::string failure(const char* what, const std::exception& e) { return std::string(what) + "=failed(" + e.what() + ")"; }

std::string format_number(const std::optional<double>& v)
{
    if (!v)
        return {};
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17e", *v);
    return buf;
}

std::string quote(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

SFHFDistribution ChannelSpec::distribution(double snr) const
{
    if (type == ChannelType::alpha_mu) {
        AlphaMuParams p = alpha_mu;
        p.mean_snr = snr;
        return make_alpha_mu(p);
    }
    MalagaParams p = malaga;
    p.mu_r = snr;
    return make_malaga(p);
}

std::vector<double> SweepConfig::snr_grid_db() const
{
    std::vector<double> out;
    const int n = static_cast<int>(std::floor((snr_stop_db - snr_start_db) / snr_step_db + 1e-9)) + 1;
    for (int i = 0; i < n; ++i)
        out.push_back(snr_start_db + i * snr_step_db);
    return out;
}

ScenarioParams SweepConfig::scenario(Scenario s) const { return scenario_params(s, iqi, iqi, rhi); }

SweepConfig parse_config(const std::string& text)
{
    Document doc(text);
    SweepConfig cfg;

    const std::string type = doc.require_text("channel.type");
    if (type == "alpha-mu") {
        cfg.channel.type = ChannelType::alpha_mu;
        cfg.channel.alpha_mu = {doc.require_number("channel.alpha"), doc.require_number("channel.mu"), 1.0};
        make_alpha_mu(cfg.channel.alpha_mu);
    } else if (type == "malaga") {
        cfg.channel.type = ChannelType::malaga;
        const double alpha = doc.require_number("channel.alpha");
        const auto beta = doc.integer("channel.beta");
        if (!beta)
            throw ParamError("config: missing required key 'channel.beta'");
        const double omega = doc.require_number("channel.omega");
        const double rho = doc.require_number("channel.rho");
        const double xi = doc.require_number("channel.xi");
        const int r = static_cast<int>(doc.integer("channel.r").value_or(1));
        const auto op = doc.number("channel.omega_prime");
        const auto b0 = doc.number("channel.b0");
        if (op.has_value() == b0.has_value())
            throw ParamError("config: exactly one of 'channel.omega_prime' and 'channel.b0' is required");
        cfg.channel.malaga = op ? MalagaParams::from_omega_prime(alpha, static_cast<int>(*beta), omega, *op, rho, xi, r, 1.0)
                                : MalagaParams{alpha, static_cast<int>(*beta), omega, *b0, rho, xi, r, 1.0};
        make_malaga(cfg.channel.malaga);
    } else {
        doc.fail("channel.type", "expected 'alpha-mu' or 'malaga', got '" + type + "'");
    }

    for (const auto& s : split_list(doc.text("impairment.scenarios").value_or("ideal, tx, rx, txrx")))
        cfg.scenarios.push_back(scenario_from_string(s));
    if (cfg.scenarios.empty())
        doc.fail("impairment.scenarios", "no scenarios listed");
    const double phase = doc.number_or("impairment.phase_deg", 3.0) * std::numbers::pi / 180.0;
    const auto irr = doc.number("impairment.irr_db");
    const auto gain = doc.number("impairment.gain");
    if (irr && gain)
        throw ParamError("config: 'impairment.irr_db' and 'impairment.gain' are mutually exclusive");
    cfg.iqi.phase = phase;
    cfg.iqi.gain = gain ? *gain : gain_for_irr(irr.value_or(20.0), phase);
    cfg.rhi = {doc.number_or("impairment.kappa_t", 0.2), doc.number_or("impairment.kappa_r", 0.2)};
    for (Scenario s : cfg.scenarios)
        cfg.scenario(s);  // validates impairment levels

    for (const auto& m : split_list(doc.require_text("metrics")))
        cfg.metrics.push_back(parse_metric(m));
    if (cfg.metrics.empty())
        doc.fail("metrics", "no metrics listed");

    cfg.snr_start_db = doc.require_number("snr.start_db");
    cfg.snr_stop_db = doc.require_number("snr.stop_db");
    cfg.snr_step_db = doc.number_or("snr.step_db", 1.0);
    if (!(cfg.snr_step_db > 0.0))
        doc.fail("snr.step_db", "must be positive");
    if (!(cfg.snr_stop_db >= cfg.snr_start_db))
        doc.fail("snr.stop_db", "must not be below snr.start_db");

    cfg.gamma_th = doc.number("op.gamma_th");
    for (const auto& m : cfg.metrics)
        if (m.kind == MetricKind::op && !cfg.gamma_th)
            throw ParamError("config: metric 'op' requires 'op.gamma_th'");
    if (cfg.gamma_th && !(*cfg.gamma_th > 0.0))
        doc.fail("op.gamma_th", "must be positive");

    if (auto v = doc.text("validate.enabled")) {
        if (*v != "true" && *v != "false")
            doc.fail("validate.enabled", "expected 'true' or 'false'");
        cfg.validate = *v == "true";
    }
    if (auto v = doc.integer("validate.samples"); v) {
        if (*v <= 0)
            doc.fail("validate.samples", "must be positive");
        cfg.sim.samples = static_cast<std::size_t>(*v);
    }
    if (auto v = doc.integer("validate.chunking"); v) {
        if (*v <= 0)
            doc.fail("validate.chunking", "must be positive");
        cfg.sim.chunking = static_cast<std::size_t>(*v);
    }
    if (auto v = doc.integer("validate.seed"); v)
        cfg.sim.seed = static_cast<std::uint64_t>(*v);
    cfg.sim.validate();
    cfg.output = doc.text("output").value_or("");

    doc.reject_unused();
    return cfg;
}

SweepConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::vector<ResultRow> run_sweep(const SweepConfig& cfg)
{
    const std::vector<double> grid = cfg.snr_grid_db();
    const std::size_t ns = cfg.scenarios.size();
    const std::size_t nm = cfg.metrics.size();
    std::vector<ResultRow> rows(grid.size() * ns * nm);

    auto mean_snr = [&](double db, const MetricSpec& m) {
        const double lin = std::pow(10.0, db / 10.0);
        return m.kind == MetricKind::op ? *cfg.gamma_th * lin : lin;
    };

    detail::parallel_for(rows.size(), [&](std::size_t k) {
        const double db = grid[k / (ns * nm)];
        const Scenario sc = cfg.scenarios[(k / nm) % ns];
        const MetricSpec& m = cfg.metrics[k % nm];
        ResultRow& row = rows[k];
        row.snr_db = db;
        row.scenario = sc;
        row.metric = m.label;
        const ScenarioParams sp = cfg.scenario(sc);
        std::vector<std::string> tags;
        try {
            const SFHFDistribution d = cfg.channel.distribution(mean_snr(db, m));
            auto attempt = [&](const char* name, auto fn) {
                try {
                    fn();
                } catch (const std::exception& e) {
                    tags.push_back(failure(name, e));
                }
            };
            switch (m.kind) {
            case MetricKind::op:
                attempt("exact", [&] {
                    const MetricResult r = outage_probability(d, sp, *cfg.gamma_th);
                    row.exact = r.value;
                    row.err_estimate = r.err_estimate;
                    tags.push_back("exact=" + to_string(r.method));
                });
                attempt("asymptotic", [&] {
                    const MetricResult r = outage_asymptotic(d, sp, *cfg.gamma_th);
                    row.asymptotic = r.value;
                    tags.push_back("asymptotic=" + to_string(r.method));
                });
                break;
            case MetricKind::cc:
                attempt("exact", [&] {
                    const MetricResult r = capacity_ora(d, sp);
                    row.exact = r.value;
                    row.err_estimate = r.err_estimate;
                    tags.push_back("exact=" + to_string(r.method));
                });
                attempt("asymptotic", [&] {
                    const MetricResult r = capacity_asymptotic(d, sp);
                    row.asymptotic = r.value;
                    tags.push_back("asymptotic=" + to_string(r.method));
                });
                if (sc != Scenario::ideal)
                    row.ceiling = capacity_ceiling(sp);
                break;
            case MetricKind::asep: {
                const ModulationCoeffs c = sep_coefficients(m.scheme, m.M, m.N);
                attempt("exact", [&] {
                    const MetricResult r = asep(d, sp, c);
                    row.exact = r.value;
                    row.err_estimate = r.err_estimate;
                    tags.push_back("exact=" + to_string(r.method));
                });
                attempt("asymptotic", [&] {
                    const MetricResult r = asep_asymptotic(d, sp, c);
                    row.asymptotic = r.value;
                    tags.push_back("asymptotic=" + to_string(r.method));
                });
                row.ceiling = asep_ceiling(sp, c);
                break;
            }
            }
        } catch (const std::exception& e) {
            tags.push_back(failure("point", e));
        }
        for (std::size_t i = 0; i < tags.size(); ++i)
            row.method += (i ? ";" : "") + tags[i];
    });

    if (!cfg.validate)
        return rows;

    // One set of unit-scale draws, rescaled per grid point.
    const SampleSet base = cfg.channel.type == ChannelType::alpha_mu ? sample_alpha_mu(cfg.sim, cfg.channel.alpha_mu)
                                                                     : sample_malaga(cfg.sim, cfg.channel.malaga);
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        for (std::size_t mi = 0; mi < nm; ++mi) {
            const MetricSpec& m = cfg.metrics[mi];
            SampleSet s = base;
            const double scale = mean_snr(grid[gi], m);
            for (double& v : s.values)
                v *= scale;
            for (std::size_t si = 0; si < ns; ++si) {
                ResultRow& row = rows[(gi * ns + si) * nm + mi];
                const ScenarioParams sp = cfg.scenario(cfg.scenarios[si]);
                try {
                    EmpiricalEstimate e{};
                    switch (m.kind) {
                    case MetricKind::op: e = empirical_op(s, sp, *cfg.gamma_th); break;
                    case MetricKind::cc: e = empirical_capacity(s, sp); break;
                    case MetricKind::asep: e = empirical_asep(s, sp, m.scheme, m.M); break;
                    }
                    row.mc_value = e.value;
                    row.mc_stderr = e.std_error;
                    row.method += ";mc=monte-carlo";
                } catch (const std::exception& ex) {
                    row.method += ";" + failure("mc", ex);
                }
            }
        }
    }
    return rows;
}

std::string csv_header()
{
    return "snr_db,scenario,metric,exact,asymptotic,ceiling,mc_value,mc_stderr,method,err_estimate";
}

std::string format_csv(const std::vector<ResultRow>& rows)
{
    std::string out = csv_header() + "\r\n";
    for (const auto& r : rows) {
        out += format_number(r.snr_db) + "," + to_string(r.scenario) + "," + quote(r.metric) + "," +
               format_number(r.exact) + "," + format_number(r.asymptotic) + "," + format_number(r.ceiling) + "," +
               format_number(r.mc_value) + "," + format_number(r.mc_stderr) + "," + quote(r.method) + "," +
               format_number(r.err_estimate) + "\r\n";
    }
    return out;
}

std::string csv_legend()
{
    return "csv schema version " + std::to_string(csv_schema_version) +
           "\n"
           "snr_db       grid value in dB; normalized SNR mean/gamma_th for op, mean SNR otherwise\n"
           "scenario     ideal | tx | rx | txrx\n"
           "metric       op | cc | asep:<scheme>:<M>[:<N>]\n"
           "exact        exact analytic value (cc in bits/s/Hz)\n"
           "asymptotic   high-SNR approximation\n"
           "ceiling      high-SNR limit; empty when infinite or not defined\n"
           "mc_value     Monte-Carlo estimate; empty unless validation is enabled\n"
           "mc_stderr    standard error of mc_value\n"
           "method       ';'-separated field=kind:route tags; failures as field=failed(reason)\n"
           "err_estimate numerical error estimate of exact\n"
           "Empty cells are missing values. Numbers are printed with %.17e.\n";
}

void emit_csv(const std::vector<ResultRow>& rows, const std::string& path)
{
    auto write = [](const std::string& p, const std::string& body) {
        std::ofstream out(p, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot open '" + p + "' for writing");
        out << body;
        if (!out)
            throw std::runtime_error("write to '" + p + "' failed");
    };
    write(path, format_csv(rows));
    write(path + ".legend.txt", csv_legend());
}

}  // namespace sfhf
