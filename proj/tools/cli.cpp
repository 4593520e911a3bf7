#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <json.hpp>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "opdyn/checks.hpp"
#include "opdyn/embedded_chain.hpp"
#include "opdyn/io.hpp"
#include "opdyn/path_sim.hpp"
#include "opdyn/stationary.hpp"
#include "opdyn/stats.hpp"
#include "opdyn/svg.hpp"

namespace opdyn::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kVersion = "0.1.0";

// Keys shared by every command that builds a model.
const std::vector<std::string> kModelKeys = {"mu", "sigma", "theta", "lambda", "alpha", "cap", "family", "topology",
                                             "s1", "s3",    "s4",    "q",      "d",     "mus", "sigmas"};
const std::vector<std::string> kCommonKeys = {"seed", "threads", "out"};

const std::map<std::string, std::string> kHelp = {
    {"mu", "drift"},
    {"sigma", "diffusion coefficient"},
    {"theta", "interaction weight, > 1"},
    {"lambda", "rate scale"},
    {"alpha", "rate exponent"},
    {"cap", "rate ceiling K (number or inf)"},
    {"family", "rate family c1, c2 or c3"},
    {"topology", "two-agent, three-agent, four-agent or vector"},
    {"s1", "stubborn opinion s1"},
    {"s3", "stubborn opinion s3"},
    {"s4", "stubborn opinion s4"},
    {"q", "probability of meeting s1 (three-agent) or of agent 2 updating (four-agent)"},
    {"d", "dimension of the vector model"},
    {"mus", "per-agent drifts, comma separated"},
    {"sigmas", "per-agent diffusion coefficients, comma separated"},
    {"seed", "random seed"},
    {"threads", "worker threads (0 = all)"},
    {"out", "output directory"},
    {"x0", "initial opinion difference"},
    {"horizon", "time horizon"},
    {"step", "time step"},
    {"replicates", "number of paths"},
    {"record", "full, jumps or terminal"},
    {"record_stride", "keep every k-th grid point in full mode"},
    {"n", "number of draws"},
    {"tol", "truncation tolerance of the geometric sum"},
    {"burn_in", "four-agent burn-in steps"},
    {"grid_min", "left end of the grid"},
    {"grid_max", "right end of the grid"},
    {"grid_n", "number of grid points"},
    {"form", "auto, exponential or besselk"},
    {"sample", "CSV file, first column used"},
    {"ks_threshold", "pass when KS is below this"},
    {"bins", "histogram bins of the overlay plot"},
    {"caps", "increasing rate ceilings, comma separated"},
    {"window", "time window"},
    {"trials", "paths per ceiling"},
    {"burst_threshold", "jump count that marks a burst"},
};

std::string flag_name(const std::string& key)
{
    std::string f = "--" + key;
    std::replace(f.begin(), f.end(), '_', '-');
    return f;
}

std::string key_name(std::string k)
{
    std::replace(k.begin(), k.end(), '-', '_');
    return k;
}

/// Merged settings for one command. Every read is echoed into `resolved`.
class Settings
{
  public:
    explicit Settings(std::vector<std::string> allowed) : allowed_(allowed.begin(), allowed.end()) {}

    void load_file(const std::string& path)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("config", "cannot read " + path);
        json j;
        try
        {
            in >> j;
        }
        catch (const json::exception& e)
        {
            throw ConfigError("config", path + ": " + e.what());
        }
        if (!j.is_object())
            throw ConfigError("config", path + ": expected a JSON object");
        // A run manifest is accepted too; its parameters are the settings.
        if (j.contains("parameters") && j.contains("command") && j["parameters"].is_object())
            j = j["parameters"];
        for (auto& [k, v] : j.items())
        {
            const auto key = key_name(k);
            if (!allowed_.count(key))
                throw ConfigError(key, "unknown key");
            values_[key] = v;
        }
    }

    void set_flag(const std::string& key, const std::string& value) { values_[key] = value; }

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    double number(const std::string& key, double fallback)
    {
        double v = fallback;
        if (auto it = values_.find(key); it != values_.end())
            v = to_number(key, it->second);
        resolved_[key] = std::isfinite(v) ? json(v) : json(v > 0 ? "inf" : v < 0 ? "-inf" : "nan");
        return v;
    }

    std::uint64_t integer(const std::string& key, std::uint64_t fallback)
    {
        std::uint64_t v = fallback;
        if (auto it = values_.find(key); it != values_.end())
        {
            const json& j = it->second;
            if (j.is_number_unsigned())
                v = j.get<std::uint64_t>();
            else if (j.is_string())
            {
                const auto s = j.get<std::string>();
                std::size_t used = 0;
                try
                {
                    if (s.empty() || s[0] == '-')
                        throw std::invalid_argument(s);
                    v = std::stoull(s, &used);
                }
                catch (const std::exception&)
                {
                    throw ConfigError(key, "expected a non-negative integer, got '" + s + "'");
                }
                if (used != s.size())
                    throw ConfigError(key, "expected a non-negative integer, got '" + s + "'");
            }
            else if (j.is_number_float() && j.get<double>() >= 0 && std::floor(j.get<double>()) == j.get<double>())
                v = static_cast<std::uint64_t>(j.get<double>());
            else
                throw ConfigError(key, "expected a non-negative integer");
        }
        resolved_[key] = v;
        return v;
    }

    std::string text(const std::string& key, const std::string& fallback)
    {
        std::string v = fallback;
        if (auto it = values_.find(key); it != values_.end())
        {
            if (!it->second.is_string())
                throw ConfigError(key, "expected a string");
            v = it->second.get<std::string>();
        }
        resolved_[key] = v;
        return v;
    }

    std::vector<double> list(const std::string& key, const std::vector<double>& fallback)
    {
        std::vector<double> v = fallback;
        if (auto it = values_.find(key); it != values_.end())
        {
            v.clear();
            const json& j = it->second;
            if (j.is_array())
                for (const auto& e : j)
                    v.push_back(to_number(key, e));
            else if (j.is_string())
            {
                std::stringstream ss(j.get<std::string>());
                std::string cell;
                while (std::getline(ss, cell, ','))
                    v.push_back(to_number(key, cell));
            }
            else
                v.push_back(to_number(key, j));
        }
        resolved_[key] = v;
        return v;
    }

    const json& resolved() const { return resolved_; }

  private:
    static double to_number(const std::string& key, const json& j)
    {
        if (j.is_number())
            return j.get<double>();
        if (!j.is_string())
            throw ConfigError(key, "expected a number");
        const auto s = j.get<std::string>();
        std::size_t used = 0;
        double v = 0.0;
        try
        {
            v = std::stod(s, &used);
        }
        catch (const std::exception&)
        {
            throw ConfigError(key, "expected a number, got '" + s + "'");
        }
        if (used != s.size())
            throw ConfigError(key, "expected a number, got '" + s + "'");
        return v;
    }

    std::set<std::string> allowed_;
    std::map<std::string, json> values_;
    json resolved_ = json::object();
};

struct Model
{
    ModelParams params;
    RateFamily family = RateFamily::C1;
    MultiAgentConfig multi;
};

// Defaults follow the two-agent figures: lambda = 2, sigma = 3, theta = 2.
Model read_model(Settings& s)
{
    Model m;
    auto& p = m.params;
    p.mu = s.number("mu", 0.0);
    p.sigma = s.number("sigma", 3.0);
    p.theta = s.number("theta", 2.0);
    p.lambda = s.number("lambda", 2.0);
    p.alpha = s.number("alpha", 0.0);
    p.cap = s.number("cap", kUnbounded);
    m.family = parse_rate_family(s.text("family", p.alpha == 0.0 ? "c1" : "c2"));
    p.validate();

    auto& c = m.multi;
    c.topology = parse_topology(s.text("topology", "two-agent"));
    c.s1 = s.number("s1", 0.0);
    c.s3 = s.number("s3", 1.0);
    c.s4 = s.number("s4", 1.0);
    c.q = s.number("q", 0.5);
    const std::size_t fallback_d = c.topology == Topology::FourAgent ? 2 : 1;
    c.d = static_cast<std::size_t>(s.integer("d", fallback_d));
    const std::size_t pairs = c.topology == Topology::FourAgent ? 2 : c.d;
    if (c.topology == Topology::FourAgent || c.topology == Topology::Vector)
    {
        c.mus = s.list("mus", std::vector<double>(pairs, p.mu));
        c.sigmas = s.list("sigmas", std::vector<double>(pairs, p.sigma));
    }
    c.validate();
    return m;
}

std::string utc_now()
{
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

/// Output directory plus the list of files written, for the manifest.
class Outputs
{
  public:
    explicit Outputs(std::string dir) : dir_(std::move(dir))
    {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec)
            throw ConfigError("out", "cannot create " + dir_ + ": " + ec.message());
    }

    std::string file(const std::string& name)
    {
        files_.push_back(name);
        return (fs::path(dir_) / name).string();
    }

    void manifest(const std::string& command, const Settings& s, std::uint64_t seed, const std::string& started)
    {
        files_.push_back("manifest.json");
        json m = {{"command", command},
                  {"version", kVersion},
                  {"parameters", s.resolved()},
                  {"seed", seed},
                  {"started_at", started},
                  {"finished_at", utc_now()},
                  {"outputs", files_}};
        io::write_json((fs::path(dir_) / "manifest.json").string(), m);
    }

  private:
    std::string dir_;
    std::vector<std::string> files_;
};

void require_two_agent(const Model& m, const char* what)
{
    if (m.multi.topology != Topology::TwoAgent && m.multi.topology != Topology::ThreeAgent)
        throw ConfigError("topology", std::string(what) + " supports two-agent and three-agent only");
}

std::pair<double, double> span(const std::vector<double>& v)
{
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return {*lo, *hi};
}

// ---- simulate ----

int cmd_simulate(Settings& s, std::ostream& out)
{
    const auto started = utc_now();
    const Model m = read_model(s);
    SimConfig cfg;
    cfg.x0 = s.number("x0", 0.0);
    cfg.horizon = s.number("horizon", 10.0);
    cfg.step = s.number("step", 1e-3);
    cfg.seed = s.integer("seed", 1);
    cfg.record_mode = parse_record_mode(s.text("record", "full"));
    cfg.record_stride = static_cast<std::size_t>(s.integer("record_stride", 1));
    const auto replicates = static_cast<std::size_t>(s.integer("replicates", 1));
    const auto threads = static_cast<unsigned>(s.integer("threads", 0));
    if (replicates == 0)
        throw ConfigError("replicates", "must be >= 1");
    Outputs o(s.text("out", "opdyn_out"));

    const RateFunction rf(m.family, m.params);
    const auto paths = simulate_replicates(m.params, rf, cfg, replicates, threads);

    std::vector<double> jumps;
    std::vector<double> terminal;
    for (std::size_t i = 0; i < paths.size(); ++i)
    {
        char name[32];
        std::snprintf(name, sizeof name, "path_%05zu.csv", i);
        io::write_path_csv(o.file(replicates == 1 ? "path.csv" : name), paths[i]);
        jumps.push_back(static_cast<double>(paths[i].jump_count));
        terminal.push_back(paths[i].terminal());
    }
    io::write_json(o.file("summary.json"),
                   {{"params", io::to_json(m.params)},
                    {"family", to_string(m.family)},
                    {"replicates", replicates},
                    {"jump_counts", jumps},
                    {"jump_count", io::to_json(stats::summarize(jumps))},
                    {"jump_rate", stats::summarize(jumps).mean / cfg.horizon},
                    {"terminal", io::to_json(stats::summarize(terminal))}});

    const auto& p0 = paths.front();
    const auto [lo, hi] = span(p0.values);
    const double pad = std::max(1e-9, 0.05 * (hi - lo));
    svg::Plot plot(0.0, cfg.horizon, lo - pad, hi + pad);
    plot.axes("t", "X(t)", "sample path");
    plot.polyline(p0.times, p0.values);
    plot.markers(p0.jump_epochs, std::vector<double>(p0.jump_epochs.size(), lo - 0.5 * pad));
    plot.save(o.file("path.svg"));
    o.manifest("simulate", s, cfg.seed, started);

    out << "simulated " << replicates << " path(s), mean jumps " << stats::summarize(jumps).mean << '\n';
    return kOk;
}

// ---- sample ----

int cmd_sample(Settings& s, std::ostream& out)
{
    const auto started = utc_now();
    const Model m = read_model(s);
    const auto n = static_cast<std::size_t>(s.integer("n", 100000));
    const double tol = s.number("tol", 1e-8);
    const auto seed = s.integer("seed", 1);
    const auto threads = static_cast<unsigned>(s.integer("threads", 0));
    if (n == 0)
        throw ConfigError("n", "must be >= 1");
    Outputs o(s.text("out", "opdyn_out"));

    std::vector<double> values;
    std::size_t d = 1;
    switch (m.multi.topology)
    {
        case Topology::TwoAgent:
            if (m.family != RateFamily::C1)
                throw ConfigError("family", "the exact sampler needs the constant rate c1");
            values = sample_stationary_c1_batch(m.params, n, seed, threads, tol);
            break;
        case Topology::ThreeAgent:
            if (m.family != RateFamily::C1)
                throw ConfigError("family", "the exact sampler needs the constant rate c1");
            values = sample_three_agent_batch(m.multi, m.params, n, seed, threads, tol);
            break;
        case Topology::FourAgent:
        {
            const auto burn_in = static_cast<std::size_t>(s.integer("burn_in", 200));
            const auto snap = four_agent_campaign(m.multi, m.params, n, burn_in, 0, seed, threads);
            d = 2;
            values.resize(2 * n);
            for (std::size_t i = 0; i < n; ++i)
            {
                values[2 * i] = snap.x2_at_burn_in[i];
                values[2 * i + 1] = snap.x3_at_burn_in[i];
            }
            break;
        }
        case Topology::Vector:
            d = m.multi.d;
            values = vector_stationary_batch(m.multi, m.params, n, seed, threads, tol);
            break;
    }
    io::write_samples_csv(o.file("samples.csv"), values, d);

    json cols = json::array();
    for (std::size_t j = 0; j < d; ++j)
    {
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i)
            col[i] = values[i * d + j];
        cols.push_back(io::to_json(stats::summarize(col)));
    }
    io::write_json(o.file("summary.json"),
                   {{"params", io::to_json(m.params)}, {"topology", io::to_json(m.multi)}, {"columns", cols}});
    o.manifest("sample", s, seed, started);
    out << "wrote " << n << " draw(s) in " << d << " column(s)\n";
    return kOk;
}

// ---- density ----

// Reference law of the two- and three-agent models: density, CDF and, where
// a closed form exists, the characteristic function.
struct Reference
{
    std::function<double(double)> pdf;
    std::function<double(double)> cdf;
    std::function<std::complex<double>(double)> cf;
    double lo = 0.0;
    double hi = 0.0;
    std::string name;
    json metadata;
};

Reference make_reference(const Model& m, const std::string& form)
{
    require_two_agent(m, "the closed-form density");
    if (form != "auto" && form != "exponential" && form != "besselk")
        throw ConfigError("form", "expected auto, exponential or besselk");
    const double alpha = m.family == RateFamily::C1 ? 0.0 : m.params.alpha;
    if (m.family == RateFamily::C3)
        throw ConfigError("family", "no closed-form density for the capped rate c3");
    if (m.params.mu != 0.0)
        throw ConfigError("mu", "the closed-form density needs mu = 0");

    Reference r;
    const bool exponential = form == "exponential" || (form == "auto" && alpha == 0.0);
    if (exponential && alpha != 0.0)
        throw ConfigError("form", "the exponential form needs alpha = 0");

    if (m.multi.topology == Topology::ThreeAgent)
    {
        if (!exponential)
            throw ConfigError("form", "the three-agent density uses the exponential form");
        auto d = std::make_shared<ThreeAgentDensity>(m.multi, m.params);
        const double cut = d->base().tail_cutoff(1e-16);
        r.pdf = [d](double x) { return (*d)(x); };
        r.cdf = [d](double x) { return d->cdf(x); };
        const double s1 = m.multi.s1;
        const double s3 = m.multi.s3;
        const ModelParams p = m.params;
        r.cf = [p, s1, s3](double xi) {
            const std::complex<double> i1(0.0, 1.0);
            const std::complex<double> u
                = (xi == 0.0 || s3 == s1) ? std::exp(i1 * xi * s1)
                                          : (std::exp(i1 * xi * s3) - std::exp(i1 * xi * s1)) / (i1 * xi * (s3 - s1));
            return char_function(xi, p) * u;
        };
        r.lo = s1 - cut;
        r.hi = s3 + cut;
        r.name = "three-agent";
        r.metadata = io::density_metadata(d->base());
        r.metadata["topology"] = io::to_json(m.multi);
        return r;
    }

    auto d = std::make_shared<DensitySeries>(exponential ? make_density_exponential(m.params)
                                                          : make_density_besselk(m.params, alpha));
    const double cut = d->tail_cutoff(1e-16);
    r.pdf = [d](double x) { return d->evaluate(x); };
    if (exponential)
    {
        r.cdf = [d](double x) { return d->cdf(x); };
        const ModelParams p = m.params;
        r.cf = [p](double xi) { return char_function(xi, p); };
    }
    else
    {
        auto t = std::make_shared<stats::TabulatedCdf>(stats::reference_cdf(*d));
        r.cdf = [t](double x) { return (*t)(x); };
    }
    r.lo = -cut;
    r.hi = cut;
    r.name = exponential ? "exponential" : "besselk";
    r.metadata = io::density_metadata(*d);
    return r;
}

int cmd_density(Settings& s, std::ostream& out)
{
    const auto started = utc_now();
    const Model m = read_model(s);
    const auto ref = make_reference(m, s.text("form", "auto"));
    const double lo = s.number("grid_min", -10.0);
    const double hi = s.number("grid_max", 10.0);
    const auto n = static_cast<std::size_t>(s.integer("grid_n", 401));
    if (n == 0)
        throw ConfigError("grid_n", "must be >= 1");
    if (!(hi >= lo))
        throw ConfigError("grid_max", "must be >= grid_min");
    Outputs o(s.text("out", "opdyn_out"));

    std::vector<double> xs(n);
    std::vector<double> ps(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        xs[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        ps[i] = ref.pdf(xs[i]);
    }
    io::write_csv(o.file("density.csv"), {"x", "p"}, {xs, ps});
    io::write_json(o.file("density.json"), ref.metadata);

    if (n > 1)
    {
        svg::Plot plot(lo, hi, 0.0, 1.05 * *std::max_element(ps.begin(), ps.end()));
        plot.axes("x", "p(x)", "stationary density");
        plot.polyline(xs, ps);
        plot.save(o.file("density.svg"));
    }
    o.manifest("density", s, 0, started);
    out << ref.name << " density, normalization " << std::setprecision(12)
        << ref.metadata.value("normalization", 0.0) << '\n';
    return kOk;
}

// ---- compare ----

int cmd_compare(Settings& s, std::ostream& out)
{
    const auto started = utc_now();
    const Model m = read_model(s);
    const auto path = s.text("sample", "");
    if (path.empty())
        throw ConfigError("sample", "a sample file is required");
    const double threshold = s.number("ks_threshold", 0.01);
    const auto bins = static_cast<std::size_t>(s.integer("bins", 80));
    const auto sample = io::read_sample_csv(path);
    if (sample.empty())
        throw ConfigError("sample", path + " holds no values");
    const auto ref = make_reference(m, s.text("form", "auto"));
    Outputs o(s.text("out", "opdyn_out"));

    std::vector<double> xi;
    if (ref.cf)
        for (int k = -40; k <= 40; ++k)
            xi.push_back(k / 8.0);
    auto report = stats::compare(sample, ref.cdf, ref.lo, ref.hi, ref.cf, xi, ref.name);
    const bool pass = report.ks_distance < threshold;
    json j = io::to_json(report);
    j["ks_threshold"] = threshold;
    j["pass"] = pass;
    j["params"] = io::to_json(m.params);
    io::write_json(o.file("comparison.json"), j);

    // Overlay on the central 99.8% of the sample.
    auto sorted = sample;
    std::sort(sorted.begin(), sorted.end());
    const double lo = sorted[static_cast<std::size_t>(0.001 * static_cast<double>(sorted.size() - 1))];
    const double hi = sorted[static_cast<std::size_t>(0.999 * static_cast<double>(sorted.size() - 1))];
    if (hi > lo && bins > 0)
    {
        std::vector<double> edges;
        std::vector<double> heights;
        svg::histogram(sample, lo, hi, bins, edges, heights);
        std::vector<double> xs;
        std::vector<double> ps;
        for (int k = 0; k <= 400; ++k)
        {
            xs.push_back(lo + (hi - lo) * k / 400.0);
            ps.push_back(ref.pdf(xs.back()));
        }
        const double top = std::max(*std::max_element(heights.begin(), heights.end()),
                                    *std::max_element(ps.begin(), ps.end()));
        svg::Plot plot(lo, hi, 0.0, 1.05 * top);
        plot.axes("x", "density", "sample against closed form");
        plot.bars(edges, heights);
        plot.polyline(xs, ps);
        plot.save(o.file("overlay.svg"));
    }
    o.manifest("compare", s, 0, started);

    out << "KS " << std::setprecision(6) << report.ks_distance << (pass ? " < " : " >= ") << threshold << ", W1 "
        << report.wasserstein1 << '\n';
    return pass ? kOk : kStatFailure;
}

// ---- regime ----

int cmd_regime(Settings& s, std::ostream& out)
{
    const auto started = utc_now();
    const Model m = read_model(s);
    const auto caps = s.list("caps", {10.0, 1e3, 1e6});
    const double window = s.number("window", 1.0);
    const auto trials = static_cast<std::size_t>(s.integer("trials", 2000));
    RegimeOptions opt;
    opt.step = s.number("step", 1e-3);
    opt.burst_threshold = s.number("burst_threshold", std::numeric_limits<double>::quiet_NaN());
    opt.seed = s.integer("seed", 1);
    opt.threads = static_cast<unsigned>(s.integer("threads", 0));
    if (caps.empty())
        throw ConfigError("caps", "need at least one ceiling");
    Outputs o(s.text("out", "opdyn_out"));

    const auto rows = regime_scan(m.params, m.params.alpha, caps, window, trials, opt);
    std::vector<double> k;
    std::vector<double> mean;
    std::vector<double> se;
    std::vector<double> burst;
    json jr = json::array();
    for (const auto& r : rows)
    {
        k.push_back(r.cap);
        mean.push_back(r.mean_jumps);
        se.push_back(r.std_error);
        burst.push_back(r.burst_fraction);
        jr.push_back({{"cap", r.cap}, {"mean_jumps", r.mean_jumps}, {"std_error", r.std_error},
                      {"burst_fraction", r.burst_fraction}});
        out << "K=" << r.cap << "  mean jumps " << r.mean_jumps << " +- " << r.std_error << "  burst fraction "
            << r.burst_fraction << '\n';
    }
    io::write_csv(o.file("regime.csv"), {"cap", "mean_jumps", "std_error", "burst_fraction"}, {k, mean, se, burst});
    io::write_json(o.file("regime.json"),
                   {{"params", io::to_json(m.params)}, {"window", window}, {"trials", trials}, {"rows", jr}});

    std::vector<double> lk;
    for (double c : k)
        lk.push_back(std::log10(c));
    const double top = *std::max_element(mean.begin(), mean.end());
    svg::Plot plot(lk.front() - 0.5, lk.back() + 0.5, 0.0, 1.1 * top + 1e-9);
    plot.axes("log10 K", "mean jumps", "jumps in the window");
    plot.polyline(lk, mean);
    plot.markers(lk, mean);
    plot.save(o.file("regime.svg"));
    o.manifest("regime", s, opt.seed, started);
    return kOk;
}

// ---- selfcheck ----

int cmd_selfcheck(Settings& s, bool fast, bool perturb, std::ostream& out)
{
    const auto started = utc_now();
    const Model m = read_model(s);
    const auto seed = s.integer("seed", 1);
    const auto threads = static_cast<unsigned>(s.integer("threads", 0));
    const bool write = s.has("out");
    const std::string dir = s.text("out", "");

    ModelParams p = m.params;
    p.mu = 0.0;
    p.alpha = 0.0;
    ModelParams drifted = p;
    drifted.mu = m.params.mu != 0.0 ? m.params.mu : 0.7;

    std::vector<checks::CheckResult> r;
    for (double a : {0.0, 0.5, 1.5})
    {
        r.push_back(checks::normalization(p, a));
        r.push_back(checks::ode_residual(p, a, perturb));
        r.push_back(checks::ode_sensitivity(p, a));
        r.push_back(checks::mellin_unit(p, a));
        for (double sv : {0.5, 1.0, 1.5, 2.0})
            r.push_back(checks::mellin_functional(p, a, sv));
        r.push_back(checks::mellin_quadrature(p, a, 2.0));
        r.push_back(checks::adjointness(p, a));
    }
    r.push_back(checks::adjointness(drifted, 0.0));
    r.push_back(checks::reduction(p));
    for (double th : {1.5, 2.0, 3.0})
        for (double sv : {1.0, 2.0, 3.5})
            r.push_back(checks::euler(th, sv));
    for (double b : {-1.0, 0.0, 1.0})
        r.push_back(checks::drift_xi_recurrence(b, p.theta));
    r.push_back(checks::drift_mellin_recurrence(drifted));
    r.push_back(checks::drift_zero_reduction(p));
    if (!fast)
        r.push_back(checks::embedded_vs_exponential(p, 200000, seed, threads));

    bool all = true;
    json jr = json::array();
    for (const auto& c : r)
    {
        all = all && c.pass;
        out << std::left << std::setw(44) << c.name << (c.pass ? "PASS  " : "FAIL  ") << std::setprecision(3)
            << std::scientific << c.value << " / " << c.threshold << std::defaultfloat << '\n';
        jr.push_back({{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"threshold", c.threshold},
                      {"detail", c.detail}});
    }
    out << (all ? "all checks passed" : "some checks failed") << '\n';
    if (write)
    {
        Outputs o(dir);
        io::write_json(o.file("selfcheck.json"), {{"pass", all}, {"fast", fast}, {"perturb", perturb}, {"checks", jr}});
        o.manifest("selfcheck", s, seed, started);
    }
    return all ? kOk : kStatFailure;
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b)
{
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Stochastic opinion dynamics: simulation, stationary laws and checks", "opdyn"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    struct Command
    {
        CLI::App* app;
        std::vector<std::string> keys;
        std::map<std::string, std::string> given;
        std::string config;
    };
    const std::map<std::string, std::pair<std::string, std::vector<std::string>>> table = {
        {"simulate",
         {"simulate sample paths of the jump diffusion",
          {"x0", "horizon", "step", "replicates", "record", "record_stride"}}},
        {"sample", {"exact stationary draws from the embedded chain", {"n", "tol", "burn_in"}}},
        {"density", {"tabulate the closed-form stationary density", {"grid_min", "grid_max", "grid_n", "form"}}},
        {"compare", {"compare a sample with the closed-form law", {"sample", "ks_threshold", "bins", "form"}}},
        {"regime", {"jump counts against the rate ceiling", {"caps", "window", "trials", "step", "burst_threshold"}}},
        {"selfcheck", {"run the analytic invariant suite", {}}},
    };

    std::map<std::string, Command> commands;
    bool fast = false;
    bool perturb = false;
    for (const auto& [name, entry] : table)
    {
        Command c;
        c.app = app.add_subcommand(name, entry.first);
        c.keys = concat(concat(kModelKeys, kCommonKeys), entry.second);
        commands.emplace(name, std::move(c));
    }
    for (auto& [name, c] : commands)
    {
        c.app->add_option("--config", c.config, "JSON settings file; flags override it");
        for (const auto& k : c.keys)
            c.app->add_option(flag_name(k), c.given[k], kHelp.at(k));
    }
    commands["selfcheck"].app->add_flag("--fast", fast, "skip the Monte Carlo check");
    commands["selfcheck"].app->add_flag("--perturb", perturb, "perturb the density in the ODE check (must fail)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try
    {
        app.parse(reversed);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigError;
    }

    try
    {
        for (auto& [name, c] : commands)
        {
            if (!c.app->parsed())
                continue;
            Settings s(c.keys);
            if (!c.config.empty())
                s.load_file(c.config);
            for (const auto& k : c.keys)
                if (c.app->get_option(flag_name(k))->count() > 0)
                    s.set_flag(k, c.given[k]);
            if (name == "simulate")
                return cmd_simulate(s, out);
            if (name == "sample")
                return cmd_sample(s, out);
            if (name == "density")
                return cmd_density(s, out);
            if (name == "compare")
                return cmd_compare(s, out);
            if (name == "regime")
                return cmd_regime(s, out);
            return cmd_selfcheck(s, fast, perturb, out);
        }
    }
    catch (const ConfigError& e)
    {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    }
    catch (const std::exception& e)
    {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    }
    return kConfigError;
}

}  // namespace opdyn::cli
