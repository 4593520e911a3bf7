#include "opdyn/path_sim.hpp"

#include <algorithm>
#include <cmath>

#include "opdyn/parallel.hpp"
#include "opdyn/rng.hpp"

namespace opdyn {

namespace {

std::size_t step_count(double horizon, double step)
{
    return static_cast<std::size_t>(std::ceil(horizon / step - 1e-9));
}

// Grid time after k steps; the last step may be shorter so the grid ends at T.
double grid_time(std::size_t k, std::size_t n, double step, double horizon)
{
    return k >= n ? horizon : static_cast<double>(k) * step;
}

double interaction_probability(double rate, double dt)
{
    if (std::isinf(rate))
        return 1.0;
    return -std::expm1(-rate * dt);
}

// Rate used for exponential functionals: C2 gets the default ceiling for any
// alpha, since the functional stays meaningful away from 0.
RateFunction functional_rate(const RateFunction& rf, double step)
{
    if (rf.bounded())
        return rf;
    return rf.with_cap(default_c2_cap(rf.params(), step));
}

}  // namespace

RecordMode parse_record_mode(const std::string& name)
{
    if (name == "full")
        return RecordMode::Full;
    if (name == "jumps")
        return RecordMode::Jumps;
    if (name == "terminal")
        return RecordMode::Terminal;
    throw ConfigError("record", "expected full, jumps or terminal, got '" + name + "'");
}

void SimConfig::validate() const
{
    if (!std::isfinite(x0))
        throw ConfigError("x0", "must be finite");
    if (!(horizon > 0) || !std::isfinite(horizon))
        throw ConfigError("horizon", "must be > 0");
    if (!(step > 0))
        throw ConfigError("step", "must be > 0");
    if (step > horizon)
        throw ConfigError("step", "must not exceed the horizon");
    if (record_stride == 0)
        throw ConfigError("stride", "must be >= 1");
}

double default_c2_cap(const ModelParams& params, double step)
{
    return params.lambda * std::pow(step, -params.alpha / 2.0);
}

RateFunction simulation_rate(const RateFunction& rf, double step, double cap_override)
{
    if (rf.bounded())
        return rf;
    if (rf.params().alpha >= 1.0)
        throw ConfigError("alpha",
                          "c2 with alpha >= 1 has no pathwise solution from 0; use c3");
    const double cap = std::isnan(cap_override) ? default_c2_cap(rf.params(), step)
                                                : cap_override;
    return rf.with_cap(cap);
}

SamplePath simulate_path(const ModelParams& params, const RateFunction& rf, const SimConfig& cfg)
{
    params.validate();
    cfg.validate();
    const RateFunction rate = simulation_rate(rf, cfg.step, cfg.cap);

    SamplePath path;
    path.theta = params.theta;
    path.horizon = cfg.horizon;
    path.record_mode = cfg.record_mode;

    const std::size_t n = step_count(cfg.horizon, cfg.step);
    if (cfg.record_mode == RecordMode::Full)
    {
        const std::size_t rows = n / cfg.record_stride + 2;
        path.times.reserve(rows);
        path.values.reserve(rows);
        path.is_jump.reserve(rows);
    }

    auto record = [&path](double t, double x, bool jump) {
        path.times.push_back(t);
        path.values.push_back(x);
        path.is_jump.push_back(jump ? 1 : 0);
    };

    rng::Stream stream(cfg.seed, cfg.stream);
    double x = cfg.x0;
    record(0.0, x, false);

    const double sqrt_h = std::sqrt(cfg.step);
    for (std::size_t k = 0; k < n; ++k)
    {
        const double t0 = grid_time(k, n, cfg.step, cfg.horizon);
        const double t1 = grid_time(k + 1, n, cfg.step, cfg.horizon);
        const double dt = t1 - t0;
        const double sd = (k + 1 == n) ? std::sqrt(dt) : sqrt_h;

        const double p_jump = interaction_probability(rate(x), dt);
        const double g = stream.normal();
        const double u = stream.uniform();

        const double pre = x + params.mu * dt + params.sigma * sd * g;
        const bool jump = u < p_jump;
        x = jump ? jump_apply(pre, params.theta) : pre;

        if (jump)
        {
            ++path.jump_count;
            path.jump_epochs.push_back(t1);
            path.jump_pre_values.push_back(pre);
        }

        const bool last = k + 1 == n;
        switch (cfg.record_mode)
        {
            case RecordMode::Full:
                if (jump || last || (k + 1) % cfg.record_stride == 0)
                    record(t1, x, jump);
                break;
            case RecordMode::Jumps:
                if (jump || last)
                    record(t1, x, jump);
                break;
            case RecordMode::Terminal:
                if (last)
                    record(t1, x, jump);
                break;
        }
    }
    return path;
}

std::vector<SamplePath> simulate_replicates(const ModelParams& params,
                                            const RateFunction& rf,
                                            const SimConfig& cfg,
                                            std::size_t replicates,
                                            unsigned threads)
{
    std::vector<SamplePath> paths(replicates);
    parallel_for(replicates, threads, [&](std::size_t i) {
        SimConfig c = cfg;
        c.stream = i;
        paths[i] = simulate_path(params, rf, c);
    });
    return paths;
}

std::vector<double> time_sampled_values(const SamplePath& path, double sample_dt, double burn_in)
{
    if (!(sample_dt > 0))
        throw ConfigError("sample_dt", "must be > 0");
    std::vector<double> out;
    if (path.times.empty() || burn_in >= path.horizon)
        return out;

    const double slack = 1e-9 * sample_dt;
    for (std::size_t k = 1;; ++k)
    {
        const double t = burn_in + static_cast<double>(k) * sample_dt;
        if (t > path.horizon + slack)
            break;
        auto it = std::upper_bound(path.times.begin(), path.times.end(), t + slack);
        const auto idx = static_cast<std::size_t>(std::distance(path.times.begin(), it));
        out.push_back(path.values[idx == 0 ? 0 : idx - 1]);
    }
    return out;
}

std::vector<double> time_sampled_campaign(const ModelParams& params,
                                          const RateFunction& rf,
                                          SimConfig cfg,
                                          std::size_t replicates,
                                          double sample_dt,
                                          double burn_in,
                                          unsigned threads)
{
    cfg.record_mode = RecordMode::Full;
    const double ratio = sample_dt / cfg.step;
    cfg.record_stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(ratio)));
    if (std::abs(ratio - static_cast<double>(cfg.record_stride)) > 1e-6 * ratio)
        throw ConfigError("sample_dt", "must be a multiple of the step");

    std::vector<std::vector<double>> per(replicates);
    parallel_for(replicates, threads, [&](std::size_t i) {
        SimConfig c = cfg;
        c.stream = i;
        per[i] = time_sampled_values(simulate_path(params, rf, c), sample_dt, burn_in);
    });

    std::vector<double> out;
    for (auto& v : per)
        out.insert(out.end(), v.begin(), v.end());
    return out;
}

std::vector<SurvivalEstimate> survival_curve(const ModelParams& params,
                                             const RateFunction& rf,
                                             double z0,
                                             const std::vector<double>& horizons,
                                             std::size_t trials,
                                             std::uint64_t seed,
                                             double step,
                                             unsigned threads)
{
    params.validate();
    if (trials < 1)
        throw ConfigError("trials", "must be >= 1");
    if (horizons.empty())
        return {};
    if (!std::is_sorted(horizons.begin(), horizons.end()) || !(horizons.front() > 0))
        throw ConfigError("horizon", "horizons must be positive and increasing");
    if (!(step > 0))
        throw ConfigError("step", "must be > 0");

    const RateFunction rate = functional_rate(rf, step);
    const double t_max = horizons.back();
    const std::size_t n_h = horizons.size();

    // survival[i * n_h + j] = exp(-I(T_j)) for trial i
    std::vector<double> survival(trials * n_h);
    parallel_for(trials, threads, [&](std::size_t i) {
        rng::Stream stream(seed, i);
        double x = z0;
        double lam = rate(x);
        double t = 0.0;
        double integral = 0.0;
        std::size_t j = 0;
        std::size_t k = 0;
        while (j < n_h)
        {
            // next stop: the next grid point or the next requested horizon
            const double grid_next = static_cast<double>(k + 1) * step;
            const double t_next = std::min(grid_next, horizons[j]);
            const double dt = t_next - t;
            if (dt > 0)
            {
                x += params.mu * dt + params.sigma * std::sqrt(dt) * stream.normal();
                const double lam_next = rate(x);
                integral += 0.5 * dt * (lam + lam_next);
                lam = lam_next;
                t = t_next;
            }
            if (t_next >= grid_next)
                ++k;
            while (j < n_h && horizons[j] <= t)
            {
                survival[i * n_h + j] = std::exp(-integral);
                ++j;
            }
            if (t >= t_max)
                break;
        }
    });

    std::vector<SurvivalEstimate> out(n_h);
    for (std::size_t j = 0; j < n_h; ++j)
    {
        double sum = 0.0;
        double sum_sq = 0.0;
        for (std::size_t i = 0; i < trials; ++i)
        {
            const double v = survival[i * n_h + j];
            sum += v;
            sum_sq += v * v;
        }
        const double n = static_cast<double>(trials);
        const double mean = sum / n;
        const double var = trials > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1)) : 0.0;
        out[j] = {mean, std::sqrt(var / n), trials};
    }
    return out;
}

SurvivalEstimate estimate_gamma1_survival(const ModelParams& params,
                                          const RateFunction& rf,
                                          double z0,
                                          double horizon,
                                          std::size_t trials,
                                          std::uint64_t seed,
                                          double step,
                                          unsigned threads)
{
    if (!(horizon > 0))
        throw ConfigError("horizon", "must be > 0");
    return survival_curve(params, rf, z0, {horizon}, trials, seed, std::min(step, horizon), threads)
        .front();
}

std::vector<RegimeRow> regime_scan(const ModelParams& params,
                                   double alpha,
                                   const std::vector<double>& caps,
                                   double window,
                                   std::size_t trials,
                                   const RegimeOptions& options)
{
    if (!std::is_sorted(caps.begin(), caps.end()))
        throw ConfigError("caps", "must be increasing");
    if (trials < 1)
        throw ConfigError("trials", "must be >= 1");

    ModelParams p = params;
    p.alpha = alpha;
    const double threshold = std::isnan(options.burst_threshold)
                                 ? 10.0 * p.lambda * window
                                 : options.burst_threshold;

    std::vector<RegimeRow> rows;
    for (double cap : caps)
    {
        p.cap = cap;
        const RateFunction rf(RateFamily::C3, p);
        SimConfig cfg;
        cfg.x0 = 0.0;
        cfg.horizon = window;
        cfg.step = options.step;
        cfg.seed = options.seed;
        cfg.record_mode = RecordMode::Terminal;

        std::vector<double> counts(trials);
        parallel_for(trials, options.threads, [&](std::size_t i) {
            SimConfig c = cfg;
            c.stream = i;
            counts[i] = static_cast<double>(simulate_path(p, rf, c).jump_count);
        });

        double sum = 0.0;
        double sum_sq = 0.0;
        std::size_t bursts = 0;
        for (double c : counts)
        {
            sum += c;
            sum_sq += c * c;
            if (c > threshold)
                ++bursts;
        }
        const double n = static_cast<double>(trials);
        const double mean = sum / n;
        const double var = trials > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1)) : 0.0;
        rows.push_back({cap, mean, std::sqrt(var / n), static_cast<double>(bursts) / n});
    }
    return rows;
}

}  // namespace opdyn
