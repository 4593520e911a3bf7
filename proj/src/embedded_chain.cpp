#include "opdyn/embedded_chain.hpp"

#include <cmath>

#include "opdyn/parallel.hpp"

namespace opdyn {

namespace {

double gaussian(double mean, double sd, rng::Stream& stream)
{
    return mean + sd * stream.normal();
}

void require_size(const ChainState& state, std::size_t n, const char* what)
{
    if (state.y.size() != n)
        throw ConfigError("state", what);
}

}  // namespace

MixtureGaussianSample sample_w_prime(const ModelParams& params, rng::Stream& stream)
{
    const double dt = stream.exponential(params.lambda);
    return {gaussian(params.mu * dt, params.sigma * std::sqrt(dt), stream), dt};
}

ChainState embedded_step(const ChainState& state, const ModelParams& params, rng::Stream& stream)
{
    require_size(state, 1, "two-agent chain state has one entry");
    const double w = sample_w_prime(params, stream).value;
    return {{embedded_update(state.y[0], params.theta, w)}, state.step + 1};
}

int stationary_terms(double theta, double tol)
{
    if (!(theta > 1))
        throw ConfigError("theta", "must be > 1");
    if (!(tol > 0 && tol < 1))
        throw ConfigError("tol", "must lie in (0, 1)");
    // std(sum) = std(W') / sqrt(1 - theta^-2)
    const double target = tol / std::sqrt(1.0 - 1.0 / (theta * theta));
    return std::max(1, static_cast<int>(std::ceil(-std::log(target) / std::log(theta))));
}

double sample_stationary_c1(const ModelParams& params, rng::Stream& stream, double tol)
{
    const int n = stationary_terms(params.theta, tol);
    // Horner form of sum_{j<n} W'(j) theta^-j: run the chain n steps from 0.
    double x = 0.0;
    for (int j = 0; j < n; ++j)
        x = embedded_update(x, params.theta, sample_w_prime(params, stream).value);
    return x;
}

double sample_three_agent(const MultiAgentConfig& cfg,
                          const ModelParams& params,
                          rng::Stream& stream,
                          double tol)
{
    if (params.theta != 2.0)
        throw ConfigError("theta", "the three-agent model needs theta = 2");
    const int n = std::max(stationary_terms(2.0, tol), 53);
    const double p_s3 = 1.0 - cfg.q;
    double a = 0.0;
    double b = 0.0;
    for (int j = 0; j < n; ++j)
    {
        a = embedded_update(a, 2.0, sample_w_prime(params, stream).value);
        b = 0.5 * (b + (stream.bernoulli(p_s3) ? 1.0 : 0.0));
    }
    return a + (cfg.s3 - cfg.s1) * b + cfg.s1;
}

ChainState four_agent_apply(const ChainState& state, const MultiAgentConfig& cfg, bool xi, double w2, double w3)
{
    require_size(state, 2, "four-agent chain state has two entries");
    const double e = xi ? 1.0 : 0.0;
    const double x2 = state.y[0];
    const double x3 = state.y[1];
    const double n2 = (1.0 - 2.0 * e / 3.0) * x2 + (e / 3.0) * x3 + cfg.s1 * e / 3.0 + w2;
    const double n3 = ((1.0 - e) / 3.0) * x2 + ((1.0 + 2.0 * e) / 3.0) * x3 + cfg.s4 * (1.0 - e) / 3.0 + w3;
    return {{n2, n3}, state.step + 1};
}

ChainState four_agent_step(const ChainState& state,
                           const MultiAgentConfig& cfg,
                           const ModelParams& params,
                           rng::Stream& stream)
{
    const double dt = stream.exponential(params.lambda);
    const bool xi = stream.bernoulli(cfg.q);
    const double sq = std::sqrt(dt);
    const double w2 = gaussian(cfg.mus[0] * dt, cfg.sigmas[0] * sq, stream);
    const double w3 = gaussian(cfg.mus[1] * dt, cfg.sigmas[1] * sq, stream);
    return four_agent_apply(state, cfg, xi, w2, w3);
}

ChainState vector_valued_step(const ChainState& state,
                              const MultiAgentConfig& cfg,
                              const ModelParams& params,
                              rng::Stream& stream)
{
    require_size(state, cfg.d, "vector chain state has d entries");
    const double dt = stream.exponential(params.lambda);
    const double sq = std::sqrt(dt);
    ChainState next{state.y, state.step + 1};
    for (std::size_t i = 0; i < cfg.d; ++i)
        next.y[i] = embedded_update(state.y[i], params.theta, gaussian(cfg.mus[i] * dt, cfg.sigmas[i] * sq, stream));
    return next;
}

std::vector<double> sample_stationary_c1_batch(const ModelParams& params,
                                               std::size_t n,
                                               std::uint64_t seed,
                                               unsigned threads,
                                               double tol)
{
    params.validate();
    std::vector<double> out(n);
    parallel_for(n, threads, [&](std::size_t i) {
        rng::Stream stream(seed, i);
        out[i] = sample_stationary_c1(params, stream, tol);
    });
    return out;
}

std::vector<double> sample_three_agent_batch(const MultiAgentConfig& cfg,
                                             const ModelParams& params,
                                             std::size_t n,
                                             std::uint64_t seed,
                                             unsigned threads,
                                             double tol)
{
    params.validate();
    cfg.validate();
    std::vector<double> out(n);
    parallel_for(n, threads, [&](std::size_t i) {
        rng::Stream stream(seed, i);
        out[i] = sample_three_agent(cfg, params, stream, tol);
    });
    return out;
}

std::vector<double> embedded_chain_run(const ModelParams& params,
                                       std::size_t n_steps,
                                       double y0,
                                       std::uint64_t seed,
                                       std::uint64_t stream_index)
{
    params.validate();
    rng::Stream stream(seed, stream_index);
    std::vector<double> out;
    out.reserve(n_steps);
    double y = y0;
    for (std::size_t k = 0; k < n_steps; ++k)
    {
        y = embedded_update(y, params.theta, sample_w_prime(params, stream).value);
        out.push_back(y);
    }
    return out;
}

FourAgentSnapshots four_agent_campaign(const MultiAgentConfig& cfg,
                                       const ModelParams& params,
                                       std::size_t chains,
                                       std::size_t burn_in,
                                       std::size_t lag,
                                       std::uint64_t seed,
                                       unsigned threads)
{
    params.validate();
    cfg.validate();
    if (cfg.topology != Topology::FourAgent)
        throw ConfigError("topology", "four_agent_campaign needs the four-agent topology");
    FourAgentSnapshots out;
    out.x2_at_burn_in.resize(chains);
    out.x3_at_burn_in.resize(chains);
    out.x2_at_lag.resize(chains);
    out.x3_at_lag.resize(chains);
    parallel_for(chains, threads, [&](std::size_t i) {
        rng::Stream stream(seed, i);
        ChainState s{{cfg.s1, cfg.s4}, 0};
        for (std::size_t k = 0; k < burn_in; ++k)
            s = four_agent_step(s, cfg, params, stream);
        out.x2_at_burn_in[i] = s.y[0];
        out.x3_at_burn_in[i] = s.y[1];
        for (std::size_t k = 0; k < lag; ++k)
            s = four_agent_step(s, cfg, params, stream);
        out.x2_at_lag[i] = s.y[0];
        out.x3_at_lag[i] = s.y[1];
    });
    return out;
}

std::vector<double> vector_stationary_batch(const MultiAgentConfig& cfg,
                                            const ModelParams& params,
                                            std::size_t n,
                                            std::uint64_t seed,
                                            unsigned threads,
                                            double tol)
{
    params.validate();
    cfg.validate();
    if (cfg.topology != Topology::Vector)
        throw ConfigError("topology", "vector_stationary_batch needs the vector topology");
    const int terms = stationary_terms(params.theta, tol);
    const std::size_t d = cfg.d;
    std::vector<double> out(n * d);
    parallel_for(n, threads, [&](std::size_t i) {
        rng::Stream stream(seed, i);
        ChainState s{std::vector<double>(d, 0.0), 0};
        for (int k = 0; k < terms; ++k)
            s = vector_valued_step(s, cfg, params, stream);
        for (std::size_t j = 0; j < d; ++j)
            out[i * d + j] = s.y[j];
    });
    return out;
}

}  // namespace opdyn
