#pragma once

// Exact samplers built on the pre-jump chain Y(n) = X(T_n-) of the
// constant-rate models. Between interactions the diffusion runs for an
// Exp(lambda) time, so
//
//   Y(n+1) = Y(n)/theta + W'(n),   W' ~ N(mu dT, sigma^2 dT),  dT ~ Exp(lambda),
//
// and the stationary law is the geometric sum sum_j W'(j)/theta^j. Poisson
// arrivals see time averages, so this is also the law of X at a fixed time.
//
// The four-agent model couples two non-stubborn agents between stubborn s1
// and s4. At each interaction agent 2 updates with probability q:
//
//   Z <- P Z + b,   P = [[1 - 2xi/3, xi/3], [(1 - xi)/3, (1 + 2xi)/3]],
//                   b = [s1 xi/3 + W2, s4 (1 - xi)/3 + W3],   xi ~ Bernoulli(q).
//
// These are the matrices as usually written for this model. The fixed 1/3
// weights in the second row are taken as given; nothing here derives them.

#include <cstdint>
#include <vector>

#include "opdyn/model.hpp"
#include "opdyn/rng.hpp"

namespace opdyn {

struct MixtureGaussianSample
{
    double value = 0.0;
    double dt = 0.0;  // the exponential holding time behind the draw
};

/// Pre-jump state: one entry for two-agent, (x2, x3) for four-agent, d for vector.
struct ChainState
{
    std::vector<double> y;
    std::uint64_t step = 0;
};

/// dT ~ Exp(lambda), then N(mu dT, sigma^2 dT). Exact.
MixtureGaussianSample sample_w_prime(const ModelParams& params, rng::Stream& stream);

/// y/theta + w.
constexpr double embedded_update(double y, double theta, double w)
{
    return y / theta + w;
}

ChainState embedded_step(const ChainState& state, const ModelParams& params, rng::Stream& stream);

/// Number of geometric-sum terms so that theta^-N * std(W') < tol * std(sum).
int stationary_terms(double theta, double tol = 1e-8);

/// One draw from the constant-rate stationary law (truncated geometric sum).
double sample_stationary_c1(const ModelParams& params, rng::Stream& stream, double tol = 1e-8);

/// Three-agent stationary draw for theta = 2: A + B + s1 with A the two-agent
/// geometric sum and B = (s3 - s1) sum_j xi(j) 2^-(j+1), xi ~ Bernoulli(1 - q).
double sample_three_agent(const MultiAgentConfig& cfg,
                          const ModelParams& params,
                          rng::Stream& stream,
                          double tol = 1e-8);

/// Deterministic core of the four-agent update for given xi, W2, W3.
ChainState four_agent_apply(const ChainState& state, const MultiAgentConfig& cfg, bool xi, double w2, double w3);

ChainState four_agent_step(const ChainState& state,
                           const MultiAgentConfig& cfg,
                           const ModelParams& params,
                           rng::Stream& stream);

/// Shared dT ~ Exp(lambda); y_i <- y_i/theta + N(mu_i dT, sigma_i^2 dT).
ChainState vector_valued_step(const ChainState& state,
                              const MultiAgentConfig& cfg,
                              const ModelParams& params,
                              rng::Stream& stream);

// Campaigns. Draw i uses stream (seed, i); output is in index order and
// does not depend on the thread count.

std::vector<double> sample_stationary_c1_batch(const ModelParams& params,
                                               std::size_t n,
                                               std::uint64_t seed,
                                               unsigned threads = 0,
                                               double tol = 1e-8);

std::vector<double> sample_three_agent_batch(const MultiAgentConfig& cfg,
                                             const ModelParams& params,
                                             std::size_t n,
                                             std::uint64_t seed,
                                             unsigned threads = 0,
                                             double tol = 1e-8);

/// Values of a single two-agent chain Y(1..n_steps) started at y0.
std::vector<double> embedded_chain_run(const ModelParams& params,
                                       std::size_t n_steps,
                                       double y0,
                                       std::uint64_t seed,
                                       std::uint64_t stream = 0);

struct FourAgentSnapshots
{
    std::vector<double> x2_at_burn_in;
    std::vector<double> x3_at_burn_in;
    std::vector<double> x2_at_lag;
    std::vector<double> x3_at_lag;
};

/// Independent four-agent chains from (s1, s4); states after `burn_in` steps
/// and after `burn_in + lag` steps.
FourAgentSnapshots four_agent_campaign(const MultiAgentConfig& cfg,
                                       const ModelParams& params,
                                       std::size_t chains,
                                       std::size_t burn_in,
                                       std::size_t lag,
                                       std::uint64_t seed,
                                       unsigned threads = 0);

/// Stationary draws of the vector model, row-major n x d.
std::vector<double> vector_stationary_batch(const MultiAgentConfig& cfg,
                                            const ModelParams& params,
                                            std::size_t n,
                                            std::uint64_t seed,
                                            unsigned threads = 0,
                                            double tol = 1e-8);

}  // namespace opdyn
