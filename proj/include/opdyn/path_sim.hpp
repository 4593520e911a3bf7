#pragma once

// Pathwise simulation of the jump-diffusion on a fixed step grid.
//
// Each step of length h moves X by mu*h + sigma*sqrt(h)*G and then, with
// probability 1 - exp(-lambda(X_left) h), applies the interaction X <- X/theta.
// The intensity is read at the left end of the step (predictable), and at
// most one interaction happens per step. The scheme is first order in h.
//
// C2 with alpha < 1 has an unbounded intensity at 0. It is simulated as C3
// with ceiling K = lambda * h^(-alpha/2) unless the caller supplies one; the
// ceiling only binds for |x| < h^(1/2), so it disappears as h -> 0.
// C2 with alpha >= 1 is rejected: started from 0 the interaction count is
// not finite on any interval.

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "opdyn/model.hpp"

namespace opdyn {

enum class RecordMode
{
    Full,      // every stride-th grid point plus every jump epoch
    Jumps,     // start, jump epochs, end
    Terminal,  // start and end only
};

RecordMode parse_record_mode(const std::string& name);

struct SimConfig
{
    double x0 = 0.0;
    double horizon = 1.0;
    double step = 1e-3;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;  // replicate index
    RecordMode record_mode = RecordMode::Full;
    std::size_t record_stride = 1;
    double cap = std::numeric_limits<double>::quiet_NaN();  // C2 ceiling override

    void validate() const;
};

struct SamplePath
{
    std::vector<double> times;
    std::vector<double> values;  // value after any jump at that time
    std::vector<std::uint8_t> is_jump;
    std::vector<double> jump_epochs;
    std::vector<double> jump_pre_values;
    std::size_t jump_count = 0;
    double theta = 2.0;
    double horizon = 0.0;
    RecordMode record_mode = RecordMode::Full;

    double terminal() const { return values.empty() ? 0.0 : values.back(); }
};

/// Bounded rate the step scheme actually uses for `rf` at step h.
/// Throws ConfigError for C2 with alpha >= 1.
RateFunction simulation_rate(const RateFunction& rf,
                             double step,
                             double cap_override = std::numeric_limits<double>::quiet_NaN());

/// Default C2 ceiling lambda * h^(-alpha/2).
double default_c2_cap(const ModelParams& params, double step);

SamplePath simulate_path(const ModelParams& params, const RateFunction& rf, const SimConfig& cfg);

/// Runs `replicates` paths on streams 0..replicates-1 (cfg.stream is ignored).
std::vector<SamplePath> simulate_replicates(const ModelParams& params,
                                            const RateFunction& rf,
                                            const SimConfig& cfg,
                                            std::size_t replicates,
                                            unsigned threads = 0);

/// Values of X at burn_in + k*sample_dt, k >= 1, up to the horizon. Uses the
/// last recorded value at or before each grid time, so the path must have
/// been recorded in Full mode at a stride dividing sample_dt.
std::vector<double> time_sampled_values(const SamplePath& path, double sample_dt, double burn_in);

/// Time-sampled values of many independent replicates, concatenated in
/// replicate order. Paths are recorded at the sampling stride only.
std::vector<double> time_sampled_campaign(const ModelParams& params,
                                          const RateFunction& rf,
                                          SimConfig cfg,
                                          std::size_t replicates,
                                          double sample_dt,
                                          double burn_in,
                                          unsigned threads = 0);

struct SurvivalEstimate
{
    double probability = 0.0;
    double std_error = 0.0;
    std::size_t trials = 0;
};

/// Monte Carlo estimate of P[first interaction time >= T] via
/// E[exp(-int_0^T lambda(X_t) dt)] over jump-free diffusion paths from z0,
/// trapezoid rule on the step grid.
SurvivalEstimate estimate_gamma1_survival(const ModelParams& params,
                                          const RateFunction& rf,
                                          double z0,
                                          double horizon,
                                          std::size_t trials,
                                          std::uint64_t seed,
                                          double step = 1e-3,
                                          unsigned threads = 0);

/// Same estimator on an increasing grid of horizons, sharing each path
/// across horizons. The estimates are non-increasing in T path by path.
std::vector<SurvivalEstimate> survival_curve(const ModelParams& params,
                                             const RateFunction& rf,
                                             double z0,
                                             const std::vector<double>& horizons,
                                             std::size_t trials,
                                             std::uint64_t seed,
                                             double step = 1e-3,
                                             unsigned threads = 0);

struct RegimeRow
{
    double cap = 0.0;
    double mean_jumps = 0.0;
    double std_error = 0.0;
    double burst_fraction = 0.0;
};

struct RegimeOptions
{
    double step = 1e-3;
    double burst_threshold = std::numeric_limits<double>::quiet_NaN();  // default 10*lambda*window
    std::uint64_t seed = 0;
    unsigned threads = 0;
};

/// Jump-count statistics of C3 paths started at 0 for each ceiling in `caps`.
/// Every ceiling reuses the same streams, so differences between rows come
/// from the ceiling and not from sampling noise.
std::vector<RegimeRow> regime_scan(const ModelParams& params,
                                   double alpha,
                                   const std::vector<double>& caps,
                                   double window,
                                   std::size_t trials,
                                   const RegimeOptions& options = {});

}  // namespace opdyn
