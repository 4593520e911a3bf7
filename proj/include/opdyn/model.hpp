#pragma once

// Model parameters, interaction-rate families and the jump operator shared by
// the simulation and analytic modules.
//
// The two-agent model tracks the opinion difference X between a non-stubborn
// agent and a stubborn agent at 0:
//
//   dX = mu dt + sigma dW - X(t-)/theta' dN,   1/theta + 1/theta' = 1,
//
// where N has stochastic intensity lambda(X(t-)). Power-law rates
// lambda/|x|^alpha are a smoothed bounded-confidence rule: close opinions
// interact more often, distant ones rarely.

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace opdyn {

/// Invalid configuration value; key() names the offending parameter.
class ConfigError : public std::invalid_argument
{
  public:
    ConfigError(std::string key, const std::string& what)
        : std::invalid_argument(key + ": " + what), key_(std::move(key))
    {
    }

    const std::string& key() const noexcept { return key_; }

  private:
    std::string key_;
};

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

struct ModelParams
{
    double mu = 0.0;
    double sigma = 1.0;
    double theta = 2.0;
    double lambda = 1.0;
    double alpha = 0.0;
    double cap = kUnbounded;  // rate ceiling K; infinity means no ceiling

    /// 1/(1 - 1/theta); never stored, so 1/theta + 1/theta' = 1 holds.
    double theta_prime() const { return 1.0 / (1.0 - 1.0 / theta); }

    /// Throws ConfigError naming the first invalid field.
    void validate() const;
};

enum class RateFamily
{
    C1,  // constant lambda
    C2,  // lambda/|x|^alpha, infinite at 0 when alpha > 0
    C3,  // min(lambda/|x|^alpha, K)
};

RateFamily parse_rate_family(const std::string& name);
std::string to_string(RateFamily family);

/// Interaction rate lambda(x); immutable, cheap to copy.
class RateFunction
{
  public:
    RateFunction(RateFamily family, const ModelParams& params);

    RateFamily family() const { return family_; }
    const ModelParams& params() const { return params_; }

    /// Rate at opinion difference x. C2 returns +inf at x = 0 for alpha > 0.
    double operator()(double x) const;

    /// True when the rate is bounded over the whole line.
    bool bounded() const;

    /// Same family and parameters with a different ceiling (C2 becomes C3).
    RateFunction with_cap(double cap) const;

  private:
    RateFamily family_;
    ModelParams params_;
};

double rate_evaluate(const RateFunction& rf, double x);

/// Post-interaction opinion difference x/theta.
constexpr double jump_apply(double x, double theta)
{
    return x / theta;
}

enum class Topology
{
    TwoAgent,
    ThreeAgent,
    FourAgent,
    Vector,
};

Topology parse_topology(const std::string& name);
std::string to_string(Topology topology);

/// Multi-agent settings. The three-agent model has stubborn agents at s1 < s3
/// and the non-stubborn agent meets s1 with probability q. The four-agent
/// model has stubborn s1, s4 and two coupled non-stubborn agents with their
/// own (mu_i, sigma_i); q is the probability that agent 2 is the one updating.
/// The vector model has d coordinates with their own (mu_i, sigma_i).
struct MultiAgentConfig
{
    Topology topology = Topology::TwoAgent;
    double s1 = 0.0;
    double s3 = 1.0;
    double s4 = 1.0;
    double q = 0.5;
    std::vector<double> mus;
    std::vector<double> sigmas;
    std::size_t d = 1;

    void validate() const;
};

}  // namespace opdyn
