#include "opdyn/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace opdyn {

namespace {

std::string lowercase(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    return s;
}

}  // namespace

void ModelParams::validate() const
{
    if (!std::isfinite(mu))
        throw ConfigError("mu", "must be finite");
    if (!(sigma > 0) || !std::isfinite(sigma))
        throw ConfigError("sigma", "must be > 0");
    if (!(theta > 1) || !std::isfinite(theta))
        throw ConfigError("theta", "must be > 1");
    if (!(lambda > 0) || !std::isfinite(lambda))
        throw ConfigError("lambda", "must be > 0");
    if (!(alpha >= 0) || !std::isfinite(alpha))
        throw ConfigError("alpha", "must be >= 0");
    if (!(cap > 0))
        throw ConfigError("cap", "must be > 0 or unbounded");
}

RateFamily parse_rate_family(const std::string& name)
{
    auto n = lowercase(name);
    if (n == "c1")
        return RateFamily::C1;
    if (n == "c2")
        return RateFamily::C2;
    if (n == "c3")
        return RateFamily::C3;
    throw ConfigError("family", "expected one of c1, c2, c3, got '" + name + "'");
}

std::string to_string(RateFamily family)
{
    switch (family)
    {
        case RateFamily::C1:
            return "c1";
        case RateFamily::C2:
            return "c2";
        case RateFamily::C3:
            return "c3";
    }
    return "?";
}

RateFunction::RateFunction(RateFamily family, const ModelParams& params)
    : family_(family), params_(params)
{
    params_.validate();
    if (family_ == RateFamily::C3 && !std::isfinite(params_.cap))
        throw ConfigError("cap", "family c3 needs a finite rate ceiling");
}

double RateFunction::operator()(double x) const
{
    const double lam = params_.lambda;
    if (family_ == RateFamily::C1 || params_.alpha == 0.0)
        return family_ == RateFamily::C3 ? std::min(lam, params_.cap) : lam;

    const double ax = std::abs(x);
    double r = ax == 0.0 ? kUnbounded : lam / std::pow(ax, params_.alpha);
    if (family_ == RateFamily::C3)
        r = std::min(r, params_.cap);
    return r;
}

bool RateFunction::bounded() const
{
    return family_ != RateFamily::C2 || params_.alpha == 0.0;
}

RateFunction RateFunction::with_cap(double cap) const
{
    ModelParams p = params_;
    p.cap = cap;
    auto fam = family_ == RateFamily::C1 ? RateFamily::C1 : RateFamily::C3;
    return RateFunction(fam, p);
}

double rate_evaluate(const RateFunction& rf, double x)
{
    return rf(x);
}

Topology parse_topology(const std::string& name)
{
    auto n = lowercase(name);
    if (n == "two-agent" || n == "two")
        return Topology::TwoAgent;
    if (n == "three-agent" || n == "three")
        return Topology::ThreeAgent;
    if (n == "four-agent" || n == "four")
        return Topology::FourAgent;
    if (n == "vector")
        return Topology::Vector;
    throw ConfigError("topology",
                      "expected two-agent, three-agent, four-agent or vector, got '"
                          + name + "'");
}

std::string to_string(Topology topology)
{
    switch (topology)
    {
        case Topology::TwoAgent:
            return "two-agent";
        case Topology::ThreeAgent:
            return "three-agent";
        case Topology::FourAgent:
            return "four-agent";
        case Topology::Vector:
            return "vector";
    }
    return "?";
}

void MultiAgentConfig::validate() const
{
    if (!(q >= 0.0 && q <= 1.0))
        throw ConfigError("q", "must lie in [0, 1]");
    if (d < 1)
        throw ConfigError("d", "must be >= 1");
    switch (topology)
    {
        case Topology::ThreeAgent:
            if (!(s1 <= s3))
                throw ConfigError("s3", "three-agent model needs s1 <= s3");
            break;
        case Topology::FourAgent:
            if (mus.size() != 2 || sigmas.size() != 2)
                throw ConfigError("sigma", "four-agent model needs two (mu, sigma) pairs");
            break;
        case Topology::Vector:
            if (mus.size() != d || sigmas.size() != d)
                throw ConfigError("d", "vector model needs d (mu, sigma) pairs");
            break;
        case Topology::TwoAgent:
            break;
    }
    for (double s : sigmas)
        if (!(s > 0))
            throw ConfigError("sigma", "per-agent sigma must be > 0");
}

}  // namespace opdyn
