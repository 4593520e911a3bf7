#include "opdyn/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace opdyn::io {

namespace {

std::ofstream open_out(const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    return out;
}

// JSON has no infinity; encode it as a string.
json number(double v)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    if (std::isnan(v))
        return nullptr;
    return v;
}

}  // namespace

std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(const std::string& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns)
{
    if (header.size() != columns.size())
        throw std::invalid_argument("write_csv: header and column count differ");
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (const auto& c : columns)
        if (c.size() != rows)
            throw std::invalid_argument("write_csv: ragged columns");
    auto out = open_out(path);
    for (std::size_t j = 0; j < header.size(); ++j)
        out << (j ? "," : "") << header[j];
    out << '\n';
    for (std::size_t i = 0; i < rows; ++i)
    {
        for (std::size_t j = 0; j < columns.size(); ++j)
            out << (j ? "," : "") << format_double(columns[j][i]);
        out << '\n';
    }
}

void write_path_csv(const std::string& path, const SamplePath& p)
{
    auto out = open_out(path);
    out << "t,x,is_jump\n";
    for (std::size_t i = 0; i < p.times.size(); ++i)
        out << format_double(p.times[i]) << ',' << format_double(p.values[i]) << ',' << int(p.is_jump[i]) << '\n';
}

void write_samples_csv(const std::string& path, const std::vector<double>& values, std::size_t d)
{
    if (d == 0 || values.size() % d != 0)
        throw std::invalid_argument("write_samples_csv: size is not a multiple of d");
    auto out = open_out(path);
    if (d == 1)
        out << "x\n";
    else
        for (std::size_t j = 0; j < d; ++j)
            out << (j ? "," : "") << 'x' << j + 1 << (j + 1 == d ? "\n" : "");
    for (std::size_t i = 0; i < values.size(); i += d)
    {
        for (std::size_t j = 0; j < d; ++j)
            out << (j ? "," : "") << format_double(values[i + j]);
        out << '\n';
    }
}

std::vector<double> read_sample_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("sample", "cannot read " + path);
    std::vector<double> v;
    std::string line;
    bool first = true;
    std::size_t lineno = 0;
    while (std::getline(in, line))
    {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        const std::string cell = line.substr(0, line.find(','));
        char* end = nullptr;
        const double x = std::strtod(cell.c_str(), &end);
        const bool numeric = end != cell.c_str() && *end == '\0';
        if (!numeric)
        {
            if (first)
            {
                first = false;
                continue;
            }
            throw ConfigError("sample", path + ":" + std::to_string(lineno) + ": not a number");
        }
        first = false;
        v.push_back(x);
    }
    return v;
}

void write_json(const std::string& path, const json& j)
{
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

json to_json(const ModelParams& p)
{
    return {{"mu", p.mu},
            {"sigma", p.sigma},
            {"theta", p.theta},
            {"theta_prime", p.theta_prime()},
            {"lambda", p.lambda},
            {"alpha", p.alpha},
            {"cap", number(p.cap)}};
}

json to_json(const MultiAgentConfig& c)
{
    return {{"topology", to_string(c.topology)},
            {"s1", c.s1},
            {"s3", c.s3},
            {"s4", c.s4},
            {"q", c.q},
            {"mus", c.mus},
            {"sigmas", c.sigmas},
            {"d", c.d}};
}

json to_json(const ResidualReport& r)
{
    return {{"grid", r.grid},
            {"residuals", r.residuals},
            {"max_rel_residual", r.max_rel_residual},
            {"excluded_zone", r.excluded_zone},
            {"fd_step", r.fd_step}};
}

json to_json(const stats::ComparisonReport& r)
{
    return {{"ks_distance", r.ks_distance},
            {"wasserstein1", r.wasserstein1},
            {"cf_sup_error", r.cf_sup_error},
            {"sample_count", r.sample_count},
            {"reference", r.reference}};
}

json to_json(const stats::Summary& s)
{
    return {{"n", s.n},
            {"mean", s.mean},
            {"variance", s.variance},
            {"skewness", s.skewness},
            {"excess_kurtosis", s.excess_kurtosis},
            {"mean_std_error", s.mean_std_error}};
}

json density_metadata(const DensitySeries& d)
{
    return {{"kind", d.kind == DensityKind::Exponential ? "exponential" : "besselk"},
            {"params", to_json(d.params)},
            {"truncation", d.truncation},
            {"term_bound", d.term_bound},
            {"phi", d.phi},
            {"coefficients", d.coefficients},
            {"normalization", normalization_check(d)}};
}

}  // namespace opdyn::io
