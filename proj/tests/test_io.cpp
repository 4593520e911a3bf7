#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "opdyn/io.hpp"
#include "opdyn/svg.hpp"

using namespace opdyn;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const auto dir = fs::temp_directory_path() / "opdyn_io_test";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("doubles round-trip through text")
{
    for (double v : {0.1, 1.0 / 3, -2.5e-300, 6.02214076e23, std::nextafter(1.0, 2.0)})
        CHECK(std::stod(io::format_double(v)) == v);
}

TEST_CASE("sample CSV round-trip")
{
    const auto path = scratch("samples.csv").string();
    const std::vector<double> v = {0.25, -1.0 / 7, 3e-12};
    io::write_samples_csv(path, v);
    CHECK(io::read_sample_csv(path) == v);

    io::write_samples_csv(path, {1, 2, 3, 4}, 2);
    CHECK(slurp(path) == "x1,x2\n1,2\n3,4\n");
    CHECK(io::read_sample_csv(path) == std::vector<double>{1, 3});

    std::ofstream(scratch("bad.csv")) << "x\n1\nfoo\n";
    CHECK_THROWS_AS(io::read_sample_csv(scratch("bad.csv").string()), ConfigError);
    CHECK_THROWS_AS(io::read_sample_csv(scratch("missing.csv").string()), ConfigError);
}

TEST_CASE("path CSV")
{
    SamplePath s;
    s.times = {0, 0.5, 1};
    s.values = {0, 2, 1};
    s.is_jump = {0, 0, 1};
    const auto path = scratch("path.csv");
    io::write_path_csv(path.string(), s);
    CHECK(slurp(path) == "t,x,is_jump\n0,0,0\n0.5,2,0\n1,1,1\n");
}

TEST_CASE("JSON")
{
    ModelParams p;
    auto j = io::to_json(p);
    CHECK(j["cap"] == "inf");
    CHECK(j["theta"] == 2.0);
    p.cap = 10;
    CHECK(io::to_json(p)["cap"] == 10.0);
    stats::ComparisonReport r;
    r.ks_distance = 0.1;
    r.reference = "x";
    CHECK(io::to_json(r)["ks_distance"] == 0.1);
    const auto path = scratch("a.json");
    io::write_json(path.string(), j);
    CHECK(nlohmann::json::parse(slurp(path)) == j);
}

TEST_CASE("SVG")
{
    svg::Plot plot(0, 1, 0, 2);
    plot.axes("x", "y", "t & <b>");
    plot.polyline({0, 0.5, 1}, {0, 2, 1});
    std::vector<double> edges;
    std::vector<double> heights;
    svg::histogram({0.1, 0.2, 0.2, 0.9}, 0, 1, 4, edges, heights);
    CHECK(edges.size() == 5);
    CHECK(heights[0] == doctest::Approx(3.0));
    CHECK(heights[3] == doctest::Approx(1.0));
    plot.bars(edges, heights);
    const auto s = plot.str();
    CHECK(s.find("<svg") != std::string::npos);
    CHECK(s.find("</svg>") != std::string::npos);
    CHECK(s.find("<polyline") != std::string::npos);
    CHECK(s.find("&amp;") != std::string::npos);
    CHECK(s.find("<b>") == std::string::npos);
}
