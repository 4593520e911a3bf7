#include "opdyn/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace opdyn::svg {

namespace {

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s)
    {
        switch (c)
        {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

Plot::Plot(double x_min, double x_max, double y_min, double y_max, int width, int height)
    : x0_(x_min), x1_(x_max), y0_(y_min), y1_(y_max), w_(width), h_(height)
{
    if (!(x_max > x_min) || !(y_max > y_min))
        throw std::invalid_argument("svg::Plot: empty range");
}

double Plot::sx(double x) const
{
    return kMargin + (x - x0_) / (x1_ - x0_) * (w_ - 1.5 * kMargin);
}

double Plot::sy(double y) const
{
    return h_ - kMargin + (y0_ - y) / (y1_ - y0_) * (h_ - 1.5 * kMargin);
}

void Plot::axes(const std::string& x_label, const std::string& y_label, const std::string& title)
{
    const double l = sx(x0_), r = sx(x1_), b = sy(y0_), t = sy(y1_);
    body_ += "<rect x=\"" + num(l) + "\" y=\"" + num(t) + "\" width=\"" + num(r - l) + "\" height=\"" + num(b - t)
             + "\" fill=\"none\" stroke=\"#333\"/>\n";
    for (int i = 0; i <= 4; ++i)
    {
        const double xv = x0_ + (x1_ - x0_) * i / 4.0;
        const double yv = y0_ + (y1_ - y0_) * i / 4.0;
        body_ += "<line x1=\"" + num(sx(xv)) + "\" y1=\"" + num(b) + "\" x2=\"" + num(sx(xv)) + "\" y2=\"" + num(b + 5)
                 + "\" stroke=\"#333\"/>\n";
        body_ += "<text x=\"" + num(sx(xv)) + "\" y=\"" + num(b + 18) + "\" font-size=\"11\" text-anchor=\"middle\">"
                 + tick_label(xv) + "</text>\n";
        body_ += "<line x1=\"" + num(l - 5) + "\" y1=\"" + num(sy(yv)) + "\" x2=\"" + num(l) + "\" y2=\"" + num(sy(yv))
                 + "\" stroke=\"#333\"/>\n";
        body_ += "<text x=\"" + num(l - 8) + "\" y=\"" + num(sy(yv) + 4) + "\" font-size=\"11\" text-anchor=\"end\">"
                 + tick_label(yv) + "</text>\n";
    }
    body_ += "<text x=\"" + num((l + r) / 2) + "\" y=\"" + num(h_ - 12.0) + "\" font-size=\"13\" text-anchor=\"middle\">"
             + escape(x_label) + "</text>\n";
    body_ += "<text x=\"14\" y=\"" + num((t + b) / 2) + "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
             + num((t + b) / 2) + ")\">" + escape(y_label) + "</text>\n";
    if (!title.empty())
        body_ += "<text x=\"" + num((l + r) / 2) + "\" y=\"20\" font-size=\"14\" text-anchor=\"middle\">" + escape(title)
                 + "</text>\n";
}

void Plot::polyline(const std::vector<double>& xs, const std::vector<double>& ys, const std::string& color)
{
    std::string pts;
    for (std::size_t i = 0; i < std::min(xs.size(), ys.size()); ++i)
    {
        if (!std::isfinite(xs[i]) || !std::isfinite(ys[i]))
            continue;
        pts += num(sx(xs[i])) + "," + num(sy(std::clamp(ys[i], y0_, y1_))) + " ";
    }
    body_ += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.6\"/>\n";
}

void Plot::markers(const std::vector<double>& xs, const std::vector<double>& ys, const std::string& color)
{
    for (std::size_t i = 0; i < std::min(xs.size(), ys.size()); ++i)
        body_ += "<circle cx=\"" + num(sx(xs[i])) + "\" cy=\"" + num(sy(ys[i])) + "\" r=\"3\" fill=\"" + color + "\"/>\n";
}

void Plot::bars(const std::vector<double>& edges, const std::vector<double>& heights, const std::string& color)
{
    for (std::size_t i = 0; i + 1 < edges.size() && i < heights.size(); ++i)
    {
        const double top = sy(std::min(heights[i], y1_));
        body_ += "<rect x=\"" + num(sx(edges[i])) + "\" y=\"" + num(top) + "\" width=\""
                 + num(sx(edges[i + 1]) - sx(edges[i])) + "\" height=\"" + num(sy(y0_) - top) + "\" fill=\"" + color
                 + "\" stroke=\"white\" stroke-width=\"0.5\"/>\n";
    }
}

std::string Plot::str() const
{
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
           + std::to_string(w_) + "\" height=\"" + std::to_string(h_) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
           + body_ + "</svg>\n";
}

void Plot::save(const std::string& path) const
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << str();
}

void histogram(const std::vector<double>& sample,
               double lo,
               double hi,
               std::size_t bins,
               std::vector<double>& edges,
               std::vector<double>& heights)
{
    if (bins == 0 || !(hi > lo))
        throw std::invalid_argument("histogram: bad range");
    edges.resize(bins + 1);
    heights.assign(bins, 0.0);
    const double w = (hi - lo) / static_cast<double>(bins);
    for (std::size_t i = 0; i <= bins; ++i)
        edges[i] = lo + w * static_cast<double>(i);
    for (double x : sample)
    {
        if (x < lo || x >= hi)
            continue;
        heights[std::min(bins - 1, static_cast<std::size_t>((x - lo) / w))] += 1.0;
    }
    const double norm = sample.empty() ? 1.0 : 1.0 / (static_cast<double>(sample.size()) * w);
    for (double& h : heights)
        h *= norm;
}

}  // namespace opdyn::svg
