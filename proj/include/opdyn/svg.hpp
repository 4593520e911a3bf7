#pragma once

// Minimal SVG 1.1 plots: a frame with ticks, polylines and histogram bars.

#include <string>
#include <vector>

namespace opdyn::svg {

class Plot
{
  public:
    Plot(double x_min, double x_max, double y_min, double y_max, int width = 640, int height = 420);

    void axes(const std::string& x_label, const std::string& y_label, const std::string& title = "");
    void polyline(const std::vector<double>& xs, const std::vector<double>& ys, const std::string& color = "#c0392b");
    void markers(const std::vector<double>& xs, const std::vector<double>& ys, const std::string& color = "#2c3e50");
    /// One bar per bin [edges[i], edges[i+1]) with height heights[i].
    void bars(const std::vector<double>& edges, const std::vector<double>& heights, const std::string& color = "#95a5a6");

    std::string str() const;
    void save(const std::string& path) const;

  private:
    double sx(double x) const;
    double sy(double y) const;

    double x0_, x1_, y0_, y1_;
    int w_, h_;
    static constexpr double kMargin = 56.0;
    std::string body_;
};

/// Density-normalized histogram of `sample` on [lo, hi] with `bins` bins;
/// returns the bin edges and heights.
void histogram(const std::vector<double>& sample,
               double lo,
               double hi,
               std::size_t bins,
               std::vector<double>& edges,
               std::vector<double>& heights);

}  // namespace opdyn::svg
