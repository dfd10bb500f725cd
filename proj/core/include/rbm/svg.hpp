#pragma once

#include <string>
#include <vector>

namespace rbm::svg {

struct Series {
    std::vector<double> x;
    std::vector<double> y;
    std::string label;
    std::string color = "#1f6fb2";
    bool dashed = false;
    bool markers = false;
};

struct Band {
    std::vector<double> x;
    std::vector<double> lo;
    std::vector<double> hi;
    std::string color = "#1f6fb2";
    double opacity = 0.15;
};

// Log-log scatter/line plot with shaded uncertainty bands; the layout used
// for the weak-error and kernel-functional figures.
void write_loglog_plot(const std::string& path, const std::string& title,
                       const std::string& xlabel, const std::string& ylabel,
                       const std::vector<Series>& series, const std::vector<Band>& bands);

// Two stacked panels sharing the time axis: a step plot of the log-price
// and a line plot of the log-volatility.
void write_path_plot(const std::string& path, const std::string& title,
                     const std::vector<double>& times, const std::vector<double>& log_price,
                     const std::vector<double>& log_vol);

} // namespace rbm::svg
