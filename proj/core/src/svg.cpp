#include "rbm/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "rbm/errors.hpp"

namespace rbm::svg {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 440.0;
constexpr double kMarginL = 70.0, kMarginR = 20.0, kMarginT = 40.0, kMarginB = 50.0;

struct Mapper {
    double x0, x1, y0, y1;

    double px(double x) const {
        return kMarginL + (x - x0) / (x1 - x0) * (kWidth - kMarginL - kMarginR);
    }
    double py(double y) const {
        return kHeight - kMarginB - (y - y0) / (y1 - y0) * (kHeight - kMarginT - kMarginB);
    }
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

void open_svg(std::ofstream& out, const std::string& title) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";
}

void axes(std::ofstream& out, const Mapper& map, const std::string& xlabel,
          const std::string& ylabel, bool log_ticks) {
    out << "<rect x=\"" << kMarginL << "\" y=\"" << kMarginT << "\" width=\""
        << kWidth - kMarginL - kMarginR << "\" height=\"" << kHeight - kMarginT - kMarginB
        << "\" fill=\"none\" stroke=\"#444\"/>\n";
    // tick marks at integer positions of the (possibly log10) coordinate
    const auto tick_text = [log_ticks](double v) {
        if (!log_ticks) return fmt(v);
        std::ostringstream os;
        os << "1e" << static_cast<int>(std::lround(v));
        return os.str();
    };
    const double xstep = std::max(1.0, std::floor((map.x1 - map.x0) / 6.0));
    for (double v = std::ceil(map.x0); v <= map.x1 + 1e-9; v += xstep) {
        out << "<line x1=\"" << map.px(v) << "\" y1=\"" << kHeight - kMarginB << "\" x2=\""
            << map.px(v) << "\" y2=\"" << kHeight - kMarginB + 5 << "\" stroke=\"#444\"/>\n"
            << "<text x=\"" << map.px(v) << "\" y=\"" << kHeight - kMarginB + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << tick_text(v) << "</text>\n";
    }
    const double ystep = std::max(1.0, std::floor((map.y1 - map.y0) / 6.0));
    for (double v = std::ceil(map.y0); v <= map.y1 + 1e-9; v += ystep) {
        out << "<line x1=\"" << kMarginL - 5 << "\" y1=\"" << map.py(v) << "\" x2=\"" << kMarginL
            << "\" y2=\"" << map.py(v) << "\" stroke=\"#444\"/>\n"
            << "<text x=\"" << kMarginL - 8 << "\" y=\"" << map.py(v) + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << tick_text(v) << "</text>\n";
    }
    out << "<text x=\"" << (kMarginL + kWidth - kMarginR) / 2 << "\" y=\"" << kHeight - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << xlabel
        << "</text>\n"
        << "<text x=\"16\" y=\"" << (kMarginT + kHeight - kMarginB) / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
        << "transform=\"rotate(-90 16 " << (kMarginT + kHeight - kMarginB) / 2 << ")\">"
        << ylabel << "</text>\n";
}

void polyline(std::ofstream& out, const Mapper& map, const std::vector<double>& xs,
              const std::vector<double>& ys, const std::string& color, bool dashed,
              bool markers) {
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\"";
    if (dashed) out << " stroke-dasharray=\"7 4\"";
    out << " points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        out << fmt(map.px(xs[i])) << "," << fmt(map.py(ys[i])) << " ";
    }
    out << "\"/>\n";
    if (markers) {
        for (std::size_t i = 0; i < xs.size(); ++i) {
            out << "<circle cx=\"" << fmt(map.px(xs[i])) << "\" cy=\"" << fmt(map.py(ys[i]))
                << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        }
    }
}

} // namespace

void write_loglog_plot(const std::string& path, const std::string& title,
                       const std::string& xlabel, const std::string& ylabel,
                       const std::vector<Series>& series, const std::vector<Band>& bands) {
    // work in log10 coordinates; nonpositive values are clipped to the
    // smallest positive value present
    double min_pos = std::numeric_limits<double>::infinity();
    for (const auto& s : series) {
        for (double v : s.y) {
            if (v > 0.0) min_pos = std::min(min_pos, v);
        }
    }
    for (const auto& b : bands) {
        for (double v : b.lo) {
            if (v > 0.0) min_pos = std::min(min_pos, v);
        }
    }
    if (!std::isfinite(min_pos)) min_pos = 1e-12;
    const auto ly = [&](double v) { return std::log10(std::max(v, min_pos * 0.5)); };

    Mapper map{std::numeric_limits<double>::infinity(),
               -std::numeric_limits<double>::infinity(),
               std::numeric_limits<double>::infinity(),
               -std::numeric_limits<double>::infinity()};
    const auto grow = [&](double x, double y) {
        map.x0 = std::min(map.x0, x);
        map.x1 = std::max(map.x1, x);
        map.y0 = std::min(map.y0, y);
        map.y1 = std::max(map.y1, y);
    };
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) grow(std::log10(s.x[i]), ly(s.y[i]));
    }
    for (const auto& b : bands) {
        for (std::size_t i = 0; i < b.x.size(); ++i) {
            grow(std::log10(b.x[i]), ly(b.lo[i]));
            grow(std::log10(b.x[i]), ly(b.hi[i]));
        }
    }
    map.x0 -= 0.1;
    map.x1 += 0.1;
    const double pad = 0.08 * (map.y1 - map.y0 + 0.2);
    map.y0 -= pad;
    map.y1 += pad;

    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write SVG file: " + path);
    open_svg(out, title);
    for (const auto& b : bands) {
        out << "<polygon fill=\"" << b.color << "\" fill-opacity=\"" << b.opacity
            << "\" stroke=\"none\" points=\"";
        for (std::size_t i = 0; i < b.x.size(); ++i) {
            out << fmt(map.px(std::log10(b.x[i]))) << "," << fmt(map.py(ly(b.hi[i]))) << " ";
        }
        for (std::size_t i = b.x.size(); i-- > 0;) {
            out << fmt(map.px(std::log10(b.x[i]))) << "," << fmt(map.py(ly(b.lo[i]))) << " ";
        }
        out << "\"/>\n";
    }
    double legend_y = kMarginT + 16.0;
    for (const auto& s : series) {
        std::vector<double> xs(s.x.size()), ys(s.y.size());
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            xs[i] = std::log10(s.x[i]);
            ys[i] = ly(s.y[i]);
        }
        polyline(out, map, xs, ys, s.color, s.dashed, s.markers);
        if (!s.label.empty()) {
            out << "<text x=\"" << kWidth - kMarginR - 8 << "\" y=\"" << legend_y
                << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\""
                << s.color << "\">" << s.label << "</text>\n";
            legend_y += 14.0;
        }
    }
    axes(out, map, xlabel, ylabel, true);
    out << "</svg>\n";
}

void write_path_plot(const std::string& path, const std::string& title,
                     const std::vector<double>& times, const std::vector<double>& log_price,
                     const std::vector<double>& log_vol) {
    if (times.size() != log_price.size() || times.size() != log_vol.size()) {
        throw ConfigError("path plot arrays must share one grid");
    }
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write SVG file: " + path);
    const double panel_h = 200.0;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << 2 * panel_h + 60 << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";

    const auto panel = [&](double top, const std::vector<double>& ys, const std::string& label,
                           const std::string& color, bool step) {
        double y0 = *std::min_element(ys.begin(), ys.end());
        double y1 = *std::max_element(ys.begin(), ys.end());
        if (y1 - y0 < 1e-12) {
            y0 -= 1.0;
            y1 += 1.0;
        }
        const double padding = 0.05 * (y1 - y0);
        y0 -= padding;
        y1 += padding;
        const double x0 = times.front(), x1 = times.back();
        const auto px = [&](double x) {
            return kMarginL + (x - x0) / (x1 - x0) * (kWidth - kMarginL - kMarginR);
        };
        const auto py = [&](double y) {
            return top + panel_h - 20 - (y - y0) / (y1 - y0) * (panel_h - 40);
        };
        out << "<rect x=\"" << kMarginL << "\" y=\"" << top << "\" width=\""
            << kWidth - kMarginL - kMarginR << "\" height=\"" << panel_h - 20
            << "\" fill=\"none\" stroke=\"#444\"/>\n";
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" points=\"";
        for (std::size_t i = 0; i < times.size(); ++i) {
            if (step && i > 0) {
                out << fmt(px(times[i])) << "," << fmt(py(ys[i - 1])) << " ";
            }
            out << fmt(px(times[i])) << "," << fmt(py(ys[i])) << " ";
        }
        out << "\"/>\n<text x=\"" << kMarginL + 6 << "\" y=\"" << top + 16
            << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << color << "\">"
            << label << "</text>\n";
    };
    panel(32.0, log_price, "log-price", "#1f6fb2", true);
    panel(32.0 + panel_h, log_vol, "log-volatility", "#c23b22", false);
    out << "</svg>\n";
}

} // namespace rbm::svg
