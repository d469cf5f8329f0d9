#include "loadfsk/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>

namespace loadfsk {

namespace {

struct FileCloser {
    void operator()(FILE* f) const {
        if (f)
            std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<FILE, FileCloser>;

FilePtr open_or_throw(const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "w"));
    if (!f)
        throw std::runtime_error("cannot open for writing: " + path);
    return f;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

void write_curve_svg(const std::string& path, const std::vector<CurveSeries>& series,
                     const CurveOptions& opts) {
    auto f = open_or_throw(path);
    const int w = opts.width, h = opts.height;
    const int ml = 70, mr = 20, mt = 40, mb = 50;  // margins

    double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
    for (const auto& s : series)
        for (auto [x, y] : s.points) {
            if (opts.log_y && y <= 0.0)
                continue;
            const double yy = opts.log_y ? std::log10(y) : y;
            x_min = std::min(x_min, x);
            x_max = std::max(x_max, x);
            y_min = std::min(y_min, yy);
            y_max = std::max(y_max, yy);
        }
    if (x_min > x_max) {
        x_min = 0;
        x_max = 1;
        y_min = 0;
        y_max = 1;
    }
    if (x_max == x_min)
        x_max = x_min + 1;
    if (y_max == y_min)
        y_max = y_min + 1;

    auto px = [&](double x) {
        return ml + (x - x_min) / (x_max - x_min) * (w - ml - mr);
    };
    auto py = [&](double y) {
        const double yy = opts.log_y ? std::log10(y) : y;
        return h - mb - (yy - y_min) / (y_max - y_min) * (h - mt - mb);
    };

    std::fprintf(f.get(),
                 "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
                 "viewBox=\"0 0 %d %d\">\n<rect width=\"%d\" height=\"%d\" fill=\"white\"/>\n",
                 w, h, w, h, w, h);
    std::fprintf(f.get(),
                 "<text x=\"%d\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" "
                 "text-anchor=\"middle\">%s</text>\n",
                 w / 2, opts.title.c_str());

    // Axes with a handful of ticks.
    std::fprintf(f.get(),
                 "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" fill=\"none\" "
                 "stroke=\"#333\"/>\n",
                 ml, mt, w - ml - mr, h - mt - mb);
    for (int i = 0; i <= 5; ++i) {
        const double xv = x_min + (x_max - x_min) * i / 5.0;
        const double yv = y_min + (y_max - y_min) * i / 5.0;
        std::fprintf(f.get(),
                     "<text x=\"%.1f\" y=\"%d\" font-family=\"sans-serif\" font-size=\"11\" "
                     "text-anchor=\"middle\">%.3g</text>\n",
                     px(xv), h - mb + 16, xv);
        std::fprintf(f.get(),
                     "<text x=\"%d\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"11\" "
                     "text-anchor=\"end\">%s%.3g</text>\n",
                     ml - 6,
                     h - mb - (h - mt - mb) * i / 5.0 + 4.0,
                     opts.log_y ? "1e" : "", yv);
        std::fprintf(f.get(),
                     "<line x1=\"%.1f\" y1=\"%d\" x2=\"%.1f\" y2=\"%d\" stroke=\"#ddd\"/>\n",
                     px(xv), mt, px(xv), h - mb);
    }
    std::fprintf(f.get(),
                 "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" font-size=\"13\" "
                 "text-anchor=\"middle\">%s</text>\n",
                 w / 2, h - 12, opts.x_label.c_str());
    std::fprintf(f.get(),
                 "<text x=\"16\" y=\"%d\" font-family=\"sans-serif\" font-size=\"13\" "
                 "text-anchor=\"middle\" transform=\"rotate(-90 16 %d)\">%s</text>\n",
                 h / 2, h / 2, opts.y_label.c_str());

    for (std::size_t s = 0; s < series.size(); ++s) {
        std::fprintf(f.get(), "<polyline fill=\"none\" stroke=\"%s\" stroke-width=\"1.5\" points=\"",
                     kPalette[s % 6]);
        for (auto [x, y] : series[s].points) {
            if (opts.log_y && y <= 0.0)
                continue;
            std::fprintf(f.get(), "%.1f,%.1f ", px(x), py(y));
        }
        std::fprintf(f.get(), "\"/>\n");
        std::fprintf(f.get(),
                     "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" font-size=\"12\" "
                     "fill=\"%s\">%s</text>\n",
                     ml + 10, mt + 18 + 16 * static_cast<int>(s), kPalette[s % 6],
                     series[s].label.c_str());
    }
    std::fprintf(f.get(), "</svg>\n");
}

void write_spectrogram_svg(const std::string& path, const Spectrogram& sg,
                           const std::string& title) {
    if (sg.power.empty())
        throw std::invalid_argument("empty spectrogram");
    auto f = open_or_throw(path);

    const std::size_t max_cols = 300, max_rows = 200;
    const std::size_t t_step = std::max<std::size_t>(1, sg.power.size() / max_cols);
    const std::size_t b_step = std::max<std::size_t>(1, sg.n_bins / max_rows);
    const std::size_t cols = (sg.power.size() + t_step - 1) / t_step;
    const std::size_t rows = (sg.n_bins + b_step - 1) / b_step;

    // Max-pool the power grid, then render in dB below the global peak.
    std::vector<std::vector<double>> grid(rows, std::vector<double>(cols, 0.0));
    double peak = 0.0;
    for (std::size_t t = 0; t < sg.power.size(); ++t)
        for (std::size_t b = 0; b < sg.n_bins; ++b) {
            auto& cell = grid[b / b_step][t / t_step];
            cell = std::max(cell, sg.power[t][b]);
            peak = std::max(peak, sg.power[t][b]);
        }
    if (peak <= 0.0)
        peak = 1.0;

    const int cw = 3, chh = 3;
    const int ml = 60, mt = 40, mb = 40, mr = 20;
    const int w = ml + mr + static_cast<int>(cols) * cw;
    const int h = mt + mb + static_cast<int>(rows) * chh;

    std::fprintf(f.get(),
                 "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\">\n"
                 "<rect width=\"%d\" height=\"%d\" fill=\"black\"/>\n",
                 w, h, w, h);
    std::fprintf(f.get(),
                 "<text x=\"%d\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\" "
                 "fill=\"white\" text-anchor=\"middle\">%s</text>\n",
                 w / 2, title.c_str());

    const double floor_db = -60.0;
    for (std::size_t r = 0; r < rows; ++r) {
        // Run-length merge cells of equal quantized level along the row.
        std::size_t c = 0;
        while (c < cols) {
            const double db = 10.0 * std::log10(grid[r][c] / peak + 1e-30);
            const int level = static_cast<int>(
                std::clamp((db - floor_db) / -floor_db, 0.0, 1.0) * 255.0);
            std::size_t run = 1;
            while (c + run < cols) {
                const double db2 = 10.0 * std::log10(grid[r][c + run] / peak + 1e-30);
                const int level2 = static_cast<int>(
                    std::clamp((db2 - floor_db) / -floor_db, 0.0, 1.0) * 255.0);
                if (level2 != level)
                    break;
                ++run;
            }
            if (level > 8) {  // skip near-black cells; background is black
                const int y = mt + static_cast<int>(rows - 1 - r) * chh;
                std::fprintf(f.get(),
                             "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" "
                             "fill=\"rgb(%d,%d,%d)\"/>\n",
                             ml + static_cast<int>(c) * cw, y, static_cast<int>(run) * cw, chh,
                             level, level, std::min(255, level + 30));
            }
            c += run;
        }
    }

    // Axis labels: time along x, frequency along y.
    const double total_s = sg.frame_time(sg.power.size() - 1);
    const double nyquist = sg.sample_rate / 2.0;
    for (int i = 0; i <= 4; ++i) {
        std::fprintf(f.get(),
                     "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" font-size=\"11\" "
                     "fill=\"white\" text-anchor=\"middle\">%.2fs</text>\n",
                     ml + static_cast<int>(cols) * cw * i / 4, h - mb + 16, total_s * i / 4.0);
        std::fprintf(f.get(),
                     "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" font-size=\"11\" "
                     "fill=\"white\" text-anchor=\"end\">%.1fk</text>\n",
                     ml - 5, mt + static_cast<int>(rows) * chh * (4 - i) / 4 + 4,
                     nyquist * i / 4.0 / 1000.0);
    }
    std::fprintf(f.get(), "</svg>\n");
}

}  // namespace loadfsk
