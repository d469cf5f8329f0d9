#pragma once

#include <string>
#include <vector>

#include "loadfsk/dsp.hpp"

namespace loadfsk {

struct CurveSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

struct CurveOptions {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_y = false;
    int width = 720;
    int height = 480;
};

void write_curve_svg(const std::string& path, const std::vector<CurveSeries>& series,
                     const CurveOptions& opts);

/// Grayscale heatmap (dB scale), decimated to at most ~300x200 cells with
/// run-length merged rows to keep files small.
void write_spectrogram_svg(const std::string& path, const Spectrogram& sg,
                           const std::string& title);

}  // namespace loadfsk
