#pragma once

#include <string>

#include "qsint/mc.hpp"

namespace qsint {

// CSV with one row per (scheme, h); columns
// scheme,h,mse,mse_se,cpu_seconds,p,M,paths,seed. Header comments document
// that the sup norm runs over the coarse grid points.
std::string report_csv(const ConvergenceReport& report);

// Self-contained log-log SVG charts: error against step size and error
// against cpu time.
std::string report_svg(const ConvergenceReport& report);

// gnuplot script reading the CSV next to it.
std::string report_gnuplot(const std::string& csv_name);

struct EmitFormats {
    bool csv = true;
    bool svg = false;
    bool gnuplot = false;
};

// Writes report files under dir with the given basename; returns the paths.
std::vector<std::string> emit_report(const ConvergenceReport& report, const std::string& dir,
                                     const std::string& basename, const EmitFormats& formats);

}  // namespace qsint
