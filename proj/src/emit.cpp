#include "qsint/emit.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace qsint {

std::string report_csv(const ConvergenceReport& report) {
    std::ostringstream os;
    os << "# strong error report; mse = sqrt(mean over paths of sup-squared deviation\n";
    os << "# from the fine-step reference over the coarse grid points)\n";
    os << "# reference: " << report.reference_name << " at fine step " << report.fine_step
       << "; shared-noise hash " << report.noise_hash << "\n";
    os << "# cpu_seconds: minimum over repeats of the standalone scheme loop, scaled\n";
    os << "# to the full path count; p is the Fourier term count used at that step\n";
    os << "scheme,h,mse,mse_se,cpu_seconds,p,M,paths,seed\n";
    os.precision(12);
    for (const auto& s : report.schemes)
        for (const auto& pt : s.points)
            os << s.name << "," << pt.h << "," << pt.mse << "," << pt.mse_se << ","
               << pt.cpu_seconds << "," << pt.fourier_terms << "," << pt.grid_points << ","
               << report.paths << "," << report.seed << "\n";
    return os.str();
}

namespace {

struct Range {
    double lo = 1e300, hi = -1e300;
    void feed(double x) {
        if (x <= 0) return;
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    bool ok() const { return hi > 0 && lo < 1e300; }
};

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

void draw_panel(std::ostringstream& os, const ConvergenceReport& report, double x0,
                bool vs_cpu) {
    const double w = 420, hgt = 360, pad = 50;
    Range rx, ry;
    for (const auto& s : report.schemes)
        for (const auto& pt : s.points) {
            rx.feed(vs_cpu ? pt.cpu_seconds : pt.h);
            ry.feed(pt.mse);
        }
    if (!rx.ok() || !ry.ok()) return;
    auto xmap = [&](double v) {
        return x0 + pad + (std::log10(v) - std::log10(rx.lo)) /
                              (std::log10(rx.hi) - std::log10(rx.lo) + 1e-12) * (w - 2 * pad);
    };
    auto ymap = [&](double v) {
        return hgt - pad - (std::log10(v) - std::log10(ry.lo)) /
                               (std::log10(ry.hi) - std::log10(ry.lo) + 1e-12) *
                               (hgt - 2 * pad);
    };
    os << "<rect x='" << x0 + pad << "' y='" << pad << "' width='" << w - 2 * pad
       << "' height='" << hgt - 2 * pad << "' fill='none' stroke='#888'/>\n";
    os << "<text x='" << x0 + w / 2 << "' y='" << hgt - 10
       << "' text-anchor='middle' font-size='13'>"
       << (vs_cpu ? "cpu seconds (log)" : "step size h (log)") << "</text>\n";
    os << "<text x='" << x0 + 14 << "' y='" << hgt / 2
       << "' text-anchor='middle' font-size='13' transform='rotate(-90 " << x0 + 14 << " "
       << hgt / 2 << ")'>strong error (log)</text>\n";
    int ci = 0;
    for (const auto& s : report.schemes) {
        std::ostringstream pts;
        for (const auto& pt : s.points) {
            double xv = vs_cpu ? pt.cpu_seconds : pt.h;
            if (xv <= 0 || pt.mse <= 0) continue;
            pts << xmap(xv) << "," << ymap(pt.mse) << " ";
        }
        const char* color = kColors[ci % 6];
        os << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='"
           << pts.str() << "'/>\n";
        for (const auto& pt : s.points) {
            double xv = vs_cpu ? pt.cpu_seconds : pt.h;
            if (xv <= 0 || pt.mse <= 0) continue;
            os << "<circle cx='" << xmap(xv) << "' cy='" << ymap(pt.mse)
               << "' r='3' fill='" << color << "'/>\n";
        }
        os << "<text x='" << x0 + pad + 8 << "' y='" << pad + 16 + 16 * ci
           << "' font-size='12' fill='" << color << "'>" << s.name << "</text>\n";
        ++ci;
    }
}

}  // namespace

std::string report_svg(const ConvergenceReport& report) {
    std::ostringstream os;
    os << "<?xml version='1.0' encoding='UTF-8'?>\n";
    os << "<svg xmlns='http://www.w3.org/2000/svg' width='880' height='380' "
          "viewBox='0 0 880 380'>\n";
    os << "<rect width='880' height='380' fill='white'/>\n";
    draw_panel(os, report, 0, false);
    draw_panel(os, report, 440, true);
    os << "</svg>\n";
    return os.str();
}

std::string report_gnuplot(const std::string& csv_name) {
    std::ostringstream os;
    os << "set datafile separator ','\n";
    os << "set logscale xy\n";
    os << "set key left top\n";
    os << "set xlabel 'step size h'\n";
    os << "set ylabel 'strong error'\n";
    os << "plot for [s in system(\"awk -F, 'NR>6 {print $1}' " << csv_name
       << " | sort -u\")] '" << csv_name
       << "' using 2:($1 eq s ? $3 : 1/0) with linespoints title s\n";
    os << "pause -1\n";
    return os.str();
}

std::vector<std::string> emit_report(const ConvergenceReport& report, const std::string& dir,
                                     const std::string& basename, const EmitFormats& formats) {
    namespace fs = std::filesystem;
    if (!dir.empty()) fs::create_directories(dir);
    std::vector<std::string> written;
    auto write = [&](const std::string& name, const std::string& content) {
        fs::path p = fs::path(dir.empty() ? "." : dir) / name;
        std::ofstream os(p);
        if (!os) throw std::runtime_error("cannot write " + p.string());
        os << content;
        written.push_back(p.string());
    };
    if (formats.csv) write(basename + ".csv", report_csv(report));
    if (formats.svg) write(basename + ".svg", report_svg(report));
    if (formats.gnuplot) write(basename + ".gp", report_gnuplot(basename + ".csv"));
    return written;
}

}  // namespace qsint
