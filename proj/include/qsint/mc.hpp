#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qsint/config.hpp"
#include "qsint/drivers.hpp"
#include "qsint/fields.hpp"
#include "qsint/scheme.hpp"

namespace qsint {

// One scheme update: y' = sum over rows of expr(sample) * operator(word)(y).
// The empty-word row contributes y itself.
std::vector<double> run_step(const SchemeTable& table, const StepSample& sample,
                             const std::vector<double>& y, const VectorFieldSet& fields);

double eval_expr(const IntegralExpr& expr, const StepSample& sample);

enum class Parallelism { Serial, OpenMP };

struct SchemePoint {
    double h = 0;
    double mse = 0;     // sqrt(mean over paths of sup-squared error)
    double mse_se = 0;  // delta-method standard error of the mse
    double cpu_seconds = 0;
    int fourier_terms = 0;
    int grid_points = 0;
};

struct SchemeSeries {
    std::string name;
    std::vector<SchemePoint> points;
    double slope = 0;       // fitted global order
    double slope_se = 0;
    int excluded_points = 0;  // pre-asymptotic ladder points left out of the fit
    bool fitted = false;
};

// Paired same-noise comparison at one step size: mean and standard error of
// (sup-squared error of a) - (sup-squared error of b) over paths.
struct PairedDiff {
    std::string a, b;
    double h = 0;
    double mean = 0;
    double se = 0;
};

struct ConvergenceReport {
    std::vector<SchemeSeries> schemes;
    std::vector<PairedDiff> paired;
    uint64_t seed = 0;
    int paths = 0;
    double fine_step = 0;
    uint64_t noise_hash = 0;  // hash of the shared fine-resolution noise
    std::string reference_name;
};

struct SimulateOptions {
    bool with_timing = true;
    Parallelism parallelism = Parallelism::OpenMP;
};

// The full experiment: shared fine-resolution noise per path, reference
// trajectory at the fine step, every scheme at every ladder step on the
// same noise via Chen aggregation, and (optionally) wall-clock timing of
// the standalone scheme loop with the Fourier term count scaled as 1/h.
ConvergenceReport simulate_paths(const ExperimentConfig& config,
                                 const SimulateOptions& opts = {});

// Least-squares slope of log(mse) against log(h) per scheme, admitting only
// steps at or below the largest h whose mse stays under half the initial
// state norm; excluded points are counted in the series.
void fit_order(ConvergenceReport& report, const std::vector<double>& y0);

// Plain integration of one scheme at one step size; returns the final state
// of every path. Used by the simulate subcommand and tests.
std::vector<std::vector<double>> integrate_paths(const ExperimentConfig& config,
                                                 const SchemeSpec& scheme, double h,
                                                 int paths,
                                                 Parallelism par = Parallelism::OpenMP,
                                                 std::vector<std::vector<double>>* trajectory0 = nullptr);

}  // namespace qsint
