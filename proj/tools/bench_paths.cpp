// Compares the serial path loop against the OpenMP one on a mid-size
// experiment and reports the speedup. The two must agree bit for bit.

#include <chrono>
#include <cstring>
#include <iostream>

#include "qsint/config.hpp"
#include "qsint/mc.hpp"

using namespace qsint;

namespace {

ExperimentConfig bench_config(int paths) {
    ExperimentConfig cfg;
    cfg.dimension = 2;
    cfg.initial_state = {1.0, 0.5};
    cfg.horizon = 1.0;
    cfg.fields.dimension = 2;
    cfg.fields.drift = make_linear_field(2, {0.2, -0.1, 0.05, -0.3});
    cfg.fields.wiener.push_back(make_linear_field(2, {0.3, 0.1, -0.2, 0.25}));
    JumpField jf;
    jf.index = 1;
    jf.field = make_linear_field(2, {-0.15, 0.05, 0.1, -0.2});
    jf.law = {1, 5.0, {{1.0, 1.0}}};
    cfg.fields.jumps.push_back(jf);
    JumpSpec spec;
    spec.index = 1;
    spec.intensity = 5;
    spec.sizes = {{Rat(1), Rat(1)}};
    cfg.jump_specs.push_back(spec);
    cfg.steps = {1.0 / 16, 1.0 / 32, 1.0 / 64};
    cfg.fine_multiplier = 16;
    cfg.paths = paths;
    cfg.schemes = {{SchemeKind::TaylorMs, 2}, {SchemeKind::Masri, 2}};
    cfg.reference = {SchemeKind::TaylorMs, 2};
    cfg.seed = 99;
    return cfg;
}

double run_once(const ExperimentConfig& cfg, Parallelism par, ConvergenceReport& report) {
    SimulateOptions opts;
    opts.with_timing = false;
    opts.parallelism = par;
    auto t0 = std::chrono::steady_clock::now();
    report = simulate_paths(cfg, opts);
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    int paths = argc > 1 ? std::atoi(argv[1]) : 400;
    ExperimentConfig cfg = bench_config(paths);

    ConvergenceReport serial, parallel;
    double ts = run_once(cfg, Parallelism::Serial, serial);
    double tp = run_once(cfg, Parallelism::OpenMP, parallel);

    bool identical = serial.noise_hash == parallel.noise_hash;
    for (size_t s = 0; identical && s < serial.schemes.size(); ++s)
        for (size_t i = 0; i < serial.schemes[s].points.size(); ++i)
            identical = identical && serial.schemes[s].points[i].mse ==
                                         parallel.schemes[s].points[i].mse;

    std::cout << "paths " << paths << "\n";
    std::cout << "serial   " << ts << " s\n";
    std::cout << "openmp   " << tp << " s\n";
    std::cout << "speedup  " << ts / tp << "x\n";
    std::cout << "results  " << (identical ? "bit-identical" : "MISMATCH") << "\n";
    return identical ? 0 : 1;
}
