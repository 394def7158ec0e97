#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "qsint/config.hpp"
#include "qsint/emit.hpp"
#include "qsint/mc.hpp"
#include "qsint/scheme.hpp"
#include "qsint/verify.hpp"

using namespace qsint;

namespace {

int cmd_scheme(const std::string& config_path, int order, const std::string& grading,
               const std::string& kind, const std::string& out_path) {
    ExperimentConfig cfg = load_config(config_path);
    SchemeSpec spec = parse_scheme_spec(kind, grading, order);
    auto alphabet = cfg.make_alphabet(order + 1);
    SchemeTable table = cfg.make_table(spec, *alphabet);
    std::string text = serialize(table);
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
    } else {
        std::ofstream os(out_path);
        if (!os) {
            std::cerr << "cannot write " << out_path << "\n";
            return 1;
        }
        os << text;
        std::cerr << "wrote " << table.rows.size() << " rows to " << out_path << "\n";
    }
    return 0;
}

int cmd_verify(const std::string& suite, const VerifyOptions& opts) {
    std::vector<std::string> suites;
    if (suite == "all")
        suites = verify_suite_names();
    else
        suites.push_back(suite);
    bool all_pass = true;
    for (const auto& s : suites) {
        for (const auto& r : run_verify_suite(s, opts)) {
            std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << s << ": " << r.name;
            if (!r.detail.empty()) std::cout << "  (" << r.detail << ")";
            std::cout << "\n";
            all_pass = all_pass && r.pass;
        }
    }
    return all_pass ? 0 : 1;
}

int cmd_simulate(const std::string& config_path, std::string scheme_name, double h,
                 int paths, const std::string& out_path, const std::string& dump_path,
                 bool serial) {
    ExperimentConfig cfg = load_config(config_path);
    SchemeSpec spec = cfg.schemes.at(0);
    if (!scheme_name.empty()) {
        bool found = false;
        for (const auto& s : cfg.schemes)
            if (s.name() == scheme_name) {
                spec = s;
                found = true;
            }
        if (!found) {
            std::cerr << "scheme " << scheme_name << " not in config\n";
            return 1;
        }
    }
    if (h <= 0) h = cfg.steps.at(0);
    if (paths > 0) cfg.paths = paths;

    std::vector<std::vector<double>> traj;
    auto finals = integrate_paths(cfg, spec, h, cfg.paths,
                                  serial ? Parallelism::Serial : Parallelism::OpenMP, &traj);
    std::vector<double> mean(cfg.dimension, 0.0);
    for (const auto& y : finals)
        for (int i = 0; i < cfg.dimension; ++i) mean[i] += y[i] / finals.size();
    std::cout << "scheme " << spec.name() << "  h " << h << "  paths " << cfg.paths << "\n";
    std::cout << "mean final state:";
    for (double x : mean) std::cout << " " << x;
    std::cout << "\n";

    if (!out_path.empty()) {
        std::ofstream os(out_path);
        os << "# trajectory of path 0; t";
        for (int i = 0; i < cfg.dimension; ++i) os << ",y" << i;
        os << "\n";
        for (size_t k = 0; k < traj.size(); ++k) {
            os << k * h;
            for (double x : traj[k]) os << "," << x;
            os << "\n";
        }
        std::cerr << "wrote trajectory to " << out_path << "\n";
    }
    if (!dump_path.empty()) {
        auto alphabet = cfg.make_alphabet();
        DriverConfig driver = cfg.make_driver(h);
        auto required = sampler_supported_words(*alphabet);
        std::vector<StepSample> steps;
        int n = static_cast<int>(std::llround(cfg.horizon / h));
        for (int k = 0; k < n; ++k)
            steps.push_back(sample_step(driver, *alphabet, required, 0, k, k * h));
        write_driver_dump(dump_path, driver, *alphabet, steps);
        std::cerr << "dumped " << n << " driver steps to " << dump_path << "\n";
    }
    return 0;
}

int cmd_convergence(const std::string& config_path, const std::string& out_dir, bool svg,
                    bool gnuplot, bool timing, bool serial) {
    ExperimentConfig cfg = load_config(config_path);
    SimulateOptions opts;
    opts.with_timing = timing;
    opts.parallelism = serial ? Parallelism::Serial : Parallelism::OpenMP;
    ConvergenceReport report = simulate_paths(cfg, opts);
    fit_order(report, cfg.initial_state);

    for (const auto& s : report.schemes) {
        std::cout << s.name << ":";
        if (s.fitted)
            std::cout << " fitted order " << s.slope << " +- " << s.slope_se;
        if (s.excluded_points > 0)
            std::cout << " (" << s.excluded_points << " pre-asymptotic points excluded)";
        std::cout << "\n";
        for (const auto& pt : s.points)
            std::cout << "  h " << pt.h << "  mse " << pt.mse << " +- " << pt.mse_se
                      << "  cpu " << pt.cpu_seconds << "s  p " << pt.fourier_terms << "\n";
    }
    EmitFormats formats;
    formats.svg = svg;
    formats.gnuplot = gnuplot;
    auto files = emit_report(report, out_dir.empty() ? cfg.output_dir : out_dir,
                             "convergence", formats);
    for (const auto& f : files) std::cerr << "wrote " << f << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"strong integration schemes for jump-diffusions"};
    app.require_subcommand(1);

    auto* sc = app.add_subcommand("scheme", "generate a scheme table");
    int order = 1;
    std::string grading = "wl", kind = "asri", config_path, out_path;
    sc->add_option("--order", order, "truncation grade")->required();
    sc->add_option("--grading", grading, "wl or ms (taylor only)");
    sc->add_option("--kind", kind, "taylor|asri|masri")->required();
    sc->add_option("--config", config_path, "experiment config (for the alphabet)")
        ->required();
    sc->add_option("--out", out_path, "output file; - for stdout");

    auto* vf = app.add_subcommand("verify", "run exact identity suites");
    std::string suite;
    VerifyOptions vopts;
    int n_opt = 0;
    vf->add_option("suite", suite, "hopf|orthogonality|expectation|efficiency-gap|"
                                   "perturbation|wl-vs-ms|all")
        ->required();
    vf->add_option("--n", n_opt, "restrict graded identities to one n");
    vf->add_option("--gram-seed", vopts.gram_seed, "seed for random Gram specs");
    vf->add_option("--grams", vopts.gram_count, "number of random Gram specs");

    auto* sim = app.add_subcommand("simulate", "integrate paths with one scheme");
    std::string sim_config, sim_scheme, sim_out, sim_dump;
    double sim_h = 0;
    int sim_paths = 0;
    bool sim_serial = false;
    sim->add_option("--config", sim_config, "experiment config json")->required();
    sim->add_option("--scheme", sim_scheme, "scheme name, e.g. masri2");
    sim->add_option("--h", sim_h, "step size (default: first ladder entry)");
    sim->add_option("--paths", sim_paths, "path count override");
    sim->add_option("--out", sim_out, "write path-0 trajectory csv");
    sim->add_option("--dump-drivers", sim_dump, "binary dump of path-0 driver samples");
    sim->add_flag("--serial", sim_serial, "disable the OpenMP path loop");

    auto* conv = app.add_subcommand("convergence", "strong error ladder and timing");
    std::string conv_config, conv_out;
    bool conv_svg = false, conv_gp = false, conv_no_timing = false, conv_serial = false;
    conv->add_option("--config", conv_config, "experiment config json")->required();
    conv->add_option("--out", conv_out, "output directory");
    conv->add_flag("--svg", conv_svg, "also write log-log charts");
    conv->add_flag("--gnuplot", conv_gp, "also write a gnuplot script");
    conv->add_flag("--no-timing", conv_no_timing, "skip the cpu timing loops");
    conv->add_flag("--serial", conv_serial, "disable the OpenMP path loop");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sc->parsed()) return cmd_scheme(config_path, order, grading, kind, out_path);
        if (vf->parsed()) {
            if (n_opt > 0) vopts.grades = {n_opt};
            return cmd_verify(suite, vopts);
        }
        if (sim->parsed())
            return cmd_simulate(sim_config, sim_scheme, sim_h, sim_paths, sim_out, sim_dump,
                                sim_serial);
        if (conv->parsed())
            return cmd_convergence(conv_config, conv_out, conv_svg, conv_gp,
                                   !conv_no_timing, conv_serial);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
