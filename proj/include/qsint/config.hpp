#pragma once

#include <memory>
#include <string>
#include <vector>

#include "qsint/drivers.hpp"
#include "qsint/fields.hpp"
#include "qsint/scheme.hpp"

namespace qsint {

struct SchemeSpec {
    SchemeKind kind = SchemeKind::TaylorMs;
    int order = 2;

    std::string name() const { return scheme_kind_str(kind) + std::to_string(order); }
};

// One experiment: fields, drivers, the step ladder and the schemes to race.
struct ExperimentConfig {
    int dimension = 0;
    std::vector<double> initial_state;
    double horizon = 1.0;

    VectorFieldSet fields;
    std::vector<JumpSpec> jump_specs;  // exact laws for the alphabet
    int fourier_terms = 10;
    int grid_points = 0;  // 0 -> 5(p+1)

    std::vector<double> steps;  // coarse ladder, descending
    int fine_multiplier = 32;
    int paths = 100;
    int timing_paths = 0;  // 0 -> min(paths, 200)
    int timing_repeats = 3;

    std::vector<SchemeSpec> schemes;
    SchemeSpec reference{SchemeKind::TaylorMs, 2};

    uint64_t seed = 1;
    std::string output_dir;

    std::shared_ptr<const Alphabet> make_alphabet(int max_grade = 0) const;
    DriverConfig make_driver(double h) const;
    SchemeTable make_table(const SchemeSpec& spec, const Alphabet& alphabet) const;
    int max_scheme_grade() const;  // largest word length any table needs
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& json_text);

SchemeSpec parse_scheme_spec(const std::string& kind, const std::string& grading, int order);

}  // namespace qsint
