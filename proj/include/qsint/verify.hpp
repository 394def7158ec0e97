#pragma once

#include <string>
#include <vector>

#include "qsint/endo.hpp"

namespace qsint {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct VerifyOptions {
    int max_grade = 4;
    int gram_count = 10;
    uint64_t gram_seed = 20240810;
    std::vector<int> grades = {1, 2, 3};  // n values for graded identities
};

// The alphabet every identity suite runs over: time, one Wiener letter and
// one unit-size jump letter of intensity 2.
std::shared_ptr<const Alphabet> verify_alphabet(int max_grade = 4);

std::vector<std::string> verify_suite_names();

// Runs one named identity suite ("hopf", "orthogonality", "expectation",
// "efficiency-gap", "perturbation", "wl-vs-ms"); every check is an exact
// rational computation. Unknown names throw std::invalid_argument.
std::vector<CheckResult> run_verify_suite(const std::string& suite,
                                          const VerifyOptions& opts = {});

}  // namespace qsint
