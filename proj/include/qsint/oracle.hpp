#pragma once

#include "qsint/drivers.hpp"
#include "qsint/wordpoly.hpp"

namespace qsint {

// A concrete realization of all driving processes on one interval: a grid
// that contains every jump time, Wiener levels on the grid, and the jump
// events. Used by the brute-force integral oracle and by path-based tests.
struct FixedPath {
    double h = 0.0;
    std::vector<double> times;                  // 0 = t_0 < ... < t_G = h
    std::vector<std::vector<double>> wiener;    // per index-1, levels on grid
    std::vector<JumpEvent> jumps;               // times coincide with grid points
    std::vector<JumpLaw> laws;

    const JumpLaw& law(int index) const;
};

// Random path on a K-cell uniform grid merged with sampled jump times.
FixedPath random_path(const DriverConfig& config, int grid_cells, uint64_t seed);

// Level of the driving process of a letter at a grid point (cadlag).
double driver_level(const FixedPath& path, const Letter& a, size_t grid_index);

// Nested left-point Riemann-Stieltjes evaluation of I_w on the path. Exact
// for pure-jump and time words; converges to the Ito value as the grid is
// refined for Wiener-involving words.
double oracle_integral(const Word& w, const FixedPath& path);
double oracle_integral(const WordPoly& p, const FixedPath& path);

// Runs the production assembly recipes (trapezoidal pair integrals, exact
// jump sums) on a fixed path, so they can be compared against the oracle on
// identical data.
StepSample assemble_from_path(const FixedPath& path, const Alphabet& alphabet,
                              const std::set<Word>& required);

}  // namespace qsint
