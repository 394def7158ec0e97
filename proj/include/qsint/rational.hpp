#pragma once

#include <gmpxx.h>
#include <stdexcept>
#include <string>

namespace qsint {

// Exact arbitrary-precision rational. All symbolic-layer coefficients use
// this type; doubles appear only in the samplers and the Monte Carlo layer.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Rat rat_pow(const Rat& base, unsigned k) {
    Rat out = 1;
    for (unsigned i = 0; i < k; ++i) out *= base;
    return out;
}

// Renders "p" when the denominator is 1, otherwise "p/q".
inline std::string rat_str(const Rat& r) {
    return r.get_str();
}

inline Rat rat_parse(const std::string& s) {
    Rat r;
    if (r.set_str(s, 10) != 0)
        throw std::invalid_argument("bad rational literal: " + s);
    r.canonicalize();
    return r;
}

inline double rat_double(const Rat& r) { return r.get_d(); }

}  // namespace qsint
