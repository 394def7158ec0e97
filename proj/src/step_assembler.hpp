#pragma once

// Internal: turns one step's raw randomness (increments, merged-grid Wiener
// levels, jump events) into iterated-integral values. Shared by the sampler
// and by the path-based test entry points.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qsint/drivers.hpp"

namespace qsint::detail {

struct WienerPath {
    std::vector<double> times;                // merged grid over [0, h]
    std::vector<std::vector<double>> values;  // per wiener, level at grid times
};

struct StepDraws {
    std::vector<JumpEvent> jumps;
    std::vector<double> dW;
    bool have_path = false;
    WienerPath path;
    // jump-free branch extras
    std::vector<double> time_pair;            // I_(w_i 0) per wiener
    std::vector<std::vector<double>> pair_I;  // I[i][j], i != j (0-based)
};

inline const JumpLaw* law_for(const DriverConfig& config, int index) {
    for (const auto& l : config.jumps)
        if (l.index == index) return &l;
    return nullptr;
}

// defined in drivers.cpp; fixed draw schedule per (config, path, step)
StepDraws draw_step(const DriverConfig& config, uint64_t path_index, uint64_t step_index);

inline double trap_time_integral(const WienerPath& path, int wi) {
    const auto& t = path.times;
    const auto& w = path.values[wi];
    double acc = 0;
    for (size_t g = 0; g + 1 < t.size(); ++g)
        acc += 0.5 * (w[g] + w[g + 1]) * (t[g + 1] - t[g]);
    return acc;
}

inline double trap_cross_integral(const WienerPath& path, int wi, int wj) {
    const auto& w = path.values[wi];
    const auto& z = path.values[wj];
    double acc = 0;
    for (size_t g = 0; g + 1 < w.size(); ++g)
        acc += 0.5 * (w[g] + w[g + 1]) * (z[g + 1] - z[g]);
    return acc;
}

inline double wiener_at(const WienerPath& path, int wi, double time) {
    const auto& t = path.times;
    auto it = std::lower_bound(t.begin(), t.end(), time);
    return path.values[wi][static_cast<size_t>(it - t.begin())];
}

class StepAssembler {
  public:
    StepAssembler(const DriverConfig& config, const StepDraws& draws)
        : config_(config), draws_(draws), h_(config.step) {}

    double value(const Word& w) const {
        if (w.empty()) return 1.0;
        if (w.size() == 1) return single(w.letters[0]);
        if (w.size() == 2) return pair(w.letters[0], w.letters[1]);
        throw std::domain_error("unsupported word shape for sampler: " + word_str(w));
    }

  private:
    double jump_power_sum(int index, int p, double before = -1.0) const {
        double acc = 0;
        for (const auto& ev : draws_.jumps)
            if (ev.proc == index && (before < 0 || ev.time < before))
                acc += std::pow(ev.size, p);
        return acc;
    }

    double single(const Letter& a) const {
        if (a.is_time()) return h_;
        if (a.is_wiener()) return draws_.dW[a.index - 1];
        const JumpLaw* law = law_for(config_, a.index);
        if (!law) throw std::domain_error("no jump law for letter " + letter_str(a));
        return jump_power_sum(a.index, a.power) - h_ * law->moment_rate(a.power);
    }

    double int_w_ds(int i) const {
        return draws_.have_path ? trap_time_integral(draws_.path, i - 1)
                                : draws_.time_pair[i - 1];
    }

    double int_j_ds(int index, int p) const {
        const JumpLaw* law = law_for(config_, index);
        double acc = -law->moment_rate(p) * h_ * h_ / 2.0;
        for (const auto& ev : draws_.jumps)
            if (ev.proc == index) acc += std::pow(ev.size, p) * (h_ - ev.time);
        return acc;
    }

    // compensated power bracket just before the given time (left limit)
    double j_before(int index, int p, double time) const {
        const JumpLaw* law = law_for(config_, index);
        return jump_power_sum(index, p, time) - law->moment_rate(p) * time;
    }

    double pair(const Letter& a, const Letter& b) const {
        // inner letter a, outer integrator b
        if (a.is_time() && b.is_time()) return h_ * h_ / 2.0;
        if (b.is_time()) {
            if (a.is_wiener()) return int_w_ds(a.index);
            return int_j_ds(a.index, a.power);
        }
        if (b.is_wiener()) {
            int j = b.index;
            if (a.is_time()) return h_ * draws_.dW[j - 1] - int_w_ds(j);
            if (a.is_wiener()) {
                int i = a.index;
                if (i == j) {
                    double dw = draws_.dW[i - 1];
                    return 0.5 * (dw * dw - h_);
                }
                if (draws_.have_path) return trap_cross_integral(draws_.path, i - 1, j - 1);
                return draws_.pair_I[i - 1][j - 1];
            }
            const JumpLaw* law = law_for(config_, a.index);
            double acc = 0;
            for (const auto& ev : draws_.jumps)
                if (ev.proc == a.index)
                    acc += std::pow(ev.size, a.power) *
                           (draws_.dW[j - 1] - wiener_at(draws_.path, j - 1, ev.time));
            double int_s_dw = h_ * draws_.dW[j - 1] - int_w_ds(j);
            return acc - law->moment_rate(a.power) * int_s_dw;
        }
        const JumpLaw* outer = law_for(config_, b.index);
        if (!outer) throw std::domain_error("no jump law for letter " + letter_str(b));
        double sum_part = 0;
        for (const auto& ev : draws_.jumps) {
            if (ev.proc != b.index) continue;
            double inner;
            if (a.is_time())
                inner = ev.time;
            else if (a.is_wiener())
                inner = wiener_at(draws_.path, a.index - 1, ev.time);
            else
                inner = j_before(a.index, a.power, ev.time);
            sum_part += inner * std::pow(ev.size, b.power);
        }
        double compensator;
        if (a.is_time())
            compensator = h_ * h_ / 2.0;
        else if (a.is_wiener())
            compensator = int_w_ds(a.index);
        else
            compensator = int_j_ds(a.index, a.power);
        return sum_part - outer->moment_rate(b.power) * compensator;
    }

    const DriverConfig& config_;
    const StepDraws& draws_;
    double h_;
};

}  // namespace qsint::detail
