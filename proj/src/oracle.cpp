#include "qsint/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "step_assembler.hpp"

namespace qsint {

const JumpLaw& FixedPath::law(int index) const {
    for (const auto& l : laws)
        if (l.index == index) return l;
    throw std::domain_error("no jump law for index " + std::to_string(index));
}

FixedPath random_path(const DriverConfig& config, int grid_cells, uint64_t seed) {
    if (grid_cells < 1) throw std::invalid_argument("grid_cells must be >= 1");
    const double h = config.step;
    std::mt19937_64 rng(mix_seed(seed, 0, 0, 0x0eac1e));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);

    FixedPath path;
    path.h = h;
    path.laws = config.jumps;
    for (const auto& law : config.jumps) {
        std::poisson_distribution<int> pois(law.intensity * h);
        int count = pois(rng);
        for (int k = 0; k < count; ++k) {
            double tau = h * uniform(rng);
            double size = law.sizes.back().first;
            if (law.sizes.size() > 1) {
                double u = uniform(rng), acc = 0;
                for (const auto& [s, wgt] : law.sizes) {
                    acc += wgt;
                    if (u <= acc) {
                        size = s;
                        break;
                    }
                }
            }
            path.jumps.push_back({law.index, tau, size});
        }
    }
    std::sort(path.jumps.begin(), path.jumps.end(),
              [](const JumpEvent& a, const JumpEvent& b) { return a.time < b.time; });

    std::vector<double> times;
    for (int k = 0; k <= grid_cells; ++k) times.push_back(h * k / grid_cells);
    for (const auto& ev : path.jumps) times.push_back(ev.time);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    path.times = times;
    path.wiener.assign(config.wiener_count, std::vector<double>(times.size(), 0.0));
    for (int i = 0; i < config.wiener_count; ++i)
        for (size_t g = 0; g + 1 < times.size(); ++g)
            path.wiener[i][g + 1] =
                path.wiener[i][g] + std::sqrt(times[g + 1] - times[g]) * normal(rng);
    return path;
}

double driver_level(const FixedPath& path, const Letter& a, size_t g) {
    if (a.is_time()) return path.times[g];
    if (a.is_wiener()) return path.wiener[a.index - 1][g];
    const JumpLaw& law = path.law(a.index);
    double t = path.times[g];
    double acc = -law.moment_rate(a.power) * t;
    for (const auto& ev : path.jumps)
        if (ev.proc == a.index && ev.time <= t) acc += std::pow(ev.size, a.power);
    return acc;
}

double oracle_integral(const Word& w, const FixedPath& path) {
    const size_t G = path.times.size();
    std::vector<double> level(G, 1.0);  // I of the empty word
    for (const auto& a : w.letters) {
        std::vector<double> next(G, 0.0);
        double acc = 0;
        for (size_t g = 0; g + 1 < G; ++g) {
            double dz = driver_level(path, a, g + 1) - driver_level(path, a, g);
            acc += level[g] * dz;  // left-point value against the increment
            next[g + 1] = acc;
        }
        level = std::move(next);
    }
    return level.back();
}

double oracle_integral(const WordPoly& p, const FixedPath& path) {
    double acc = 0;
    for (const auto& [w, c] : p.terms()) acc += rat_double(c) * oracle_integral(w, path);
    return acc;
}

StepSample assemble_from_path(const FixedPath& path, const Alphabet& alphabet,
                              const std::set<Word>& required) {
    DriverConfig config;
    config.wiener_count = static_cast<int>(path.wiener.size());
    config.jumps = path.laws;
    config.step = path.h;

    detail::StepDraws draws;
    draws.jumps = path.jumps;
    draws.have_path = true;
    draws.path.times = path.times;
    draws.path.values = path.wiener;
    for (const auto& w : path.wiener) draws.dW.push_back(w.back());

    detail::StepAssembler assembler(config, draws);
    StepSample s;
    s.t0 = 0.0;
    s.h = path.h;
    s.wiener_increments = draws.dW;
    s.jumps = draws.jumps;
    for (const auto& a : alphabet.letters()) s.integrals[Word{a}] = assembler.value(Word{a});
    for (const auto& w : required)
        if (!w.empty()) s.integrals[w] = assembler.value(w);
    return s;
}

}  // namespace qsint
