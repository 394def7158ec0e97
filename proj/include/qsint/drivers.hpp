#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "qsint/words.hpp"

namespace qsint {

// splitmix64-style mixer used to derive independent RNG streams from a
// master seed and (path, step) coordinates. Stateless, so paths can be
// sampled concurrently and reproduced exactly.
uint64_t mix_seed(uint64_t master, uint64_t path, uint64_t step, uint64_t purpose = 0);

struct JumpLaw {
    int index = 1;
    double intensity = 1.0;
    std::vector<std::pair<double, double>> sizes;  // (size, weight), weights sum to 1
    bool unit() const { return sizes.size() == 1 && sizes[0].first == 1.0; }
    // Lévy-measure moment: intensity * sum_r weight_r * size_r^p.
    double moment_rate(int p) const;
};

struct DriverConfig {
    int wiener_count = 0;
    std::vector<JumpLaw> jumps;
    int fourier_terms = 10;  // p
    int grid_points = 0;     // M; 0 means 5(p+1)
    uint64_t seed = 0;
    double step = 0.0;  // h

    int effective_grid_points() const {
        return grid_points > 0 ? grid_points : 5 * (fourier_terms + 1);
    }
};

struct JumpEvent {
    int proc;     // jump process index
    double time;  // offset in (0, h] from the step start
    double size;
};

// Every sampled iterated-integral value over one time step, plus the raw
// increments the scheme layer may want. Immutable after creation.
struct StepSample {
    double t0 = 0.0;
    double h = 0.0;
    std::vector<double> wiener_increments;  // indexed by wiener index - 1
    std::vector<JumpEvent> jumps;           // sorted by time
    std::map<Word, double> integrals;

    double integral(const Word& w) const;
    bool has(const Word& w) const { return w.empty() || integrals.count(w) > 0; }
};

// All words the sampler can fill directly: the empty word, single letters,
// and every two-letter word over the alphabet. Longer words are the fine-grid
// oracle's business.
std::set<Word> sampler_supported_words(const Alphabet& alphabet);

// Samples one step's worth of iterated integrals. Steps containing at least
// one jump switch every Wiener-involving pair integral to trapezoidal sums
// on a merged fine grid that includes the jump times; jump-free steps use
// exact joint Gaussians and the truncated Fourier expansion for distinct
// Wiener pairs. Pure-jump and time integrals are always exact.
StepSample sample_step(const DriverConfig& config, const Alphabet& alphabet,
                       const std::set<Word>& required, uint64_t path_index,
                       uint64_t step_index, double t0 = 0.0);

// Truncated Fourier sampling of the pair (I_12, I_21) given the endpoint
// increments; the two values always sum to dw1 * dw2 exactly.
std::pair<double, double> levy_area_fourier(double dw1, double dw2, int p, double h,
                                            std::mt19937_64& rng);

// Chen relation over adjacent intervals: single letters add, pairs pick up
// the cross product of the endpoint increments.
StepSample chen_aggregate(const StepSample& s1, const StepSample& s2);

// FNV-1a content hash of a sample stream; used to confirm that every scheme
// consumes identical fine-resolution noise.
uint64_t sample_hash(const StepSample& s, uint64_t h0 = 1469598103934665603ull);

// Binary dump of sampled driver steps for exact replay: little-endian 64-bit
// floats with a header carrying a config hash and the stored word list.
void write_driver_dump(const std::string& path, const DriverConfig& config,
                       const Alphabet& alphabet, const std::vector<StepSample>& steps);
std::vector<StepSample> read_driver_dump(const std::string& path, const DriverConfig& config,
                                         const Alphabet& alphabet);

}  // namespace qsint
