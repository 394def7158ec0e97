#include "qsint/drivers.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "step_assembler.hpp"

namespace qsint {

uint64_t mix_seed(uint64_t master, uint64_t path, uint64_t step, uint64_t purpose) {
    auto mix = [](uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    };
    uint64_t s = mix(master);
    s = mix(s ^ (path * 0xd1342543de82ef95ull + 1));
    s = mix(s ^ (step * 0xaf251af3b0f025b5ull + 1));
    s = mix(s ^ (purpose * 0x9e3779b97f4a7c15ull + 1));
    return s;
}

double JumpLaw::moment_rate(int p) const {
    double m = 0;
    for (const auto& [size, weight] : sizes) m += weight * std::pow(size, p);
    return intensity * m;
}

double StepSample::integral(const Word& w) const {
    if (w.empty()) return 1.0;
    auto it = integrals.find(w);
    if (it == integrals.end())
        throw std::domain_error("integral not sampled for word " + word_str(w));
    return it->second;
}

std::set<Word> sampler_supported_words(const Alphabet& alphabet) {
    std::set<Word> out;
    out.insert(Word());
    for (const auto& a : alphabet.letters()) {
        out.insert(Word{a});
        for (const auto& b : alphabet.letters()) out.insert(Word{a, b});
    }
    return out;
}

namespace {
constexpr double kPi = std::numbers::pi;
}

namespace detail {

// All randomness for one step, drawn in a schedule that depends only on the
// configuration so that every consumer sees the same stream.
StepDraws draw_step(const DriverConfig& config, uint64_t path_index,
                    uint64_t step_index) {
    const double h = config.step;
    std::mt19937_64 rng(mix_seed(config.seed, path_index, step_index));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);

    detail::StepDraws out;
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
            out.jumps.push_back({law.index, tau, size});
        }
    }
    std::sort(out.jumps.begin(), out.jumps.end(),
              [](const JumpEvent& a, const JumpEvent& b) { return a.time < b.time; });

    const int d = config.wiener_count;
    out.dW.assign(d, 0.0);
    if (out.jumps.empty()) {
        for (int i = 0; i < d; ++i) out.dW[i] = std::sqrt(h) * normal(rng);
        // (int W ds, dW) is jointly Gaussian: Var = h^3/3, Cov = h^2/2
        out.time_pair.assign(d, 0.0);
        for (int i = 0; i < d; ++i)
            out.time_pair[i] = 0.5 * h * out.dW[i] + std::sqrt(h * h * h / 12.0) * normal(rng);
        if (d >= 2) {
            const int p = config.fourier_terms;
            if (p < 1) throw std::domain_error("fourier_terms must be >= 1");
            std::vector<std::vector<double>> a(d, std::vector<double>(p)), b = a;
            for (int i = 0; i < d; ++i)
                for (int r = 1; r <= p; ++r) {
                    double sd = std::sqrt(h / (2.0 * kPi * kPi * r * r));
                    a[i][r - 1] = sd * normal(rng);
                    b[i][r - 1] = sd * normal(rng);
                }
            std::vector<double> a0(d, 0.0);
            for (int i = 0; i < d; ++i)
                for (int r = 0; r < p; ++r) a0[i] -= 2.0 * a[i][r];
            out.pair_I.assign(d, std::vector<double>(d, 0.0));
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    if (i == j) continue;
                    double area = 0.5 * (a0[i] * out.dW[j] - a0[j] * out.dW[i]);
                    for (int r = 1; r <= p; ++r)
                        area += kPi * r *
                                (a[i][r - 1] * b[j][r - 1] - b[i][r - 1] * a[j][r - 1]);
                    out.pair_I[i][j] = 0.5 * out.dW[i] * out.dW[j] + area;
                }
        }
    } else {
        // merged fine grid: M uniform cells plus the jump times
        const int M = config.effective_grid_points();
        std::vector<double> times;
        times.reserve(M + out.jumps.size() + 1);
        for (int k = 0; k <= M; ++k) times.push_back(h * k / M);
        for (const auto& ev : out.jumps) times.push_back(ev.time);
        std::sort(times.begin(), times.end());
        times.erase(std::unique(times.begin(), times.end()), times.end());
        out.path.times = times;
        out.path.values.assign(d, std::vector<double>(times.size(), 0.0));
        for (int i = 0; i < d; ++i) {
            for (size_t g = 0; g + 1 < times.size(); ++g) {
                double dt = times[g + 1] - times[g];
                out.path.values[i][g + 1] = out.path.values[i][g] + std::sqrt(dt) * normal(rng);
            }
            out.dW[i] = out.path.values[i].back();
        }
        out.have_path = true;
    }
    return out;
}

}  // namespace detail

StepSample sample_step(const DriverConfig& config, const Alphabet& alphabet,
                       const std::set<Word>& required, uint64_t path_index,
                       uint64_t step_index, double t0) {
    if (config.step <= 0) throw std::domain_error("step size must be positive");
    auto supported = sampler_supported_words(alphabet);
    for (const auto& w : required)
        if (!supported.count(w))
            throw std::domain_error("unsupported word for sampler: " + word_str(w));

    detail::StepDraws draws = detail::draw_step(config, path_index, step_index);
    detail::StepAssembler assembler(config, draws);

    StepSample s;
    s.t0 = t0;
    s.h = config.step;
    s.wiener_increments = draws.dW;
    s.jumps = draws.jumps;
    for (const auto& a : alphabet.letters()) s.integrals[Word{a}] = assembler.value(Word{a});
    for (const auto& w : required)
        if (!w.empty()) s.integrals[w] = assembler.value(w);
    return s;
}

std::pair<double, double> levy_area_fourier(double dw1, double dw2, int p, double h,
                                            std::mt19937_64& rng) {
    if (p < 1) throw std::domain_error("fourier term count must be >= 1");
    std::normal_distribution<double> normal(0.0, 1.0);
    double a10 = 0, a20 = 0, area = 0;
    for (int r = 1; r <= p; ++r) {
        double sd = std::sqrt(h / (2.0 * kPi * kPi * r * r));
        double a1 = sd * normal(rng), b1 = sd * normal(rng);
        double a2 = sd * normal(rng), b2 = sd * normal(rng);
        a10 -= 2.0 * a1;
        a20 -= 2.0 * a2;
        area += kPi * r * (a1 * b2 - b1 * a2);
    }
    area += 0.5 * (a10 * dw2 - a20 * dw1);
    double i12 = 0.5 * dw1 * dw2 + area;
    return {i12, dw1 * dw2 - i12};
}

StepSample chen_aggregate(const StepSample& s1, const StepSample& s2) {
    StepSample out;
    out.t0 = s1.t0;
    out.h = s1.h + s2.h;
    out.wiener_increments.resize(s1.wiener_increments.size());
    for (size_t i = 0; i < out.wiener_increments.size(); ++i)
        out.wiener_increments[i] = s1.wiener_increments[i] + s2.wiener_increments[i];
    out.jumps = s1.jumps;
    for (auto ev : s2.jumps) {
        ev.time += s1.h;
        out.jumps.push_back(ev);
    }
    for (const auto& [w, v1] : s1.integrals) {
        auto it = s2.integrals.find(w);
        if (it == s2.integrals.end())
            throw std::domain_error("aggregation needs both samples to carry " + word_str(w));
        double v = v1 + it->second;
        if (w.size() == 2) {
            Word a{w.letters[0]}, b{w.letters[1]};
            v += s1.integral(a) * s2.integral(b);
        }
        out.integrals[w] = v;
    }
    return out;
}

uint64_t sample_hash(const StepSample& s, uint64_t h0) {
    uint64_t h = h0;
    auto feed = [&h](double x) {
        uint64_t bits;
        std::memcpy(&bits, &x, sizeof bits);
        for (int i = 0; i < 8; ++i) {
            h ^= (bits >> (8 * i)) & 0xff;
            h *= 1099511628211ull;
        }
    };
    feed(s.t0);
    feed(s.h);
    for (double x : s.wiener_increments) feed(x);
    for (const auto& ev : s.jumps) {
        feed(static_cast<double>(ev.proc));
        feed(ev.time);
        feed(ev.size);
    }
    for (const auto& [w, v] : s.integrals) feed(v);
    return h;
}

namespace {

uint64_t config_hash(const DriverConfig& config) {
    std::ostringstream os;
    os << config.wiener_count << "|" << config.fourier_terms << "|" << config.grid_points
       << "|" << config.seed << "|" << config.step;
    for (const auto& l : config.jumps) {
        os << "|j" << l.index << ":" << l.intensity;
        for (const auto& [s, w] : l.sizes) os << "," << s << "@" << w;
    }
    uint64_t h = 1469598103934665603ull;
    for (char c : os.str()) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

template <typename T>
void put(std::ostream& os, const T& x) {
    os.write(reinterpret_cast<const char*>(&x), sizeof x);
}

template <typename T>
T get(std::istream& is) {
    T x{};
    is.read(reinterpret_cast<char*>(&x), sizeof x);
    if (!is) throw std::runtime_error("truncated driver dump");
    return x;
}

}  // namespace

void write_driver_dump(const std::string& path, const DriverConfig& config,
                       const Alphabet& alphabet, const std::vector<StepSample>& steps) {
    (void)alphabet;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path);
    os.write("QSDRV1\n", 7);
    put(os, config_hash(config));
    std::vector<std::string> words;
    if (!steps.empty())
        for (const auto& [w, v] : steps[0].integrals) words.push_back(word_str(w));
    put<uint32_t>(os, static_cast<uint32_t>(words.size()));
    for (const auto& w : words) {
        put<uint32_t>(os, static_cast<uint32_t>(w.size()));
        os.write(w.data(), static_cast<std::streamsize>(w.size()));
    }
    put<uint64_t>(os, steps.size());
    for (const auto& s : steps) {
        put(os, s.t0);
        put(os, s.h);
        put<uint32_t>(os, static_cast<uint32_t>(s.wiener_increments.size()));
        for (double x : s.wiener_increments) put(os, x);
        put<uint32_t>(os, static_cast<uint32_t>(s.jumps.size()));
        for (const auto& ev : s.jumps) {
            put<int32_t>(os, ev.proc);
            put(os, ev.time);
            put(os, ev.size);
        }
        if (s.integrals.size() != words.size())
            throw std::runtime_error("driver dump requires a uniform word set");
        for (const auto& [w, v] : s.integrals) put(os, v);
    }
}

std::vector<StepSample> read_driver_dump(const std::string& path, const DriverConfig& config,
                                         const Alphabet& alphabet) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    char magic[7];
    is.read(magic, 7);
    if (!is || std::string(magic, 7) != "QSDRV1\n")
        throw std::runtime_error("bad driver dump magic");
    if (get<uint64_t>(is) != config_hash(config))
        throw std::runtime_error("driver dump config hash mismatch");
    uint32_t nwords = get<uint32_t>(is);
    std::vector<Word> words;
    for (uint32_t i = 0; i < nwords; ++i) {
        uint32_t len = get<uint32_t>(is);
        std::string wstr(len, '\0');
        is.read(wstr.data(), len);
        words.push_back(alphabet.parse_word(wstr));
    }
    uint64_t nsteps = get<uint64_t>(is);
    std::vector<StepSample> steps;
    steps.reserve(nsteps);
    for (uint64_t k = 0; k < nsteps; ++k) {
        StepSample s;
        s.t0 = get<double>(is);
        s.h = get<double>(is);
        uint32_t d = get<uint32_t>(is);
        s.wiener_increments.resize(d);
        for (auto& x : s.wiener_increments) x = get<double>(is);
        uint32_t nj = get<uint32_t>(is);
        for (uint32_t j = 0; j < nj; ++j) {
            JumpEvent ev;
            ev.proc = get<int32_t>(is);
            ev.time = get<double>(is);
            ev.size = get<double>(is);
            s.jumps.push_back(ev);
        }
        for (const auto& w : words) s.integrals[w] = get<double>(is);
        steps.push_back(std::move(s));
    }
    return steps;
}

}  // namespace qsint
