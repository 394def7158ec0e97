#include "qsint/mc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "step_assembler.hpp"

#ifdef QSINT_HAVE_OPENMP
#include <omp.h>
#endif

namespace qsint {

double eval_expr(const IntegralExpr& expr, const StepSample& sample) {
    double acc = 0;
    for (const auto& t : expr.terms()) {
        double prod = rat_double(t.coeff);
        for (const auto& f : t.factors) prod *= sample.integral(f);
        acc += prod;
    }
    return acc;
}

std::vector<double> run_step(const SchemeTable& table, const StepSample& sample,
                             const std::vector<double>& y, const VectorFieldSet& fields) {
    std::vector<double> out(y.size(), 0.0);
    for (const auto& row : table.rows) {
        double c = eval_expr(row.expr, sample);
        if (c == 0.0) continue;
        std::vector<double> v = apply_word(row.operator_word, y, fields);
        for (size_t i = 0; i < out.size(); ++i) out[i] += c * v[i];
    }
    return out;
}

namespace {

struct WordIndex {
    std::vector<Word> words;
    std::map<Word, int> index;

    int add(const Word& w) {
        auto it = index.find(w);
        if (it != index.end()) return it->second;
        int id = static_cast<int>(words.size());
        words.push_back(w);
        index.emplace(w, id);
        return id;
    }
    int at(const Word& w) const {
        auto it = index.find(w);
        if (it == index.end()) throw std::domain_error("word not indexed: " + word_str(w));
        return it->second;
    }
};

// all integral values for one step, in index order
struct CompiledSampler {
    DriverConfig cfg;
    const WordIndex* idx;

    std::vector<double> sample(uint64_t path, uint64_t step) const {
        detail::StepDraws draws = detail::draw_step(cfg, path, step);
        detail::StepAssembler assembler(cfg, draws);
        std::vector<double> out(idx->words.size());
        for (size_t i = 0; i < idx->words.size(); ++i) out[i] = assembler.value(idx->words[i]);
        return out;
    }
};

// Chen relation on compiled vectors: singles add, pairs pick up the cross
// term of their constituent singles.
struct ChenPlan {
    struct PairRule {
        int target, inner, outer;
    };
    std::vector<PairRule> pairs;

    explicit ChenPlan(const WordIndex& idx) {
        for (size_t i = 0; i < idx.words.size(); ++i) {
            const Word& w = idx.words[i];
            if (w.size() == 2)
                pairs.push_back({static_cast<int>(i), idx.at(Word{w.letters[0]}),
                                 idx.at(Word{w.letters[1]})});
        }
    }

    void aggregate(std::vector<double>& acc, const std::vector<double>& next) const {
        // cross terms first, while acc still holds the left interval's singles
        for (const auto& p : pairs) acc[p.target] += acc[p.inner] * next[p.outer];
        for (size_t i = 0; i < acc.size(); ++i) acc[i] += next[i];
    }
};

struct CompiledRow {
    bool has_matrix = false;
    std::vector<double> matrix;
    Word word;
    std::vector<std::pair<double, std::vector<int>>> terms;
};

struct CompiledScheme {
    int dim = 0;
    const VectorFieldSet* fields = nullptr;
    std::vector<CompiledRow> rows;

    CompiledScheme() = default;
    CompiledScheme(const SchemeTable& table, const VectorFieldSet& f, const WordIndex& idx)
        : dim(f.dimension), fields(&f) {
        for (const auto& r : table.rows) {
            if (r.expr.is_zero()) continue;
            CompiledRow row;
            row.word = r.operator_word;
            if (auto m = word_matrix(r.operator_word, f)) {
                row.has_matrix = true;
                row.matrix = std::move(*m);
            }
            for (const auto& t : r.expr.terms()) {
                std::vector<int> ids;
                for (const auto& fac : t.factors) ids.push_back(idx.at(fac));
                row.terms.push_back({rat_double(t.coeff), std::move(ids)});
            }
            rows.push_back(std::move(row));
        }
    }

    void step(const std::vector<double>& values, std::vector<double>& y,
              std::vector<double>& scratch) const {
        scratch.assign(dim, 0.0);
        for (const auto& row : rows) {
            double c = 0;
            for (const auto& [coeff, ids] : row.terms) {
                double prod = coeff;
                for (int id : ids) prod *= values[id];
                c += prod;
            }
            if (c == 0.0) continue;
            if (row.has_matrix) {
                for (int i = 0; i < dim; ++i) {
                    double acc = 0;
                    const double* mrow = row.matrix.data() + i * dim;
                    for (int j = 0; j < dim; ++j) acc += mrow[j] * y[j];
                    scratch[i] += c * acc;
                }
            } else {
                std::vector<double> v = apply_word(row.word, y, *fields);
                for (int i = 0; i < dim; ++i) scratch[i] += c * v[i];
            }
        }
        y = scratch;
    }
};

uint64_t fnv_feed(uint64_t h, const double* data, size_t n) {
    for (size_t k = 0; k < n; ++k) {
        uint64_t bits;
        std::memcpy(&bits, &data[k], sizeof bits);
        for (int i = 0; i < 8; ++i) {
            h ^= (bits >> (8 * i)) & 0xff;
            h *= 1099511628211ull;
        }
    }
    return h;
}

template <typename Body>
void for_paths(int paths, Parallelism par, const Body& body) {
    std::exception_ptr error;
#ifdef QSINT_HAVE_OPENMP
    if (par == Parallelism::OpenMP) {
#pragma omp parallel for schedule(dynamic, 1)
        for (int p = 0; p < paths; ++p) {
            try {
                body(p);
            } catch (...) {
#pragma omp critical
                if (!error) error = std::current_exception();
            }
        }
        if (error) std::rethrow_exception(error);
        return;
    }
#else
    (void)par;
#endif
    for (int p = 0; p < paths; ++p) body(p);
}

int checked_ratio(double big, double small, const std::string& what) {
    double r = big / small;
    long long ratio = std::llround(r);
    if (ratio < 1 || std::abs(r - static_cast<double>(ratio)) > 1e-9 * r)
        throw std::invalid_argument(what + " must divide evenly (got ratio " +
                                    std::to_string(r) + ")");
    return static_cast<int>(ratio);
}

}  // namespace

ConvergenceReport simulate_paths(const ExperimentConfig& config, const SimulateOptions& opts) {
    if (config.steps.empty()) throw std::invalid_argument("empty step ladder");
    if (config.schemes.empty()) throw std::invalid_argument("no schemes configured");

    const double h_min = *std::min_element(config.steps.begin(), config.steps.end());
    const double h_max = *std::max_element(config.steps.begin(), config.steps.end());
    const double h_fine = h_min / config.fine_multiplier;
    const int fine_total = checked_ratio(config.horizon, h_fine, "horizon / fine step");
    std::vector<int> ratios;
    for (double h : config.steps) {
        checked_ratio(config.horizon, h, "horizon / step");
        ratios.push_back(checked_ratio(h, h_fine, "step / fine step"));
    }

    auto alphabet = config.make_alphabet();
    SchemeTable ref_table = config.make_table(config.reference, *alphabet);
    std::vector<SchemeTable> tables;
    for (const auto& s : config.schemes) tables.push_back(config.make_table(s, *alphabet));

    WordIndex idx;
    for (const auto& a : alphabet->letters()) idx.add(Word{a});
    for (const auto& w : ref_table.required_integral_words)
        if (!w.empty()) idx.add(w);
    for (const auto& t : tables)
        for (const auto& w : t.required_integral_words)
            if (!w.empty()) idx.add(w);

    CompiledSampler fine_sampler{config.make_driver(h_fine), &idx};
    ChenPlan chen(idx);
    CompiledScheme ref_scheme(ref_table, config.fields, idx);
    std::vector<CompiledScheme> schemes;
    for (const auto& t : tables) schemes.emplace_back(t, config.fields, idx);

    const int n_schemes = static_cast<int>(schemes.size());
    const int n_ladder = static_cast<int>(config.steps.size());
    const int snap_every = config.fine_multiplier;
    const int n_snaps = fine_total / snap_every;  // reference states at coarse times

    std::vector<std::vector<std::vector<double>>> supsq(
        n_schemes, std::vector<std::vector<double>>(n_ladder,
                                                    std::vector<double>(config.paths, 0.0)));
    std::vector<uint64_t> path_hash(config.paths, 0);

    for_paths(config.paths, opts.parallelism, [&](int p) {
        // shared fine-resolution noise for this path
        std::vector<std::vector<double>> fine(fine_total);
        uint64_t h64 = 1469598103934665603ull;
        for (int k = 0; k < fine_total; ++k) {
            fine[k] = fine_sampler.sample(p, k);
            h64 = fnv_feed(h64, fine[k].data(), fine[k].size());
        }
        path_hash[p] = h64;

        // reference trajectory at the fine step, snapshotted at coarse times
        std::vector<std::vector<double>> ref_at(n_snaps + 1);
        {
            std::vector<double> y = config.initial_state, scratch;
            ref_at[0] = y;
            for (int k = 0; k < fine_total; ++k) {
                ref_scheme.step(fine[k], y, scratch);
                if ((k + 1) % snap_every == 0) ref_at[(k + 1) / snap_every] = y;
            }
        }

        for (int li = 0; li < n_ladder; ++li) {
            const int ratio = ratios[li];
            const int coarse_total = fine_total / ratio;
            // Chen-aggregate the shared noise up to this ladder level
            std::vector<std::vector<double>> coarse(coarse_total);
            for (int k = 0; k < coarse_total; ++k) {
                std::vector<double> acc = fine[k * ratio];
                for (int j = 1; j < ratio; ++j) chen.aggregate(acc, fine[k * ratio + j]);
                coarse[k] = std::move(acc);
            }
            const int snaps_per_coarse = ratio / snap_every;
            for (int s = 0; s < n_schemes; ++s) {
                std::vector<double> y = config.initial_state, scratch;
                double worst = 0;
                for (int k = 0; k < coarse_total; ++k) {
                    schemes[s].step(coarse[k], y, scratch);
                    const auto& yr = ref_at[(k + 1) * snaps_per_coarse];
                    double d2 = 0;
                    for (size_t i = 0; i < y.size(); ++i) {
                        double d = y[i] - yr[i];
                        d2 += d * d;
                    }
                    worst = std::max(worst, d2);
                }
                supsq[s][li][p] = worst;
            }
        }
    });

    ConvergenceReport report;
    report.seed = config.seed;
    report.paths = config.paths;
    report.fine_step = h_fine;
    report.reference_name = config.reference.name();
    uint64_t h64 = 1469598103934665603ull;
    for (int p = 0; p < config.paths; ++p) {
        double v = static_cast<double>(path_hash[p]);
        h64 = fnv_feed(h64, &v, 1);
    }
    report.noise_hash = h64;

    for (int s = 0; s < n_schemes; ++s) {
        SchemeSeries series;
        series.name = config.schemes[s].name();
        for (int li = 0; li < n_ladder; ++li) {
            const auto& xs = supsq[s][li];
            double mean = 0;
            for (double x : xs) mean += x;
            mean /= xs.size();
            double var = 0;
            for (double x : xs) var += (x - mean) * (x - mean);
            var /= std::max<size_t>(1, xs.size() - 1);
            double se_mean = std::sqrt(var / xs.size());
            SchemePoint pt;
            pt.h = config.steps[li];
            pt.mse = std::sqrt(mean);
            pt.mse_se = pt.mse > 0 ? se_mean / (2 * pt.mse) : 0.0;
            pt.fourier_terms = config.fourier_terms;
            pt.grid_points = config.make_driver(pt.h).effective_grid_points();
            series.points.push_back(pt);
        }
        report.schemes.push_back(std::move(series));
    }

    for (int a = 0; a < n_schemes; ++a)
        for (int b = a + 1; b < n_schemes; ++b)
            for (int li = 0; li < n_ladder; ++li) {
                PairedDiff d;
                d.a = config.schemes[a].name();
                d.b = config.schemes[b].name();
                d.h = config.steps[li];
                double mean = 0;
                for (int p = 0; p < config.paths; ++p)
                    mean += supsq[a][li][p] - supsq[b][li][p];
                mean /= config.paths;
                double var = 0;
                for (int p = 0; p < config.paths; ++p) {
                    double x = supsq[a][li][p] - supsq[b][li][p] - mean;
                    var += x * x;
                }
                var /= std::max(1, config.paths - 1);
                d.mean = mean;
                d.se = std::sqrt(var / config.paths);
                report.paired.push_back(d);
            }

    if (opts.with_timing) {
        const int tp = config.timing_paths > 0 ? config.timing_paths
                                               : std::min(config.paths, 200);
        for (int s = 0; s < n_schemes; ++s) {
            // timing uses the scheme's own integral set, not the union
            WordIndex own;
            for (const auto& a : alphabet->letters()) own.add(Word{a});
            for (const auto& w : tables[s].required_integral_words)
                if (!w.empty()) own.add(w);
            CompiledScheme timed(tables[s], config.fields, own);
            for (int li = 0; li < n_ladder; ++li) {
                const double h = config.steps[li];
                DriverConfig d = config.make_driver(h);
                // Fourier effort scales like 1/h relative to the coarsest step
                d.fourier_terms = std::max(
                    1, static_cast<int>(std::lround(config.fourier_terms * h_max / h)));
                d.grid_points = 0;
                d.seed = mix_seed(config.seed, 0, 0, 0x7171);
                CompiledSampler sampler{d, &own};
                const int steps_n = static_cast<int>(std::lround(config.horizon / h));
                double best = 1e300;
                for (int rep = 0; rep < std::max(1, config.timing_repeats); ++rep) {
                    auto t0 = std::chrono::steady_clock::now();
                    double sink = 0;
                    for (int p = 0; p < tp; ++p) {
                        std::vector<double> y = config.initial_state, scratch;
                        for (int k = 0; k < steps_n; ++k) {
                            auto values = sampler.sample(p, k);
                            timed.step(values, y, scratch);
                        }
                        sink += y[0];
                    }
                    auto t1 = std::chrono::steady_clock::now();
                    volatile double guard = sink;
                    (void)guard;
                    double secs = std::chrono::duration<double>(t1 - t0).count();
                    best = std::min(best, secs);
                }
                auto& pt = report.schemes[s].points[li];
                pt.cpu_seconds = best * static_cast<double>(config.paths) / tp;
                pt.fourier_terms = d.fourier_terms;
                pt.grid_points = d.effective_grid_points();
            }
        }
    }
    return report;
}

void fit_order(ConvergenceReport& report, const std::vector<double>& y0) {
    double norm = 0;
    for (double x : y0) norm += x * x;
    norm = std::sqrt(norm);
    const double cap = 0.5 * norm;
    for (auto& series : report.schemes) {
        double h_star = -1;
        for (const auto& pt : series.points)
            if (pt.mse < cap) h_star = std::max(h_star, pt.h);
        std::vector<double> xs, ys;
        series.excluded_points = 0;
        for (const auto& pt : series.points) {
            if (h_star >= 0 && pt.h <= h_star && pt.mse > 0) {
                xs.push_back(std::log(pt.h));
                ys.push_back(std::log(pt.mse));
            } else {
                ++series.excluded_points;
            }
        }
        if (xs.size() < 2) {
            series.fitted = false;
            continue;
        }
        double mx = 0, my = 0;
        for (size_t i = 0; i < xs.size(); ++i) {
            mx += xs[i];
            my += ys[i];
        }
        mx /= xs.size();
        my /= ys.size();
        double sxx = 0, sxy = 0;
        for (size_t i = 0; i < xs.size(); ++i) {
            sxx += (xs[i] - mx) * (xs[i] - mx);
            sxy += (xs[i] - mx) * (ys[i] - my);
        }
        series.slope = sxy / sxx;
        double ss_res = 0;
        for (size_t i = 0; i < xs.size(); ++i) {
            double r = ys[i] - (my + series.slope * (xs[i] - mx));
            ss_res += r * r;
        }
        series.slope_se =
            xs.size() > 2 ? std::sqrt(ss_res / (xs.size() - 2) / sxx) : 0.0;
        series.fitted = true;
    }
}

std::vector<std::vector<double>> integrate_paths(const ExperimentConfig& config,
                                                 const SchemeSpec& scheme, double h,
                                                 int paths, Parallelism par,
                                                 std::vector<std::vector<double>>* trajectory0) {
    auto alphabet = config.make_alphabet();
    SchemeTable table = config.make_table(scheme, *alphabet);
    WordIndex idx;
    for (const auto& a : alphabet->letters()) idx.add(Word{a});
    for (const auto& w : table.required_integral_words)
        if (!w.empty()) idx.add(w);
    CompiledScheme compiled(table, config.fields, idx);
    CompiledSampler sampler{config.make_driver(h), &idx};
    const int steps_n = checked_ratio(config.horizon, h, "horizon / step");

    std::vector<std::vector<double>> finals(paths);
    if (trajectory0) trajectory0->clear();
    for_paths(paths, par, [&](int p) {
        std::vector<double> y = config.initial_state, scratch;
        std::vector<std::vector<double>> traj;
        if (trajectory0 && p == 0) traj.push_back(y);
        for (int k = 0; k < steps_n; ++k) {
            auto values = sampler.sample(p, k);
            compiled.step(values, y, scratch);
            if (trajectory0 && p == 0) traj.push_back(y);
        }
        finals[p] = y;
        if (trajectory0 && p == 0) *trajectory0 = std::move(traj);
    });
    return finals;
}

}  // namespace qsint
