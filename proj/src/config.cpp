#include "qsint/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace qsint {

using nlohmann::json;

namespace {

// Exact rational from a JSON number or "p/q" string. Decimal literals are
// read digit-for-digit, so 0.5 means exactly 1/2.
Rat rat_from_json(const json& v) {
    if (v.is_string()) return rat_parse(v.get<std::string>());
    if (v.is_number_integer()) return Rat(v.get<long>());
    if (v.is_number_float()) {
        std::ostringstream os;
        os.precision(12);
        os << std::fixed << v.get<double>();
        std::string s = os.str();
        auto dot = s.find('.');
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        size_t frac_len = s.size() - dot - 1;
        Rat den = 1;
        for (size_t i = 0; i < frac_len; ++i) den *= 10;
        Rat r = rat_parse(digits);
        r /= den;
        return r;
    }
    throw std::invalid_argument("expected a number or rational string");
}

std::shared_ptr<VectorField> field_from_json(const json& f, int dim) {
    std::string type = f.at("type").get<std::string>();
    std::vector<double> params;
    if (f.contains("matrix")) params = f.at("matrix").get<std::vector<double>>();
    if (f.contains("value")) params = f.at("value").get<std::vector<double>>();
    return build_field(type, dim, params);
}

SchemeSpec scheme_from_json(const json& s) {
    std::string kind = s.at("kind").get<std::string>();
    std::string grading = s.value("grading", "");
    int order = s.at("order").get<int>();
    return parse_scheme_spec(kind, grading, order);
}

}  // namespace

SchemeSpec parse_scheme_spec(const std::string& kind, const std::string& grading, int order) {
    SchemeSpec spec;
    spec.order = order;
    if (kind == "taylor") {
        if (grading == "wl")
            spec.kind = SchemeKind::TaylorWl;
        else if (grading == "ms" || grading.empty())
            spec.kind = SchemeKind::TaylorMs;
        else
            throw std::invalid_argument("unknown grading: " + grading);
    } else if (kind == "taylor-wl") {
        spec.kind = SchemeKind::TaylorWl;
    } else if (kind == "taylor-ms") {
        spec.kind = SchemeKind::TaylorMs;
    } else if (kind == "asri") {
        spec.kind = SchemeKind::Asri;
    } else if (kind == "masri") {
        spec.kind = SchemeKind::Masri;
    } else {
        throw std::invalid_argument("unknown scheme kind: " + kind);
    }
    if ((spec.kind == SchemeKind::Asri || spec.kind == SchemeKind::Masri) &&
        !grading.empty() && grading != "wl")
        throw std::invalid_argument("asri schemes are word-length graded");
    return spec;
}

std::shared_ptr<const Alphabet> ExperimentConfig::make_alphabet(int max_grade) const {
    if (max_grade <= 0) max_grade = max_scheme_grade();
    return std::make_shared<Alphabet>(static_cast<int>(fields.wiener.size()), jump_specs,
                                      max_grade);
}

DriverConfig ExperimentConfig::make_driver(double h) const {
    DriverConfig d;
    d.wiener_count = static_cast<int>(fields.wiener.size());
    for (const auto& jf : fields.jumps) d.jumps.push_back(jf.law);
    d.fourier_terms = fourier_terms;
    d.grid_points = grid_points;
    d.seed = seed;
    d.step = h;
    return d;
}

SchemeTable ExperimentConfig::make_table(const SchemeSpec& spec, const Alphabet& alphabet) const {
    switch (spec.kind) {
        case SchemeKind::TaylorWl: return taylor_wl(spec.order, alphabet);
        case SchemeKind::TaylorMs: return taylor_ms(spec.order, alphabet);
        case SchemeKind::Asri: return asri_direct(spec.order, alphabet);
        case SchemeKind::Masri: return asri_modified(spec.order, alphabet);
    }
    throw std::logic_error("bad scheme kind");
}

int ExperimentConfig::max_scheme_grade() const {
    int g = 1;
    auto bump = [&](const SchemeSpec& s) {
        int need = s.order;
        if (s.kind == SchemeKind::Asri || s.kind == SchemeKind::Masri) need = s.order + 1;
        g = std::max(g, need);
    };
    for (const auto& s : schemes) bump(s);
    bump(reference);
    return g;
}

ExperimentConfig parse_config(const std::string& json_text) {
    json j = json::parse(json_text);
    if (j.value("schema_version", 1) != 1)
        throw std::invalid_argument("unsupported config schema version");

    ExperimentConfig cfg;
    cfg.dimension = j.at("dimension").get<int>();
    cfg.initial_state = j.at("initial_state").get<std::vector<double>>();
    if (static_cast<int>(cfg.initial_state.size()) != cfg.dimension)
        throw std::invalid_argument("initial_state length must match dimension");
    cfg.horizon = j.value("horizon", 1.0);

    const json& jf = j.at("fields");
    cfg.fields.dimension = cfg.dimension;
    if (jf.contains("drift"))
        cfg.fields.drift = field_from_json(jf.at("drift"), cfg.dimension);
    else
        cfg.fields.drift = make_zero_field(cfg.dimension);
    if (jf.contains("wiener"))
        for (const auto& f : jf.at("wiener"))
            cfg.fields.wiener.push_back(field_from_json(f, cfg.dimension));
    if (jf.contains("jump")) {
        int next_index = 1;
        for (const auto& f : jf.at("jump")) {
            JumpField jfield;
            jfield.index = f.value("index", next_index);
            next_index = jfield.index + 1;
            jfield.field = field_from_json(f, cfg.dimension);

            JumpSpec spec;
            spec.index = jfield.index;
            spec.intensity = rat_from_json(f.at("intensity"));
            if (f.contains("sizes")) {
                for (const auto& s : f.at("sizes"))
                    spec.sizes.push_back(
                        {rat_from_json(s.at("size")), rat_from_json(s.at("weight"))});
            } else {
                spec.sizes.push_back({Rat(1), Rat(1)});  // standard Poisson
            }
            cfg.jump_specs.push_back(spec);

            jfield.law.index = jfield.index;
            jfield.law.intensity = rat_double(spec.intensity);
            for (const auto& [s, w] : spec.sizes)
                jfield.law.sizes.push_back({rat_double(s), rat_double(w)});
            cfg.fields.jumps.push_back(std::move(jfield));
        }
    }
    cfg.fields.max_derivative_order = j.value("max_derivative_order", 4);

    if (j.contains("driver")) {
        cfg.fourier_terms = j.at("driver").value("fourier_terms", 10);
        cfg.grid_points = j.at("driver").value("grid_points", 0);
    }

    cfg.steps = j.at("steps").get<std::vector<double>>();
    cfg.fine_multiplier = j.value("fine_multiplier", 32);
    cfg.paths = j.value("paths", 100);
    cfg.timing_paths = j.value("timing_paths", 0);
    cfg.timing_repeats = j.value("timing_repeats", 3);

    for (const auto& s : j.at("schemes")) cfg.schemes.push_back(scheme_from_json(s));
    if (j.contains("reference"))
        cfg.reference = scheme_from_json(j.at("reference"));
    cfg.seed = j.value("seed", 1ull);
    cfg.output_dir = j.value("output", std::string());
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

}  // namespace qsint
