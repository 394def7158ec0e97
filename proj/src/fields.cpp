#include "qsint/fields.hpp"

#include <cmath>
#include <stdexcept>

namespace qsint {

namespace {

class LinearField : public VectorField {
  public:
    LinearField(int dim, std::vector<double> a) : dim_(dim), a_(std::move(a)) {
        if (static_cast<int>(a_.size()) != dim_ * dim_)
            throw std::invalid_argument("linear field matrix size mismatch");
    }
    int dimension() const override { return dim_; }
    void eval(const double* x, double* out) const override { run(x, out); }
    void eval(const TJet* x, TJet* out) const override { run(x, out); }
    const std::vector<double>* matrix() const override { return &a_; }

  private:
    template <typename S>
    void run(const S* x, S* out) const {
        for (int i = 0; i < dim_; ++i) {
            S acc = x[0] * a_[i * dim_];
            for (int j = 1; j < dim_; ++j) acc += x[j] * a_[i * dim_ + j];
            out[i] = acc;
        }
    }
    int dim_;
    std::vector<double> a_;
};

class Trig4Field : public VectorField {
  public:
    int dimension() const override { return 4; }
    void eval(const double* x, double* out) const override {
        out[0] = std::sin(x[0]);
        out[1] = std::cos(x[1]);
        out[2] = x[3];
        out[3] = -std::sin(x[2]);
    }
    void eval(const TJet* x, TJet* out) const override {
        out[0] = sin(x[0]);
        out[1] = cos(x[1]);
        out[2] = x[3];
        out[3] = -sin(x[2]);
    }
};

class ConstantField : public VectorField {
  public:
    explicit ConstantField(std::vector<double> v) : v_(std::move(v)) {}
    int dimension() const override { return static_cast<int>(v_.size()); }
    void eval(const double* x, double* out) const override {
        (void)x;
        for (size_t i = 0; i < v_.size(); ++i) out[i] = v_[i];
    }
    void eval(const TJet* x, TJet* out) const override {
        (void)x;
        for (size_t i = 0; i < v_.size(); ++i) out[i] = TJet(v_[i]);
    }

  private:
    std::vector<double> v_;
};

std::map<std::string, FieldBuilder>& registry() {
    static std::map<std::string, FieldBuilder> reg = {
        {"linear",
         [](int dim, const std::vector<double>& params) {
             return make_linear_field(dim, params);
         }},
        {"trig4",
         [](int dim, const std::vector<double>&) {
             if (dim != 4) throw std::invalid_argument("trig4 requires dimension 4");
             return make_trig4_field();
         }},
        {"constant",
         [](int dim, const std::vector<double>& params) {
             if (static_cast<int>(params.size()) != dim)
                 throw std::invalid_argument("constant field needs dim values");
             return make_constant_field(params);
         }},
        {"zero", [](int dim, const std::vector<double>&) { return make_zero_field(dim); }},
    };
    return reg;
}

}  // namespace

std::shared_ptr<VectorField> make_linear_field(int dim, std::vector<double> row_major) {
    return std::make_shared<LinearField>(dim, std::move(row_major));
}

std::shared_ptr<VectorField> make_trig4_field() { return std::make_shared<Trig4Field>(); }

std::shared_ptr<VectorField> make_constant_field(std::vector<double> value) {
    return std::make_shared<ConstantField>(std::move(value));
}

std::shared_ptr<VectorField> make_zero_field(int dim) {
    return std::make_shared<LinearField>(dim, std::vector<double>(dim * dim, 0.0));
}

void register_field(const std::string& name, FieldBuilder builder) {
    registry()[name] = std::move(builder);
}

std::shared_ptr<VectorField> build_field(const std::string& name, int dim,
                                         const std::vector<double>& params) {
    auto it = registry().find(name);
    if (it == registry().end()) throw std::invalid_argument("unknown field type: " + name);
    return it->second(dim, params);
}

const VectorField& VectorFieldSet::wiener_field(int index) const {
    if (index < 1 || index > static_cast<int>(wiener.size()))
        throw std::domain_error("no wiener field with index " + std::to_string(index));
    return *wiener[index - 1];
}

const JumpField& VectorFieldSet::jump_field(int index) const {
    for (const auto& j : jumps)
        if (j.index == index) return j;
    throw std::domain_error("no jump field with index " + std::to_string(index));
}

namespace {

const std::vector<double>* letter_matrix(const Letter& a, const VectorFieldSet& fields) {
    if (a.is_time()) return fields.drift ? fields.drift->matrix() : nullptr;
    if (a.is_wiener()) return fields.wiener_field(a.index).matrix();
    return fields.jump_field(a.index).field->matrix();
}

// The evaluation context: a point whose coordinates are jets in the stack
// of directional variables pushed so far.
class WordEvaluator {
  public:
    WordEvaluator(const VectorFieldSet& fields) : fields_(fields), n_(fields.dimension) {}

    JetVec eval(const Word& w, size_t pos, const JetVec& x) {
        if (pos == w.letters.size()) return x;
        const Letter& a = w.letters[pos];
        if (a.is_wiener()) {
            JetVec shifted = shift_along(x, fields_.wiener_field(a.index), 1);
            JetVec g = eval(w, pos + 1, shifted);
            return extract_all(g, 1);
        }
        if (a.is_jump()) {
            const JumpField& jf = fields_.jump_field(a.index);
            if (a.power == 1 && jf.law.unit()) {
                // unit jumps carry the full shift operator
                JetVec moved = add_field(x, *jf.field, 1.0);
                JetVec g1 = eval(w, pos + 1, moved);
                JetVec g0 = eval(w, pos + 1, x);
                return sub(g1, g0);
            }
            JetVec shifted = shift_along(x, *jf.field, a.power);
            JetVec g = eval(w, pos + 1, shifted);
            return extract_all(g, a.power);
        }
        // time letter: drift + second-order diffusion + jump compensator
        JetVec acc;
        {
            JetVec shifted = shift_along(x, *fields_.drift, 1);
            acc = extract_all(eval(w, pos + 1, shifted), 1);
        }
        for (const auto& vf : fields_.wiener) {
            JetVec shifted = shift_along(x, *vf, 2);
            JetVec d2 = extract_all(eval(w, pos + 1, shifted), 2);
            acc = add(acc, d2);  // extract(2) already carries the 1/2
        }
        for (const auto& jf : fields_.jumps) {
            JetVec plain = eval(w, pos + 1, x);
            JetVec dir = extract_all(
                eval(w, pos + 1, shift_along(x, *jf.field, 1)), 1);
            for (const auto& [size, weight] : jf.law.sizes) {
                double rate = jf.law.intensity * weight;
                JetVec moved = add_field(x, *jf.field, size);
                JetVec shifted_val = eval(w, pos + 1, moved);
                for (int i = 0; i < n_; ++i) {
                    TJet term = shifted_val[i] - plain[i] - dir[i] * size;
                    acc[i] += term * rate;
                }
            }
        }
        return acc;
    }

  private:
    // x + tau * V(x) with a fresh variable tau of the given order
    JetVec shift_along(const JetVec& x, const VectorField& field, int order) {
        JetVec v(n_);
        field.eval(x.data(), v.data());
        std::vector<int> shape = x[0].shape();
        shape.push_back(order);
        TJet tau = TJet::variable(shape);
        JetVec out(n_);
        for (int i = 0; i < n_; ++i) out[i] = x[i] + tau * v[i];
        return out;
    }

    // x + c * V(x), a finite shift
    JetVec add_field(const JetVec& x, const VectorField& field, double c) {
        JetVec v(n_);
        field.eval(x.data(), v.data());
        JetVec out(n_);
        for (int i = 0; i < n_; ++i) out[i] = x[i] + v[i] * c;
        return out;
    }

    JetVec extract_all(const JetVec& g, int k) {
        JetVec out(n_);
        for (int i = 0; i < n_; ++i) out[i] = g[i].extract(k);
        return out;
    }

    JetVec add(const JetVec& a, const JetVec& b) {
        JetVec out(n_);
        for (int i = 0; i < n_; ++i) out[i] = a[i] + b[i];
        return out;
    }

    JetVec sub(const JetVec& a, const JetVec& b) {
        JetVec out(n_);
        for (int i = 0; i < n_; ++i) out[i] = a[i] - b[i];
        return out;
    }

    const VectorFieldSet& fields_;
    int n_;
};

}  // namespace

std::optional<std::vector<double>> word_matrix(const Word& w, const VectorFieldSet& fields) {
    const int n = fields.dimension;
    // identity
    std::vector<double> acc(n * n, 0.0);
    for (int i = 0; i < n; ++i) acc[i * n + i] = 1.0;
    // letters act right to left; each multiplies the accumulated matrix on
    // the right, giving A^(a_m) ... A^(a_1)
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
        const Letter& a = *it;
        const std::vector<double>* m = letter_matrix(a, fields);
        if (!m) return std::nullopt;
        std::vector<double> factor;
        if (a.is_jump() && a.power >= 2) {
            factor.assign(n * n, 0.0);  // higher Taylor coefficients vanish
        } else {
            factor = *m;
        }
        std::vector<double> next(n * n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                double aik = acc[i * n + k];
                if (aik == 0.0) continue;
                for (int j = 0; j < n; ++j) next[i * n + j] += aik * factor[k * n + j];
            }
        acc = std::move(next);
    }
    return acc;
}

std::vector<double> apply_word(const Word& w, const std::vector<double>& y,
                               const VectorFieldSet& fields) {
    const int n = fields.dimension;
    if (static_cast<int>(y.size()) != n) throw std::domain_error("state dimension mismatch");
    if (auto m = word_matrix(w, fields)) {
        std::vector<double> out(n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) out[i] += (*m)[i * n + j] * y[j];
        return out;
    }
    int wt_letters = 0;
    for (const auto& a : w.letters)
        if (a.is_time() || a.is_wiener()) ++wt_letters;
    int budget = std::min(wt_letters + 2, 4);
    if (budget > fields.max_derivative_order)
        throw std::domain_error("derivative budget exceeded for word " + word_str(w));

    WordEvaluator ev(fields);
    JetVec x(n);
    for (int i = 0; i < n; ++i) x[i] = TJet(y[i]);
    JetVec g = ev.eval(w, 0, x);
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = g[i].value();
    return out;
}

JetValidationReport jet_validate(const VectorField& field, const std::vector<double>& y,
                                 int order, double tolerance) {
    const int n = field.dimension();
    JetValidationReport report;
    report.best_error.assign(order, 1e300);

    // one fixed direction with mixed-magnitude entries
    std::vector<double> dir(n);
    for (int i = 0; i < n; ++i) dir[i] = 0.3 + 0.17 * i - 0.05 * i * i;

    // jet coefficients of f(y + t*dir) in t
    std::vector<std::vector<double>> jet_coeff(order + 1, std::vector<double>(n));
    {
        std::vector<int> shape{order};
        TJet tau = TJet::variable(shape);
        JetVec x(n);
        for (int i = 0; i < n; ++i) x[i] = TJet(y[i]) + tau * dir[i];
        JetVec out(n);
        field.eval(x.data(), out.data());
        for (int k = 0; k <= order; ++k)
            for (int i = 0; i < n; ++i) jet_coeff[k][i] = out[i].extract(k).value();
    }

    auto eval_at = [&](double t, std::vector<double>& out) {
        std::vector<double> x(n);
        for (int i = 0; i < n; ++i) x[i] = y[i] + t * dir[i];
        field.eval(x.data(), out.data());
    };

    // central 5-point stencil error of the k-th directional derivative
    auto fd_error = [&](int k, double hstep) {
        std::vector<std::vector<double>> f(5, std::vector<double>(n));
        for (int s = -2; s <= 2; ++s) eval_at(s * hstep, f[s + 2]);
        double worst = 0;
        for (int i = 0; i < n; ++i) {
            double fd = 0;
            switch (k) {
                case 1: fd = (f[3][i] - f[1][i]) / (2 * hstep); break;
                case 2: fd = (f[3][i] - 2 * f[2][i] + f[1][i]) / (hstep * hstep); break;
                case 3:
                    fd = (f[4][i] - 2 * f[3][i] + 2 * f[1][i] - f[0][i]) /
                         (2 * hstep * hstep * hstep);
                    break;
                case 4:
                    fd = (f[4][i] - 4 * f[3][i] + 6 * f[2][i] - 4 * f[1][i] + f[0][i]) /
                         (hstep * hstep * hstep * hstep);
                    break;
            }
            double fact = 1;
            for (int m = 2; m <= k; ++m) fact *= m;
            double exact = jet_coeff[k][i] * fact;  // k! * coefficient
            double scale = std::max({std::abs(exact), std::abs(fd), 1.0});
            worst = std::max(worst, std::abs(fd - exact) / scale);
        }
        return worst;
    };

    // orders 1..2: small steps, direct tolerance
    for (int k = 1; k <= std::min(order, 2); ++k) {
        for (double hstep : {1e-3, 1e-4, 1e-5})
            report.best_error[k - 1] = std::min(report.best_error[k - 1], fd_error(k, hstep));
        if (report.best_error[k - 1] > tolerance) report.pass = false;
    }
    // orders 3..4: steps large enough for the h^2 truncation term to
    // dominate roundoff; require the expected second-order decay
    for (int k = 3; k <= order; ++k) {
        std::vector<double> hs = {1e-1, 3e-2, 1e-2};
        std::vector<double> errs;
        for (double hstep : hs) {
            double e = fd_error(k, hstep);
            errs.push_back(e);
            report.best_error[k - 1] = std::min(report.best_error[k - 1], e);
        }
        double slope = std::log(errs[0] / std::max(errs.back(), 1e-300)) /
                       std::log(hs[0] / hs.back());
        report.slopes.push_back(slope);
        bool at_roundoff = report.best_error[k - 1] < 1e-9;
        if (!at_roundoff && (slope < 1.2 || slope > 2.8)) report.pass = false;
    }
    return report;
}

}  // namespace qsint
