#include "qsint/endo.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

namespace qsint {

WordBasis::WordBasis(std::shared_ptr<const Alphabet> alphabet, int max_grade)
    : alphabet_(std::move(alphabet)), max_grade_(max_grade) {
    if (max_grade_ < 0) throw std::invalid_argument("max_grade must be >= 0");
    std::vector<Word> level{Word()};
    words_.push_back(Word());
    for (int len = 1; len <= max_grade_; ++len) {
        std::vector<Word> next;
        for (const auto& w : level)
            for (const auto& a : alphabet_->letters()) next.push_back(w.append(a));
        std::sort(next.begin(), next.end());
        for (const auto& w : next) words_.push_back(w);
        level = std::move(next);
    }
    for (int i = 0; i < static_cast<int>(words_.size()); ++i) index_[words_[i]] = i;
}

int WordBasis::index(const Word& w) const {
    auto it = index_.find(w);
    return it == index_.end() ? -1 : it->second;
}

GradedEndo::GradedEndo(std::shared_ptr<const WordBasis> basis)
    : basis_(std::move(basis)), images_(basis_->size()) {}

const WordPoly& GradedEndo::image(const Word& w) const {
    int i = basis_->index(w);
    if (i < 0) throw std::domain_error("word outside basis: " + word_str(w));
    return images_[i];
}

void GradedEndo::set_image(const Word& w, WordPoly p) {
    int i = basis_->index(w);
    if (i < 0) throw std::domain_error("word outside basis: " + word_str(w));
    // enforce the truncation convention on stored images
    WordPoly kept;
    for (const auto& [m, c] : p.terms()) {
        if (m.size() <= basis_->max_grade())
            kept.add(m, c);
        else
            truncated_ = true;
    }
    images_[i] = std::move(kept);
}

WordPoly GradedEndo::apply(const WordPoly& p) const {
    WordPoly out;
    for (const auto& [w, c] : p.terms()) out += image(w) * c;
    return out;
}

GradedEndo& GradedEndo::operator+=(const GradedEndo& g) {
    if (basis_ != g.basis_) throw std::domain_error("endomorphism basis mismatch");
    for (size_t i = 0; i < images_.size(); ++i) images_[i] += g.images_[i];
    truncated_ = truncated_ || g.truncated_;
    return *this;
}

GradedEndo& GradedEndo::operator-=(const GradedEndo& g) {
    if (basis_ != g.basis_) throw std::domain_error("endomorphism basis mismatch");
    for (size_t i = 0; i < images_.size(); ++i) images_[i] -= g.images_[i];
    truncated_ = truncated_ || g.truncated_;
    return *this;
}

GradedEndo& GradedEndo::operator*=(const Rat& c) {
    for (auto& img : images_) img *= c;
    return *this;
}

std::string GradedEndo::dump() const {
    std::ostringstream os;
    for (int i = 0; i < basis_->size(); ++i)
        os << word_str(basis_->word(i)) << " -> " << images_[i].str() << "\n";
    return os.str();
}

GradedEndo make_nu(std::shared_ptr<const WordBasis> basis) {
    GradedEndo e(basis);
    e.set_image(Word(), WordPoly::unit());
    return e;
}

GradedEndo make_identity(std::shared_ptr<const WordBasis> basis) {
    GradedEndo e(basis);
    for (int i = 0; i < basis->size(); ++i) e.set_image(basis->word(i), WordPoly(basis->word(i)));
    return e;
}

GradedEndo make_aug_ideal(std::shared_ptr<const WordBasis> basis) {
    GradedEndo e = make_identity(basis);
    e.set_image(Word(), WordPoly::zero());
    return e;
}

GradedEndo make_reversal(std::shared_ptr<const WordBasis> basis) {
    GradedEndo e(basis);
    for (int i = 0; i < basis->size(); ++i)
        e.set_image(basis->word(i), WordPoly(basis->word(i).reversed()));
    return e;
}

GradedEndo make_sign_reversal(std::shared_ptr<const WordBasis> basis) {
    GradedEndo e(basis);
    for (int i = 0; i < basis->size(); ++i) {
        const Word& w = basis->word(i);
        Rat sign = (w.size() % 2 == 0) ? 1 : -1;
        e.set_image(w, WordPoly(w.reversed(), sign));
    }
    return e;
}

GradedEndo make_antipode(std::shared_ptr<const WordBasis> basis, Product product) {
    if (product == Product::Shuffle) return make_sign_reversal(basis);
    const Alphabet& alphabet = basis->alphabet();
    GradedEndo e(basis);
    for (int i = 0; i < basis->size(); ++i) {
        const Word& w = basis->word(i);
        if (w.empty()) {
            e.set_image(w, WordPoly::unit());
            continue;
        }
        Word rev = w.reversed();
        int n = rev.size();
        WordPoly acc;
        // factorizations of rev into non-empty blocks: one bitmask per set
        // of cut positions between letters
        for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
            WordPoly prod = WordPoly::unit();
            int start = 0;
            for (int pos = 0; pos <= n - 1; ++pos) {
                bool cut = (pos == n - 1) || (mask & (1u << pos));
                if (!cut) continue;
                Word block(std::vector<Letter>(rev.letters.begin() + start,
                                               rev.letters.begin() + pos + 1));
                WordPoly blk = iterated_bracket(block, alphabet);
                WordPoly next;
                for (const auto& [u, cu] : prod.terms())
                    for (const auto& [b, cb] : blk.terms()) next.add(u.concat(b), cu * cb);
                prod = std::move(next);
                start = pos + 1;
            }
            acc += prod;
        }
        Rat sign = (n % 2 == 0) ? 1 : -1;
        e.set_image(w, acc * sign);
    }
    return e;
}

GradedEndo convolve(const GradedEndo& F, const GradedEndo& G, Product product) {
    if (F.basis_ != G.basis_) throw std::domain_error("endomorphism basis mismatch");
    auto basis = F.basis_;
    const Alphabet& alphabet = basis->alphabet();
    GradedEndo out(basis);
    for (int i = 0; i < basis->size(); ++i) {
        const Word& w = basis->word(i);
        WordPoly acc;
        for (const auto& [u, v] : deconcatenate(w)) {
            const WordPoly& fu = F.image(u);
            const WordPoly& gv = G.image(v);
            if (fu.is_zero() || gv.is_zero()) continue;
            acc += (product == Product::QuasiShuffle) ? quasi_shuffle(fu, gv, alphabet)
                                                      : shuffle(fu, gv);
        }
        out.set_image(w, std::move(acc));
    }
    out.truncated_ = out.truncated_ || F.truncated_ || G.truncated_;
    return out;
}

GradedEndo compose(const GradedEndo& F, const GradedEndo& G) {
    if (F.basis_ptr() != G.basis_ptr()) throw std::domain_error("endomorphism basis mismatch");
    GradedEndo out(F.basis_ptr());
    for (int i = 0; i < F.basis().size(); ++i)
        out.set_image(F.basis().word(i), F.apply(G.image(i)));
    return out;
}

GradedEndo conv_series(const std::vector<Rat>& coeffs, const GradedEndo& X, Product product) {
    auto basis = X.basis_ptr();
    GradedEndo Y = X;
    const WordPoly& on_unit = X.image(Word());
    if (on_unit == WordPoly::unit())
        Y -= make_nu(basis);
    else if (!on_unit.is_zero())
        throw std::domain_error("conv_series requires X to fix or kill the empty word");
    GradedEndo acc(basis);
    if (!coeffs.empty() && coeffs[0] != 0) acc += make_nu(basis) * coeffs[0];
    if (coeffs.size() <= 1) return acc;
    GradedEndo power = Y;
    size_t kmax = std::min(coeffs.size() - 1, static_cast<size_t>(basis->max_grade()));
    for (size_t k = 1; k <= kmax; ++k) {
        if (coeffs[k] != 0) acc += power * coeffs[k];
        if (k < kmax) power = convolve(power, Y, product);
    }
    return acc;
}

std::vector<Rat> coshlog_coeffs(int n) {
    // coshlog(1+x) = 1 + (x^2 - x^3 + x^4 - ...)/2
    std::vector<Rat> c(n + 1, Rat(0));
    if (n >= 0) c[0] = 1;
    for (int k = 2; k <= n; ++k) c[k] = Rat((k % 2 == 0) ? 1 : -1, 2);
    return c;
}

std::vector<Rat> sinhlog_coeffs(int n) {
    // sinhlog(1+x) = x + (-x^2 + x^3 - ...)/2
    std::vector<Rat> c(n + 1, Rat(0));
    if (n >= 1) c[1] = 1;
    for (int k = 2; k <= n; ++k) c[k] = Rat((k % 2 == 0) ? -1 : 1, 2);
    return c;
}

std::vector<Rat> log_coeffs(int n) {
    std::vector<Rat> c(n + 1, Rat(0));
    for (int k = 1; k <= n; ++k) c[k] = Rat((k % 2 == 1) ? 1 : -1, k);
    return c;
}

GradedEndo project(const GradedEndo& F, Grading grading, ProjMode mode, int n,
                   bool output_side) {
    auto keep = [&](const Word& w) {
        int g = grade(w, grading);
        switch (mode) {
            case ProjMode::Eq: return g == n;
            case ProjMode::Le: return g <= n;
            case ProjMode::Ge: return g >= n;
        }
        return false;
    };
    GradedEndo out(F.basis_ptr());
    for (int i = 0; i < F.basis().size(); ++i) {
        const Word& w = F.basis().word(i);
        if (output_side) {
            WordPoly img;
            for (const auto& [m, c] : F.image(i).terms())
                if (keep(m)) img.add(m, c);
            out.set_image(w, std::move(img));
        } else if (keep(w)) {
            out.set_image(w, F.image(i));
        }
    }
    return out;
}

GramSpec::GramSpec(std::shared_ptr<const WordBasis> basis, int dim,
                   std::vector<std::vector<Rat>> vectors)
    : basis_(std::move(basis)), dim_(dim), vectors_(std::move(vectors)) {
    if (static_cast<int>(vectors_.size()) != basis_->size())
        throw std::domain_error("Gram spec needs one vector per basis word");
    for (const auto& v : vectors_)
        if (static_cast<int>(v.size()) != dim_)
            throw std::domain_error("Gram vector dimension mismatch");
}

GramSpec GramSpec::random(std::shared_ptr<const WordBasis> basis, uint64_t seed, int range) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dist(-range, range);
    int dim = basis->size();
    std::vector<std::vector<Rat>> vecs(basis->size(), std::vector<Rat>(dim));
    for (auto& v : vecs)
        for (auto& x : v) x = dist(rng);
    return GramSpec(basis, dim, std::move(vecs));
}

GramSpec GramSpec::zero(std::shared_ptr<const WordBasis> basis, int dim) {
    std::vector<std::vector<Rat>> vecs(basis->size(), std::vector<Rat>(dim, Rat(0)));
    return GramSpec(basis, dim, std::move(vecs));
}

Rat GramSpec::pairing(int u, int v) const {
    if (u > v) std::swap(u, v);
    auto key = std::make_pair(u, v);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    Rat dot = 0;
    for (int k = 0; k < dim_; ++k) dot += vectors_[u][k] * vectors_[v][k];
    cache_.emplace(key, dot);
    return dot;
}

InnerProductKernel::InnerProductKernel(const GradedEndo& F, const GradedEndo& G)
    : basis_(F.basis_ptr()) {
    if (F.basis_ptr() != G.basis_ptr()) throw std::domain_error("endomorphism basis mismatch");
    const Alphabet& alphabet = basis_->alphabet();
    std::map<std::pair<Word, Word>, TimePoly> cache;
    for (int u = 0; u < basis_->size(); ++u) {
        const WordPoly& fu = F.image(u);
        if (fu.is_zero()) continue;
        for (int v = 0; v < basis_->size(); ++v) {
            const WordPoly& gv = G.image(v);
            if (gv.is_zero()) continue;
            TimePoly acc;
            for (const auto& [wu, cu] : fu.terms()) {
                for (const auto& [wv, cv] : gv.terms()) {
                    if (reduce_word(wu) != reduce_word(wv)) continue;  // expectation is zero
                    auto key = std::make_pair(wu, wv);
                    auto it = cache.find(key);
                    if (it == cache.end())
                        it = cache.emplace(key, expectation_product(wu, wv, alphabet)).first;
                    acc += it->second * (cu * cv);
                }
            }
            if (!acc.is_zero()) entries_.push_back({{u, v}, std::move(acc)});
        }
    }
}

TimePoly InnerProductKernel::apply(const GramSpec& gram) const {
    if (gram.basis_ptr() != basis_)
        throw std::domain_error("Gram spec basis mismatch");
    TimePoly out;
    for (const auto& [uv, e] : entries_) {
        Rat p = gram.pairing(uv.first, uv.second);
        if (p != 0) out += e * p;
    }
    return out;
}

TimePoly inner_product(const GradedEndo& F, const GradedEndo& G, const GramSpec& gram) {
    return InnerProductKernel(F, G).apply(gram);
}

LeadingGap leading_gap(int n, const GramSpec& gram) {
    auto bp = gram.basis_ptr();
    if (n + 1 > gram.basis().max_grade())
        throw std::domain_error("leading_gap needs max_grade >= n+1");
    GradedEndo id = make_identity(bp);
    GradedEndo S = make_sign_reversal(bp);
    GradedEndo minus = (id - S) * Rat(1, 2);
    GradedEndo plus = (id + S) * Rat(1, 2);
    auto pi = [&](const GradedEndo& F) {
        return project(F, Grading::WordLength, ProjMode::Eq, n + 1);
    };
    GradedEndo pid = pi(id), pminus = pi(minus), pplus = pi(plus);
    if (pid.truncated() || pminus.truncated() || pplus.truncated())
        throw std::domain_error("truncated input to leading_gap");
    LeadingGap gap{inner_product(pid, pid, gram), inner_product(pminus, pminus, gram),
                   inner_product(pplus, pplus, gram)};
    if (!(gap.taylor_sq - gap.asri_sq - gap.cross_part_sq).is_zero())
        throw std::logic_error("leading-gap identity violated");
    return gap;
}

TimePoly perturbation_cross_term(int n, const GradedEndo& Z, const GramSpec& gram) {
    auto bp = Z.basis_ptr();
    GradedEndo revZ = compose(make_reversal(bp), Z);
    for (int i = 0; i < bp->size(); ++i) {
        const Word& w = bp->word(i);
        if (w.size() == n + 1 && !(revZ.image(i) == Z.image(i)))
            throw std::domain_error("perturbation must satisfy |S| o Z = Z at length n+1");
    }
    GradedEndo id = make_identity(bp);
    GradedEndo S = make_sign_reversal(bp);
    GradedEndo minus = project((id - S) * Rat(1, 2), Grading::WordLength, ProjMode::Eq, n + 1);
    GradedEndo piZ = project(Z, Grading::WordLength, ProjMode::Eq, n + 1);
    return inner_product(minus, piZ, gram);
}

}  // namespace qsint
