#include "qsint/scheme.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "qsint/endo.hpp"

namespace qsint {

void IntegralExpr::add(Rat coeff, std::vector<Word> factors) {
    if (coeff == 0) return;
    std::sort(factors.begin(), factors.end());
    std::erase_if(factors, [](const Word& w) { return w.empty(); });  // I_e = 1
    terms_.push_back({std::move(coeff), std::move(factors)});
    normalize();
}

IntegralExpr& IntegralExpr::operator+=(const IntegralExpr& e) {
    for (const auto& t : e.terms_) terms_.push_back(t);
    normalize();
    return *this;
}

IntegralExpr& IntegralExpr::operator*=(const Rat& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& t : terms_) t.coeff *= c;
    return *this;
}

IntegralExpr IntegralExpr::from_poly(const WordPoly& p) {
    IntegralExpr e;
    for (const auto& [w, c] : p.terms()) e.add(c, {w});
    return e;
}

void IntegralExpr::normalize() {
    std::map<std::vector<Word>, Rat> acc;
    for (auto& t : terms_) acc[t.factors] += t.coeff;
    terms_.clear();
    for (auto& [f, c] : acc)
        if (c != 0) terms_.push_back({c, f});
}

std::string scheme_kind_str(SchemeKind k) {
    switch (k) {
        case SchemeKind::TaylorWl: return "taylor-wl";
        case SchemeKind::TaylorMs: return "taylor-ms";
        case SchemeKind::Asri: return "asri";
        case SchemeKind::Masri: return "masri";
    }
    return "?";
}

const SchemeRow* SchemeTable::find(const Word& w) const {
    for (const auto& r : rows)
        if (r.operator_word == w) return &r;
    return nullptr;
}

namespace {

std::vector<Word> words_of_length(const Alphabet& alphabet, int len) {
    std::vector<Word> level{Word()};
    for (int k = 0; k < len; ++k) {
        std::vector<Word> next;
        for (const auto& w : level)
            for (const auto& a : alphabet.letters()) next.push_back(w.append(a));
        level = std::move(next);
    }
    std::sort(level.begin(), level.end());
    return level;
}

void collect_required(SchemeTable& t) {
    for (const auto& r : t.rows)
        for (const auto& term : r.expr.terms())
            for (const auto& f : term.factors) t.required_integral_words.insert(f);
}

// Correction coefficient for a length-(n+1) word: the product expansion of
// the coshlog convolution series plus half the integral of (S - antipode),
// whose monomials all carry a bracket and hence have length <= n.
IntegralExpr asri_correction(const Word& w, int n, const Alphabet& alphabet) {
    IntegralExpr expr;
    int len = w.size();
    // compositions of w into k non-empty parts, k = 2..n+1, coefficient
    // (-1)^k / 2 each, every part becoming one integral factor
    for (int k = 2; k <= n + 1; ++k) {
        Rat ck((k % 2 == 0) ? 1 : -1, 2);
        // choose k-1 cut positions among len-1 gaps
        std::vector<int> cuts(k - 1);
        for (int i = 0; i < k - 1; ++i) cuts[i] = i;
        while (true) {
            std::vector<Word> parts;
            int start = 0;
            for (int c : cuts) {
                parts.push_back(Word(std::vector<Letter>(w.letters.begin() + start,
                                                         w.letters.begin() + c + 1)));
                start = c + 1;
            }
            parts.push_back(w.suffix_from(start));
            expr.add(ck, std::move(parts));
            int i = k - 2;
            while (i >= 0 && cuts[i] == len - 1 - (k - 1 - i)) --i;
            if (i < 0) break;
            ++cuts[i];
            for (int j = i + 1; j < k - 1; ++j) cuts[j] = cuts[j - 1] + 1;
        }
    }
    // (S - antipode)(w), assembled per word from the block factorizations
    Word rev = w.reversed();
    WordPoly s_minus_hat;
    Rat sign((len % 2 == 0) ? 1 : -1, 1);
    s_minus_hat.add(rev, sign);
    for (unsigned mask = 0; mask < (1u << (len - 1)); ++mask) {
        WordPoly prod = WordPoly::unit();
        int start = 0;
        for (int pos = 0; pos <= len - 1; ++pos) {
            bool cut = (pos == len - 1) || (mask & (1u << pos));
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
        s_minus_hat -= prod * sign;
    }
    expr += IntegralExpr::from_poly(s_minus_hat) *= Rat(1, 2);
    return expr;
}

}  // namespace

SchemeTable taylor_wl(int n, const Alphabet& alphabet) {
    SchemeTable t{SchemeKind::TaylorWl, n, {}, {}};
    for (int len = 0; len <= n; ++len)
        for (const auto& w : words_of_length(alphabet, len))
            t.rows.push_back({w, IntegralExpr::single(w)});
    collect_required(t);
    return t;
}

SchemeTable taylor_ms(int n, const Alphabet& alphabet) {
    SchemeTable t{SchemeKind::TaylorMs, n, {}, {}};
    for (int len = 0; len <= n; ++len)  // g_ms >= word length
        for (const auto& w : words_of_length(alphabet, len))
            if (grade(w, Grading::MeanSquare) <= n)
                t.rows.push_back({w, IntegralExpr::single(w)});
    if (n % 2 == 1) {
        int nstar = (n + 1) / 2;
        Word w(std::vector<Letter>(nstar, Letter::time()));
        if (!t.find(w)) t.rows.push_back({w, IntegralExpr::single(w)});
    }
    collect_required(t);
    return t;
}

SchemeTable asri_direct(int n, const Alphabet& alphabet) {
    if (n < 1) throw std::invalid_argument("asri order must be >= 1");
    SchemeTable t{SchemeKind::Asri, n, {}, {}};
    for (int len = 0; len <= n; ++len)
        for (const auto& w : words_of_length(alphabet, len))
            t.rows.push_back({w, IntegralExpr::single(w)});
    for (const auto& w : words_of_length(alphabet, n + 1)) {
        bool single_letter = std::all_of(w.letters.begin(), w.letters.end(),
                                         [&](const Letter& a) { return a == w.letters[0]; });
        if (single_letter && n % 2 == 0) {
            // (w + S(w))/2 vanishes for odd-length repeated-letter words
            t.rows.push_back({w, IntegralExpr()});
            continue;
        }
        t.rows.push_back({w, asri_correction(w, n, alphabet)});
    }
    collect_required(t);
    // every correction factor must already be a simulated lower-order word
    for (const auto& w : t.required_integral_words)
        if (w.size() > n)
            throw std::logic_error("asri table requires an integral of length > n: " +
                                   word_str(w));
    return t;
}

SchemeTable asri_modified(int n, const Alphabet& alphabet) {
    if (n % 2 != 0) throw std::invalid_argument("modified asri requires even order");
    SchemeTable t = asri_direct(n, alphabet);
    t.kind = SchemeKind::Masri;
    for (auto& row : t.rows) {
        const Word& w = row.operator_word;
        if (w.size() != n + 1) continue;
        bool single_letter = std::all_of(w.letters.begin(), w.letters.end(),
                                         [&](const Letter& a) { return a == w.letters[0]; });
        if (single_letter) row.expr = reduce_repeated(w.letters[0], n + 1, alphabet);
    }
    t.required_integral_words.clear();
    collect_required(t);
    return t;
}

IntegralExpr reduce_repeated(const Letter& a, int k, const Alphabet& alphabet) {
    if (k < 1) throw std::invalid_argument("power must be >= 1");
    if (k == 1) return IntegralExpr::single(Word{a});
    // gamma_1 = a, gamma_(m+1) = [gamma_m, a]; each a combination of letters
    std::vector<WordPoly> gamma(k + 1);
    gamma[1] = WordPoly(Word{a});
    for (int m = 2; m <= k; ++m) {
        WordPoly g;
        for (const auto& [mono, c] : gamma[m - 1].terms())
            g += bracket(mono.letters.front(), a, alphabet) * c;
        gamma[m] = std::move(g);
    }
    IntegralExpr expr;
    for (int m = 1; m <= k; ++m) {
        Rat sign((m % 2 == 1) ? 1 : -1, k);
        Word rep(std::vector<Letter>(k - m, a));
        for (const auto& [mono, c] : gamma[m].terms()) expr.add(sign * c, {mono, rep});
    }
    return expr;
}

std::string serialize(const SchemeTable& table) {
    std::ostringstream os;
    os << "scheme-table v1\n";
    os << "kind " << scheme_kind_str(table.kind) << "\n";
    os << "order " << table.order << "\n";
    for (const auto& row : table.rows) {
        os << "row " << word_str(row.operator_word) << " :";
        if (row.expr.is_zero()) {
            os << " 0";
        } else {
            bool first = true;
            for (const auto& t : row.expr.terms()) {
                os << (first ? " " : " + ") << rat_str(t.coeff);
                first = false;
                for (const auto& f : t.factors) os << " I(" << word_str(f) << ")";
            }
        }
        os << "\n";
    }
    return os.str();
}

SchemeTable parse_scheme(const std::string& text, const Alphabet& alphabet) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != "scheme-table v1")
        throw std::invalid_argument("bad scheme table header");
    SchemeTable t{SchemeKind::TaylorWl, 0, {}, {}};
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "kind") {
            std::string k;
            ls >> k;
            if (k == "taylor-wl") t.kind = SchemeKind::TaylorWl;
            else if (k == "taylor-ms") t.kind = SchemeKind::TaylorMs;
            else if (k == "asri") t.kind = SchemeKind::Asri;
            else if (k == "masri") t.kind = SchemeKind::Masri;
            else throw std::invalid_argument("bad scheme kind: " + k);
        } else if (tag == "order") {
            ls >> t.order;
        } else if (tag == "row") {
            std::string wstr, colon;
            ls >> wstr >> colon;
            if (colon != ":") throw std::invalid_argument("bad row line: " + line);
            SchemeRow row{alphabet.parse_word(wstr), {}};
            std::string tok;
            Rat coeff;
            std::vector<Word> factors;
            bool have_term = false;
            auto flush = [&]() {
                if (have_term) row.expr.add(coeff, factors);
                factors.clear();
                have_term = false;
            };
            while (ls >> tok) {
                if (tok == "+") {
                    flush();
                } else if (tok.rfind("I(", 0) == 0 && tok.back() == ')') {
                    factors.push_back(alphabet.parse_word(tok.substr(2, tok.size() - 3)));
                } else if (tok == "0" && !have_term) {
                    // empty expression marker
                } else {
                    coeff = rat_parse(tok);
                    have_term = true;
                }
            }
            flush();
            t.rows.push_back(std::move(row));
        } else {
            throw std::invalid_argument("bad table line: " + line);
        }
    }
    collect_required(t);
    return t;
}

}  // namespace qsint
