#include "qsint/wordpoly.hpp"

#include <sstream>
#include <stdexcept>

namespace qsint {

void WordPoly::add(const Word& w, const Rat& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(w, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

WordPoly& WordPoly::operator+=(const WordPoly& p) {
    for (const auto& [w, c] : p.terms_) add(w, c);
    return *this;
}

WordPoly& WordPoly::operator-=(const WordPoly& p) {
    for (const auto& [w, c] : p.terms_) add(w, -c);
    return *this;
}

WordPoly& WordPoly::operator*=(const Rat& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [w, coeff] : terms_) coeff *= c;
    return *this;
}

Rat WordPoly::coeff(const Word& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? Rat(0) : it->second;
}

WordPoly WordPoly::append(const Letter& a) const {
    WordPoly out;
    for (const auto& [w, c] : terms_) out.add(w.append(a), c);
    return out;
}

WordPoly WordPoly::append(const std::vector<LetterTerm>& combo) const {
    WordPoly out;
    for (const auto& [w, c] : terms_)
        for (const auto& lt : combo) out.add(w.append(lt.letter), c * lt.coeff);
    return out;
}

WordPoly WordPoly::concat(const Word& v) const {
    WordPoly out;
    for (const auto& [w, c] : terms_) out.add(w.concat(v), c);
    return out;
}

std::string WordPoly::str() const { return wordpoly_str(*this); }

void TimePoly::add(int power, const Rat& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(power, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

TimePoly& TimePoly::operator+=(const TimePoly& p) {
    for (const auto& [k, c] : p.terms_) add(k, c);
    return *this;
}

TimePoly& TimePoly::operator-=(const TimePoly& p) {
    for (const auto& [k, c] : p.terms_) add(k, -c);
    return *this;
}

TimePoly& TimePoly::operator*=(const Rat& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [k, coeff] : terms_) coeff *= c;
    return *this;
}

TimePoly TimePoly::integrated() const {
    TimePoly out;
    for (const auto& [k, c] : terms_) out.add(k + 1, c / Rat(k + 1));
    return out;
}

Rat TimePoly::coeff(int power) const {
    auto it = terms_.find(power);
    return it == terms_.end() ? Rat(0) : it->second;
}

double TimePoly::eval(double t) const {
    double out = 0;
    for (const auto& [k, c] : terms_) {
        double p = 1;
        for (int i = 0; i < k; ++i) p *= t;
        out += rat_double(c) * p;
    }
    return out;
}

std::string TimePoly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << rat_str(c);
        if (k == 1)
            os << "*t";
        else if (k > 1)
            os << "*t^" << k;
    }
    return os.str();
}

WordPoly bracket(const Letter& a, const Letter& b, const Alphabet& alphabet) {
    WordPoly out;
    if (a.is_time() || b.is_time()) return out;
    if (a.is_wiener() != b.is_wiener() || a.index != b.index) return out;
    if (a.is_wiener()) {
        out.add(Word{Letter::time()}, 1);
        return out;
    }
    int p = a.power + b.power;
    out.add(Word{Letter::time()}, alphabet.moment_rate(a.index, p));
    for (const auto& lt : alphabet.collapse_power(a.index, p))
        out.add(Word{lt.letter}, lt.coeff);
    return out;
}

Rat bracket_time_coeff(const Letter& a, const Letter& b, const Alphabet& alphabet) {
    if (a.is_time() || b.is_time()) return 0;
    if (a.is_wiener() != b.is_wiener() || a.index != b.index) return 0;
    if (a.is_wiener()) return 1;
    return alphabet.moment_rate(a.index, a.power + b.power);
}

WordPoly iterated_bracket(const Word& w, const Alphabet& alphabet) {
    if (w.empty()) return WordPoly();
    WordPoly acc(Word{w.letters.back()});
    for (int i = w.size() - 2; i >= 0; --i) {
        WordPoly next;
        for (const auto& [mono, c] : acc.terms()) {
            // monomials of an iterated bracket are single letters
            next += bracket(w.letters[i], mono.letters.front(), alphabet) * c;
        }
        acc = next;
    }
    return acc;
}

namespace {

// ua * vb = (u * vb)a + (ua * v)b + (u * v)[a, b], with the empty word as
// unit. The bracket is passed in so the shuffle shares the recursion.
class ShuffleEngine {
  public:
    ShuffleEngine(const Alphabet* alphabet) : alphabet_(alphabet) {}

    WordPoly run(const Word& u, const Word& v) {
        auto key = std::make_pair(u, v);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        WordPoly out;
        if (u.empty()) {
            out = WordPoly(v);
        } else if (v.empty()) {
            out = WordPoly(u);
        } else {
            Letter a = u.letters.back(), b = v.letters.back();
            Word u1 = u.prefix(u.size() - 1), v1 = v.prefix(v.size() - 1);
            out += run(u1, v).append(a);
            out += run(u, v1).append(b);
            if (alphabet_) {
                WordPoly br = bracket(a, b, *alphabet_);
                if (!br.is_zero()) {
                    std::vector<LetterTerm> combo;
                    for (const auto& [mono, c] : br.terms())
                        combo.push_back({mono.letters.front(), c});
                    out += run(u1, v1).append(combo);
                }
            }
        }
        memo_.emplace(std::move(key), out);
        return out;
    }

  private:
    const Alphabet* alphabet_;
    std::map<std::pair<Word, Word>, WordPoly> memo_;
};

}  // namespace

WordPoly quasi_shuffle(const Word& u, const Word& v, const Alphabet& alphabet) {
    ShuffleEngine eng(&alphabet);
    return eng.run(u, v);
}

WordPoly quasi_shuffle(const WordPoly& p, const WordPoly& q, const Alphabet& alphabet) {
    ShuffleEngine eng(&alphabet);
    WordPoly out;
    for (const auto& [u, cu] : p.terms())
        for (const auto& [v, cv] : q.terms()) out += eng.run(u, v) * (cu * cv);
    return out;
}

WordPoly shuffle(const Word& u, const Word& v) {
    ShuffleEngine eng(nullptr);
    return eng.run(u, v);
}

WordPoly shuffle(const WordPoly& p, const WordPoly& q) {
    ShuffleEngine eng(nullptr);
    WordPoly out;
    for (const auto& [u, cu] : p.terms())
        for (const auto& [v, cv] : q.terms()) out += eng.run(u, v) * (cu * cv);
    return out;
}

std::vector<std::pair<Word, Word>> deconcatenate(const Word& w) {
    std::vector<std::pair<Word, Word>> out;
    out.reserve(w.size() + 1);
    for (int k = 0; k <= w.size(); ++k) out.emplace_back(w.prefix(k), w.suffix_from(k));
    return out;
}

TimePoly expectation(const Word& w) {
    for (const auto& a : w.letters)
        if (!a.is_time()) return TimePoly();
    Rat fact = 1;
    for (int k = 2; k <= w.size(); ++k) fact *= k;
    return TimePoly(w.size(), Rat(1) / fact);
}

TimePoly expectation(const WordPoly& p) {
    TimePoly out;
    for (const auto& [w, c] : p.terms()) out += expectation(w) * c;
    return out;
}

// Only all-time monomials of u * v survive the expectation, and those arise
// from the recursion by appending a time letter from u, a time letter from
// v, or the time component of a bracket of two non-time letters. This walks
// prefix pairs directly instead of expanding the product.
TimePoly expectation_product(const Word& u, const Word& v, const Alphabet& alphabet) {
    int nu = u.size(), nv = v.size();
    std::vector<std::vector<TimePoly>> e(nu + 1, std::vector<TimePoly>(nv + 1));
    for (int i = 0; i <= nu; ++i) {
        for (int j = 0; j <= nv; ++j) {
            if (i == 0 && j == 0) {
                e[i][j] = TimePoly(0, 1);
                continue;
            }
            TimePoly acc;
            if (i > 0 && u.letters[i - 1].is_time()) acc += e[i - 1][j].integrated();
            if (j > 0 && v.letters[j - 1].is_time()) acc += e[i][j - 1].integrated();
            if (i > 0 && j > 0) {
                Rat kappa = bracket_time_coeff(u.letters[i - 1], v.letters[j - 1], alphabet);
                if (kappa != 0) acc += e[i - 1][j - 1].integrated() * kappa;
            }
            e[i][j] = std::move(acc);
        }
    }
    return e[nu][nv];
}

std::string wordpoly_str(const WordPoly& p) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [w, c] : p.terms()) {
        if (!first) os << " + ";
        first = false;
        os << rat_str(c) << "*" << word_str(w);
    }
    return os.str();
}

WordPoly wordpoly_parse(const std::string& s, const Alphabet& alphabet) {
    WordPoly out;
    if (s == "0") return out;
    std::istringstream is(s);
    std::string term;
    while (std::getline(is, term, '+')) {
        auto star = term.find('*');
        if (star == std::string::npos) throw std::invalid_argument("bad polynomial: " + s);
        auto trim = [](std::string t) {
            size_t a = t.find_first_not_of(" \t");
            size_t b = t.find_last_not_of(" \t");
            return a == std::string::npos ? std::string() : t.substr(a, b - a + 1);
        };
        Rat c = rat_parse(trim(term.substr(0, star)));
        Word w = alphabet.parse_word(trim(term.substr(star + 1)));
        out.add(w, c);
    }
    return out;
}

}  // namespace qsint
