#include "qsint/words.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace qsint {

std::string letter_str(const Letter& a) {
    switch (a.kind) {
        case Letter::Kind::Time:
            return "0";
        case Letter::Kind::Wiener:
            return "w" + std::to_string(a.index);
        case Letter::Kind::Jump:
            if (a.power == 1) return "j" + std::to_string(a.index);
            return "j" + std::to_string(a.index) + "^" + std::to_string(a.power);
    }
    return "?";
}

Word Word::prefix(int n) const {
    return Word(std::vector<Letter>(letters.begin(), letters.begin() + n));
}

Word Word::suffix_from(int n) const {
    return Word(std::vector<Letter>(letters.begin() + n, letters.end()));
}

Word Word::append(const Letter& a) const {
    Word w = *this;
    w.letters.push_back(a);
    return w;
}

Word Word::concat(const Word& v) const {
    Word w = *this;
    w.letters.insert(w.letters.end(), v.letters.begin(), v.letters.end());
    return w;
}

Word Word::reversed() const {
    Word w = *this;
    std::reverse(w.letters.begin(), w.letters.end());
    return w;
}

std::string word_str(const Word& w) {
    if (w.empty()) return "e";
    std::string s;
    for (const auto& a : w.letters) s += letter_str(a);
    return s;
}

int grade(const Word& w, Grading g) {
    if (g == Grading::WordLength) return w.size();
    int zeros = 0;
    for (const auto& a : w.letters)
        if (a.is_time()) ++zeros;
    return w.size() + zeros;  // 2*zeta + xi
}

Word reduce_word(const Word& w) {
    Word out;
    for (const auto& a : w.letters) {
        if (a.is_time()) continue;
        if (a.is_jump())
            out.letters.push_back(Letter::jump(a.index, 1));
        else
            out.letters.push_back(a);
    }
    return out;
}

namespace {

// Coefficient vector of the p-th compensated power bracket over the process
// basis (t, N_1, ..., N_R), where N_r counts jumps of the r-th support size.
std::vector<Rat> power_vector(const JumpSpec& spec, int p) {
    std::vector<Rat> v(spec.sizes.size() + 1);
    Rat mp = 0;
    for (const auto& [size, weight] : spec.sizes) mp += weight * rat_pow(size, p);
    v[0] = -spec.intensity * mp;
    for (size_t r = 0; r < spec.sizes.size(); ++r) v[r + 1] = rat_pow(spec.sizes[r].first, p);
    return v;
}

// Exact Gaussian elimination: returns coefficients x with basis * x = target,
// or nullopt when target is outside the span.
std::optional<std::vector<Rat>> solve_in_span(const std::vector<std::vector<Rat>>& basis,
                                              const std::vector<Rat>& target) {
    size_t rows = target.size(), cols = basis.size();
    // augmented matrix [basis | target], basis vectors as columns
    std::vector<std::vector<Rat>> m(rows, std::vector<Rat>(cols + 1));
    for (size_t i = 0; i < rows; ++i) {
        for (size_t j = 0; j < cols; ++j) m[i][j] = basis[j][i];
        m[i][cols] = target[i];
    }
    std::vector<int> pivot_col_of_row;
    size_t row = 0;
    for (size_t col = 0; col < cols && row < rows; ++col) {
        size_t sel = row;
        while (sel < rows && m[sel][col] == 0) ++sel;
        if (sel == rows) continue;
        std::swap(m[sel], m[row]);
        for (size_t i = 0; i < rows; ++i) {
            if (i == row || m[i][col] == 0) continue;
            Rat f = m[i][col] / m[row][col];
            for (size_t j = col; j <= cols; ++j) m[i][j] -= f * m[row][j];
        }
        pivot_col_of_row.push_back(static_cast<int>(col));
        ++row;
    }
    for (size_t i = row; i < rows; ++i)
        if (m[i][cols] != 0) return std::nullopt;
    std::vector<Rat> x(cols, Rat(0));
    for (size_t r = 0; r < pivot_col_of_row.size(); ++r)
        x[pivot_col_of_row[r]] = m[r][cols] / m[r][pivot_col_of_row[r]];
    return x;
}

}  // namespace

Alphabet::Alphabet(int wiener_count, std::vector<JumpSpec> jumps, int max_grade)
    : wiener_count_(wiener_count), max_grade_(max_grade), jumps_(std::move(jumps)) {
    if (wiener_count_ < 0) throw std::invalid_argument("wiener_count must be >= 0");
    if (max_grade_ < 1) throw std::invalid_argument("max_grade must be >= 1");
    for (auto& spec : jumps_) {
        if (spec.intensity <= 0) throw std::invalid_argument("jump intensity must be positive");
        if (spec.sizes.empty()) throw std::invalid_argument("jump-size law must be non-empty");
        Rat total = 0;
        for (auto& [size, weight] : spec.sizes) {
            if (size == 0) throw std::invalid_argument("jump sizes must be non-zero");
            if (weight <= 0) throw std::invalid_argument("jump weights must be positive");
            total += weight;
        }
        if (total != 1) throw std::invalid_argument("jump-size weights must sum to 1");
        for (size_t a = 0; a < spec.sizes.size(); ++a)
            for (size_t b = a + 1; b < spec.sizes.size(); ++b)
                if (spec.sizes[a].first == spec.sizes[b].first)
                    throw std::invalid_argument("jump sizes must be distinct");

        JumpTable jt;
        jt.spec = spec;
        // Grow the stored powers while the bracket stays independent. Once a
        // power falls into the span of the lower ones, all higher powers do
        // too, so we stop.
        std::vector<std::vector<Rat>> basis;
        std::vector<Rat> t_vec(spec.sizes.size() + 1, Rat(0));
        t_vec[0] = 1;
        basis.push_back(t_vec);
        for (int p = 1; p <= static_cast<int>(spec.sizes.size()); ++p) {
            auto v = power_vector(spec, p);
            if (solve_in_span(basis, v)) break;
            basis.push_back(v);
            jt.stored.push_back(p);
        }
        tables_.push_back(std::move(jt));
    }

    letters_.push_back(Letter::time());
    for (int i = 1; i <= wiener_count_; ++i) letters_.push_back(Letter::wiener(i));
    for (const auto& jt : tables_)
        for (int p : jt.stored) letters_.push_back(Letter::jump(jt.spec.index, p));
    std::sort(letters_.begin(), letters_.end());
}

const JumpSpec& Alphabet::jump_spec(int index) const { return table(index).spec; }

const Alphabet::JumpTable& Alphabet::table(int index) const {
    for (const auto& jt : tables_)
        if (jt.spec.index == index) return jt;
    throw std::domain_error("unknown jump index " + std::to_string(index));
}

bool Alphabet::contains(const Letter& a) const {
    return std::find(letters_.begin(), letters_.end(), a) != letters_.end();
}

Rat Alphabet::moment_rate(int jump_index, int p) const {
    const auto& spec = table(jump_index).spec;
    Rat m = 0;
    for (const auto& [size, weight] : spec.sizes) m += weight * rat_pow(size, p);
    return spec.intensity * m;
}

const std::vector<int>& Alphabet::stored_powers(int jump_index) const {
    return table(jump_index).stored;
}

std::vector<LetterTerm> Alphabet::solve_collapse(const JumpTable& jt, int p) const {
    std::vector<std::vector<Rat>> basis;
    std::vector<Rat> t_vec(jt.spec.sizes.size() + 1, Rat(0));
    t_vec[0] = 1;
    basis.push_back(t_vec);
    for (int q : jt.stored) basis.push_back(power_vector(jt.spec, q));
    auto x = solve_in_span(basis, power_vector(jt.spec, p));
    if (!x) throw std::domain_error("power bracket unexpectedly outside stored span");
    // x[0] multiplies t; it vanishes because power brackets are martingales.
    std::vector<LetterTerm> out;
    for (size_t k = 0; k < jt.stored.size(); ++k)
        if ((*x)[k + 1] != 0)
            out.push_back({Letter::jump(jt.spec.index, jt.stored[k]), (*x)[k + 1]});
    return out;
}

std::vector<LetterTerm> Alphabet::collapse_power(int jump_index, int p) const {
    if (p < 1) throw std::invalid_argument("power must be >= 1");
    const auto& jt = table(jump_index);
    if (std::find(jt.stored.begin(), jt.stored.end(), p) != jt.stored.end())
        return {{Letter::jump(jump_index, p), Rat(1)}};
    auto it = jt.collapse_cache.find(p);
    if (it != jt.collapse_cache.end()) return it->second;
    auto sol = solve_collapse(jt, p);
    jt.collapse_cache.emplace(p, sol);
    return sol;
}

std::string Alphabet::render_word(const Word& w) const { return word_str(w); }

Word Alphabet::parse_word(const std::string& s) const {
    if (s == "e") return Word();
    Word w;
    size_t i = 0;
    auto read_int = [&](size_t& pos) {
        size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) throw std::invalid_argument("bad word literal: " + s);
        return std::stoi(s.substr(start, pos - start));
    };
    while (i < s.size()) {
        char c = s[i];
        if (c == '0') {
            w.letters.push_back(Letter::time());
            ++i;
        } else if (c == 'w' || c == 'j') {
            ++i;
            size_t save = i;
            int idx = read_int(i);
            // Greedy digits can swallow a following time letter; back off
            // until the index is one the alphabet knows about.
            auto known = [&](int candidate) {
                for (const auto& a : letters_)
                    if (!a.is_time() && a.index == candidate &&
                        a.is_wiener() == (c == 'w'))
                        return true;
                return false;
            };
            while (i > save + 1 && !known(idx)) {
                --i;
                idx = std::stoi(s.substr(save, i - save));
            }
            if (c == 'w') {
                w.letters.push_back(Letter::wiener(idx));
            } else {
                int p = 1;
                if (i < s.size() && s[i] == '^') {
                    ++i;
                    p = read_int(i);
                }
                w.letters.push_back(Letter::jump(idx, p));
            }
        } else {
            throw std::invalid_argument("bad word literal: " + s);
        }
    }
    for (const auto& a : w.letters)
        if (!contains(a))
            throw std::domain_error("letter " + letter_str(a) + " not in alphabet");
    return w;
}

}  // namespace qsint
