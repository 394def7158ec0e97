#include <doctest.h>

#include <set>
#include <vector>

#include "qsint/wordpoly.hpp"

using namespace qsint;

namespace {

const Letter T = Letter::time();
const Letter W1 = Letter::wiener(1);
const Letter W2 = Letter::wiener(2);
const Letter J1 = Letter::jump(1);

// time + one wiener + one unit-size jump of intensity 2
Alphabet three_letter(int max_grade = 4) {
    JumpSpec j;
    j.index = 1;
    j.intensity = 2;
    j.sizes = {{Rat(1), Rat(1)}};
    return Alphabet(1, {j}, max_grade);
}

Alphabet drift_diffusion(int wieners, int max_grade = 4) {
    return Alphabet(wieners, {}, max_grade);
}

Alphabet two_point(int max_grade = 4) {
    JumpSpec j;
    j.index = 1;
    j.intensity = 3;
    j.sizes = {{Rat(1), Rat(1, 2)}, {Rat(-1), Rat(1, 2)}};
    return Alphabet(0, {j}, max_grade);
}

std::vector<Word> words_up_to(const Alphabet& a, int len) {
    std::vector<Word> out{Word()};
    std::vector<Word> level{Word()};
    for (int k = 0; k < len; ++k) {
        std::vector<Word> next;
        for (const auto& w : level)
            for (const auto& l : a.letters()) {
                next.push_back(w.append(l));
                out.push_back(next.back());
            }
        level = std::move(next);
    }
    return out;
}

}  // namespace

TEST_CASE("letter ordering and word basics") {
    CHECK(T < W1);
    CHECK(W1 < W2);
    CHECK(W2 < J1);
    CHECK(Letter::jump(1, 1) < Letter::jump(1, 2));
    Word w{T, W1, T};
    CHECK(w.size() == 3);
    CHECK(w.reversed() == Word{T, W1, T});
    CHECK(Word{W1, T}.reversed() == Word{T, W1});
    CHECK(word_str(Word()) == "e");
    CHECK(word_str(Word{T, W1, J1}) == "0w1j1");
    CHECK(letter_str(Letter::jump(1, 3)) == "j1^3");
}

TEST_CASE("grading") {
    Word w{T, W1, T};
    CHECK(grade(w, Grading::MeanSquare) == 5);
    CHECK(grade(w, Grading::WordLength) == 3);
    CHECK(grade(Word(), Grading::MeanSquare) == 0);
    CHECK(grade(Word(), Grading::WordLength) == 0);
}

TEST_CASE("reduced words") {
    // 0 1 0 0 2 4^(3) 3 0 reduces to 1 2 4 3
    Word w{T, Letter::wiener(1), T, T, Letter::wiener(2), Letter::jump(4, 3),
           Letter::jump(3, 1), T};
    Word expect{Letter::wiener(1), Letter::wiener(2), Letter::jump(4, 1),
                Letter::jump(3, 1)};
    CHECK(reduce_word(w) == expect);
    CHECK(reduce_word(Word{T, T, T}) == Word());
    CHECK(reduce_word(Word{W1, W2}) == Word{W1, W2});
}

TEST_CASE("alphabet closure and moments") {
    Alphabet a = three_letter();
    CHECK(a.letters().size() == 3);  // unit jumps never grow new letters
    CHECK(a.moment_rate(1, 1) == 2);
    CHECK(a.moment_rate(1, 5) == 2);

    Alphabet tp = two_point();
    CHECK(tp.stored_powers(1) == std::vector<int>{1, 2});
    CHECK(tp.moment_rate(1, 2) == 3);
    CHECK(tp.moment_rate(1, 3) == 0);
}

TEST_CASE("collapse of power brackets") {
    Alphabet a = three_letter();
    auto c3 = a.collapse_power(1, 3);
    REQUIRE(c3.size() == 1);
    CHECK(c3[0].letter == J1);
    CHECK(c3[0].coeff == 1);

    auto c1 = a.collapse_power(1, 1);
    REQUIRE(c1.size() == 1);
    CHECK(c1[0].letter == J1);

    Alphabet tp = two_point();
    // odd powers fall back to the base letter, even ones to the square
    auto todd = tp.collapse_power(1, 3);
    REQUIRE(todd.size() == 1);
    CHECK(todd[0].letter == Letter::jump(1, 1));
    CHECK(todd[0].coeff == 1);
    auto teven = tp.collapse_power(1, 4);
    REQUIRE(teven.size() == 1);
    CHECK(teven[0].letter == Letter::jump(1, 2));
}

TEST_CASE("bracket") {
    Alphabet a(2, {{1, Rat(2), {{Rat(1), Rat(1)}}}}, 4);
    CHECK(bracket(W1, W2, a).is_zero());
    CHECK(bracket(T, W1, a).is_zero());
    CHECK(bracket(T, J1, a).is_zero());

    WordPoly ww = bracket(W1, W1, a);
    CHECK(ww == WordPoly(Word{T}));

    WordPoly jj = bracket(J1, J1, a);
    WordPoly expect(Word{T}, 2);
    expect.add(Word{J1}, 1);
    CHECK(jj == expect);

    // symmetry over all letter pairs
    for (const auto& x : a.letters())
        for (const auto& y : a.letters()) CHECK(bracket(x, y, a) == bracket(y, x, a));
}

TEST_CASE("quasi-shuffle examples") {
    Alphabet a = three_letter();
    Word one{W1};
    WordPoly p = quasi_shuffle(one, one, a);
    WordPoly expect(Word{W1, W1}, 2);
    expect.add(Word{T}, 1);
    CHECK(p == expect);

    for (const auto& w : words_up_to(a, 3)) {
        CHECK(quasi_shuffle(Word(), w, a) == WordPoly(w));
        CHECK(quasi_shuffle(w, Word(), a) == WordPoly(w));
    }

    // a * aa = 3 aaa + [a,a] a + a [a,a], with [a,a] the time letter
    WordPoly q = quasi_shuffle(one, Word{W1, W1}, a);
    WordPoly e2(Word{W1, W1, W1}, 3);
    e2.add(Word{T, W1}, 1);
    e2.add(Word{W1, T}, 1);
    CHECK(q == e2);
}

TEST_CASE("shuffle examples") {
    Word ab{W1, W2}, a{W1}, b{W2}, c{J1};
    WordPoly s = shuffle(a, b);
    WordPoly expect(Word{W1, W2});
    expect.add(Word{W2, W1}, 1);
    CHECK(s == expect);
    CHECK(shuffle(Word(), ab) == WordPoly(ab));

    WordPoly abc = shuffle(a, Word{W2, J1});
    WordPoly e3(Word{W1, W2, J1});
    e3.add(Word{W2, W1, J1}, 1);
    e3.add(Word{W2, J1, W1}, 1);
    CHECK(abc == e3);

    // every monomial of a shuffle keeps the combined length
    Alphabet al = three_letter();
    for (const auto& u : words_up_to(al, 2))
        for (const auto& v : words_up_to(al, 2))
            {
                WordPoly sh = shuffle(u, v);
                for (const auto& [m, coeff] : sh.terms())
                    CHECK(m.size() == u.size() + v.size());
            }
}

TEST_CASE("quasi-shuffle is commutative and associative") {
    Alphabet a = three_letter();
    auto words = words_up_to(a, 4);
    // commutativity across all pairs with combined length <= 4
    for (const auto& u : words)
        for (const auto& v : words) {
            if (u.size() + v.size() > 4) continue;
            CHECK(quasi_shuffle(u, v, a) == quasi_shuffle(v, u, a));
        }
    // associativity across all triples with combined length <= 4
    for (const auto& u : words)
        for (const auto& v : words)
            for (const auto& w : words) {
                if (u.size() + v.size() + w.size() > 4) continue;
                WordPoly lhs = quasi_shuffle(quasi_shuffle(u, v, a), WordPoly(w), a);
                WordPoly rhs = quasi_shuffle(WordPoly(u), quasi_shuffle(v, w, a), a);
                CHECK(lhs == rhs);
            }
}

TEST_CASE("mean-square grade is preserved for drift-diffusions") {
    Alphabet a = drift_diffusion(2);
    auto words = words_up_to(a, 3);
    for (const auto& u : words)
        for (const auto& v : words) {
            if (u.size() + v.size() > 4) continue;
            int want = grade(u, Grading::MeanSquare) + grade(v, Grading::MeanSquare);
            WordPoly qs = quasi_shuffle(u, v, a);
            for (const auto& [m, coeff] : qs.terms())
                CHECK(grade(m, Grading::MeanSquare) == want);
        }
}

namespace {

// words reachable by interleaving the reduced inputs with optional merges
void merge_shuffles(const Word& u, size_t iu, const Word& v, size_t iv, const Word& acc,
                    std::set<Word>& out) {
    if (iu == u.letters.size() && iv == v.letters.size()) {
        out.insert(acc);
        return;
    }
    if (iu < u.letters.size())
        merge_shuffles(u, iu + 1, v, iv, acc.append(u.letters[iu]), out);
    if (iv < v.letters.size())
        merge_shuffles(u, iu, v, iv + 1, acc.append(v.letters[iv]), out);
    if (iu < u.letters.size() && iv < v.letters.size()) {
        const Letter& x = u.letters[iu];
        const Letter& y = v.letters[iv];
        if (x.is_wiener() && y.is_wiener() && x.index == y.index)
            merge_shuffles(u, iu + 1, v, iv + 1, acc, out);  // time letter, reduces away
        if (x.is_jump() && y.is_jump() && x.index == y.index) {
            // the bracket carries both a time part and a jump part
            merge_shuffles(u, iu + 1, v, iv + 1, acc, out);
            merge_shuffles(u, iu + 1, v, iv + 1, acc.append(Letter::jump(x.index, 1)), out);
        }
    }
}

}  // namespace

TEST_CASE("reduction of quasi-shuffle monomials") {
    Alphabet a = three_letter();
    auto words = words_up_to(a, 2);
    for (const auto& u : words)
        for (const auto& v : words) {
            std::set<Word> allowed;
            merge_shuffles(reduce_word(u), 0, reduce_word(v), 0, Word(), allowed);
            WordPoly qs = quasi_shuffle(u, v, a);
            for (const auto& [m, coeff] : qs.terms())
                CHECK(allowed.count(reduce_word(m)) == 1);
        }
    // reduce ignores inserted time letters
    Word w{W1, J1};
    Word padded{T, W1, T, T, J1, T};
    CHECK(reduce_word(padded) == reduce_word(w));
}

TEST_CASE("deconcatenate") {
    Word ab{W1, W2};
    auto parts = deconcatenate(ab);
    REQUIRE(parts.size() == 3);
    CHECK(parts[0] == std::make_pair(Word(), ab));
    CHECK(parts[1] == std::make_pair(Word{W1}, Word{W2}));
    CHECK(parts[2] == std::make_pair(ab, Word()));
    CHECK(deconcatenate(Word()).size() == 1);
    CHECK(deconcatenate(Word{W1, W2, J1}).size() == 4);
}

TEST_CASE("word rendering and parsing") {
    Alphabet a = three_letter();
    for (const auto& w : words_up_to(a, 3))
        CHECK(a.parse_word(a.render_word(w)) == w);

    // "w10" must parse as w1 then 0 when w10 is not a letter
    Word w10 = a.parse_word("w10");
    CHECK(w10 == Word{W1, T});
    CHECK_THROWS(a.parse_word("w7"));
    CHECK_THROWS(a.parse_word("x"));

    Alphabet tp = two_point(4);
    CHECK(tp.parse_word("j1^2") == Word{Letter::jump(1, 2)});
}

TEST_CASE("word polynomial arithmetic and text form") {
    Alphabet a = three_letter();
    WordPoly p(Word{W1}, Rat(1, 2));
    p.add(Word{T}, -1);
    CHECK(wordpoly_str(p) == "-1*0 + 1/2*w1");
    CHECK(wordpoly_parse(wordpoly_str(p), a) == p);
    p.add(Word{T}, 1);
    CHECK(p == WordPoly(Word{W1}, Rat(1, 2)));
    CHECK(wordpoly_str(WordPoly()) == "0");
    CHECK(wordpoly_parse("0", a).is_zero());
}
