#pragma once

#include <map>
#include <string>
#include <vector>

#include "qsint/words.hpp"

namespace qsint {

// Rational linear combination of words. Zero coefficients are never stored,
// so structural equality is semantic equality.
class WordPoly {
  public:
    WordPoly() = default;
    explicit WordPoly(const Word& w, Rat c = 1) { add(w, c); }

    static WordPoly zero() { return WordPoly(); }
    static WordPoly unit() { return WordPoly(Word()); }

    void add(const Word& w, const Rat& c);
    WordPoly& operator+=(const WordPoly& p);
    WordPoly& operator-=(const WordPoly& p);
    WordPoly& operator*=(const Rat& c);

    friend WordPoly operator+(WordPoly a, const WordPoly& b) { return a += b; }
    friend WordPoly operator-(WordPoly a, const WordPoly& b) { return a -= b; }
    friend WordPoly operator*(WordPoly a, const Rat& c) { return a *= c; }
    friend WordPoly operator*(const Rat& c, WordPoly a) { return a *= c; }

    bool is_zero() const { return terms_.empty(); }
    bool operator==(const WordPoly&) const = default;

    Rat coeff(const Word& w) const;
    const std::map<Word, Rat>& terms() const { return terms_; }

    // Appends a letter (or letter combination) to every monomial.
    WordPoly append(const Letter& a) const;
    WordPoly append(const std::vector<LetterTerm>& combo) const;
    WordPoly concat(const Word& v) const;

    std::string str() const;

  private:
    std::map<Word, Rat> terms_;
};

// Polynomial in the time variable with exact coefficients.
class TimePoly {
  public:
    TimePoly() = default;
    TimePoly(int power, const Rat& c) { add(power, c); }

    void add(int power, const Rat& c);
    TimePoly& operator+=(const TimePoly& p);
    TimePoly& operator-=(const TimePoly& p);
    TimePoly& operator*=(const Rat& c);
    friend TimePoly operator+(TimePoly a, const TimePoly& b) { return a += b; }
    friend TimePoly operator-(TimePoly a, const TimePoly& b) { return a -= b; }
    friend TimePoly operator*(TimePoly a, const Rat& c) { return a *= c; }

    // Multiplication by integrating once in t: c t^k -> c t^(k+1)/(k+1).
    TimePoly integrated() const;

    bool is_zero() const { return terms_.empty(); }
    bool operator==(const TimePoly&) const = default;
    Rat coeff(int power) const;
    const std::map<int, Rat>& terms() const { return terms_; }
    double eval(double t) const;
    std::string str() const;

  private:
    std::map<int, Rat> terms_;
};

// Quadratic covariation bracket of two letters, as a degree-one polynomial.
// Zero whenever either letter is time or the indices differ; matching Wiener
// letters give the time letter; matching jump letters give the moment-rate
// multiple of time plus the collapsed power bracket.
WordPoly bracket(const Letter& a, const Letter& b, const Alphabet& alphabet);

// Coefficient of the time letter in bracket(a, b).
Rat bracket_time_coeff(const Letter& a, const Letter& b, const Alphabet& alphabet);

// Iterated bracket [a1,[a2,...]] of all letters of a word; order irrelevant.
WordPoly iterated_bracket(const Word& w, const Alphabet& alphabet);

WordPoly quasi_shuffle(const Word& u, const Word& v, const Alphabet& alphabet);
WordPoly quasi_shuffle(const WordPoly& p, const WordPoly& q, const Alphabet& alphabet);
WordPoly shuffle(const Word& u, const Word& v);
WordPoly shuffle(const WordPoly& p, const WordPoly& q);

// All |w|+1 two-partitions (u, v) with uv = w, in left-to-right order.
std::vector<std::pair<Word, Word>> deconcatenate(const Word& w);

// E(w) = t^|w|/|w|! for all-time words, zero otherwise; extended linearly.
TimePoly expectation(const Word& w);
TimePoly expectation(const WordPoly& p);

// E(u * v) computed without materializing the quasi-shuffle product.
TimePoly expectation_product(const Word& u, const Word& v, const Alphabet& alphabet);

std::string wordpoly_str(const WordPoly& p);
WordPoly wordpoly_parse(const std::string& s, const Alphabet& alphabet);

}  // namespace qsint
